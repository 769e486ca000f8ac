#pragma once

#include <random>
#include <vector>

#include "shdx/discrete_system.hpp"
#include "shdx/symplectic.hpp"

namespace shdx::test {

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

// Random periodic system with ||B_n||_2 = bound * U(0.1, 1).
inline CoefficientSequence random_system(std::mt19937_64& rng, int m, int n_steps, double bound = 3.0) {
    std::uniform_real_distribution<double> scale(0.1, 1.0);
    std::vector<Matrix> blocks;
    for (int n = 0; n < n_steps; ++n) {
        Matrix b = random_symmetric(rng, 2 * m);
        blocks.push_back(b * (bound * scale(rng) / b.operatorNorm()));
    }
    return CoefficientSequence(m, 1.0 / n_steps, blocks);
}

inline Matrix zero_block(int m) { return Matrix::Zero(2 * m, 2 * m); }

}  // namespace shdx::test
