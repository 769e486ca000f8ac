#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "shdx/path.hpp"
#include "shdx/types.hpp"

namespace shdx {

struct StepLimits {
    double max_step_entry = 0.5;    // bound on max |h B_n|
    double max_condition = 1e6;     // bound on cond(I + h C^T)
};

// Symmetric blocks B_0 .. B_{N-1}, extended N-periodically.
class CoefficientSequence {
public:
    CoefficientSequence(int m, double h, std::vector<Matrix> blocks,
                        const StepLimits& limits = {});

    int m() const { return m_; }
    int n_steps() const { return static_cast<int>(blocks_.size()); }
    double h() const { return h_; }
    const Matrix& block(int n) const;  // periodic in n
    const std::vector<Matrix>& blocks() const { return blocks_; }

    static CoefficientSequence constant(int m, int n_steps, double h, const Matrix& b,
                                        const StepLimits& limits = {});
    // B_n = B(n / N) with h = 1 / N.
    static CoefficientSequence sampled(int m, int n_steps, const std::function<Matrix(double)>& b,
                                       const StepLimits& limits = {});

private:
    int m_;
    double h_;
    std::vector<Matrix> blocks_;
};

// S(B, h) built from the blocks A = B11, C = B12, F = B21, D = B22.
// Symplectic exactly when B is symmetric.
Matrix transfer_matrix(const Matrix& b, double h);

// Transfer matrix over the fraction s of a step.
Matrix interpolation_segment(const Matrix& b, double h, double s);
Matrix interpolation_segment_rate(const Matrix& b, double h, double s);

// Recovers the symmetric B with transfer_matrix(B, h) = x.
Matrix extract_coefficients(const Matrix& x, double h, double tol = 1e-10);

class DiscreteFundamentalSolution {
public:
    explicit DiscreteFundamentalSolution(std::shared_ptr<const CoefficientSequence> system);

    const CoefficientSequence& system() const { return *system_; }
    std::shared_ptr<const CoefficientSequence> system_ptr() const { return system_; }
    int n_steps() const { return system_->n_steps(); }

    const Matrix& gamma(int n) const { return gammas_.at(static_cast<std::size_t>(n)); }
    const Matrix& monodromy() const { return gammas_.back(); }
    const Matrix& transfer(int n) const { return transfers_.at(static_cast<std::size_t>(n)); }
    // gamma_n for any n >= 0, using gamma_{n + N} = gamma_n gamma_N.
    Matrix extended(int n) const;

private:
    std::shared_ptr<const CoefficientSequence> system_;
    std::vector<Matrix> transfers_;
    std::vector<Matrix> gammas_;
};

DiscreteFundamentalSolution fundamental_solution(const CoefficientSequence& system);

// Segment n runs over [n/N, (n+1)/N] and joins gamma_n to gamma_{n+1}.
PiecewisePath joint_path(const DiscreteFundamentalSolution& solution);

struct Discretization {
    CoefficientSequence system;
    DiscreteFundamentalSolution solution;
};

// Coefficients whose discrete solution passes through gamma(n / N).
Discretization discretize_continuous(int m, int n_steps,
                                     const std::function<Matrix(double)>& gamma,
                                     const StepLimits& limits = {});

}  // namespace shdx
