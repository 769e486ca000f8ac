#pragma once

#include <functional>
#include <vector>

#include "shdx/types.hpp"

namespace shdx {

// One smooth piece of a path, parametrized by the global parameter in [t0, t1].
struct PathSegment {
    double t0 = 0.0;
    double t1 = 1.0;
    std::function<Matrix(double)> value;
    std::function<Matrix(double)> derivative;
};

enum class Side { left, right };

// Continuous, piecewise smooth path of symplectic matrices on [0, 1].
class PiecewisePath {
public:
    PiecewisePath() = default;
    PiecewisePath(int m, std::vector<PathSegment> segments);

    int m() const { return m_; }
    const std::vector<PathSegment>& segments() const { return segments_; }
    std::vector<double> joints() const;

    Matrix operator()(double t) const;
    Matrix derivative(double t, Side side = Side::right) const;
    Matrix start() const { return (*this)(0.0); }
    Matrix end() const { return (*this)(1.0); }

    std::size_t segment_index(double t, Side side = Side::right) const;

private:
    int m_ = 0;
    std::vector<PathSegment> segments_;
};

// first on [0, 1/2], then second on [1/2, 1].
PiecewisePath concatenate(const PiecewisePath& first, const PiecewisePath& second);

// t -> P(t) * factor(t), factor supplied with its derivative.
PiecewisePath right_multiply(const PiecewisePath& path, std::function<Matrix(double)> factor,
                             std::function<Matrix(double)> factor_derivative);

PiecewisePath smooth_path(int m, std::function<Matrix(double)> value,
                          std::function<Matrix(double)> derivative);

}  // namespace shdx
