#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace shdx {

using Matrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXd;
using CVector = Eigen::VectorXcd;
using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

// A point of the unit circle, stored by its angle in [0, 2pi).
class UnitCircleParam {
public:
    UnitCircleParam() = default;
    explicit UnitCircleParam(double angle);

    static UnitCircleParam one() { return UnitCircleParam(0.0); }
    static UnitCircleParam minus_one() { return UnitCircleParam(kPi); }

    double angle() const { return angle_; }
    Complex value() const { return std::polar(1.0, angle_); }
    UnitCircleParam rotated(double theta) const { return UnitCircleParam(angle_ + theta); }

    bool is_one() const { return angle_ == 0.0; }
    bool is_minus_one() const { return angle_ == kPi; }
    bool is_real() const { return is_one() || is_minus_one(); }

private:
    double angle_ = 0.0;
};

struct Tolerances {
    double symplectic = 1e-10;
    double zero = 1e-8;
};

}  // namespace shdx
