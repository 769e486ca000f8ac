#include "shdx/symplectic.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "shdx/errors.hpp"

namespace shdx {

UnitCircleParam::UnitCircleParam(double angle) {
    double a = std::fmod(angle, 2.0 * kPi);
    if (a < 0.0) a += 2.0 * kPi;
    if (a >= 2.0 * kPi) a = 0.0;
    angle_ = a;
}

namespace {

int half_dim(const Matrix& m) {
    if (m.rows() != m.cols() || m.rows() == 0 || m.rows() % 2 != 0) {
        throw Error(ErrorCode::dimension, "expected a square matrix of even size, got " +
                                              std::to_string(m.rows()) + "x" +
                                              std::to_string(m.cols()));
    }
    return static_cast<int>(m.rows() / 2);
}

}  // namespace

Matrix standard_j(int m) {
    Matrix j = Matrix::Zero(2 * m, 2 * m);
    j.topRightCorner(m, m) = -Matrix::Identity(m, m);
    j.bottomLeftCorner(m, m) = Matrix::Identity(m, m);
    return j;
}

double symplectic_defect(const Matrix& m) {
    const int n = half_dim(m);
    const Matrix j = standard_j(n);
    return (m.transpose() * j * m - j).cwiseAbs().maxCoeff();
}

bool check_symplectic(const Matrix& m, double tol) {
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    return symplectic_defect(m) <= tol * scale * scale;
}

Matrix diamond_product(const Matrix& a, const Matrix& b) {
    const int p = half_dim(a);
    const int q = half_dim(b);
    const int n = p + q;
    Matrix out = Matrix::Zero(2 * n, 2 * n);
    out.block(0, 0, p, p) = a.block(0, 0, p, p);
    out.block(0, n, p, p) = a.block(0, p, p, p);
    out.block(n, 0, p, p) = a.block(p, 0, p, p);
    out.block(n, n, p, p) = a.block(p, p, p, p);
    out.block(p, p, q, q) = b.block(0, 0, q, q);
    out.block(p, n + p, q, q) = b.block(0, q, q, q);
    out.block(n + p, p, q, q) = b.block(q, 0, q, q);
    out.block(n + p, n + p, q, q) = b.block(q, q, q, q);
    return out;
}

Matrix diamond_power(const Matrix& a, int k) {
    if (k < 1) throw Error(ErrorCode::dimension, "diamond power needs k >= 1");
    Matrix out = a;
    for (int i = 1; i < k; ++i) out = diamond_product(out, a);
    return out;
}

Complex d_omega_complex(const Matrix& m, UnitCircleParam omega) {
    const int n = half_dim(m);
    const Complex w = omega.value();
    CMatrix shifted = m.cast<Complex>();
    shifted.diagonal().array() -= w;
    const Complex det = shifted.partialPivLu().determinant();
    const double sign = (n - 1) % 2 == 0 ? 1.0 : -1.0;
    return sign * std::pow(std::conj(w), n) * det;
}

double d_omega(const Matrix& m, UnitCircleParam omega, double tol) {
    const Complex d = d_omega_complex(m, omega);
    const int n = half_dim(m);
    const double scale = std::pow(1.0 + m.norm(), 2 * n);
    if (std::abs(d.imag()) > tol * scale) {
        throw Error(ErrorCode::non_symplectic_input,
                    "D_omega has imaginary part " + std::to_string(d.imag()));
    }
    return d.real();
}

int nullity(const Matrix& m, UnitCircleParam omega, double tol_zero) {
    half_dim(m);
    CMatrix shifted = m.cast<Complex>();
    shifted.diagonal().array() -= omega.value();
    Eigen::JacobiSVD<CMatrix> svd(shifted);
    const auto& s = svd.singularValues();
    const double threshold = tol_zero * std::max(1.0, s(0));
    int count = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) <= threshold) ++count;
    }
    return count;
}

Matrix normal_form_d(double lambda) {
    if (lambda == 0.0) throw Error(ErrorCode::dimension, "D(lambda) needs lambda != 0");
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = lambda;
    d(1, 1) = 1.0 / lambda;
    return d;
}

Matrix normal_form_n1(double lambda, double b) {
    Matrix n = Matrix::Zero(2, 2);
    n(0, 0) = lambda;
    n(0, 1) = b;
    n(1, 1) = lambda;
    return n;
}

Matrix rotation(double theta) {
    Matrix r(2, 2);
    r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    return r;
}

Matrix normal_form_n2(double theta, const Eigen::Matrix2d& b) {
    Matrix n = Matrix::Zero(4, 4);
    n.block(0, 0, 2, 2) = rotation(theta);
    n.block(0, 2, 2, 2) = b;
    n.block(2, 2, 2, 2) = rotation(theta);
    return n;
}

Matrix symplectic_rotation(int m, double a) {
    Matrix r = Matrix::Zero(2 * m, 2 * m);
    const double c = std::cos(a);
    const double s = std::sin(a);
    r.topLeftCorner(m, m).diagonal().setConstant(c);
    r.bottomRightCorner(m, m).diagonal().setConstant(c);
    r.topRightCorner(m, m).diagonal().setConstant(-s);
    r.bottomLeftCorner(m, m).diagonal().setConstant(s);
    return r;
}

Matrix expm(const Matrix& a) { return a.exp(); }

Matrix random_symmetric(std::mt19937_64& rng, int n, double scale) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Matrix s(n, n);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) s(i, k) = dist(rng);
    }
    return 0.5 * scale * (s + s.transpose());
}

Matrix random_symplectic(std::mt19937_64& rng, int m, int factors) {
    const Matrix j = standard_j(m);
    Matrix out = Matrix::Identity(2 * m, 2 * m);
    for (int f = 0; f < factors; ++f) out = out * expm(j * random_symmetric(rng, 2 * m));
    return out;
}

double bump_first_half(double t) {
    return t <= 0.5 ? 0.5 * (1.0 + std::cos(2.0 * kPi * t)) : 0.0;
}

double bump_second_half(double t) {
    return t <= 0.5 ? 0.0 : 0.5 * (1.0 + std::cos(2.0 * kPi * t));
}

double bump_first_half_rate(double t) {
    return t <= 0.5 ? -kPi * std::sin(2.0 * kPi * t) : 0.0;
}

double bump_second_half_rate(double t) {
    return t <= 0.5 ? 0.0 : -kPi * std::sin(2.0 * kPi * t);
}

namespace {

Matrix swap_matrix() {
    Matrix k(2, 2);
    k << 0.0, 1.0, 1.0, 0.0;
    return k;
}

Matrix constant_standard_coefficient(int m, int j) {
    const double ln2 = std::numbers::ln2;
    if (m == 1) {
        if (j == 0) return ln2 * swap_matrix();
        return j * kPi * Matrix::Identity(2, 2);
    }
    Matrix b = Matrix::Zero(2 * m, 2 * m);
    if ((m + j) % 2 != 0) {
        Vector x = Vector::Constant(m, kPi);
        x(0) = 0.0;
        x(1) = (j - m + 2) * kPi;
        Vector y = Vector::Zero(m);
        y(0) = ln2;
        b.topLeftCorner(m, m) = x.asDiagonal();
        b.bottomRightCorner(m, m) = x.asDiagonal();
        b.topRightCorner(m, m) = y.asDiagonal();
        b.bottomLeftCorner(m, m) = y.asDiagonal();
    } else {
        Vector z = Vector::Constant(m, kPi);
        z(0) = (j - m + 1) * kPi;
        b.topLeftCorner(m, m) = z.asDiagonal();
        b.bottomRightCorner(m, m) = z.asDiagonal();
    }
    return b;
}

}  // namespace

StandardPath::StandardPath(int m, int j) : m_(m), j_(j) {
    if (m < 1) {
        throw Error(ErrorCode::input, "standard paths need m >= 1, got m = " + std::to_string(m));
    }
    if (!time_dependent()) constant_ = constant_standard_coefficient(m, j);
}

Matrix StandardPath::coefficient(double t) const {
    if (!time_dependent()) return constant_;
    const Matrix rot = -j_ * kPi * bump_first_half_rate(t) * Matrix::Identity(2, 2);
    return rot + std::numbers::ln2 * bump_second_half_rate(t) * swap_matrix();
}

Matrix StandardPath::value(double t) const {
    if (m_ == 1 && j_ == 0) return normal_form_d(std::exp2(-t));
    if (m_ == 1 && j_ % 2 != 0) return rotation(j_ * kPi * t);
    if (time_dependent()) {
        return normal_form_d(std::exp2(-bump_second_half(t))) *
               rotation((1.0 - bump_first_half(t)) * j_ * kPi);
    }
    return expm(t * standard_j(m_) * constant_);
}

Matrix StandardPath::derivative(double t) const {
    return standard_j(m_) * coefficient(t) * value(t);
}

StandardPath standard_path(int m, int j) { return StandardPath(m, j); }

}  // namespace shdx
