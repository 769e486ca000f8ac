#pragma once

#include <random>

#include "shdx/types.hpp"

namespace shdx {

// J = [[0, -I], [I, 0]] of size 2m.
Matrix standard_j(int m);

// Largest entry of M^T J M - J. Throws ErrorCode::dimension for non-square or odd input.
double symplectic_defect(const Matrix& m);
bool check_symplectic(const Matrix& m, double tol = 1e-10);

// Interleaves the x and y blocks of two symplectic matrices.
Matrix diamond_product(const Matrix& a, const Matrix& b);
Matrix diamond_power(const Matrix& a, int k);

// D_omega(M) = (-1)^(m-1) conj(omega)^m det(M - omega I); real for symplectic M.
double d_omega(const Matrix& m, UnitCircleParam omega, double tol = 1e-10);
Complex d_omega_complex(const Matrix& m, UnitCircleParam omega);

// dim ker(M - omega I), counting singular values at most tol_zero * sigma_max.
int nullity(const Matrix& m, UnitCircleParam omega, double tol_zero = 1e-8);

Matrix normal_form_d(double lambda);
Matrix normal_form_n1(double lambda, double b);
Matrix rotation(double theta);
Matrix normal_form_n2(double theta, const Eigen::Matrix2d& b);

// exp(a J) for J of size 2m, the rotation R(a) applied to every pair.
Matrix symplectic_rotation(int m, double a);

Matrix expm(const Matrix& a);

Matrix random_symmetric(std::mt19937_64& rng, int n, double scale = 1.0);

// Product of `factors` terms exp(J S) with S symmetric, entries uniform in [-1, 1].
Matrix random_symplectic(std::mt19937_64& rng, int m, int factors);

// Coefficient paths B_j(t) and their fundamental solutions beta_j(t).
class StandardPath {
public:
    StandardPath(int m, int j);

    int m() const { return m_; }
    int j() const { return j_; }
    bool time_dependent() const { return m_ == 1 && j_ != 0 && j_ % 2 == 0; }

    Matrix coefficient(double t) const;
    Matrix value(double t) const;
    Matrix derivative(double t) const;

private:
    int m_;
    int j_;
    Matrix constant_;  // B_j when it does not depend on t
};

StandardPath standard_path(int m, int j);

// The bump w(t) = (1 + cos 2 pi t) / 2 restricted to one half of [0, 1].
double bump_first_half(double t);
double bump_second_half(double t);
double bump_first_half_rate(double t);
double bump_second_half_rate(double t);

}  // namespace shdx
