#pragma once

#include <string>
#include <variant>

#include "shdx/discrete_system.hpp"
#include "shdx/types.hpp"

namespace shdx {

// Hermitian matrix of the discrete second variation on omega-quasi-periodic sequences.
// Coordinates: z~_n = (x_{n+1}, y_n) for n = 1 .. N, node n paired with B_{n mod N}.
class HessianForm {
public:
    HessianForm(int m, int n_steps, double h, UnitCircleParam omega,
                std::variant<Matrix, CMatrix> matrix);

    int m() const { return m_; }
    int n_steps() const { return n_steps_; }
    double h() const { return h_; }
    UnitCircleParam omega() const { return omega_; }
    bool is_real() const { return std::holds_alternative<Matrix>(matrix_); }
    Eigen::Index dim() const;

    CMatrix complex_matrix() const;
    const Matrix& real_matrix() const { return std::get<Matrix>(matrix_); }

    // Eigenvalues in ascending order.
    Vector eigenvalues() const;

private:
    int m_;
    int n_steps_;
    double h_;
    UnitCircleParam omega_;
    std::variant<Matrix, CMatrix> matrix_;
};

HessianForm assemble_hessian(const CoefficientSequence& system, UnitCircleParam omega);

struct MorseTriple {
    int minus = 0;
    int zero = 0;
    int plus = 0;
    int total() const { return minus + zero + plus; }
};

MorseTriple inertia(const Vector& eigenvalues, double tol_zero = 1e-8);
MorseTriple inertia(const HessianForm& form, double tol_zero = 1e-8);

// Inertia of the form without the nullity cross-check.
MorseTriple morse_inertia(const CoefficientSequence& system, UnitCircleParam omega,
                          double tol_zero = 1e-8);
// Inertia of the form; throws ErrorCode::floquet_mismatch when m0 differs
// from dim ker(gamma_N - omega).
MorseTriple morse_indices(const CoefficientSequence& system, UnitCircleParam omega,
                          double tol_zero = 1e-8);

int signature(const CoefficientSequence& system, UnitCircleParam omega, double tol_zero = 1e-8);

struct SplittingPair {
    int plus = 0;
    int minus = 0;
};

// m-(omega e^{+-i theta}) - m-(omega), checked at theta and theta / 8.
SplittingPair splitting_discrete(const CoefficientSequence& system, UnitCircleParam omega,
                                 double theta_probe = 1e-3, double tol_zero = 1e-8);

// Binary dump: "SHDX", u32 dimension, then column-major entries as (re, im) f64 pairs.
void write_hessian_dump(const HessianForm& form, const std::string& path);
CMatrix read_hessian_dump(const std::string& path);

}  // namespace shdx
