#include "shdx/morse_form.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <type_traits>

#include "shdx/errors.hpp"
#include "shdx/symplectic.hpp"

namespace shdx {

HessianForm::HessianForm(int m, int n_steps, double h, UnitCircleParam omega,
                         std::variant<Matrix, CMatrix> matrix)
    : m_(m), n_steps_(n_steps), h_(h), omega_(omega), matrix_(std::move(matrix)) {}

Eigen::Index HessianForm::dim() const {
    return std::visit([](const auto& a) { return a.rows(); }, matrix_);
}

CMatrix HessianForm::complex_matrix() const {
    if (is_real()) return std::get<Matrix>(matrix_).cast<Complex>();
    return std::get<CMatrix>(matrix_);
}

Vector HessianForm::eigenvalues() const {
    if (is_real()) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(std::get<Matrix>(matrix_), Eigen::EigenvaluesOnly);
        return es.eigenvalues();
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(std::get<CMatrix>(matrix_), Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

namespace {

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> assemble(const CoefficientSequence& system,
                                                               Scalar w) {
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    const Eigen::Index m = system.m();
    const int size = system.n_steps();
    const double inv_h = 1.0 / system.h();
    const Eigen::Index dim = 2 * m * size;
    Mat h = Mat::Zero(dim, dim);
    auto base = [&](int n) { return 2 * m * static_cast<Eigen::Index>(n - 1); };
    for (int n = 1; n <= size; ++n) {
        const Eigen::Index xn = base(n);
        const Eigen::Index yn = base(n) + m;
        const int next = n == size ? 1 : n + 1;
        const int prev = n == 1 ? size : n - 1;
        const Scalar to_next = n == size ? w : Scalar(1.0);
        Scalar from_prev = Scalar(1.0);
        if (n == 1) {
            if constexpr (std::is_same_v<Scalar, Complex>) {
                from_prev = std::conj(w);
            } else {
                from_prev = w;
            }
        }
        for (Eigen::Index c = 0; c < m; ++c) {
            h(xn + c, base(next) + m + c) += to_next * inv_h;
            h(xn + c, yn + c) -= inv_h;
            h(yn + c, xn + c) -= inv_h;
            h(yn + c, base(prev) + c) += from_prev * inv_h;
        }
        h.block(xn, xn, 2 * m, 2 * m) -= system.block(n % size).template cast<Scalar>();
    }
    return h;
}

}  // namespace

HessianForm assemble_hessian(const CoefficientSequence& system, UnitCircleParam omega) {
    std::variant<Matrix, CMatrix> matrix;
    double defect = 0.0;
    double scale = 1.0;
    if (omega.is_real()) {
        Matrix h = assemble<double>(system, omega.is_one() ? 1.0 : -1.0);
        defect = (h - h.transpose()).cwiseAbs().maxCoeff();
        scale = h.cwiseAbs().maxCoeff();
        matrix = std::move(h);
    } else {
        CMatrix h = assemble<Complex>(system, omega.value());
        defect = (h - h.adjoint()).cwiseAbs().maxCoeff();
        scale = h.cwiseAbs().maxCoeff();
        matrix = std::move(h);
    }
    if (defect > 1e-12 * std::max(1.0, scale)) {
        throw Error(ErrorCode::assembly, "assembled form is not Hermitian");
    }
    return HessianForm(system.m(), system.n_steps(), system.h(), omega, std::move(matrix));
}

MorseTriple inertia(const Vector& eigenvalues, double tol_zero) {
    const double tau = tol_zero * (eigenvalues.size() ? eigenvalues.cwiseAbs().maxCoeff() : 0.0);
    MorseTriple t;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        const double v = eigenvalues(i);
        if (std::abs(v) <= tau) {
            ++t.zero;
        } else if (v < 0.0) {
            ++t.minus;
        } else {
            ++t.plus;
        }
    }
    return t;
}

MorseTriple inertia(const HessianForm& form, double tol_zero) {
    return inertia(form.eigenvalues(), tol_zero);
}

MorseTriple morse_inertia(const CoefficientSequence& system, UnitCircleParam omega, double tol_zero) {
    return inertia(assemble_hessian(system, omega), tol_zero);
}

MorseTriple morse_indices(const CoefficientSequence& system, UnitCircleParam omega, double tol_zero) {
    const MorseTriple t = morse_inertia(system, omega, tol_zero);
    const int nu = nullity(fundamental_solution(system).monodromy(), omega, tol_zero);
    if (t.zero != nu) {
        throw Error(ErrorCode::floquet_mismatch,
                    "form nullity " + std::to_string(t.zero) + " differs from dim ker(gamma_N - omega) = " +
                        std::to_string(nu) + " at tol_zero " + std::to_string(tol_zero));
    }
    return t;
}

int signature(const CoefficientSequence& system, UnitCircleParam omega, double tol_zero) {
    const MorseTriple t = morse_inertia(system, omega, tol_zero);
    return t.minus - t.plus;
}

constexpr double kProbeZero = 1e-13;

SplittingPair splitting_discrete(const CoefficientSequence& system, UnitCircleParam omega,
                                 double theta_probe, double tol_zero) {
    if (!(theta_probe > 0.0)) throw Error(ErrorCode::input, "theta_probe must be positive");
    const int base = morse_inertia(system, omega, tol_zero).minus;
    // probes use a roundoff-level zero threshold
    auto negatives = [&](UnitCircleParam w) {
        const MorseTriple t = morse_inertia(system, w, kProbeZero);
        if (t.zero != 0) {
            throw Error(ErrorCode::probe_too_large, "splitting probe lands on the spectrum; change theta_probe");
        }
        return t.minus;
    };
    auto probe = [&](double theta) {
        SplittingPair p;
        p.plus = negatives(omega.rotated(theta)) - base;
        p.minus = negatives(omega.rotated(-theta)) - base;
        return p;
    };
    const SplittingPair coarse = probe(theta_probe);
    const SplittingPair fine = probe(theta_probe / 8.0);
    if (coarse.plus != fine.plus || coarse.minus != fine.minus) {
        throw Error(ErrorCode::probe_too_large,
                    "splitting numbers change between theta and theta/8; reduce theta_probe");
    }
    return fine;
}

void write_hessian_dump(const HessianForm& form, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::io, "cannot open " + path + " for writing");
    const CMatrix h = form.complex_matrix();
    const auto dim = static_cast<std::uint32_t>(h.rows());
    out.write("SHDX", 4);
    out.write(reinterpret_cast<const char*>(&dim), sizeof dim);
    for (Eigen::Index c = 0; c < h.cols(); ++c) {
        for (Eigen::Index r = 0; r < h.rows(); ++r) {
            const double pair[2] = {h(r, c).real(), h(r, c).imag()};
            out.write(reinterpret_cast<const char*>(pair), sizeof pair);
        }
    }
    if (!out) throw Error(ErrorCode::io, "failed writing " + path);
}

CMatrix read_hessian_dump(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io, "cannot open " + path);
    char magic[4];
    std::uint32_t dim = 0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&dim), sizeof dim);
    if (!in || std::memcmp(magic, "SHDX", 4) != 0) throw Error(ErrorCode::io, "not a Hessian dump: " + path);
    CMatrix h(dim, dim);
    for (Eigen::Index c = 0; c < h.cols(); ++c) {
        for (Eigen::Index r = 0; r < h.rows(); ++r) {
            double pair[2];
            in.read(reinterpret_cast<char*>(pair), sizeof pair);
            h(r, c) = Complex(pair[0], pair[1]);
        }
    }
    if (!in) throw Error(ErrorCode::io, "truncated Hessian dump: " + path);
    return h;
}

}  // namespace shdx
