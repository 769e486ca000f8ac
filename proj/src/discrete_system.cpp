#include "shdx/discrete_system.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "shdx/errors.hpp"
#include "shdx/symplectic.hpp"

namespace shdx {

namespace {

struct Blocks {
    Matrix a, c, f, d;
};

Blocks split(const Matrix& b) {
    if (b.rows() != b.cols() || b.rows() % 2 != 0 || b.rows() == 0) {
        throw Error(ErrorCode::dimension, "coefficient block must be square of even size");
    }
    const Eigen::Index m = b.rows() / 2;
    return {b.topLeftCorner(m, m), b.topRightCorner(m, m), b.bottomLeftCorner(m, m),
            b.bottomRightCorner(m, m)};
}

double condition_number(const Matrix& a) {
    Eigen::JacobiSVD<Matrix> svd(a);
    const auto& s = svd.singularValues();
    const double smin = s(s.size() - 1);
    return smin == 0.0 ? INFINITY : s(0) / smin;
}

void check_step(int m, double h, const Matrix& b, int n, const StepLimits& limits) {
    const double entry = h * b.cwiseAbs().maxCoeff();
    const Matrix hc = h * b.topRightCorner(m, m);
    const Matrix g = Matrix::Identity(m, m) + hc.transpose();
    std::ostringstream why;
    if (entry > limits.max_step_entry) {
        why << "max |h B_" << n << "| = " << entry << " exceeds " << limits.max_step_entry;
    } else if (condition_number(g) > limits.max_condition) {
        why << "cond(I + h C^T) at n = " << n << " exceeds " << limits.max_condition;
    } else {
        Eigen::EigenSolver<Matrix> es(hc, false);
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
            const Complex mu = es.eigenvalues()(i);
            if (std::abs(mu.imag()) <= 1e-14 && mu.real() <= -1.0 + 1e-6) {
                why << "h C_" << n << " has eigenvalue " << mu.real()
                    << ", the step interpolation is singular";
                break;
            }
        }
    }
    if (!why.str().empty()) {
        why << "; decrease h";
        throw Error(ErrorCode::step_too_large, why.str());
    }
}

}  // namespace

CoefficientSequence::CoefficientSequence(int m, double h, std::vector<Matrix> blocks,
                                         const StepLimits& limits)
    : m_(m), h_(h), blocks_(std::move(blocks)) {
    if (m < 1) throw Error(ErrorCode::dimension, "m must be at least 1");
    if (blocks_.empty()) throw Error(ErrorCode::dimension, "N must be at least 1");
    if (!(h > 0.0) || !std::isfinite(h)) throw Error(ErrorCode::input, "h must be positive");
    for (std::size_t n = 0; n < blocks_.size(); ++n) {
        Matrix& b = blocks_[n];
        if (b.rows() != 2 * m || b.cols() != 2 * m) {
            throw Error(ErrorCode::dimension, "B_" + std::to_string(n) + " is not " +
                                                  std::to_string(2 * m) + "x" +
                                                  std::to_string(2 * m));
        }
        if (!b.allFinite()) throw Error(ErrorCode::input, "B_" + std::to_string(n) + " is not finite");
        const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
        if ((b - b.transpose()).cwiseAbs().maxCoeff() > 1e-14 * scale) {
            throw Error(ErrorCode::input, "B_" + std::to_string(n) + " is not symmetric");
        }
        b = 0.5 * (b + b.transpose()).eval();
        check_step(m, h, b, static_cast<int>(n), limits);
    }
}

const Matrix& CoefficientSequence::block(int n) const {
    const int size = n_steps();
    return blocks_[static_cast<std::size_t>(((n % size) + size) % size)];
}

CoefficientSequence CoefficientSequence::constant(int m, int n_steps, double h, const Matrix& b,
                                                  const StepLimits& limits) {
    if (n_steps < 1) throw Error(ErrorCode::dimension, "N must be at least 1");
    return CoefficientSequence(m, h, std::vector<Matrix>(static_cast<std::size_t>(n_steps), b),
                               limits);
}

CoefficientSequence CoefficientSequence::sampled(int m, int n_steps,
                                                 const std::function<Matrix(double)>& b,
                                                 const StepLimits& limits) {
    if (n_steps < 1) throw Error(ErrorCode::dimension, "N must be at least 1");
    std::vector<Matrix> blocks;
    for (int n = 0; n < n_steps; ++n) blocks.push_back(b(static_cast<double>(n) / n_steps));
    return CoefficientSequence(m, 1.0 / n_steps, std::move(blocks), limits);
}

Matrix interpolation_segment(const Matrix& b, double h, double s) {
    const Blocks k = split(b);
    const Eigen::Index m = k.a.rows();
    const double sh = s * h;
    const Matrix g = (Matrix::Identity(m, m) + sh * k.f).inverse();
    Matrix out(2 * m, 2 * m);
    out.topLeftCorner(m, m) = g;
    out.topRightCorner(m, m) = -sh * g * k.d;
    out.bottomLeftCorner(m, m) = sh * k.a * g;
    out.bottomRightCorner(m, m) =
        -sh * sh * k.a * g * k.d + Matrix::Identity(m, m) + sh * k.c;
    return out;
}

Matrix interpolation_segment_rate(const Matrix& b, double h, double s) {
    const Blocks k = split(b);
    const Eigen::Index m = k.a.rows();
    const double sh = s * h;
    const Matrix g = (Matrix::Identity(m, m) + sh * k.f).inverse();
    const Matrix dg = -h * g * k.f * g;
    Matrix out(2 * m, 2 * m);
    out.topLeftCorner(m, m) = dg;
    out.topRightCorner(m, m) = -h * g * k.d - sh * dg * k.d;
    out.bottomLeftCorner(m, m) = h * k.a * g + sh * k.a * dg;
    out.bottomRightCorner(m, m) =
        -2.0 * s * h * h * k.a * g * k.d - sh * sh * k.a * dg * k.d + h * k.c;
    return out;
}

Matrix transfer_matrix(const Matrix& b, double h) { return interpolation_segment(b, h, 1.0); }

Matrix extract_coefficients(const Matrix& x, double h, double tol) {
    if (x.rows() != x.cols() || x.rows() % 2 != 0 || x.rows() == 0) {
        throw Error(ErrorCode::dimension, "transfer matrix must be square of even size");
    }
    if (!(h > 0.0)) throw Error(ErrorCode::input, "h must be positive");
    if (!check_symplectic(x, tol)) {
        throw Error(ErrorCode::non_symplectic_input, "transfer matrix is not symplectic");
    }
    const Eigen::Index m = x.rows() / 2;
    const Matrix x11 = x.topLeftCorner(m, m);
    Eigen::FullPivLU<Matrix> lu(x11);
    const double smin = Eigen::JacobiSVD<Matrix>(x11).singularValues().minCoeff();
    if (!lu.isInvertible() || condition_number(x11) > 1e12 || smin <= 1e-12 * std::max(1.0, x.norm())) {
        throw Error(ErrorCode::extraction, "upper-left block of the transfer matrix is singular");
    }
    const Matrix g = lu.inverse();
    const Matrix hc = (g - Matrix::Identity(m, m)).transpose();
    const Matrix ha = x.bottomLeftCorner(m, m) * g;
    const Matrix hd = -g * x.topRightCorner(m, m);
    const double scale = std::max({1.0, ha.cwiseAbs().maxCoeff(), hd.cwiseAbs().maxCoeff()});
    const double asym = std::max((ha - ha.transpose()).cwiseAbs().maxCoeff(),
                                 (hd - hd.transpose()).cwiseAbs().maxCoeff());
    if (asym > tol * scale) {
        throw Error(ErrorCode::non_symplectic_input, "extracted A or D is not symmetric");
    }
    Matrix b(2 * m, 2 * m);
    b.topLeftCorner(m, m) = 0.5 * (ha + ha.transpose()) / h;
    b.topRightCorner(m, m) = hc / h;
    b.bottomLeftCorner(m, m) = hc.transpose() / h;
    b.bottomRightCorner(m, m) = 0.5 * (hd + hd.transpose()) / h;
    return b;
}

DiscreteFundamentalSolution::DiscreteFundamentalSolution(
    std::shared_ptr<const CoefficientSequence> system)
    : system_(std::move(system)) {
    const int m = system_->m();
    gammas_.push_back(Matrix::Identity(2 * m, 2 * m));
    for (int n = 0; n < system_->n_steps(); ++n) {
        transfers_.push_back(transfer_matrix(system_->block(n), system_->h()));
        gammas_.push_back(transfers_.back() * gammas_.back());
    }
}

Matrix DiscreteFundamentalSolution::extended(int n) const {
    if (n < 0) throw Error(ErrorCode::dimension, "negative step index");
    const int size = n_steps();
    Matrix out = gammas_[static_cast<std::size_t>(n % size)];
    for (int k = 0; k < n / size; ++k) out = out * monodromy();
    return out;
}

DiscreteFundamentalSolution fundamental_solution(const CoefficientSequence& system) {
    return DiscreteFundamentalSolution(std::make_shared<const CoefficientSequence>(system));
}

PiecewisePath joint_path(const DiscreteFundamentalSolution& solution) {
    const int size = solution.n_steps();
    const double h = solution.system().h();
    std::vector<PathSegment> segs;
    for (int n = 0; n < size; ++n) {
        const Matrix b = solution.system().block(n);
        const Matrix g = solution.gamma(n);
        PathSegment seg;
        seg.t0 = static_cast<double>(n) / size;
        seg.t1 = static_cast<double>(n + 1) / size;
        seg.value = [b, g, h, n, size](double t) {
            return Matrix(interpolation_segment(b, h, size * t - n) * g);
        };
        seg.derivative = [b, g, h, n, size](double t) {
            return Matrix(size * interpolation_segment_rate(b, h, size * t - n) * g);
        };
        segs.push_back(std::move(seg));
    }
    segs.back().t1 = 1.0;
    return PiecewisePath(solution.system().m(), std::move(segs));
}

Discretization discretize_continuous(int m, int n_steps,
                                     const std::function<Matrix(double)>& gamma,
                                     const StepLimits& limits) {
    if (n_steps < 1) throw Error(ErrorCode::dimension, "N must be at least 1");
    const double h = 1.0 / n_steps;
    std::vector<Matrix> blocks;
    Matrix previous = gamma(0.0);
    for (int n = 0; n < n_steps; ++n) {
        const Matrix next = gamma(static_cast<double>(n + 1) / n_steps);
        try {
            blocks.push_back(extract_coefficients(next * previous.inverse(), h));
        } catch (const Error& e) {
            throw Error(ErrorCode::refine_n, "step " + std::to_string(n) + ": " + e.what() +
                                                 "; increase N");
        }
        previous = next;
    }
    try {
        auto system = std::make_shared<const CoefficientSequence>(m, h, std::move(blocks), limits);
        DiscreteFundamentalSolution solution(system);
        return Discretization{*system, std::move(solution)};
    } catch (const Error& e) {
        if (e.code() != ErrorCode::step_too_large) throw;
        throw Error(ErrorCode::refine_n, std::string(e.what()) + "; increase N");
    }
}

}  // namespace shdx
