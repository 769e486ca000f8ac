#include "shdx/maslov_index.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>

#include "shdx/errors.hpp"
#include "shdx/symplectic.hpp"

namespace shdx {

bool ScanResult::regular() const {
    return std::all_of(crossings.begin(), crossings.end(),
                       [](const CrossingRecord& c) { return c.regular; });
}

int ScanResult::index() const {
    double sum = 0.0;
    for (const auto& c : crossings) sum += c.contribution;
    return static_cast<int>(std::lround(sum));
}

PiecewisePath seed_path(int m) {
    if (m < 1) throw Error(ErrorCode::dimension, "m must be at least 1");
    auto value = [m](double t) {
        Vector d(2 * m);
        d.head(m).setConstant(2.0 - t);
        d.tail(m).setConstant(1.0 / (2.0 - t));
        return Matrix(d.asDiagonal());
    };
    auto derivative = [m](double t) {
        Vector d(2 * m);
        d.head(m).setConstant(-1.0);
        d.tail(m).setConstant(1.0 / ((2.0 - t) * (2.0 - t)));
        return Matrix(d.asDiagonal());
    };
    return smooth_path(m, value, derivative);
}

PiecewisePath extended_path(const PiecewisePath& path) {
    return concatenate(seed_path(path.m()), path);
}

namespace {

constexpr double kJointSnap = 1e-9;
constexpr double kPlateauWidth = 1e-7;
constexpr double kPlateauZero = 1e-12;  // singular to roundoff across the whole bracket
constexpr std::size_t kMaxEvaluations = 4'000'000;

struct Sample {
    double t = 0.0;
    double smin = 0.0;
    double smax = 0.0;
    double lip = 0.0;
};

class Scanner {
public:
    Scanner(const PiecewisePath& path, UnitCircleParam omega, const MaslovOptions& options)
        : path_(path), omega_(omega), options_(options), joints_(path.joints()),
          j_(standard_j(path.m())) {}

    ScanResult run(const std::function<double(double)>& report_t) {
        ScanResult result;
        std::vector<Sample> grid;
        for (const auto& seg : path_.segments()) {
            const int k = std::max(1, options_.samples_per_segment);
            for (int i = grid.empty() ? 0 : 1; i <= k; ++i) {
                const double t = i == k ? seg.t1 : seg.t0 + (seg.t1 - seg.t0) * i / k;
                grid.push_back(evaluate(t));
                result.max_imag_d_omega = std::max(result.max_imag_d_omega, imag_d(t));
            }
        }
        for (std::size_t i = 0; i + 1 < grid.size(); ++i) process(grid[i], grid[i + 1]);

        std::sort(leaves_.begin(), leaves_.end(),
                  [](const auto& x, const auto& y) { return x.first.t < y.first.t; });
        std::size_t i = 0;
        while (i < leaves_.size()) {
            std::size_t j = i + 1;
            double stop = leaves_[i].second.t;
            while (j < leaves_.size() && leaves_[j].first.t <= stop + options_.min_bracket) {
                stop = std::max(stop, leaves_[j].second.t);
                ++j;
            }
            Sample best = leaves_[i].first;
            for (std::size_t q = i; q < j; ++q) {
                for (const Sample* s : {&leaves_[q].first, &leaves_[q].second}) {
                    if (s->smin < best.smin) best = *s;
                }
            }
            if (is_kernel(best)) result.crossings.push_back(classify(best.t, report_t));
            i = j;
        }
        for (const auto& iv : intervals_) {
            CrossingRecord rec;
            rec.t = report_t(0.5 * (iv.first + iv.second));
            rec.kernel_dim = kernel_basis(0.5 * (iv.first + iv.second)).cols();
            rec.regular = false;
            result.crossings.push_back(rec);
        }
        std::sort(result.crossings.begin(), result.crossings.end(),
                  [](const CrossingRecord& x, const CrossingRecord& y) { return x.t < y.t; });
        return result;
    }

private:
    CMatrix shifted(double t, const Matrix& e) const {
        CMatrix a = e.cast<Complex>();
        a.diagonal().array() -= omega_.value();
        (void)t;
        return a;
    }

    Sample evaluate(double t) {
        if (++evaluations_ > kMaxEvaluations) {
            throw Error(ErrorCode::unresolved_degeneracy, "crossing scan exceeded its evaluation budget");
        }
        const Matrix e = path_(t);
        Sample s;
        s.t = t;
        if (omega_.is_real()) {
            Matrix a = e;
            a.diagonal().array() -= omega_.is_one() ? 1.0 : -1.0;
            Eigen::JacobiSVD<Matrix> svd(a);
            s.smax = svd.singularValues()(0);
            s.smin = svd.singularValues()(svd.singularValues().size() - 1);
        } else {
            Eigen::JacobiSVD<CMatrix> svd(shifted(t, e));
            s.smax = svd.singularValues()(0);
            s.smin = svd.singularValues()(svd.singularValues().size() - 1);
        }
        s.lip = std::max(path_.derivative(t, Side::left).norm(), path_.derivative(t, Side::right).norm());
        return s;
    }

    double imag_d(double t) const {
        const Matrix e = path_(t);
        const Complex d = d_omega_complex(e, omega_);
        return std::abs(d.imag()) / std::pow(1.0 + e.norm(), 2 * path_.m());
    }

    bool is_kernel(const Sample& s) const { return s.smin <= options_.tol_zero * std::max(1.0, s.smax); }
    bool on_plateau(const Sample& s) const { return s.smin <= kPlateauZero * std::max(1.0, s.smax); }

    void process(const Sample& a, const Sample& b) {
        const double width = b.t - a.t;
        const double lip = 2.0 * std::max(a.lip, b.lip) + 1e-300;
        if (a.smin + b.smin > lip * width) return;
        if (width <= options_.min_bracket) {
            leaves_.emplace_back(a, b);
            return;
        }
        const Sample mid = evaluate(0.5 * (a.t + b.t));
        if (width > kPlateauWidth && on_plateau(a) && on_plateau(mid) && on_plateau(b)) {
            intervals_.emplace_back(a.t, b.t);
            return;
        }
        process(a, mid);
        process(mid, b);
    }

    CMatrix kernel_basis(double t) const {
        Eigen::JacobiSVD<CMatrix> svd(shifted(t, path_(t)), Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        const double threshold = options_.tol_zero * std::max(1.0, sv(0));
        Eigen::Index k = 0;
        for (Eigen::Index i = 0; i < sv.size(); ++i) {
            if (sv(i) <= threshold) ++k;
        }
        return svd.matrixV().rightCols(k);
    }

    // Eigenvalues of V* S V with S = -J E' E^{-1}.
    Vector form_eigenvalues(double t, Side side, const CMatrix& v, double& scale) const {
        const Matrix e = path_(t);
        const Matrix e_inv = -j_ * e.transpose() * j_;
        Matrix s = -j_ * path_.derivative(t, side) * e_inv;
        s = 0.5 * (s + s.transpose()).eval();
        scale = std::max(1.0, s.norm());
        const CMatrix q = v.adjoint() * s.cast<Complex>() * v;
        Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (q + q.adjoint()), Eigen::EigenvaluesOnly);
        return es.eigenvalues();
    }

    // Returns the signature, or nullopt-like flag through `regular`.
    int form_signature(double t, Side side, const CMatrix& v, bool& regular) const {
        double scale = 1.0;
        const Vector ev = form_eigenvalues(t, side, v, scale);
        int sig = 0;
        for (Eigen::Index i = 0; i < ev.size(); ++i) {
            if (std::abs(ev(i)) <= options_.form_tol * scale) {
                regular = false;
            } else {
                sig += ev(i) > 0.0 ? 1 : -1;
            }
        }
        return sig;
    }

    CrossingRecord classify(double t, const std::function<double(double)>& report_t) const {
        CrossingRecord rec;
        for (double joint : joints_) {
            if (std::abs(t - joint) <= kJointSnap) {
                t = joint;
                rec.at_joint = true;
            }
        }
        const double end = path_.segments().back().t1;
        const double begin = path_.segments().front().t0;
        const CMatrix v = kernel_basis(t);
        rec.t = report_t(t);
        rec.kernel_dim = static_cast<int>(v.cols());
        if (std::abs(t - end) <= kJointSnap || std::abs(t - begin) <= kJointSnap) {
            rec.regular = false;
            return rec;
        }
        bool regular = rec.kernel_dim > 0;
        if (rec.at_joint) {
            const int left = form_signature(t, Side::left, v, regular);
            const int right = form_signature(t, Side::right, v, regular);
            rec.signature = left + right;
            if ((left + right) % 2 != 0) regular = false;
            rec.contribution = 0.5 * (left + right);
        } else {
            rec.signature = form_signature(t, Side::right, v, regular);
            rec.contribution = rec.signature;
        }
        rec.regular = regular;
        if (!regular) rec.contribution = 0.0;
        return rec;
    }

    const PiecewisePath& path_;
    UnitCircleParam omega_;
    MaslovOptions options_;
    std::vector<double> joints_;
    Matrix j_;
    std::vector<std::pair<Sample, Sample>> leaves_;
    std::vector<std::pair<double, double>> intervals_;
    std::size_t evaluations_ = 0;
};

double smallest_singular_value(const Matrix& e, UnitCircleParam omega) {
    CMatrix a = e.cast<Complex>();
    a.diagonal().array() -= omega.value();
    Eigen::JacobiSVD<CMatrix> svd(a);
    return svd.singularValues()(svd.singularValues().size() - 1);
}

// E(t) P^{-1} R(a phi(t)) P with phi linear on the whole parameter range.
PiecewisePath rotate_linearly(const PiecewisePath& path, double a, const Matrix& p) {
    const int m = path.m();
    const Matrix j = standard_j(m);
    const Matrix p_inv = p.inverse();
    auto factor = [=](double t) { return Matrix(p_inv * symplectic_rotation(m, a * t) * p); };
    auto rate = [=](double t) { return Matrix(p_inv * (a * j * symplectic_rotation(m, a * t)) * p); };
    return right_multiply(path, factor, rate);
}

double condition_number(const Matrix& a) {
    Eigen::JacobiSVD<Matrix> svd(a);
    const auto& s = svd.singularValues();
    return s(0) / s(s.size() - 1);
}

int index_nondegenerate(const PiecewisePath& path, UnitCircleParam omega,
                        const MaslovOptions& options, bool& perturbed) {
    const Matrix end = path.end();
    if (nullity(end, omega, options.tol_zero) != 0) {
        throw Error(ErrorCode::endpoint_degenerate, "path endpoint is still degenerate");
    }
    const ScanResult scan = crossing_scan(path, omega, options);
    if (scan.regular()) return scan.index();

    const PiecewisePath extended = extended_path(path);
    const double sigma = smallest_singular_value(end, omega);
    Eigen::JacobiSVD<Matrix> svd_end(end);
    const double end_norm = svd_end.singularValues()(0);
    std::mt19937_64 rng(options.seed);
    const int m = path.m();
    for (int attempt = 0; attempt < 4; ++attempt) {
        Matrix p = Matrix::Identity(2 * m, 2 * m);
        if (attempt > 0) p = expm(0.5 * standard_j(m) * random_symmetric(rng, 2 * m));
        const double cap = 0.25 * sigma / (end_norm * condition_number(p));
        const double a = std::min(options.theta0 * options.perturbation_scale, cap);
        const ScanResult coarse =
            crossing_scan_raw(rotate_linearly(extended, -a, p), omega, options);
        const ScanResult fine =
            crossing_scan_raw(rotate_linearly(extended, -a / 8.0, p), omega, options);
        if (coarse.regular() && fine.regular() && coarse.index() == fine.index()) {
            perturbed = true;
            return coarse.index();
        }
    }
    throw Error(ErrorCode::unresolved_degeneracy,
                "non-regular crossings persist under the rotation homotopy");
}

}  // namespace

ScanResult crossing_scan_raw(const PiecewisePath& path, UnitCircleParam omega,
                             const MaslovOptions& options, double joint_in) {
    Scanner scanner(path, omega, options);
    if (joint_in >= 0.0) {
        return scanner.run([joint_in](double t) { return (t - joint_in) / (1.0 - joint_in); });
    }
    return scanner.run([](double t) { return t; });
}

ScanResult crossing_scan(const PiecewisePath& path, UnitCircleParam omega,
                         const MaslovOptions& options) {
    return crossing_scan_raw(extended_path(path), omega, options, 0.5);
}

PiecewisePath perturb_path(const PiecewisePath& path, const PerturbationSpec& spec) {
    if (spec.s < -1.0 || spec.s > 1.0) throw Error(ErrorCode::input, "perturbation s must lie in [-1, 1]");
    const int m = path.m();
    const Matrix j = standard_j(m);
    const Matrix p = spec.conjugator.size() ? spec.conjugator : Matrix::Identity(2 * m, 2 * m);
    const Matrix p_inv = p.inverse();
    const double amp = spec.s * spec.theta0;
    auto rho = spec.rho;
    auto rho_rate = spec.rho_rate;
    auto factor = [=](double t) { return Matrix(p_inv * symplectic_rotation(m, amp * rho(t)) * p); };
    auto rate = [=](double t) {
        return Matrix(p_inv * (amp * rho_rate(t) * j * symplectic_rotation(m, amp * rho(t))) * p);
    };
    return right_multiply(path, factor, rate);
}

IndexPair maslov_index(const PiecewisePath& path, UnitCircleParam omega, const MaslovOptions& options) {
    IndexPair out;
    out.nullity = nullity(path.end(), omega, options.tol_zero);
    if (out.nullity == 0) {
        out.index = index_nondegenerate(path, omega, options, out.perturbed);
        return out;
    }
    double s = options.perturbation_scale;
    for (int level = 0; level < 3; ++level, s /= 8.0) {
        try {
            bool unused = false;
            PerturbationSpec coarse;
            coarse.s = -s;
            coarse.theta0 = options.theta0;
            PerturbationSpec fine = coarse;
            fine.s = -s / 8.0;
            const int a = index_nondegenerate(perturb_path(path, coarse), omega, options, unused);
            const int b = index_nondegenerate(perturb_path(path, fine), omega, options, unused);
            if (a == b) {
                out.index = a;
                out.perturbed = true;
                return out;
            }
        } catch (const Error& e) {
            if (e.code() != ErrorCode::endpoint_degenerate && e.code() != ErrorCode::unresolved_degeneracy) {
                throw;
            }
        }
    }
    throw Error(ErrorCode::unresolved_degeneracy,
                "index of the degenerate endpoint is unstable across perturbation scales");
}

SplittingPair splitting_endpoint(const PiecewisePath& path, UnitCircleParam omega,
                                 double theta_probe, const MaslovOptions& options) {
    if (!(theta_probe > 0.0)) throw Error(ErrorCode::input, "theta_probe must be positive");
    const int base = maslov_index(path, omega, options).index;
    auto probe = [&](double theta) {
        SplittingPair p;
        p.plus = maslov_index(path, omega.rotated(theta), options).index - base;
        p.minus = maslov_index(path, omega.rotated(-theta), options).index - base;
        return p;
    };
    const SplittingPair coarse = probe(theta_probe);
    const SplittingPair fine = probe(theta_probe / 8.0);
    if (coarse.plus != fine.plus || coarse.minus != fine.minus) {
        throw Error(ErrorCode::probe_too_large,
                    "endpoint splitting numbers change between theta and theta/8; reduce theta_probe");
    }
    return fine;
}

}  // namespace shdx
