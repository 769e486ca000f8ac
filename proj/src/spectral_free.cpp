#include "shdx/spectral_free.hpp"

#include <algorithm>
#include <cmath>

#include "shdx/errors.hpp"

namespace shdx {

namespace {

void check_args(int m, int n_steps, double h) {
    if (m < 1) throw Error(ErrorCode::dimension, "m must be at least 1");
    if (n_steps < 2) throw Error(ErrorCode::dimension, "the free spectrum needs N >= 2");
    if (!(h > 0.0)) throw Error(ErrorCode::input, "h must be positive");
}

double alpha_k(int k, int n_steps, UnitCircleParam omega) {
    return (k * kPi + 0.5 * omega.angle()) / n_steps;
}

}  // namespace

std::vector<double> FreeSpectrum::values() const {
    std::vector<double> out;
    for (const auto& e : entries) out.insert(out.end(), static_cast<std::size_t>(e.multiplicity), e.value);
    return out;
}

FreeSpectrum free_spectrum(int m, int n_steps, double h, UnitCircleParam omega) {
    check_args(m, n_steps, h);
    FreeSpectrum out;
    out.m = m;
    out.n_steps = n_steps;
    out.h = h;
    out.omega = omega;
    std::vector<double> all;
    for (int k = 0; k < n_steps; ++k) {
        FreeMode mode;
        mode.k = k;
        mode.alpha_k = alpha_k(k, n_steps, omega);
        mode.lambda_plus = 2.0 / h * std::sin(mode.alpha_k);
        mode.lambda_minus = -mode.lambda_plus;
        mode.multiplicity = m;
        out.modes.push_back(mode);
        all.push_back(mode.lambda_plus);
        all.push_back(mode.lambda_minus);
    }
    std::sort(all.begin(), all.end());
    const double merge = 1e-9 * 2.0 / h;
    for (double v : all) {
        if (!out.entries.empty() && std::abs(v - out.entries.back().value) <= merge) {
            out.entries.back().multiplicity += m;
        } else {
            out.entries.push_back({v, m});
        }
    }
    return out;
}

std::vector<FreeEigenvector> free_eigenvectors(int m, int n_steps, double h, UnitCircleParam omega) {
    check_args(m, n_steps, h);
    const Eigen::Index dim = 2 * static_cast<Eigen::Index>(m) * n_steps;
    const double norm = 1.0 / std::sqrt(2.0 * n_steps);
    const Complex i(0.0, 1.0);
    std::vector<FreeEigenvector> out;
    for (int k = 0; k < n_steps; ++k) {
        const double a = alpha_k(k, n_steps, omega);
        const Complex f = std::polar(1.0, 2.0 * a);
        for (int branch : {1, -1}) {
            const Complex gx = -static_cast<double>(branch) * i * std::polar(1.0, a);
            for (int c = 0; c < m; ++c) {
                FreeEigenvector v;
                v.k = k;
                v.branch = branch;
                v.component = c;
                v.recursion_value = branch * 2.0 / h * std::sin(a);
                v.hessian_value = -v.recursion_value;
                v.values = CVector::Zero(dim);
                Complex fn = 1.0;
                for (int n = 1; n <= n_steps; ++n) {
                    fn *= f;
                    const Eigen::Index base = 2 * static_cast<Eigen::Index>(m) * (n - 1);
                    v.values(base + c) = norm * fn * gx;
                    v.values(base + m + c) = norm * fn;
                }
                out.push_back(std::move(v));
            }
        }
    }
    // Stable re-orthonormalization inside each cluster of equal eigenvalues.
    std::vector<std::size_t> order(out.size());
    for (std::size_t q = 0; q < order.size(); ++q) order[q] = q;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return out[x].hessian_value < out[y].hessian_value;
    });
    const double merge = 1e-9 * 2.0 / h;
    std::size_t start = 0;
    while (start < order.size()) {
        std::size_t stop = start + 1;
        while (stop < order.size() &&
               std::abs(out[order[stop]].hessian_value - out[order[start]].hessian_value) <= merge) {
            ++stop;
        }
        for (std::size_t p = start; p < stop; ++p) {
            CVector& v = out[order[p]].values;
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t q = start; q < p; ++q) {
                    const CVector& u = out[order[q]].values;
                    v -= u.dot(v) * u;
                }
            }
            v.normalize();
        }
        start = stop;
    }
    return out;
}

std::vector<Vector> free_real_eigenvectors(int m, int n_steps, double h, int k, int branch) {
    check_args(m, n_steps, h);
    if (k < 0 || k >= n_steps) throw Error(ErrorCode::dimension, "mode index out of range");
    const double a = alpha_k(k, n_steps, UnitCircleParam::one());
    const double sgn = branch >= 0 ? 1.0 : -1.0;
    const Eigen::Index dim = 2 * static_cast<Eigen::Index>(m) * n_steps;
    std::vector<Vector> out;
    for (int c = 0; c < m; ++c) {
        Vector cos_part = Vector::Zero(dim);
        Vector sin_part = Vector::Zero(dim);
        for (int n = 1; n <= n_steps; ++n) {
            const Eigen::Index base = 2 * static_cast<Eigen::Index>(m) * (n - 1);
            cos_part(base + c) = sgn * std::sin((2 * n + 1) * a);
            cos_part(base + m + c) = std::cos(2 * n * a);
            sin_part(base + c) = -sgn * std::cos((2 * n + 1) * a);
            sin_part(base + m + c) = std::sin(2 * n * a);
        }
        for (Vector* v : {&cos_part, &sin_part}) {
            if (v->norm() > 1e-12) out.push_back(v->normalized());
        }
    }
    return out;
}

}  // namespace shdx
