#include "shdx/path.hpp"

#include <algorithm>
#include <string>

#include "shdx/errors.hpp"

namespace shdx {

PiecewisePath::PiecewisePath(int m, std::vector<PathSegment> segments)
    : m_(m), segments_(std::move(segments)) {
    if (segments_.empty()) throw Error(ErrorCode::dimension, "a path needs at least one segment");
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        if (!(segments_[i].t1 > segments_[i].t0)) {
            throw Error(ErrorCode::dimension, "empty path segment " + std::to_string(i));
        }
        if (i > 0 && segments_[i].t0 != segments_[i - 1].t1) {
            throw Error(ErrorCode::dimension, "path segments are not contiguous");
        }
    }
}

std::vector<double> PiecewisePath::joints() const {
    std::vector<double> out;
    for (std::size_t i = 1; i < segments_.size(); ++i) out.push_back(segments_[i].t0);
    return out;
}

std::size_t PiecewisePath::segment_index(double t, Side side) const {
    const auto upper = std::upper_bound(
        segments_.begin(), segments_.end(), t,
        [](double v, const PathSegment& s) { return v < s.t0; });
    std::size_t k = upper == segments_.begin() ? 0 : static_cast<std::size_t>(upper - segments_.begin()) - 1;
    if (k >= segments_.size()) k = segments_.size() - 1;
    if (side == Side::left && k > 0 && t == segments_[k].t0) --k;
    return k;
}

Matrix PiecewisePath::operator()(double t) const {
    t = std::clamp(t, segments_.front().t0, segments_.back().t1);
    return segments_[segment_index(t)].value(t);
}

Matrix PiecewisePath::derivative(double t, Side side) const {
    t = std::clamp(t, segments_.front().t0, segments_.back().t1);
    return segments_[segment_index(t, side)].derivative(t);
}

namespace {

PathSegment rescaled(const PathSegment& s, double offset, double scale) {
    // global parameter u maps back to t = (u - offset) / scale
    PathSegment out;
    out.t0 = offset + scale * s.t0;
    out.t1 = offset + scale * s.t1;
    auto value = s.value;
    auto derivative = s.derivative;
    out.value = [value, offset, scale](double u) { return value((u - offset) / scale); };
    out.derivative = [derivative, offset, scale](double u) {
        return Matrix(derivative((u - offset) / scale) / scale);
    };
    return out;
}

}  // namespace

PiecewisePath concatenate(const PiecewisePath& first, const PiecewisePath& second) {
    if (first.m() != second.m()) throw Error(ErrorCode::dimension, "paths of different sizes");
    std::vector<PathSegment> segs;
    for (const auto& s : first.segments()) segs.push_back(rescaled(s, 0.0, 0.5));
    for (const auto& s : second.segments()) segs.push_back(rescaled(s, 0.5, 0.5));
    segs.back().t1 = 1.0;
    for (std::size_t i = 1; i < segs.size(); ++i) segs[i].t0 = segs[i - 1].t1;
    return PiecewisePath(first.m(), std::move(segs));
}

PiecewisePath right_multiply(const PiecewisePath& path, std::function<Matrix(double)> factor,
                             std::function<Matrix(double)> factor_derivative) {
    std::vector<PathSegment> segs;
    for (const auto& s : path.segments()) {
        PathSegment out;
        out.t0 = s.t0;
        out.t1 = s.t1;
        auto value = s.value;
        auto derivative = s.derivative;
        out.value = [value, factor](double t) { return Matrix(value(t) * factor(t)); };
        out.derivative = [value, derivative, factor, factor_derivative](double t) {
            return Matrix(derivative(t) * factor(t) + value(t) * factor_derivative(t));
        };
        segs.push_back(std::move(out));
    }
    return PiecewisePath(path.m(), std::move(segs));
}

PiecewisePath smooth_path(int m, std::function<Matrix(double)> value,
                          std::function<Matrix(double)> derivative) {
    return PiecewisePath(m, {PathSegment{0.0, 1.0, std::move(value), std::move(derivative)}});
}

}  // namespace shdx
