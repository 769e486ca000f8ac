#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "shdx/morse_form.hpp"
#include "shdx/path.hpp"
#include "shdx/types.hpp"

namespace shdx {

struct MaslovOptions {
    double tol_zero = 1e-8;          // kernel threshold relative to sigma_max
    int samples_per_segment = 64;
    double min_bracket = 1e-12;      // localization width of a crossing
    double form_tol = 1e-6;          // eigenvalues of a crossing form below this (relative) are zero
    double perturbation_scale = 1.0;
    double theta0 = 0.05;
    std::uint64_t seed = 0x5d3a7c11u;  // random conjugators in the escalation ladder
};

struct CrossingRecord {
    double t = 0.0;            // parameter of the input path; seed crossings have t in [-1, 0]
    int kernel_dim = 0;
    int signature = 0;         // signature of the crossing form (sum of both sides at a joint)
    double contribution = 0.0;
    bool at_joint = false;
    bool regular = true;
};

struct ScanResult {
    std::vector<CrossingRecord> crossings;
    double max_imag_d_omega = 0.0;  // largest |Im D_omega| over the sample grid
    bool regular() const;
    int index() const;  // sum of contributions; valid when regular()
};

struct IndexPair {
    int index = 0;
    int nullity = 0;
    bool perturbed = false;  // resolved through a rotation homotopy
};

// xi_m(t) = D(2 - t) diamond ... diamond D(2 - t), from D(2)^m to I.
PiecewisePath seed_path(int m);
// seed path followed by the input path.
PiecewisePath extended_path(const PiecewisePath& path);

// Crossings of the extended path with the set where omega is an eigenvalue.
ScanResult crossing_scan(const PiecewisePath& path, UnitCircleParam omega,
                         const MaslovOptions& options = {});
// Same scan on a path used as given, without prepending the seed.
ScanResult crossing_scan_raw(const PiecewisePath& path, UnitCircleParam omega,
                             const MaslovOptions& options = {}, double joint_in = -1.0);

struct PerturbationSpec {
    double s = 1.0;  // in [-1, 1]
    double theta0 = 0.05;
    std::function<double(double)> rho = [](double t) { return t * t; };
    std::function<double(double)> rho_rate = [](double t) { return 2.0 * t; };
    Matrix conjugator;  // P; empty means identity
};

// t -> path(t) P^{-1} R(s rho(t) theta0) P.
PiecewisePath perturb_path(const PiecewisePath& path, const PerturbationSpec& spec);

IndexPair maslov_index(const PiecewisePath& path, UnitCircleParam omega,
                       const MaslovOptions& options = {});

// i at omega e^{+-i theta} minus i at omega, checked at theta and theta / 8.
SplittingPair splitting_endpoint(const PiecewisePath& path, UnitCircleParam omega,
                                 double theta_probe = 1e-3, const MaslovOptions& options = {});

}  // namespace shdx
