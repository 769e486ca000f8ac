#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "shdx/discrete_system.hpp"
#include "shdx/maslov_index.hpp"
#include "shdx/morse_form.hpp"
#include "shdx/types.hpp"

namespace shdx {

inline constexpr const char* kReportSchema = "shdx-report/1";

struct TrigTerm {
    Matrix amplitude;
    double frequency = 1.0;
    double phase = 0.0;
};

// B(t) = base + sum amplitude_k cos(2 pi frequency_k t + phase_k), or a standard path.
struct ContinuousGenerator {
    enum class Kind { constant, trigonometric, standard };
    Kind kind = Kind::constant;
    Matrix base;
    std::vector<TrigTerm> terms;
    int j = 0;

    Matrix operator()(double t, int m) const;
};

struct CoefficientSpec {
    enum class Kind { constant, samples, standard, continuous };
    Kind kind = Kind::constant;
    Matrix constant;
    std::vector<Matrix> samples;
    int j = 0;
    ContinuousGenerator generator;
    bool exact = true;  // continuous: match gamma at the nodes; false samples B(n / N)
};

struct SystemDefinition {
    int m = 1;
    int n_steps = 8;
    std::optional<double> h;
    std::vector<UnitCircleParam> omegas{UnitCircleParam::one()};
    CoefficientSpec coefficients;
    std::optional<double> max_step;

    static SystemDefinition from_json(const nlohmann::json& j);
    static SystemDefinition parse(const std::string& text);
    nlohmann::json to_json() const;

    double step() const;
    StepLimits limits() const;
    bool has_continuous_limit() const;
    // Coefficients at the given N (0 keeps n_steps).
    CoefficientSequence build(int n_steps_override = 0) const;
    // B(t) for standard and continuous coefficients.
    Matrix continuous_coefficient(double t) const;
};

// gamma(t_k) for gamma' = J B(t) gamma, adaptive Dormand-Prince at the given tolerance.
std::vector<Matrix> reference_solution(int m, const std::function<Matrix(double)>& b,
                                       const std::vector<double>& times, double tol = 1e-12);

struct HarnessOptions {
    double tol_zero = 1e-8;
    double theta_probe = 1e-3;
    MaslovOptions maslov;
    bool timing = false;
    unsigned threads = 0;  // 0 = hardware concurrency
};

enum class ReportStatus { pass = 0, check_failed = 1, numerical = 3 };

struct Report {
    std::string kind;
    nlohmann::json body;  // full JSON document
    std::vector<std::string> csv_header;
    std::vector<std::vector<std::string>> csv_rows;
    ReportStatus status = ReportStatus::pass;

    bool passed() const { return status == ReportStatus::pass; }
    std::string json_text() const;
    std::string csv_text() const;
};

struct IndexResult {
    int n_steps = 0;
    double omega_angle = 0.0;
    int i = 0;
    int nu = 0;
    MorseTriple morse;
    int signature = 0;
    SplittingPair splitting;
    std::array<int, 3> residuals{};
    bool perturbed = false;
    bool passed() const { return residuals == std::array<int, 3>{0, 0, 0}; }
};

IndexResult evaluate_index(const CoefficientSequence& system, UnitCircleParam omega,
                           const HarnessOptions& options, bool with_splitting = true);

Report run_index(const SystemDefinition& def, const HarnessOptions& options = {});
Report run_morse(const SystemDefinition& def, const HarnessOptions& options = {},
                 const std::string& dump_path = {});
Report run_spectrum(int m, int n_steps, double h, const std::vector<UnitCircleParam>& omegas);
Report run_splitting(const SystemDefinition& def, const HarnessOptions& options = {});
Report run_crossings(const SystemDefinition& def, const HarnessOptions& options = {});
Report run_corollaries(const SystemDefinition& def, const HarnessOptions& options = {});

struct SuiteConfig {
    std::uint64_t seed = 7;
    int trials = 50;
    std::vector<int> ms{1, 2};
    std::vector<int> ns{8, 16};
    std::vector<UnitCircleParam> omegas{UnitCircleParam::one(), UnitCircleParam::minus_one(),
                                        UnitCircleParam(kPi / 3.0), UnitCircleParam(2.0)};
    int degenerate = 0;
    double norm_bound = 3.0;
};

Report run_theorem_suite(const SuiteConfig& config, const HarnessOptions& options = {});

// Random system whose gamma_N has eigenvalue omega: B = c B0 with c found by bisection.
CoefficientSequence construct_degenerate(std::mt19937_64& rng, int m, int n_steps,
                                         UnitCircleParam omega);

struct ConvergenceRow {
    int n_steps = 0;
    double h = 0.0;
    double eps = 0.0;
    std::optional<double> order;
};

Report run_convergence(const SystemDefinition& def, int n0 = 8, int levels = 5,
                       const HarnessOptions& options = {});
std::vector<ConvergenceRow> convergence_ladder(int m, const std::function<Matrix(double)>& b,
                                               const std::vector<int>& ladder);

}  // namespace shdx
