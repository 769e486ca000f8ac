#include <cstdio>
#include <cstdlib>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "shdx/shdx.h"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheck = 1;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

const char* kFooter = R"(Exit codes: 0 pass, 1 check failure, 2 input or I/O error, 3 numerical resolution error.

CSV columns:
  index        omega_angle, i_omega, nu_omega, m_minus, m_zero, m_plus, signature, s_plus, s_minus,
               r1, r2, r3, passed
  morse        omega_angle, m_minus, m_zero, m_plus, signature
  spectrum     k, alpha_k, lambda_plus, lambda_minus, multiplicity   (exactly one omega)
  splitting    omega_angle, morse_s_plus, morse_s_minus, maslov_s_plus, maslov_s_minus, agree
  theorem1     system, kind, m, N, omega_angle, i_omega, nu_omega, m_minus, m_zero, m_plus, r1, r2, r3, passed
  corollaries  omega_angle, N, i_omega, nu_omega, signature, signature_check, s_plus, s_minus,
               endpoint_s_plus, endpoint_s_minus, splitting_check, h_independent
  converge     N, h, eps, order_estimate
  --crossings  t*, kernel_dim, signature, contribution   (first omega)

Hessian dump: "SHDX", u32 dimension, then dimension^2 (re, im) f64 pairs in column-major order.)";

struct Settings {
    std::string input;
    std::vector<double> omega_angles;
    int n_steps = 0;
    int m = 0;
    double tol_zero = 1e-8;
    double theta_probe = 1e-3;
    std::uint64_t seed = 7;
    std::string format = "json";
    std::string out;
    bool timing = false;
    unsigned threads = 0;
    // verb specific
    std::string dump_hessian;
    std::string crossings;
    int trials = 50;
    int degenerate = 0;
    std::vector<int> suite_m{1, 2};
    std::vector<int> suite_n{8, 16};
    int levels = 5;
};

int exit_for(shdx_status s) {
    switch (s) {
        case SHDX_OK:
            return kExitPass;
        case SHDX_CHECK_FAILED:
            return kExitCheck;
        case SHDX_NUMERICAL_ERROR:
            return kExitNumerical;
        default:
            return kExitInput;
    }
}

int report_error(shdx_status s) {
    std::fprintf(stderr, "shdx: %s: %s\n", shdx_status_name(s), shdx_last_error());
    return exit_for(s);
}

struct DefinitionDeleter {
    void operator()(shdx_definition* d) const { shdx_definition_free(d); }
};
struct ReportDeleter {
    void operator()(shdx_report* r) const { shdx_report_free(r); }
};
using DefinitionPtr = std::unique_ptr<shdx_definition, DefinitionDeleter>;
using ReportPtr = std::unique_ptr<shdx_report, ReportDeleter>;

shdx_status load_definition(const Settings& s, DefinitionPtr& out) {
    shdx_definition* raw = nullptr;
    shdx_status st = s.input.empty() ? shdx_definition_default(s.m > 0 ? s.m : 1, s.n_steps > 0 ? s.n_steps : 8, &raw)
                                     : shdx_definition_load(s.input.c_str(), &raw);
    if (st != SHDX_OK) return st;
    out.reset(raw);
    if (s.m > 0 && (st = shdx_definition_set_m(raw, s.m)) != SHDX_OK) return st;
    if (s.n_steps > 0 && (st = shdx_definition_set_n(raw, s.n_steps)) != SHDX_OK) return st;
    if (!s.omega_angles.empty()) {
        st = shdx_definition_set_omegas(raw, s.omega_angles.data(), s.omega_angles.size());
    }
    return st;
}

shdx_options options_from(const Settings& s) {
    shdx_options o;
    shdx_options_init(&o);
    o.tol_zero = s.tol_zero;
    o.theta_probe = s.theta_probe;
    o.timing = s.timing ? 1 : 0;
    o.threads = s.threads;
    return o;
}

int emit(const Settings& s, shdx_report* report) {
    const shdx_format format = s.format == "csv" ? SHDX_FORMAT_CSV : SHDX_FORMAT_JSON;
    shdx_status st;
    if (s.out.empty()) {
        char* text = nullptr;
        st = shdx_report_serialize(report, format, &text);
        if (st == SHDX_OK) {
            std::fputs(text, stdout);
            std::fflush(stdout);
            shdx_string_free(text);
        }
    } else {
        st = shdx_report_write(report, format, s.out.c_str());
    }
    if (st != SHDX_OK) return report_error(st);
    return exit_for(shdx_report_status(report));
}

template <class Run>
int run_with_definition(const Settings& s, Run&& run) {
    DefinitionPtr def;
    shdx_status st = load_definition(s, def);
    if (st != SHDX_OK) return report_error(st);
    const shdx_options opts = options_from(s);
    shdx_report* raw = nullptr;
    st = run(def.get(), &opts, &raw);
    if (st != SHDX_OK) return report_error(st);
    ReportPtr report(raw);
    return emit(s, report.get());
}

int run_index(const Settings& s) {
    DefinitionPtr def;
    shdx_status st = load_definition(s, def);
    if (st != SHDX_OK) return report_error(st);
    const shdx_options opts = options_from(s);
    if (!s.crossings.empty()) {
        shdx_report* raw = nullptr;
        if ((st = shdx_run_crossings(def.get(), &opts, &raw)) != SHDX_OK) return report_error(st);
        ReportPtr crossings(raw);
        if ((st = shdx_report_write(crossings.get(), SHDX_FORMAT_CSV, s.crossings.c_str())) != SHDX_OK) {
            return report_error(st);
        }
    }
    shdx_report* raw = nullptr;
    if ((st = shdx_run_index(def.get(), &opts, &raw)) != SHDX_OK) return report_error(st);
    ReportPtr report(raw);
    return emit(s, report.get());
}

int run_spectrum(const Settings& s) {
    DefinitionPtr def;
    shdx_status st = load_definition(s, def);
    if (st != SHDX_OK) return report_error(st);
    int m = 0;
    int n = 0;
    double h = 0.0;
    shdx_definition_dims(def.get(), &m, &n, &h);
    std::vector<double> angles = s.omega_angles;
    if (angles.empty()) angles.push_back(0.0);
    if (s.format == "csv" && angles.size() != 1) {
        std::fprintf(stderr, "shdx: input_error: spectrum CSV takes exactly one --omega-angle\n");
        return kExitInput;
    }
    shdx_report* raw = nullptr;
    if ((st = shdx_run_spectrum(m, n, h, angles.data(), angles.size(), &raw)) != SHDX_OK) return report_error(st);
    ReportPtr report(raw);
    return emit(s, report.get());
}

int run_theorem(const Settings& s) {
    shdx_suite_config config;
    shdx_suite_config_init(&config);
    config.seed = s.seed;
    config.trials = s.trials;
    config.degenerate = s.degenerate;
    config.ms = s.suite_m.data();
    config.ms_count = s.suite_m.size();
    config.ns = s.suite_n.data();
    config.ns_count = s.suite_n.size();
    if (!s.omega_angles.empty()) {
        config.omega_angles = s.omega_angles.data();
        config.omega_count = s.omega_angles.size();
    }
    const shdx_options opts = options_from(s);
    shdx_report* raw = nullptr;
    const shdx_status st = shdx_run_theorem_suite(&config, &opts, &raw);
    if (st != SHDX_OK) return report_error(st);
    ReportPtr report(raw);
    return emit(s, report.get());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete Morse index and Maslov-type index verification for linear Hamiltonian systems"};
    app.footer(kFooter);
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(shdx_version()));

    Settings s;
    app.add_option("--input", s.input, "JSON system definition (default: B = 0)");
    app.add_option("--omega-angle", s.omega_angles, "omega = exp(i angle); repeatable")->take_all()->allow_extra_args(false);
    app.add_option("--N", s.n_steps, "number of steps (overrides the definition)")->check(CLI::PositiveNumber);
    app.add_option("--m", s.m, "half dimension (overrides the definition)")->check(CLI::Range(1, 16));
    app.add_option("--tol-zero", s.tol_zero, "relative zero threshold")->check(CLI::Range(1e-16, 0.5));
    app.add_option("--theta-probe", s.theta_probe, "angular probe for splitting numbers")->check(CLI::Range(1e-12, 0.5));
    app.add_option("--seed", s.seed, "RNG seed for the theorem suite");
    app.add_option("--format", s.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--out", s.out, "output file (default: stdout)");
    app.add_flag("--timing", s.timing, "add timing_ms to JSON reports");
    app.add_option("--threads", s.threads, "worker threads for suites (0 = all cores)");

    auto* index = app.add_subcommand("index", "Maslov-type index, nullity, Morse inertia and residuals");
    index->add_option("--crossings", s.crossings, "write crossing records (CSV) to this file");
    auto* morse = app.add_subcommand("morse", "Inertia of the discrete Hessian");
    morse->add_option("--dump-hessian", s.dump_hessian, "binary dump of the Hessian at the first omega");
    app.add_subcommand("spectrum", "Closed-form spectrum of the free Hessian (B = 0)");
    app.add_subcommand("splitting", "Splitting numbers from the Morse and Maslov sides");
    auto* theorem = app.add_subcommand("theorem1", "Randomized suite for the index identities");
    theorem->add_option("--trials", s.trials, "random systems")->check(CLI::NonNegativeNumber);
    theorem->add_option("--degenerate", s.degenerate, "constructed systems with nu >= 1")->check(CLI::NonNegativeNumber);
    theorem->add_option("--grid-m", s.suite_m, "values of m")->check(CLI::Range(1, 16));
    theorem->add_option("--grid-N", s.suite_n, "values of N")->check(CLI::PositiveNumber);
    app.add_subcommand("corollaries", "Signature, splitting and h-independence checks");
    auto* converge = app.add_subcommand("converge", "Node error ladder against an adaptive reference");
    converge->add_option("--levels", s.levels, "ladder length N0, 2 N0, ...")->check(CLI::Range(2, 10));
    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitInput;
    }

    if (*index) return run_index(s);
    if (*morse) {
        const std::string dump = s.dump_hessian;
        return run_with_definition(s, [&](const shdx_definition* d, const shdx_options* o, shdx_report** r) {
            return shdx_run_morse(d, o, dump.empty() ? nullptr : dump.c_str(), r);
        });
    }
    if (app.got_subcommand("spectrum")) return run_spectrum(s);
    if (app.got_subcommand("splitting")) return run_with_definition(s, shdx_run_splitting);
    if (*theorem) return run_theorem(s);
    if (app.got_subcommand("corollaries")) return run_with_definition(s, shdx_run_corollaries);
    if (*converge) {
        const int levels = s.levels;
        return run_with_definition(s, [&](const shdx_definition* d, const shdx_options* o, shdx_report** r) {
            int n0 = 0;
            shdx_definition_dims(d, nullptr, &n0, nullptr);
            return shdx_run_convergence(d, n0, levels, o, r);
        });
    }
    return kExitInput;
}
