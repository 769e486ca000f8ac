// Acceptance suite: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "shdx/discrete_system.hpp"
#include "shdx/errors.hpp"
#include "shdx/maslov_index.hpp"
#include "shdx/morse_form.hpp"
#include "shdx/spectral_free.hpp"
#include "shdx/symplectic.hpp"
#include "shdx/verify.hpp"

using namespace shdx;
using nlohmann::json;

namespace {

constexpr std::uint64_t kSeed = 7;
constexpr int kRandomSystems = 54;
constexpr int kDegenerateSystems = 12;
constexpr double kSuiteBudgetSeconds = 300.0;
constexpr double kStandardBudgetSeconds = 60.0;
constexpr double kSpectrumTol = 1e-9;
constexpr double kRoundtripTol = 1e-12;
constexpr double kSymplecticTol = 1e-12;
constexpr double kAsymmetricDefect = 1e-8;
constexpr int kBlocks = 200;
constexpr int kEndpointCases = 20;
constexpr double kDefaultThetaProbe = 1e-3;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

int g_failures = 0;

void report(int id, const Outcome& o) {
    std::printf("%s %d: %s\n", o.pass ? "PASS" : "FAIL", id, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++g_failures;
}

template <class F>
Outcome guarded(F&& f) {
    try {
        return f();
    } catch (const std::exception& e) {
        return {false, std::string("exception: ") + e.what()};
    }
}

std::string fmt(const char* pattern, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, pattern, args...);
    return buf;
}

const std::vector<UnitCircleParam> kOmegas{UnitCircleParam::one(), UnitCircleParam::minus_one(),
                                           UnitCircleParam(kPi / 3.0), UnitCircleParam(2.0)};

struct SuiteData {
    Report report;
    double seconds = 0.0;
};

SuiteData run_suite() {
    SuiteConfig c;
    c.seed = kSeed;
    c.trials = kRandomSystems;
    c.degenerate = kDegenerateSystems;
    c.ms = {1, 2, 3};
    c.ns = {8, 16, 32};
    c.omegas = kOmegas;
    const auto t0 = Clock::now();
    SuiteData d{run_theorem_suite(c), 0.0};
    d.seconds = seconds_since(t0);
    return d;
}

int column(const Report& r, const std::string& name) {
    const auto it = std::find(r.csv_header.begin(), r.csv_header.end(), name);
    return static_cast<int>(it - r.csv_header.begin());
}

int cell(const Report& r, const std::vector<std::string>& row, const std::string& name) {
    return std::stoi(row[static_cast<std::size_t>(column(r, name))]);
}

Outcome criterion1(const SuiteData& d) {
    const json& s = d.report.body["summary"];
    const int random_systems = s["random_systems"];
    const int degenerate = s["degenerate_systems"];
    const int failures = s["failures"];
    const int unresolved = s["unresolved"];
    const int min_nu = s["degenerate_min_nullity"];
    const bool pass = random_systems >= 50 && degenerate >= 10 && failures == 0 && unresolved == 0 &&
                      min_nu >= 1 && d.seconds < kSuiteBudgetSeconds;
    return {pass, fmt("%d random + %d degenerate systems, %d evaluations, %d failures, %d unresolved, "
                      "min degenerate nullity %d, %.1f s",
                      random_systems, degenerate, s["evaluations"].get<int>(), failures, unresolved, min_nu,
                      d.seconds)};
}

Outcome criterion2() {
    const auto t0 = Clock::now();
    struct Case {
        int m;
        int j;
    };
    const std::vector<Case> cases{{1, 0}, {1, 1}, {1, -1}, {1, 2}, {1, 3}, {2, 1}, {2, 2}, {2, 3}};
    constexpr int kN = 64;
    std::string detail;
    bool pass = true;
    for (const auto& c : cases) {
        SystemDefinition def;
        def.m = c.m;
        def.n_steps = kN;
        def.coefficients.kind = CoefficientSpec::Kind::standard;
        def.coefficients.j = c.j;
        const CoefficientSequence system = def.build();
        const IndexResult r = evaluate_index(system, UnitCircleParam::one(), HarnessOptions{}, false);
        const bool ok = r.morse.plus == c.m * kN - c.j && r.passed();
        pass = pass && ok;
        detail += fmt("(m=%d,j=%d: m+=%d) ", c.m, c.j, r.morse.plus);
    }
    const double secs = seconds_since(t0);
    pass = pass && secs < kStandardBudgetSeconds;
    return {pass, detail + fmt("%.1f s", secs)};
}

Outcome criterion3() {
    double worst = 0.0;
    int cases = 0;
    for (int m : {1, 2, 3}) {
        for (int n : {4, 8, 16}) {
            for (double alpha : {0.0, kPi, kPi / 3.0, 2.0, 5.0}) {
                const double h = 1.0 / n;
                const UnitCircleParam w(alpha);
                std::vector<double> expected = free_spectrum(m, n, h, w).values();
                std::sort(expected.begin(), expected.end());
                const Vector got = assemble_hessian(CoefficientSequence::constant(m, n, h, Matrix::Zero(2 * m, 2 * m)), w)
                                       .eigenvalues();
                for (std::size_t i = 0; i < expected.size(); ++i) {
                    worst = std::max(worst, std::abs(expected[i] - got(static_cast<Eigen::Index>(i))));
                }
                for (const auto& mode : free_spectrum(m, n, h, w).modes) {
                    if (mode.multiplicity != m) worst = std::max(worst, 1.0);
                }
                ++cases;
            }
        }
    }
    return {worst <= kSpectrumTol, fmt("%d (m, N, alpha) cases, max sorted deviation %.3g", cases, worst)};
}

Outcome criterion4(const SuiteData& d) {
    const Report& r = d.report;
    int rows = 0;
    int bad = 0;
    int degenerate_rows = 0;
    for (const auto& row : r.csv_rows) {
        ++rows;
        if (cell(r, row, "m_zero") != cell(r, row, "nu_omega")) ++bad;
        if (row[static_cast<std::size_t>(column(r, "kind"))] == "degenerate") ++degenerate_rows;
    }
    return {rows > 0 && bad == 0 && degenerate_rows >= 10,
            fmt("%d evaluations (%d degenerate), %d with m0 != nu", rows, degenerate_rows, bad)};
}

Outcome criterion5(const SuiteData& d) {
    const Report& r = d.report;
    int checked = 0;
    int bad = 0;
    for (const auto& row : r.csv_rows) {
        if (cell(r, row, "nu_omega") != 0) continue;
        ++checked;
        const int sign = cell(r, row, "m_minus") - cell(r, row, "m_plus");
        if (sign != 2 * cell(r, row, "i_omega")) ++bad;
    }
    // h-independence on continuous generators, N in {16, 32, 64}.
    const std::vector<std::string> generators{
        R"({"m": 1, "N": 16, "omega": [0, 2.0], "coefficients": {"standard": 2}})",
        R"({"m": 2, "N": 16, "omega": [0, 2.0], "coefficients": {"standard": 1}})",
        R"({"m": 1, "N": 16, "omega": [0, 1.0471975511965976], "coefficients": {"continuous": {"kind": "trigonometric",
            "base": [[2, 0.3], [0.3, 1]], "terms": [{"amplitude": [[1, 0], [0, -1]], "frequency": 1, "phase": 0.4}]}}})"};
    int ladders = 0;
    int ladder_fail = 0;
    for (const auto& text : generators) {
        const Report c = run_corollaries(SystemDefinition::parse(text));
        for (const auto& res : c.body["results"]) {
            if (res["h_independence"] == "not applicable") continue;
            ++ladders;
            if (res["h_independence"] != "pass") ++ladder_fail;
        }
        if (!c.passed()) ++ladder_fail;
    }
    return {checked > 0 && bad == 0 && ladders > 0 && ladder_fail == 0,
            fmt("Sign = 2i on %d nu=0 evaluations (%d mismatches); %d h-ladders over N=16,32,64, %d failures",
                checked, bad, ladders, ladder_fail)};
}

PiecewisePath path_of(const CoefficientSequence& s) { return joint_path(fundamental_solution(s)); }

// Spectrum off omega stays outside the probe window.
bool well_separated(const CoefficientSequence& s, UnitCircleParam omega) {
    Eigen::EigenSolver<Matrix> es(fundamental_solution(s).monodromy());
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double d = std::abs(es.eigenvalues()(i) - omega.value());
        if (d > 1e-7 && d < 10.0 * kDefaultThetaProbe) return false;
    }
    return true;
}

Outcome criterion6() {
    struct Case {
        CoefficientSequence system;
        UnitCircleParam omega;
        std::string label;
    };
    std::vector<Case> cases;
    for (int m : {1, 2}) {
        cases.push_back({CoefficientSequence::constant(m, 8, 0.125, Matrix::Zero(2 * m, 2 * m)), UnitCircleParam::one(),
                         fmt("B=0 m=%d", m)});
    }
    std::mt19937_64 rng(kSeed + 1);
    // Degenerate endpoints at each omega.
    for (int k = 0, attempt = 0; k < 8 && attempt < 200; ++attempt) {
        const UnitCircleParam w = kOmegas[static_cast<std::size_t>(k) % kOmegas.size()];
        CoefficientSequence s = construct_degenerate(rng, 1 + k % 2, 8, w);
        if (!well_separated(s, w)) continue;
        cases.push_back({std::move(s), w, "degenerate"});
        ++k;
    }
    // Elliptic eigenvalues of random monodromies.
    for (int attempt = 0; cases.size() < static_cast<std::size_t>(kEndpointCases) && attempt < 400; ++attempt) {
        std::vector<Matrix> blocks;
        const int m = 1 + attempt % 2;
        for (int n = 0; n < 8; ++n) {
            Matrix b = random_symmetric(rng, 2 * m) + 2.0 * Matrix::Identity(2 * m, 2 * m);
            blocks.push_back(b * (3.0 / b.operatorNorm()));
        }
        const CoefficientSequence s(m, 0.125, blocks);
        Eigen::EigenSolver<Matrix> es(fundamental_solution(s).monodromy());
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
            const Complex z = es.eigenvalues()(i);
            if (std::abs(std::abs(z) - 1.0) < 1e-9 && z.imag() > 1e-3 && well_separated(s, UnitCircleParam(std::arg(z)))) {
                cases.push_back({s, UnitCircleParam(std::arg(z)), "elliptic"});
                break;
            }
        }
    }
    int agree = 0;
    int nontrivial = 0;
    bool zero_ok = true;
    for (const auto& c : cases) {
        const SplittingPair d = splitting_discrete(c.system, c.omega);
        const SplittingPair e = splitting_endpoint(path_of(c.system), c.omega);
        if (d.plus == e.plus && d.minus == e.minus) ++agree;
        if (d.plus != 0 || d.minus != 0) ++nontrivial;
        if (c.label.rfind("B=0", 0) == 0) {
            const int m = c.system.m();
            zero_ok = zero_ok && d.plus == m && d.minus == m && e.plus == m && e.minus == m;
        }
    }
    // Two distinct paths ending at -I.
    auto standard = [](int j) {
        const StandardPath p(1, j);
        return smooth_path(1, [p](double t) { return p.value(t); }, [p](double t) { return p.derivative(t); });
    };
    const PiecewisePath path1 = standard(1);
    const PiecewisePath path3 = standard(3);
    const SplittingPair p1 = splitting_endpoint(path1, UnitCircleParam::minus_one());
    const SplittingPair p3 = splitting_endpoint(path3, UnitCircleParam::minus_one());
    const bool shared = (path1.end() - path3.end()).cwiseAbs().maxCoeff() < 1e-12 &&
                        (path1.end() + Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12;
    const bool same_endpoint = shared && p1.plus == p3.plus && p1.minus == p3.minus;
    const int total = static_cast<int>(cases.size());
    return {total >= kEndpointCases && agree == total && zero_ok && same_endpoint,
            fmt("%d/%d endpoint cases agree (%d nontrivial); B=0 gives (m,m): %s; "
                "two paths to -I give (%d,%d) and (%d,%d)",
                agree, total, nontrivial, zero_ok ? "yes" : "no", p1.plus, p1.minus, p3.plus, p3.minus)};
}

Outcome criterion7() {
    std::vector<std::pair<CoefficientSequence, UnitCircleParam>> cases;
    for (int m : {1, 2}) {
        cases.emplace_back(CoefficientSequence::constant(m, 8, 0.125, Matrix::Zero(2 * m, 2 * m)), UnitCircleParam::one());
    }
    std::mt19937_64 rng(kSeed + 2);
    for (int k = 0; k < 10; ++k) {
        const UnitCircleParam w = kOmegas[static_cast<std::size_t>(k) % kOmegas.size()];
        cases.emplace_back(construct_degenerate(rng, 1 + k % 3, 8 << (k % 2), w), w);
    }
    int good = 0;
    int checks = 0;
    for (const auto& [system, w] : cases) {
        const PiecewisePath path = path_of(system);
        const int nu = nullity(path.end(), w);
        for (double scale : {1.0, 0.125}) {
            PerturbationSpec plus;
            plus.s = scale;
            PerturbationSpec minus;
            minus.s = -scale;
            const IndexPair a = maslov_index(perturb_path(path, plus), w);
            const IndexPair b = maslov_index(perturb_path(path, minus), w);
            ++checks;
            if (nu >= 1 && a.nullity == 0 && b.nullity == 0 && a.index - b.index == nu) ++good;
        }
    }
    return {good == checks, fmt("%d/%d (system, scale) pairs satisfy i(s) - i(-s) = nu over %zu degenerate examples",
                                good, checks, cases.size())};
}

Outcome criterion8() {
    std::mt19937_64 rng(kSeed + 3);
    int symmetric_ok = 0;
    int asymmetric_ok = 0;
    double worst = 0.0;
    for (int k = 0; k < kBlocks; ++k) {
        const int m = 1 + k % 3;
        const double h = 0.125;
        const Matrix b = random_symmetric(rng, 2 * m, 2.0);
        if (check_symplectic(transfer_matrix(b, h), kSymplecticTol)) ++symmetric_ok;
        worst = std::max(worst, (extract_coefficients(transfer_matrix(b, h), h) - b).cwiseAbs().maxCoeff());
        Matrix a = random_symmetric(rng, 2 * m, 2.0);
        std::uniform_int_distribution<int> pick(0, 2 * m - 1);
        int r = pick(rng);
        int c = pick(rng);
        while (c == r) c = pick(rng);
        a(r, c) += 0.25;
        if (symplectic_defect(transfer_matrix(a, h)) > kAsymmetricDefect) ++asymmetric_ok;
    }
    return {symmetric_ok == kBlocks && asymmetric_ok == kBlocks && worst <= kRoundtripTol,
            fmt("%d/%d symmetric blocks symplectic, %d/%d asymmetric blocks not, roundtrip max error %.3g",
                symmetric_ok, kBlocks, asymmetric_ok, kBlocks, worst)};
}

Outcome criterion9() {
    const std::vector<std::string> generators{
        R"({"m": 1, "N": 8, "coefficients": {"standard": 0}})",
        R"({"m": 1, "N": 8, "coefficients": {"continuous": {"kind": "trigonometric",
            "terms": [{"amplitude": [[2, 0], [0, 1]], "frequency": 1, "phase": 0}]}}})",
        R"({"m": 2, "N": 8, "coefficients": {"continuous": {"kind": "trigonometric",
            "base": [[1, 0.2, 0, 0], [0.2, 0.5, 0, 0.1], [0, 0, 1, 0], [0, 0.1, 0, 2]],
            "terms": [{"amplitude": [[0.5, 0, 0.3, 0], [0, 0, 0, 0], [0.3, 0, 0, 0], [0, 0, 0, 0.4]],
                       "frequency": 2, "phase": 0.7}]}}})"};
    bool pass = true;
    std::string detail;
    for (std::size_t g = 0; g < generators.size(); ++g) {
        const Report r = run_convergence(SystemDefinition::parse(generators[g]), 8, 5);
        pass = pass && r.passed() && r.body["monotone"].get<bool>() && r.body["s_uniformity"]["passed"].get<bool>();
        const auto& rows = r.body["rows"];
        detail += fmt("gen%zu eps(8)=%.3g eps(128)=%.3g order~%.2f s-ratio %.2f; ", g + 1,
                      rows.front()["eps"].get<double>(), rows.back()["eps"].get<double>(),
                      rows.back()["order_estimate"].get<double>(), r.body["s_uniformity"]["max_ratio"].get<double>());
    }
    return {pass, detail};
}

}  // namespace

int main() {
    SuiteData suite;
    bool suite_ok = true;
    std::string suite_error;
    try {
        suite = run_suite();
    } catch (const std::exception& e) {
        suite_ok = false;
        suite_error = e.what();
    }
    auto with_suite = [&](auto f) {
        return suite_ok ? guarded([&] { return f(suite); }) : Outcome{false, "suite failed: " + suite_error};
    };
    report(1, with_suite(criterion1));
    report(2, guarded(criterion2));
    report(3, guarded(criterion3));
    report(4, with_suite(criterion4));
    report(5, with_suite(criterion5));
    report(6, guarded(criterion6));
    report(7, guarded(criterion7));
    report(8, guarded(criterion8));
    report(9, guarded(criterion9));
    return g_failures == 0 ? 0 : 1;
}
