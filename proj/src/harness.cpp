#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include "shdx/errors.hpp"
#include "shdx/spectral_free.hpp"
#include "shdx/symplectic.hpp"
#include "shdx/verify.hpp"

namespace shdx {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v + 0.0);
    return buf;
}

std::string fmt(int v) { return std::to_string(v); }

MaslovOptions maslov_options(const HarnessOptions& options) {
    MaslovOptions m = options.maslov;
    m.tol_zero = options.tol_zero;
    return m;
}

json header(const std::string& kind, const SystemDefinition* def) {
    json j;
    j["schema"] = kReportSchema;
    j["kind"] = kind;
    if (def) j["input"] = def->to_json();
    return j;
}

void finish(Report& r, bool passed, Clock::time_point start, const HarnessOptions& options) {
    r.status = passed ? ReportStatus::pass : ReportStatus::check_failed;
    r.body["passed"] = passed;
    if (options.timing) {
        r.body["timing_ms"] = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    }
}

json crossings_json(const ScanResult& scan) {
    json out = json::array();
    for (const auto& c : scan.crossings) {
        out.push_back({{"t", c.t},
                       {"kernel_dim", c.kernel_dim},
                       {"signature", c.signature},
                       {"contribution", c.contribution},
                       {"at_joint", c.at_joint},
                       {"regular", c.regular}});
    }
    return out;
}

json system_json(const CoefficientSequence& s) {
    json blocks = json::array();
    for (const auto& b : s.blocks()) {
        json rows = json::array();
        for (Eigen::Index r = 0; r < b.rows(); ++r) {
            json row = json::array();
            for (Eigen::Index c = 0; c < b.cols(); ++c) row.push_back(b(r, c));
            rows.push_back(row);
        }
        blocks.push_back(rows);
    }
    return {{"m", s.m()},
            {"N", s.n_steps()},
            {"h", s.h()},
            {"coefficients", {{"kind", "samples"}, {"blocks", blocks}}}};
}

json index_json(const IndexResult& r) {
    return {{"omega_angle", r.omega_angle},
            {"i_omega", r.i},
            {"nu_omega", r.nu},
            {"m_minus", r.morse.minus},
            {"m_zero", r.morse.zero},
            {"m_plus", r.morse.plus},
            {"signature", r.signature},
            {"s_plus", r.splitting.plus},
            {"s_minus", r.splitting.minus},
            {"theorem_residuals", {r.residuals[0], r.residuals[1], r.residuals[2]}},
            {"resolved_by_perturbation", r.perturbed},
            {"passed", r.passed()}};
}

template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) fn(i);
    };
    if (threads <= 1) {
        worker();
        return;
    }
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

}  // namespace

std::string Report::json_text() const { return body.dump(2) + "\n"; }

std::string Report::csv_text() const {
    std::ostringstream out;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
        out << "\n";
    };
    line(csv_header);
    for (const auto& row : csv_rows) line(row);
    return out.str();
}

IndexResult evaluate_index(const CoefficientSequence& system, UnitCircleParam omega,
                           const HarnessOptions& options, bool with_splitting) {
    IndexResult r;
    r.n_steps = system.n_steps();
    r.omega_angle = omega.angle();
    const PiecewisePath path = joint_path(fundamental_solution(system));
    const IndexPair ip = maslov_index(path, omega, maslov_options(options));
    r.i = ip.index;
    r.nu = ip.nullity;
    r.perturbed = ip.perturbed;
    r.morse = morse_inertia(system, omega, options.tol_zero);
    r.signature = r.morse.minus - r.morse.plus;
    if (with_splitting) r.splitting = splitting_discrete(system, omega, options.theta_probe, options.tol_zero);
    const int mn = system.m() * system.n_steps();
    r.residuals = {r.morse.minus - (mn + r.i), r.morse.zero - r.nu, r.morse.plus - (mn - r.i - r.nu)};
    return r;
}

Report run_index(const SystemDefinition& def, const HarnessOptions& options) {
    const auto start = Clock::now();
    Report r;
    r.kind = "index";
    r.body = header("index", &def);
    r.csv_header = {"omega_angle", "i_omega", "nu_omega", "m_minus", "m_zero", "m_plus", "signature",
                    "s_plus", "s_minus", "r1", "r2", "r3", "passed"};
    const CoefficientSequence system = def.build();
    const PiecewisePath path = joint_path(fundamental_solution(system));
    bool passed = true;
    json results = json::array();
    for (const auto& w : def.omegas) {
        const IndexResult res = evaluate_index(system, w, options);
        json j = index_json(res);
        j["crossings"] = crossings_json(crossing_scan(path, w, maslov_options(options)));
        results.push_back(j);
        passed = passed && res.passed();
        r.csv_rows.push_back({fmt(res.omega_angle), fmt(res.i), fmt(res.nu), fmt(res.morse.minus),
                              fmt(res.morse.zero), fmt(res.morse.plus), fmt(res.signature),
                              fmt(res.splitting.plus), fmt(res.splitting.minus), fmt(res.residuals[0]),
                              fmt(res.residuals[1]), fmt(res.residuals[2]), res.passed() ? "1" : "0"});
    }
    r.body["results"] = results;
    finish(r, passed, start, options);
    return r;
}

Report run_crossings(const SystemDefinition& def, const HarnessOptions& options) {
    const auto start = Clock::now();
    Report r;
    r.kind = "crossings";
    r.body = header("crossings", &def);
    r.csv_header = {"t*", "kernel_dim", "signature", "contribution"};
    const PiecewisePath path = joint_path(fundamental_solution(def.build()));
    json results = json::array();
    for (const auto& w : def.omegas) {
        const ScanResult scan = crossing_scan(path, w, maslov_options(options));
        results.push_back({{"omega_angle", w.angle()}, {"crossings", crossings_json(scan)}});
        if (results.size() > 1) continue;  // the table covers the first omega
        for (const auto& c : scan.crossings) {
            r.csv_rows.push_back({fmt(c.t), fmt(c.kernel_dim), fmt(c.signature), fmt(c.contribution)});
        }
    }
    r.body["results"] = results;
    finish(r, true, start, options);
    return r;
}

Report run_morse(const SystemDefinition& def, const HarnessOptions& options, const std::string& dump_path) {
    const auto start = Clock::now();
    Report r;
    r.kind = "morse";
    r.body = header("morse", &def);
    r.csv_header = {"omega_angle", "m_minus", "m_zero", "m_plus", "signature"};
    const CoefficientSequence system = def.build();
    json results = json::array();
    for (std::size_t k = 0; k < def.omegas.size(); ++k) {
        const UnitCircleParam w = def.omegas[k];
        const MorseTriple t = morse_indices(system, w, options.tol_zero);
        if (k == 0 && !dump_path.empty()) write_hessian_dump(assemble_hessian(system, w), dump_path);
        results.push_back({{"omega_angle", w.angle()},
                           {"m_minus", t.minus},
                           {"m_zero", t.zero},
                           {"m_plus", t.plus},
                           {"signature", t.minus - t.plus}});
        r.csv_rows.push_back({fmt(w.angle()), fmt(t.minus), fmt(t.zero), fmt(t.plus), fmt(t.minus - t.plus)});
    }
    r.body["results"] = results;
    finish(r, true, start, options);
    return r;
}

Report run_spectrum(int m, int n_steps, double h, const std::vector<UnitCircleParam>& omegas) {
    Report r;
    r.kind = "spectrum";
    r.body = header("spectrum", nullptr);
    r.body["input"] = {{"m", m}, {"N", n_steps}, {"h", h}};
    r.csv_header = {"k", "alpha_k", "lambda_plus", "lambda_minus", "multiplicity"};
    json results = json::array();
    for (const auto& w : omegas) {
        const FreeSpectrum s = free_spectrum(m, n_steps, h, w);
        json modes = json::array();
        for (const auto& mode : s.modes) {
            modes.push_back({{"k", mode.k},
                             {"alpha_k", mode.alpha_k},
                             {"lambda_plus", mode.lambda_plus},
                             {"lambda_minus", mode.lambda_minus},
                             {"multiplicity", mode.multiplicity}});
            if (omegas.size() == 1) {
                r.csv_rows.push_back({fmt(mode.k), fmt(mode.alpha_k), fmt(mode.lambda_plus),
                                      fmt(mode.lambda_minus), fmt(mode.multiplicity)});
            }
        }
        json entries = json::array();
        for (const auto& e : s.entries) entries.push_back({{"value", e.value}, {"multiplicity", e.multiplicity}});
        results.push_back({{"omega_angle", w.angle()}, {"modes", modes}, {"entries", entries}});
    }
    r.body["results"] = results;
    r.body["passed"] = true;
    return r;
}

Report run_splitting(const SystemDefinition& def, const HarnessOptions& options) {
    const auto start = Clock::now();
    Report r;
    r.kind = "splitting";
    r.body = header("splitting", &def);
    r.csv_header = {"omega_angle", "morse_s_plus", "morse_s_minus", "maslov_s_plus", "maslov_s_minus", "agree"};
    const CoefficientSequence system = def.build();
    const PiecewisePath path = joint_path(fundamental_solution(system));
    bool passed = true;
    json results = json::array();
    for (const auto& w : def.omegas) {
        const SplittingPair d = splitting_discrete(system, w, options.theta_probe, options.tol_zero);
        const SplittingPair e = splitting_endpoint(path, w, options.theta_probe, maslov_options(options));
        const bool agree = d.plus == e.plus && d.minus == e.minus;
        passed = passed && agree;
        results.push_back({{"omega_angle", w.angle()},
                           {"morse", {{"s_plus", d.plus}, {"s_minus", d.minus}}},
                           {"maslov", {{"s_plus", e.plus}, {"s_minus", e.minus}}},
                           {"agree", agree}});
        r.csv_rows.push_back({fmt(w.angle()), fmt(d.plus), fmt(d.minus), fmt(e.plus), fmt(e.minus), agree ? "1" : "0"});
    }
    r.body["results"] = results;
    finish(r, passed, start, options);
    return r;
}

Report run_corollaries(const SystemDefinition& def, const HarnessOptions& options) {
    const auto start = Clock::now();
    Report r;
    r.kind = "corollaries";
    r.body = header("corollaries", &def);
    r.csv_header = {"omega_angle", "N",          "i_omega",    "nu_omega",         "signature",       "signature_check",
                    "s_plus",      "s_minus",    "endpoint_s_plus", "endpoint_s_minus", "splitting_check", "h_independent"};
    bool passed = true;
    json results = json::array();
    std::vector<int> ladder{def.n_steps};
    if (def.has_continuous_limit()) ladder = {def.n_steps, 2 * def.n_steps, 4 * def.n_steps};
    std::vector<CoefficientSequence> systems;
    for (int n : ladder) systems.push_back(def.build(n));
    std::vector<PiecewisePath> paths;
    for (const auto& s : systems) paths.push_back(joint_path(fundamental_solution(s)));

    for (const auto& w : def.omegas) {
        json entry{{"omega_angle", w.angle()}};
        json levels = json::array();
        std::vector<IndexResult> rows;
        std::vector<SplittingPair> endpoint;
        for (std::size_t k = 0; k < systems.size(); ++k) {
            const IndexResult res = evaluate_index(systems[k], w, options, true);
            const SplittingPair e = splitting_endpoint(paths[k], w, options.theta_probe, maslov_options(options));
            rows.push_back(res);
            endpoint.push_back(e);
            const bool sig_ok = res.nu != 0 || res.signature == 2 * res.i;
            const bool split_ok = res.splitting.plus == e.plus && res.splitting.minus == e.minus;
            passed = passed && sig_ok && split_ok;
            levels.push_back({{"N", res.n_steps},
                              {"i_omega", res.i},
                              {"nu_omega", res.nu},
                              {"signature", res.signature},
                              {"signature_check", res.nu == 0 ? json(sig_ok) : json("not applicable")},
                              {"morse_splitting", {{"s_plus", res.splitting.plus}, {"s_minus", res.splitting.minus}}},
                              {"endpoint_splitting", {{"s_plus", e.plus}, {"s_minus", e.minus}}},
                              {"splitting_check", split_ok}});
        }
        entry["levels"] = levels;

        std::string h_status = "not applicable";
        if (def.has_continuous_limit()) {
            // Nullity of the continuous monodromy decides whether the check applies.
            const std::vector<Matrix> end = reference_solution(
                def.m, [&](double t) { return def.continuous_coefficient(t); }, {0.0, 1.0});
            const int nu_cont = nullity(end.back(), w, 1e-6);
            entry["continuous_nullity"] = nu_cont;
            if (nu_cont == 0) {
                std::size_t first = 0;
                while (first < rows.size() && rows[first].nu != 0) ++first;
                bool same = first < rows.size();
                for (std::size_t k = first + 1; k < rows.size(); ++k) {
                    same = same && rows[k].i == rows[first].i && rows[k].nu == rows[first].nu &&
                           rows[k].splitting.plus == rows[first].splitting.plus &&
                           rows[k].splitting.minus == rows[first].splitting.minus;
                }
                if (first < rows.size()) entry["h_independent_from_N"] = rows[first].n_steps;
                h_status = same ? "pass" : "fail";
                passed = passed && same;
            }
        }
        entry["h_independence"] = h_status;
        results.push_back(entry);
        for (std::size_t k = 0; k < rows.size(); ++k) {
            const auto& res = rows[k];
            const auto& e = endpoint[k];
            r.csv_rows.push_back({fmt(w.angle()), fmt(res.n_steps), fmt(res.i), fmt(res.nu), fmt(res.signature),
                                  res.nu == 0 ? (res.signature == 2 * res.i ? "1" : "0") : "na",
                                  fmt(res.splitting.plus), fmt(res.splitting.minus), fmt(e.plus), fmt(e.minus),
                                  res.splitting.plus == e.plus && res.splitting.minus == e.minus ? "1" : "0",
                                  h_status});
        }
    }
    r.body["results"] = results;
    finish(r, passed, start, options);
    return r;
}

CoefficientSequence construct_degenerate(std::mt19937_64& rng, int m, int n_steps, UnitCircleParam omega) {
    const double h = 1.0 / n_steps;
    constexpr int kGrid = 400;
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::vector<Matrix> base;
        double peak = 0.0;
        for (int n = 0; n < n_steps; ++n) {
            base.push_back(random_symmetric(rng, 2 * m));
            if (attempt % 2 == 1) base.back() = Matrix::Identity(2 * m, 2 * m) + 0.2 * base.back();
            peak = std::max(peak, base.back().cwiseAbs().maxCoeff());
        }
        for (auto& b : base) b /= peak;
        auto scaled = [&](double c) {
            std::vector<Matrix> blocks;
            for (const auto& b : base) blocks.push_back(c * b);
            return CoefficientSequence(m, h, blocks);
        };
        auto d_at = [&](double c) { return d_omega(fundamental_solution(scaled(c)).monodromy(), omega); };
        const double c_max = 0.45 / h;
        double lo = c_max / kGrid;
        double f_lo = d_at(lo);
        for (int k = 2; k <= kGrid; ++k) {
            const double hi = c_max * k / kGrid;
            const double f_hi = d_at(hi);
            if (f_lo != 0.0 && f_hi != 0.0 && (f_lo < 0.0) != (f_hi < 0.0)) {
                double a = lo;
                double b = hi;
                double fa = f_lo;
                double fb = f_hi;
                for (int it = 0; it < 200 && b - a > 4e-16 * b; ++it) {
                    const double mid = 0.5 * (a + b);
                    const double fm = d_at(mid);
                    if (fm == 0.0) {
                        a = b = mid;
                        break;
                    }
                    if ((fm < 0.0) == (fa < 0.0)) {
                        a = mid;
                        fa = fm;
                    } else {
                        b = mid;
                        fb = fm;
                    }
                }
                CoefficientSequence system = scaled(std::abs(fa) <= std::abs(fb) ? a : b);
                if (nullity(fundamental_solution(system).monodromy(), omega) >= 1) return system;
                break;
            }
            lo = hi;
            f_lo = f_hi;
        }
    }
    throw Error(ErrorCode::unresolved_degeneracy, "could not construct a degenerate system");
}

Report run_theorem_suite(const SuiteConfig& config, const HarnessOptions& options) {
    const auto start = Clock::now();
    Report r;
    r.kind = "theorem1";
    r.body = header("theorem1", nullptr);
    json cfg{{"seed", config.seed}, {"trials", config.trials}, {"m", config.ms}, {"N", config.ns},
             {"degenerate", config.degenerate}, {"norm_bound", config.norm_bound}};
    json angles = json::array();
    for (const auto& w : config.omegas) angles.push_back(w.angle());
    cfg["omega"] = angles;
    r.body["input"] = cfg;
    r.csv_header = {"system", "kind", "m", "N", "omega_angle", "i_omega", "nu_omega", "m_minus", "m_zero",
                    "m_plus", "r1", "r2", "r3", "passed"};

    const bool empty = config.ms.empty() || config.ns.empty() || config.omegas.empty();
    const int random_systems = empty ? 0 : std::max(0, config.trials);
    const int degenerate_systems = empty ? 0 : std::max(0, config.degenerate);

    struct Task {
        int id = 0;
        bool degenerate = false;
        int m = 1;
        int n = 8;
    };
    struct Outcome {
        json system;
        std::vector<IndexResult> results;
        std::string error;
        bool numerical = false;
    };
    std::vector<Task> tasks;
    for (int t = 0; t < random_systems + degenerate_systems; ++t) {
        const bool deg = t >= random_systems;
        const int k = deg ? t - random_systems : t;
        const std::size_t nm = config.ms.size();
        tasks.push_back({t, deg, config.ms[static_cast<std::size_t>(k) % nm],
                         config.ns[(static_cast<std::size_t>(k) / nm) % config.ns.size()]});
    }
    std::vector<Outcome> outcomes(tasks.size());
    parallel_for(tasks.size(), options.threads, [&](std::size_t idx) {
        const Task& task = tasks[idx];
        Outcome& out = outcomes[idx];
        std::seed_seq seq{static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(config.seed >> 32),
                          static_cast<std::uint32_t>(task.id)};
        std::mt19937_64 rng(seq);
        try {
            if (task.degenerate) {
                const int k = task.id - random_systems;
                const UnitCircleParam w = config.omegas[static_cast<std::size_t>(k) % config.omegas.size()];
                const CoefficientSequence system = construct_degenerate(rng, task.m, task.n, w);
                out.system = system_json(system);
                out.results.push_back(evaluate_index(system, w, options, false));
            } else {
                std::uniform_real_distribution<double> scale(0.1, 1.0);
                std::vector<Matrix> blocks;
                for (int n = 0; n < task.n; ++n) {
                    Matrix b = random_symmetric(rng, 2 * task.m);
                    const double norm = b.operatorNorm();
                    blocks.push_back(norm > 0.0 ? Matrix(b * (config.norm_bound * scale(rng) / norm)) : b);
                }
                const CoefficientSequence system(task.m, 1.0 / task.n, blocks);
                out.system = system_json(system);
                for (const auto& w : config.omegas) out.results.push_back(evaluate_index(system, w, options, false));
            }
        } catch (const Error& e) {
            out.error = e.what();
            out.numerical = is_numerical(e.code());
        }
    });

    int evaluations = 0;
    int failures = 0;
    int unresolved = 0;
    int degenerate_min_nullity = -1;
    json failure_records = json::array();
    for (std::size_t idx = 0; idx < tasks.size(); ++idx) {
        const Task& task = tasks[idx];
        const Outcome& out = outcomes[idx];
        if (!out.error.empty()) {
            (out.numerical ? unresolved : failures) += 1;
            failure_records.push_back({{"system_id", task.id}, {"error", out.error}, {"system", out.system}});
            continue;
        }
        for (const auto& res : out.results) {
            ++evaluations;
            bool ok = res.passed();
            if (task.degenerate) {
                ok = ok && res.nu >= 1;
                degenerate_min_nullity = degenerate_min_nullity < 0 ? res.nu : std::min(degenerate_min_nullity, res.nu);
            }
            if (!ok) {
                ++failures;
                json rec = index_json(res);
                rec["system_id"] = task.id;
                rec["system"] = out.system;
                failure_records.push_back(rec);
            }
            r.csv_rows.push_back({fmt(task.id), task.degenerate ? "degenerate" : "random", fmt(task.m), fmt(task.n),
                                  fmt(res.omega_angle), fmt(res.i), fmt(res.nu), fmt(res.morse.minus),
                                  fmt(res.morse.zero), fmt(res.morse.plus), fmt(res.residuals[0]),
                                  fmt(res.residuals[1]), fmt(res.residuals[2]), ok ? "1" : "0"});
        }
    }
    r.body["summary"] = {{"random_systems", random_systems},
                         {"degenerate_systems", degenerate_systems},
                         {"evaluations", evaluations},
                         {"failures", failures},
                         {"unresolved", unresolved},
                         {"degenerate_min_nullity", degenerate_min_nullity}};
    r.body["failure_records"] = failure_records;
    finish(r, failures == 0 && unresolved == 0, start, options);
    if (unresolved > 0) r.status = ReportStatus::numerical;
    return r;
}

std::vector<ConvergenceRow> convergence_ladder(int m, const std::function<Matrix(double)>& b,
                                               const std::vector<int>& ladder) {
    std::vector<ConvergenceRow> rows;
    StepLimits limits;
    for (int n : ladder) {
        std::vector<double> times;
        for (int k = 0; k <= n; ++k) times.push_back(static_cast<double>(k) / n);
        const std::vector<Matrix> ref = reference_solution(m, b, times);
        const DiscreteFundamentalSolution sol = fundamental_solution(CoefficientSequence::sampled(m, n, b, limits));
        ConvergenceRow row;
        row.n_steps = n;
        row.h = 1.0 / n;
        for (int k = 0; k <= n; ++k) {
            row.eps = std::max(row.eps, (ref[static_cast<std::size_t>(k)] - sol.gamma(k)).cwiseAbs().maxCoeff());
        }
        if (!rows.empty() && rows.back().eps > 0.0 && row.eps > 0.0) {
            row.order = std::log2(rows.back().eps / row.eps);
        }
        rows.push_back(row);
    }
    return rows;
}

Report run_convergence(const SystemDefinition& def, int n0, int levels, const HarnessOptions& options) {
    const auto start = Clock::now();
    if (!def.has_continuous_limit()) {
        throw Error(ErrorCode::input, "convergence needs a standard, constant or continuous coefficient");
    }
    if (n0 < 1 || levels < 2) throw Error(ErrorCode::input, "convergence needs N0 >= 1 and at least two levels");
    Report r;
    r.kind = "converge";
    r.body = header("converge", &def);
    r.csv_header = {"N", "h", "eps", "order_estimate"};
    std::vector<int> ladder;
    for (int k = 0; k < levels; ++k) ladder.push_back(n0 << k);
    auto b = [&](double t) { return def.continuous_coefficient(t); };
    const std::vector<ConvergenceRow> rows = convergence_ladder(def.m, b, ladder);

    constexpr double kFloor = 1e-13;  // below this the error is at integrator resolution
    bool decreasing = true;
    json jrows = json::array();
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto& row = rows[k];
        if (k > 0 && !(row.eps < rows[k - 1].eps) && rows[k - 1].eps > kFloor) decreasing = false;
        jrows.push_back({{"N", row.n_steps},
                         {"h", row.h},
                         {"eps", row.eps},
                         {"order_estimate", row.order ? json(*row.order) : json(nullptr)}});
        r.csv_rows.push_back({fmt(row.n_steps), fmt(row.h), fmt(row.eps), row.order ? fmt(*row.order) : ""});
    }

    // Scaled coefficients s B for s = 1/8 .. 1 stay within twice the s = 1 error.
    double worst = 0.0;
    json samples = json::array();
    for (int q = 1; q <= 8; ++q) {
        const double s = q / 8.0;
        const auto scaled = convergence_ladder(def.m, [&](double t) { return Matrix(s * b(t)); }, ladder);
        json eps = json::array();
        for (std::size_t k = 0; k < scaled.size(); ++k) {
            eps.push_back(scaled[k].eps);
            const double ref = std::max(rows[k].eps, kFloor);
            worst = std::max(worst, scaled[k].eps / ref);
        }
        samples.push_back({{"s", s}, {"eps", eps}});
    }
    const bool uniform = worst <= 2.0;
    r.body["rows"] = jrows;
    r.body["monotone"] = decreasing;
    r.body["s_uniformity"] = {{"samples", samples}, {"max_ratio", worst}, {"passed", uniform}};
    finish(r, decreasing && uniform, start, options);
    return r;
}

}  // namespace shdx
