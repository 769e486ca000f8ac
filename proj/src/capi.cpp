#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <sstream>
#include <string>

#include "shdx/discrete_system.hpp"
#include "shdx/errors.hpp"
#include "shdx/maslov_index.hpp"
#include "shdx/morse_form.hpp"
#include "shdx/shdx.h"
#include "shdx/symplectic.hpp"
#include "shdx/verify.hpp"

struct shdx_system {
    shdx::CoefficientSequence sequence;
};

struct shdx_definition {
    shdx::SystemDefinition def;
};

struct shdx_report {
    shdx::Report report;
};

namespace {

thread_local std::string g_last_error;

shdx_status fail(shdx_status status, const std::string& message) {
    g_last_error = message;
    return status;
}

shdx_status map_code(shdx::ErrorCode code) {
    switch (code) {
        case shdx::ErrorCode::io:
            return SHDX_IO_ERROR;
        case shdx::ErrorCode::dimension:
        case shdx::ErrorCode::step_too_large:
        case shdx::ErrorCode::extraction:
        case shdx::ErrorCode::non_symplectic_input:
        case shdx::ErrorCode::input:
            return SHDX_INPUT_ERROR;
        default:
            return shdx::is_numerical(code) ? SHDX_NUMERICAL_ERROR : SHDX_INTERNAL_ERROR;
    }
}

template <class F>
shdx_status guarded(F&& body) {
    try {
        g_last_error.clear();
        body();
        return SHDX_OK;
    } catch (const shdx::Error& e) {
        return fail(map_code(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(SHDX_INTERNAL_ERROR, "out of memory");
    } catch (const std::exception& e) {
        return fail(SHDX_INTERNAL_ERROR, e.what());
    } catch (...) {
        return fail(SHDX_INTERNAL_ERROR, "unknown error");
    }
}

bool valid_m(int m) { return m >= 1 && m <= 64; }

shdx::Matrix read_matrix(int m, const double* data) {
    return Eigen::Map<const shdx::Matrix>(data, 2 * m, 2 * m);
}

shdx::HarnessOptions harness_options(const shdx_options* options) {
    shdx::HarnessOptions h;
    if (!options) return h;
    h.tol_zero = options->tol_zero;
    h.theta_probe = options->theta_probe;
    h.timing = options->timing != 0;
    h.threads = options->threads;
    return h;
}

bool valid_options(const shdx_options* options) {
    return !options || (options->tol_zero > 0.0 && options->tol_zero < 1.0 && options->theta_probe > 0.0 &&
                        options->theta_probe < 1.0);
}

template <class F>
shdx_status make_report(shdx_report** out, F&& produce) {
    if (!out) return fail(SHDX_INVALID_ARGUMENT, "null output pointer");
    *out = nullptr;
    return guarded([&] { *out = new shdx_report{produce()}; });
}

#define SHDX_REQUIRE(cond, msg) \
    if (!(cond)) return fail(SHDX_INVALID_ARGUMENT, msg)

}  // namespace

extern "C" {

const char* shdx_version(void) { return "1.0.0"; }

const char* shdx_last_error(void) { return g_last_error.c_str(); }

const char* shdx_status_name(shdx_status status) {
    switch (status) {
        case SHDX_OK:
            return "ok";
        case SHDX_CHECK_FAILED:
            return "check_failed";
        case SHDX_INPUT_ERROR:
            return "input_error";
        case SHDX_NUMERICAL_ERROR:
            return "numerical_error";
        case SHDX_IO_ERROR:
            return "io_error";
        case SHDX_INVALID_ARGUMENT:
            return "invalid_argument";
        case SHDX_INTERNAL_ERROR:
            return "internal_error";
    }
    return "unknown";
}

void shdx_options_init(shdx_options* options) {
    if (!options) return;
    const shdx::HarnessOptions d;
    options->tol_zero = d.tol_zero;
    options->theta_probe = d.theta_probe;
    options->timing = 0;
    options->threads = 0;
}

shdx_status shdx_check_symplectic(int m, const double* matrix, double tol, int* is_symplectic) {
    SHDX_REQUIRE(valid_m(m) && matrix && is_symplectic && tol > 0.0, "invalid arguments");
    return guarded([&] { *is_symplectic = shdx::check_symplectic(read_matrix(m, matrix), tol) ? 1 : 0; });
}

shdx_status shdx_d_omega(int m, const double* matrix, double omega_angle, double* value) {
    SHDX_REQUIRE(valid_m(m) && matrix && value, "invalid arguments");
    return guarded([&] { *value = shdx::d_omega(read_matrix(m, matrix), shdx::UnitCircleParam(omega_angle)); });
}

shdx_status shdx_nullity(int m, const double* matrix, double omega_angle, double tol_zero, int* nullity) {
    SHDX_REQUIRE(valid_m(m) && matrix && nullity && tol_zero > 0.0, "invalid arguments");
    return guarded(
        [&] { *nullity = shdx::nullity(read_matrix(m, matrix), shdx::UnitCircleParam(omega_angle), tol_zero); });
}

shdx_status shdx_system_create(int m, int n_steps, double h, const double* blocks, shdx_system** out) {
    SHDX_REQUIRE(out, "null output pointer");
    *out = nullptr;
    SHDX_REQUIRE(valid_m(m) && n_steps >= 1 && h > 0.0 && blocks, "invalid arguments");
    return guarded([&] {
        const std::size_t size = static_cast<std::size_t>(4 * m * m);
        std::vector<shdx::Matrix> list;
        for (int n = 0; n < n_steps; ++n) list.push_back(read_matrix(m, blocks + size * static_cast<std::size_t>(n)));
        *out = new shdx_system{shdx::CoefficientSequence(m, h, std::move(list))};
    });
}

shdx_status shdx_system_standard(int m, int j, int n_steps, shdx_system** out) {
    SHDX_REQUIRE(out, "null output pointer");
    *out = nullptr;
    SHDX_REQUIRE(valid_m(m) && n_steps >= 1, "invalid arguments");
    return guarded([&] {
        shdx::SystemDefinition def;
        def.m = m;
        def.n_steps = n_steps;
        def.coefficients.kind = shdx::CoefficientSpec::Kind::standard;
        def.coefficients.j = j;
        *out = new shdx_system{def.build()};
    });
}

void shdx_system_free(shdx_system* system) { delete system; }

shdx_status shdx_system_dims(const shdx_system* system, int* m, int* n_steps, double* h) {
    SHDX_REQUIRE(system, "null system");
    if (m) *m = system->sequence.m();
    if (n_steps) *n_steps = system->sequence.n_steps();
    if (h) *h = system->sequence.h();
    return SHDX_OK;
}

shdx_status shdx_system_monodromy(const shdx_system* system, double* out) {
    SHDX_REQUIRE(system && out, "invalid arguments");
    return guarded([&] {
        const shdx::Matrix mono = shdx::fundamental_solution(system->sequence).monodromy();
        Eigen::Map<shdx::Matrix>(out, mono.rows(), mono.cols()) = mono;
    });
}

shdx_status shdx_morse_indices(const shdx_system* system, double omega_angle, double tol_zero, int out[3]) {
    SHDX_REQUIRE(system && out && tol_zero > 0.0, "invalid arguments");
    return guarded([&] {
        const shdx::MorseTriple t =
            shdx::morse_indices(system->sequence, shdx::UnitCircleParam(omega_angle), tol_zero);
        out[0] = t.minus;
        out[1] = t.zero;
        out[2] = t.plus;
    });
}

shdx_status shdx_maslov_index(const shdx_system* system, double omega_angle, int* index, int* nullity) {
    SHDX_REQUIRE(system && index && nullity, "invalid arguments");
    return guarded([&] {
        const shdx::PiecewisePath path = shdx::joint_path(shdx::fundamental_solution(system->sequence));
        const shdx::IndexPair p = shdx::maslov_index(path, shdx::UnitCircleParam(omega_angle));
        *index = p.index;
        *nullity = p.nullity;
    });
}

shdx_status shdx_splitting_morse(const shdx_system* system, double omega_angle, double theta, int* plus,
                                 int* minus) {
    SHDX_REQUIRE(system && plus && minus && theta > 0.0, "invalid arguments");
    return guarded([&] {
        const shdx::SplittingPair s =
            shdx::splitting_discrete(system->sequence, shdx::UnitCircleParam(omega_angle), theta);
        *plus = s.plus;
        *minus = s.minus;
    });
}

shdx_status shdx_splitting_maslov(const shdx_system* system, double omega_angle, double theta, int* plus,
                                  int* minus) {
    SHDX_REQUIRE(system && plus && minus && theta > 0.0, "invalid arguments");
    return guarded([&] {
        const shdx::PiecewisePath path = shdx::joint_path(shdx::fundamental_solution(system->sequence));
        const shdx::SplittingPair s = shdx::splitting_endpoint(path, shdx::UnitCircleParam(omega_angle), theta);
        *plus = s.plus;
        *minus = s.minus;
    });
}

shdx_status shdx_dump_hessian(const shdx_system* system, double omega_angle, const char* path) {
    SHDX_REQUIRE(system && path, "invalid arguments");
    return guarded([&] {
        shdx::write_hessian_dump(shdx::assemble_hessian(system->sequence, shdx::UnitCircleParam(omega_angle)), path);
    });
}

shdx_status shdx_definition_parse(const char* json, shdx_definition** out) {
    SHDX_REQUIRE(out, "null output pointer");
    *out = nullptr;
    SHDX_REQUIRE(json, "null document");
    return guarded([&] { *out = new shdx_definition{shdx::SystemDefinition::parse(json)}; });
}

shdx_status shdx_definition_load(const char* path, shdx_definition** out) {
    SHDX_REQUIRE(out, "null output pointer");
    *out = nullptr;
    SHDX_REQUIRE(path, "null path");
    std::ifstream in(path, std::ios::binary);
    if (!in) return fail(SHDX_IO_ERROR, std::string("cannot open ") + path);
    std::ostringstream text;
    text << in.rdbuf();
    const shdx_status s = shdx_definition_parse(text.str().c_str(), out);
    if (s != SHDX_OK) g_last_error = std::string(path) + ": " + g_last_error;
    return s;
}

shdx_status shdx_definition_default(int m, int n_steps, shdx_definition** out) {
    SHDX_REQUIRE(out, "null output pointer");
    *out = nullptr;
    SHDX_REQUIRE(valid_m(m) && n_steps >= 1, "invalid arguments");
    return guarded([&] {
        shdx::SystemDefinition def;
        def.m = m;
        def.n_steps = n_steps;
        def.coefficients.kind = shdx::CoefficientSpec::Kind::constant;
        def.coefficients.constant = shdx::Matrix::Zero(2 * m, 2 * m);
        *out = new shdx_definition{def};
    });
}

void shdx_definition_free(shdx_definition* def) { delete def; }

shdx_status shdx_definition_set_m(shdx_definition* def, int m) {
    SHDX_REQUIRE(def && valid_m(m), "invalid arguments");
    auto& d = def->def;
    if (m == d.m) return SHDX_OK;
    auto& c = d.coefficients;
    const bool zero = c.kind == shdx::CoefficientSpec::Kind::constant && c.constant.isZero(0.0);
    if (c.kind == shdx::CoefficientSpec::Kind::standard) {
        d.m = m;
    } else if (zero) {
        d.m = m;
        c.constant = shdx::Matrix::Zero(2 * m, 2 * m);
    } else {
        return fail(SHDX_INPUT_ERROR, "m cannot be changed for explicit coefficient matrices");
    }
    return SHDX_OK;
}

shdx_status shdx_definition_set_n(shdx_definition* def, int n_steps) {
    SHDX_REQUIRE(def && n_steps >= 1, "invalid arguments");
    auto& d = def->def;
    if (n_steps == d.n_steps) return SHDX_OK;
    if (d.coefficients.kind == shdx::CoefficientSpec::Kind::samples) {
        return fail(SHDX_INPUT_ERROR, "N cannot be changed for sampled coefficients");
    }
    d.n_steps = n_steps;
    d.h.reset();
    return SHDX_OK;
}

shdx_status shdx_definition_set_omegas(shdx_definition* def, const double* angles, size_t count) {
    SHDX_REQUIRE(def && angles && count > 0, "invalid arguments");
    std::vector<shdx::UnitCircleParam> omegas;
    for (size_t k = 0; k < count; ++k) omegas.emplace_back(angles[k]);
    def->def.omegas = std::move(omegas);
    return SHDX_OK;
}

shdx_status shdx_definition_dims(const shdx_definition* def, int* m, int* n_steps, double* h) {
    SHDX_REQUIRE(def, "null definition");
    if (m) *m = def->def.m;
    if (n_steps) *n_steps = def->def.n_steps;
    if (h) *h = def->def.step();
    return SHDX_OK;
}

shdx_status shdx_definition_build(const shdx_definition* def, shdx_system** out) {
    SHDX_REQUIRE(out, "null output pointer");
    *out = nullptr;
    SHDX_REQUIRE(def, "null definition");
    return guarded([&] { *out = new shdx_system{def->def.build()}; });
}

void shdx_suite_config_init(shdx_suite_config* config) {
    if (!config) return;
    const shdx::SuiteConfig d;
    config->seed = d.seed;
    config->trials = d.trials;
    config->ms = nullptr;
    config->ms_count = 0;
    config->ns = nullptr;
    config->ns_count = 0;
    config->omega_angles = nullptr;
    config->omega_count = 0;
    config->degenerate = d.degenerate;
    config->norm_bound = d.norm_bound;
}

shdx_status shdx_run_index(const shdx_definition* def, const shdx_options* options, shdx_report** out) {
    SHDX_REQUIRE(def && valid_options(options), "invalid arguments");
    return make_report(out, [&] { return shdx::run_index(def->def, harness_options(options)); });
}

shdx_status shdx_run_morse(const shdx_definition* def, const shdx_options* options, const char* dump_path,
                           shdx_report** out) {
    SHDX_REQUIRE(def && valid_options(options), "invalid arguments");
    return make_report(out, [&] {
        return shdx::run_morse(def->def, harness_options(options), dump_path ? dump_path : "");
    });
}

shdx_status shdx_run_spectrum(int m, int n_steps, double h, const double* angles, size_t count, shdx_report** out) {
    SHDX_REQUIRE(valid_m(m) && n_steps >= 2 && h > 0.0 && angles && count > 0, "invalid arguments");
    return make_report(out, [&] {
        std::vector<shdx::UnitCircleParam> omegas;
        for (size_t k = 0; k < count; ++k) omegas.emplace_back(angles[k]);
        return shdx::run_spectrum(m, n_steps, h, omegas);
    });
}

shdx_status shdx_run_splitting(const shdx_definition* def, const shdx_options* options, shdx_report** out) {
    SHDX_REQUIRE(def && valid_options(options), "invalid arguments");
    return make_report(out, [&] { return shdx::run_splitting(def->def, harness_options(options)); });
}

shdx_status shdx_run_crossings(const shdx_definition* def, const shdx_options* options, shdx_report** out) {
    SHDX_REQUIRE(def && valid_options(options), "invalid arguments");
    return make_report(out, [&] { return shdx::run_crossings(def->def, harness_options(options)); });
}

shdx_status shdx_run_corollaries(const shdx_definition* def, const shdx_options* options, shdx_report** out) {
    SHDX_REQUIRE(def && valid_options(options), "invalid arguments");
    return make_report(out, [&] { return shdx::run_corollaries(def->def, harness_options(options)); });
}

shdx_status shdx_run_theorem_suite(const shdx_suite_config* config, const shdx_options* options,
                                   shdx_report** out) {
    SHDX_REQUIRE(config && valid_options(options), "invalid arguments");
    SHDX_REQUIRE((config->ms || !config->ms_count) && (config->ns || !config->ns_count) &&
                     (config->omega_angles || !config->omega_count),
                 "null grid array");
    return make_report(out, [&] {
        shdx::SuiteConfig c;
        c.seed = config->seed;
        c.trials = config->trials;
        c.degenerate = config->degenerate;
        c.norm_bound = config->norm_bound;
        if (config->ms) c.ms.assign(config->ms, config->ms + config->ms_count);
        if (config->ns) c.ns.assign(config->ns, config->ns + config->ns_count);
        if (config->omega_angles) {
            c.omegas.clear();
            for (size_t k = 0; k < config->omega_count; ++k) c.omegas.emplace_back(config->omega_angles[k]);
        }
        for (int m : c.ms) {
            if (!valid_m(m)) throw shdx::Error(shdx::ErrorCode::input, "suite m out of range");
        }
        for (int n : c.ns) {
            if (n < 1) throw shdx::Error(shdx::ErrorCode::input, "suite N must be positive");
        }
        return shdx::run_theorem_suite(c, harness_options(options));
    });
}

shdx_status shdx_run_convergence(const shdx_definition* def, int n0, int levels, const shdx_options* options,
                                 shdx_report** out) {
    SHDX_REQUIRE(def && valid_options(options), "invalid arguments");
    return make_report(out, [&] { return shdx::run_convergence(def->def, n0, levels, harness_options(options)); });
}

shdx_status shdx_report_status(const shdx_report* report) {
    SHDX_REQUIRE(report, "null report");
    switch (report->report.status) {
        case shdx::ReportStatus::pass:
            return SHDX_OK;
        case shdx::ReportStatus::check_failed:
            return SHDX_CHECK_FAILED;
        case shdx::ReportStatus::numerical:
            return SHDX_NUMERICAL_ERROR;
    }
    return SHDX_INTERNAL_ERROR;
}

shdx_status shdx_report_serialize(const shdx_report* report, shdx_format format, char** out) {
    SHDX_REQUIRE(report && out, "invalid arguments");
    *out = nullptr;
    SHDX_REQUIRE(format == SHDX_FORMAT_JSON || format == SHDX_FORMAT_CSV, "unknown format");
    return guarded([&] {
        const std::string text = format == SHDX_FORMAT_JSON ? report->report.json_text() : report->report.csv_text();
        char* buf = static_cast<char*>(std::malloc(text.size() + 1));
        if (!buf) throw std::bad_alloc();
        std::memcpy(buf, text.c_str(), text.size() + 1);
        *out = buf;
    });
}

shdx_status shdx_report_write(const shdx_report* report, shdx_format format, const char* path) {
    SHDX_REQUIRE(report && path, "invalid arguments");
    SHDX_REQUIRE(format == SHDX_FORMAT_JSON || format == SHDX_FORMAT_CSV, "unknown format");
    return guarded([&] {
        const std::string text = format == SHDX_FORMAT_JSON ? report->report.json_text() : report->report.csv_text();
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f) throw shdx::Error(shdx::ErrorCode::io, std::string("cannot open ") + path + " for writing");
        f << text;
        f.flush();
        if (!f) throw shdx::Error(shdx::ErrorCode::io, std::string("write failed for ") + path);
    });
}

void shdx_report_free(shdx_report* report) { delete report; }

void shdx_string_free(char* text) { std::free(text); }

}  // extern "C"
