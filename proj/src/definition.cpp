#include <cmath>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "shdx/errors.hpp"
#include "shdx/symplectic.hpp"
#include "shdx/verify.hpp"

namespace shdx {

namespace {

using nlohmann::json;

constexpr int kMaxM = 16;
constexpr int kMaxN = 4096;

[[noreturn]] void bad_input(const std::string& what) { throw Error(ErrorCode::input, what); }

Matrix matrix_from_json(const json& j, int size, const std::string& where) {
    if (!j.is_array() || static_cast<int>(j.size()) != size) {
        bad_input(where + ": expected " + std::to_string(size) + " rows");
    }
    Matrix out(size, size);
    for (int r = 0; r < size; ++r) {
        const json& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<int>(row.size()) != size) {
            bad_input(where + ": row " + std::to_string(r) + " needs " + std::to_string(size) + " entries");
        }
        for (int c = 0; c < size; ++c) {
            const json& v = row[static_cast<std::size_t>(c)];
            if (!v.is_number()) bad_input(where + ": non-numeric entry");
            out(r, c) = v.get<double>();
        }
    }
    if ((out - out.transpose()).cwiseAbs().maxCoeff() > 1e-12) bad_input(where + " is not symmetric");
    return 0.5 * (out + out.transpose());
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<UnitCircleParam> omegas_from_json(const json& j) {
    std::vector<UnitCircleParam> out;
    auto one = [&](const json& v) {
        if (v.is_number()) {
            out.emplace_back(v.get<double>());
        } else if (v.is_object() && v.contains("angle") && v["angle"].is_number()) {
            out.emplace_back(v["angle"].get<double>());
        } else {
            bad_input("omega entries must be angles or {\"angle\": x}");
        }
    };
    if (j.is_array()) {
        for (const auto& v : j) one(v);
    } else {
        one(j);
    }
    if (out.empty()) bad_input("omega list is empty");
    return out;
}

int get_int(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number_integer()) bad_input(std::string("missing integer field '") + key + "'");
    return j[key].get<int>();
}

ContinuousGenerator generator_from_json(const json& j, int m) {
    if (!j.is_object()) bad_input("continuous generator must be an object");
    ContinuousGenerator g;
    const std::string kind = j.value("kind", "constant");
    const int size = 2 * m;
    if (kind == "constant") {
        g.kind = ContinuousGenerator::Kind::constant;
        g.base = matrix_from_json(j.at("matrix"), size, "generator.matrix");
    } else if (kind == "trigonometric") {
        g.kind = ContinuousGenerator::Kind::trigonometric;
        g.base = j.contains("base") ? matrix_from_json(j["base"], size, "generator.base")
                                    : Matrix(Matrix::Zero(size, size));
        if (!j.contains("terms") || !j["terms"].is_array()) bad_input("trigonometric generator needs 'terms'");
        for (const auto& t : j["terms"]) {
            TrigTerm term;
            term.amplitude = matrix_from_json(t.at("amplitude"), size, "generator.terms.amplitude");
            term.frequency = t.value("frequency", 1.0);
            term.phase = t.value("phase", 0.0);
            g.terms.push_back(std::move(term));
        }
    } else if (kind == "standard") {
        g.kind = ContinuousGenerator::Kind::standard;
        g.j = get_int(j, "j");
    } else {
        bad_input("unknown generator kind '" + kind + "'");
    }
    return g;
}

json generator_to_json(const ContinuousGenerator& g) {
    json j;
    switch (g.kind) {
        case ContinuousGenerator::Kind::constant:
            j["kind"] = "constant";
            j["matrix"] = matrix_to_json(g.base);
            break;
        case ContinuousGenerator::Kind::trigonometric: {
            j["kind"] = "trigonometric";
            j["base"] = matrix_to_json(g.base);
            json terms = json::array();
            for (const auto& t : g.terms) {
                terms.push_back({{"amplitude", matrix_to_json(t.amplitude)},
                                 {"frequency", t.frequency},
                                 {"phase", t.phase}});
            }
            j["terms"] = terms;
            break;
        }
        case ContinuousGenerator::Kind::standard:
            j["kind"] = "standard";
            j["j"] = g.j;
            break;
    }
    return j;
}

// {"constant": M}, {"samples": [...]}, {"standard": j} and {"continuous": {...}} as shorthand.
json normalize_coefficients(const json& c) {
    if (c.contains("kind")) return c;
    if (c.size() != 1) bad_input("coefficients need a 'kind' or exactly one of constant, samples, standard, continuous");
    const std::string key = c.begin().key();
    const json& value = c.begin().value();
    if (key == "constant") return {{"kind", "constant"}, {"matrix", value}};
    if (key == "samples") return {{"kind", "samples"}, {"blocks", value}};
    if (key == "standard") return {{"kind", "standard"}, {"j", value}};
    if (key == "continuous") {
        if (!value.is_object()) bad_input("continuous coefficients must be an object");
        if (value.contains("generator")) {
            json out = value;
            out["kind"] = "continuous";
            return out;
        }
        return {{"kind", "continuous"}, {"generator", value}};
    }
    bad_input("unknown coefficient form '" + key + "'");
}

}  // namespace

Matrix ContinuousGenerator::operator()(double t, int m) const {
    switch (kind) {
        case Kind::constant:
            return base;
        case Kind::trigonometric: {
            Matrix out = base;
            for (const auto& term : terms) {
                out += term.amplitude * std::cos(2.0 * kPi * term.frequency * t + term.phase);
            }
            return out;
        }
        case Kind::standard:
            return StandardPath(m, j).coefficient(t);
    }
    return base;
}

SystemDefinition SystemDefinition::from_json(const json& j) {
    if (!j.is_object()) bad_input("system definition must be a JSON object");
    SystemDefinition def;
    def.m = get_int(j, "m");
    def.n_steps = get_int(j, "N");
    if (def.m < 1 || def.m > kMaxM) bad_input("m must lie in [1, " + std::to_string(kMaxM) + "]");
    if (def.n_steps < 1 || def.n_steps > kMaxN) bad_input("N must lie in [1, " + std::to_string(kMaxN) + "]");
    if (j.contains("h")) {
        if (!j["h"].is_number() || !(j["h"].get<double>() > 0.0)) bad_input("h must be a positive number");
        def.h = j["h"].get<double>();
    }
    if (j.contains("max_step")) {
        if (!j["max_step"].is_number() || !(j["max_step"].get<double>() > 0.0)) bad_input("max_step must be positive");
        def.max_step = j["max_step"].get<double>();
    }
    if (j.contains("omega")) def.omegas = omegas_from_json(j["omega"]);
    if (!j.contains("coefficients") || !j["coefficients"].is_object()) bad_input("missing 'coefficients' object");
    const json c = normalize_coefficients(j["coefficients"]);
    const std::string kind = c.value("kind", "");
    const int size = 2 * def.m;
    CoefficientSpec& spec = def.coefficients;
    if (kind == "constant") {
        spec.kind = CoefficientSpec::Kind::constant;
        spec.constant = matrix_from_json(c.at("matrix"), size, "coefficients.matrix");
    } else if (kind == "samples") {
        spec.kind = CoefficientSpec::Kind::samples;
        if (!c.contains("blocks") || !c["blocks"].is_array()) bad_input("samples need a 'blocks' array");
        if (static_cast<int>(c["blocks"].size()) != def.n_steps) {
            bad_input("expected N = " + std::to_string(def.n_steps) + " blocks, got " +
                      std::to_string(c["blocks"].size()));
        }
        for (std::size_t n = 0; n < c["blocks"].size(); ++n) {
            spec.samples.push_back(matrix_from_json(c["blocks"][n], size, "coefficients.blocks[" + std::to_string(n) + "]"));
        }
    } else if (kind == "standard") {
        spec.kind = CoefficientSpec::Kind::standard;
        spec.j = get_int(c, "j");
    } else if (kind == "continuous") {
        spec.kind = CoefficientSpec::Kind::continuous;
        spec.generator = generator_from_json(c.at("generator"), def.m);
        const std::string disc = c.value("discretization", "exact");
        if (disc == "exact") {
            spec.exact = true;
        } else if (disc == "sample") {
            spec.exact = false;
        } else {
            bad_input("discretization must be 'exact' or 'sample'");
        }
    } else {
        bad_input("coefficients.kind must be constant, samples, standard or continuous");
    }
    if (def.h && def.has_continuous_limit() && std::abs(*def.h * def.n_steps - 1.0) > 1e-12) {
        bad_input("h must equal 1/N for standard and continuous coefficients");
    }
    return def;
}

SystemDefinition SystemDefinition::parse(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        bad_input(std::string("malformed JSON: ") + e.what());
    }
    try {
        return from_json(j);
    } catch (const json::exception& e) {
        bad_input(std::string("invalid system definition: ") + e.what());
    }
}

json SystemDefinition::to_json() const {
    json j;
    j["m"] = m;
    j["N"] = n_steps;
    if (h) j["h"] = *h;
    if (max_step) j["max_step"] = *max_step;
    json om = json::array();
    for (const auto& w : omegas) om.push_back(w.angle());
    j["omega"] = om;
    json c;
    switch (coefficients.kind) {
        case CoefficientSpec::Kind::constant:
            c["kind"] = "constant";
            c["matrix"] = matrix_to_json(coefficients.constant);
            break;
        case CoefficientSpec::Kind::samples: {
            c["kind"] = "samples";
            json blocks = json::array();
            for (const auto& b : coefficients.samples) blocks.push_back(matrix_to_json(b));
            c["blocks"] = blocks;
            break;
        }
        case CoefficientSpec::Kind::standard:
            c["kind"] = "standard";
            c["j"] = coefficients.j;
            break;
        case CoefficientSpec::Kind::continuous:
            c["kind"] = "continuous";
            c["generator"] = generator_to_json(coefficients.generator);
            c["discretization"] = coefficients.exact ? "exact" : "sample";
            break;
    }
    j["coefficients"] = c;
    return j;
}

double SystemDefinition::step() const { return h.value_or(1.0 / n_steps); }

StepLimits SystemDefinition::limits() const {
    StepLimits l;
    const bool standard = coefficients.kind == CoefficientSpec::Kind::standard ||
                          (coefficients.kind == CoefficientSpec::Kind::continuous &&
                           coefficients.generator.kind == ContinuousGenerator::Kind::standard);
    l.max_step_entry = max_step.value_or(standard ? 2.0 : 0.5);
    return l;
}

bool SystemDefinition::has_continuous_limit() const {
    return coefficients.kind == CoefficientSpec::Kind::standard ||
           coefficients.kind == CoefficientSpec::Kind::continuous ||
           (coefficients.kind == CoefficientSpec::Kind::constant && !h);
}

Matrix SystemDefinition::continuous_coefficient(double t) const {
    switch (coefficients.kind) {
        case CoefficientSpec::Kind::standard:
            return StandardPath(m, coefficients.j).coefficient(t);
        case CoefficientSpec::Kind::continuous:
            return coefficients.generator(t, m);
        case CoefficientSpec::Kind::constant:
            return coefficients.constant;
        case CoefficientSpec::Kind::samples:
            break;
    }
    throw Error(ErrorCode::input, "sampled coefficients have no continuous generator");
}

CoefficientSequence SystemDefinition::build(int n_steps_override) const {
    const int n = n_steps_override > 0 ? n_steps_override : n_steps;
    if (n > kMaxN) bad_input("N must not exceed " + std::to_string(kMaxN));
    const StepLimits lim = limits();
    switch (coefficients.kind) {
        case CoefficientSpec::Kind::constant:
            return CoefficientSequence::constant(m, n, n_steps_override > 0 ? 1.0 / n : step(),
                                                 coefficients.constant, lim);
        case CoefficientSpec::Kind::samples:
            if (n != n_steps) bad_input("sampled coefficients are fixed at N = " + std::to_string(n_steps));
            return CoefficientSequence(m, step(), coefficients.samples, lim);
        case CoefficientSpec::Kind::standard:
            return CoefficientSequence::sampled(m, n, [this](double t) { return continuous_coefficient(t); }, lim);
        case CoefficientSpec::Kind::continuous: {
            auto b = [this](double t) { return continuous_coefficient(t); };
            if (!coefficients.exact) return CoefficientSequence::sampled(m, n, b, lim);
            std::vector<double> times;
            for (int k = 0; k <= n; ++k) times.push_back(static_cast<double>(k) / n);
            const std::vector<Matrix> gammas = reference_solution(m, b, times);
            auto node = [&](double t) {
                return gammas[static_cast<std::size_t>(std::lround(t * n))];
            };
            return discretize_continuous(m, n, node, lim).system;
        }
    }
    bad_input("unsupported coefficient kind");
}

std::vector<Matrix> reference_solution(int m, const std::function<Matrix(double)>& b,
                                       const std::vector<double>& times, double tol) {
    namespace odeint = boost::numeric::odeint;
    using State = std::vector<double>;
    const int size = 2 * m;
    const Matrix j = standard_j(m);
    auto rhs = [&](const State& x, State& dxdt, double t) {
        Eigen::Map<const Matrix> g(x.data(), size, size);
        Eigen::Map<Matrix> dg(dxdt.data(), size, size);
        dg = j * b(t) * g;
    };
    State x(static_cast<std::size_t>(size * size), 0.0);
    Eigen::Map<Matrix>(x.data(), size, size).setIdentity();
    std::vector<Matrix> out;
    if (times.empty()) return out;
    auto observer = [&](const State& s, double) {
        out.push_back(Eigen::Map<const Matrix>(s.data(), size, size));
    };
    auto stepper = odeint::make_dense_output(tol, tol, odeint::runge_kutta_dopri5<State>());
    odeint::integrate_times(stepper, rhs, x, times.begin(), times.end(), 1e-3, observer);
    return out;
}

}  // namespace shdx
