#include <doctest.h>

#include <cmath>

#include "shdx/errors.hpp"
#include "shdx/symplectic.hpp"
#include "shdx/verify.hpp"

using namespace shdx;
using nlohmann::json;

namespace {

SystemDefinition parse(const std::string& text) { return SystemDefinition::parse(text); }

json first_result(const Report& r) { return r.body.at("results").at(0); }

}  // namespace

TEST_CASE("definition parsing: accepted forms") {
    const auto a = parse(R"({"m": 1, "N": 8, "omega": {"angle": 1.0}, "coefficients": {"constant": [[1, 0], [0, 1]]}})");
    CHECK(a.m == 1);
    CHECK(a.n_steps == 8);
    CHECK(a.omegas.size() == 1);
    CHECK(a.omegas[0].angle() == doctest::Approx(1.0));
    CHECK(a.step() == doctest::Approx(0.125));
    const auto b = parse(R"({"m": 1, "N": 2, "h": 0.1, "omega": [0, 3.141592653589793],
        "coefficients": {"kind": "samples", "blocks": [[[1, 0], [0, 1]], [[0, 1], [1, 0]]]}})");
    CHECK(b.omegas.size() == 2);
    CHECK(b.step() == doctest::Approx(0.1));
    const auto c = parse(R"({"m": 2, "N": 16, "coefficients": {"standard": 3}})");
    CHECK(c.coefficients.kind == CoefficientSpec::Kind::standard);
    CHECK(c.limits().max_step_entry == doctest::Approx(2.0));
    const auto d = parse(R"({"m": 1, "N": 8, "coefficients": {"continuous": {"kind": "trigonometric",
        "terms": [{"amplitude": [[1, 0], [0, 0]], "frequency": 1}]}}})");
    CHECK(d.coefficients.kind == CoefficientSpec::Kind::continuous);
    CHECK(d.continuous_coefficient(0.0)(0, 0) == doctest::Approx(1.0));
    CHECK(d.continuous_coefficient(0.5)(0, 0) == doctest::Approx(-1.0));
    CHECK(d.limits().max_step_entry == doctest::Approx(0.5));
}

TEST_CASE("definition parsing: rejected documents") {
    auto rejects = [](const std::string& text) {
        try {
            SystemDefinition::parse(text);
        } catch (const Error& e) {
            return e.code() == ErrorCode::input;
        }
        return false;
    };
    CHECK(rejects("{"));
    CHECK(rejects(R"({"N": 8, "coefficients": {"standard": 1}})"));
    CHECK(rejects(R"({"m": 0, "N": 8, "coefficients": {"standard": 1}})"));
    CHECK(rejects(R"({"m": 1, "N": 8, "coefficients": {"constant": [[1, 2], [0, 1]]}})"));
    CHECK(rejects(R"({"m": 1, "N": 8, "coefficients": {"constant": [[1, 0, 0], [0, 1, 0]]}})"));
    CHECK(rejects(R"({"m": 1, "N": 3, "coefficients": {"samples": [[[1, 0], [0, 1]]]}})"));
    CHECK(rejects(R"({"m": 1, "N": 8, "h": 0.2, "coefficients": {"standard": 1}})"));
    CHECK(rejects(R"({"m": 1, "N": 8, "omega": [], "coefficients": {"standard": 1}})"));
    CHECK(rejects(R"({"m": 1, "N": 8, "coefficients": {"kind": "other"}})"));
    CHECK(rejects(R"({"m": 1, "N": 8, "coefficients": {"constant": [[1, "x"], [0, 1]]}})"));
    // Symmetric to 1e-12 is accepted.
    CHECK_FALSE(rejects(R"({"m": 1, "N": 8, "coefficients": {"constant": [[1, 0.5], [0.5000000000001, 1]]}})"));
}

TEST_CASE("definition roundtrips through JSON") {
    const auto a = parse(R"({"m": 1, "N": 8, "omega": [0.5], "coefficients": {"continuous": {"generator":
        {"kind": "trigonometric", "base": [[1, 0], [0, 2]], "terms": [{"amplitude": [[0, 1], [1, 0]],
        "frequency": 2, "phase": 0.3}]}, "discretization": "sample"}}})");
    const auto b = SystemDefinition::from_json(a.to_json());
    CHECK(b.to_json() == a.to_json());
    CHECK((b.continuous_coefficient(0.3) - a.continuous_coefficient(0.3)).norm() == 0.0);
}

TEST_CASE("step gate surfaces as an input-class error") {
    const auto a = parse(R"({"m": 1, "N": 2, "coefficients": {"constant": [[10, 0], [0, 10]]}})");
    try {
        a.build();
        FAIL("expected step_too_large");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::step_too_large);
    }
}

TEST_CASE("run_index: standard j = 1, m = 1, N = 8, omega = 1") {
    const Report r = run_index(parse(R"({"m": 1, "N": 8, "omega": {"angle": 0}, "coefficients": {"standard": 1}})"));
    const json res = first_result(r);
    CHECK(res["i_omega"] == 1);
    CHECK(res["nu_omega"] == 0);
    CHECK(res["m_minus"] == 9);
    CHECK(res["m_zero"] == 0);
    CHECK(res["m_plus"] == 7);
    CHECK(res["theorem_residuals"] == json::array({0, 0, 0}));
    CHECK(res["i_omega"].is_number_integer());
    CHECK(r.passed());
}

TEST_CASE("run_index: B = 0 examples") {
    const Report r = run_index(parse(R"({"m": 2, "N": 8, "omega": [0], "coefficients": {"constant":
        [[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]}})"));
    const json res = first_result(r);
    CHECK(res["i_omega"] == -2);
    CHECK(res["nu_omega"] == 4);
    CHECK(res["m_minus"] == 14);
    CHECK(res["m_zero"] == 4);
    CHECK(res["m_plus"] == 14);
    CHECK(r.passed());
    const Report q = run_index(parse(R"({"m": 1, "N": 8, "omega": [1.0471975511965976],
        "coefficients": {"constant": [[0,0],[0,0]]}})"));
    CHECK(first_result(q)["nu_omega"] == 0);
    CHECK(first_result(q)["theorem_residuals"] == json::array({0, 0, 0}));
}

TEST_CASE("reports are deterministic and self-consistent") {
    const auto def = parse(R"({"m": 2, "N": 8, "omega": [0, 2.0], "coefficients": {"standard": 2}})");
    const Report a = run_index(def);
    const Report b = run_index(def);
    CHECK(a.json_text() == b.json_text());
    CHECK(a.csv_text() == b.csv_text());
    CHECK(a.body["schema"] == "shdx-report/1");
    for (const auto& res : a.body["results"]) {
        CHECK(res["m_minus"].get<int>() + res["m_zero"].get<int>() + res["m_plus"].get<int>() == 2 * 2 * 8);
    }
    CHECK(a.json_text().find("timing_ms") == std::string::npos);
    HarnessOptions timed;
    timed.timing = true;
    CHECK(run_index(def, timed).json_text().find("timing_ms") != std::string::npos);
}

TEST_CASE("spectrum report has the documented columns") {
    const Report r = run_spectrum(1, 4, 0.25, {UnitCircleParam::one()});
    CHECK(r.csv_header == std::vector<std::string>{"k", "alpha_k", "lambda_plus", "lambda_minus", "multiplicity"});
    CHECK(r.csv_rows.size() == 4);
    CHECK(r.csv_text().find("-0,") == std::string::npos);
}

TEST_CASE("morse report and splitting report") {
    const auto def = parse(R"({"m": 1, "N": 8, "omega": [0], "coefficients": {"constant": [[0,0],[0,0]]}})");
    const Report m = run_morse(def);
    CHECK(m.csv_rows.at(0) == std::vector<std::string>{"0", "7", "2", "7", "0"});
    const Report s = run_splitting(def);
    CHECK(s.passed());
    CHECK(first_result(s)["morse"]["s_plus"] == 1);
    CHECK(first_result(s)["maslov"]["s_minus"] == 1);
}

TEST_CASE("crossing report uses the documented columns") {
    const Report r = run_crossings(parse(R"({"m": 1, "N": 16, "omega": [0], "coefficients": {"standard": 3}})"));
    CHECK(r.csv_header == std::vector<std::string>{"t*", "kernel_dim", "signature", "contribution"});
    double total = 0.0;
    for (const auto& row : r.csv_rows) total += std::stod(row[3]);
    CHECK(total == doctest::Approx(3.0));
}

TEST_CASE("corollaries: standard j = 2 is h-independent with i = 2") {
    const Report r = run_corollaries(parse(R"({"m": 1, "N": 16, "omega": [0], "coefficients": {"standard": 2}})"));
    CHECK(r.passed());
    const json res = first_result(r);
    CHECK(res["h_independence"] == "pass");
    for (const auto& level : res["levels"]) CHECK(level["i_omega"] == 2);
}

TEST_CASE("corollaries: B = 0 splitting equals (m, m)") {
    const Report r = run_corollaries(parse(R"({"m": 2, "N": 8, "omega": [0], "coefficients": {"constant":
        [[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]}})"));
    CHECK(r.passed());
    for (const auto& level : first_result(r)["levels"]) {
        CHECK(level["morse_splitting"]["s_plus"] == 2);
        CHECK(level["endpoint_splitting"]["s_minus"] == 2);
    }
}

TEST_CASE("theorem suite: small grid passes, empty grid is empty") {
    SuiteConfig c;
    c.trials = 6;
    c.degenerate = 2;
    const Report r = run_theorem_suite(c);
    CHECK(r.passed());
    CHECK(r.body["summary"]["failures"] == 0);
    CHECK(r.body["summary"]["degenerate_min_nullity"].get<int>() >= 1);
    CHECK(r.json_text() == run_theorem_suite(c).json_text());
    SuiteConfig empty;
    empty.ms.clear();
    const Report e = run_theorem_suite(empty);
    CHECK(e.passed());
    CHECK(e.csv_rows.empty());
    CHECK(e.body["summary"]["evaluations"] == 0);
}

TEST_CASE("constructed degenerate systems have the requested eigenvalue") {
    std::mt19937_64 rng(9);
    for (double a : {0.0, kPi, 1.0}) {
        const CoefficientSequence s = construct_degenerate(rng, 1, 8, UnitCircleParam(a));
        CHECK(nullity(fundamental_solution(s).monodromy(), UnitCircleParam(a)) >= 1);
    }
}

TEST_CASE("convergence: B = 0 is exact, constant B is first order") {
    const Report zero = run_convergence(parse(R"({"m": 1, "N": 8, "coefficients": {"constant": [[0,0],[0,0]]}})"));
    CHECK(zero.passed());
    for (const auto& row : zero.body["rows"]) CHECK(row["eps"].get<double>() <= 1e-13);
    const Report c = run_convergence(parse(R"({"m": 1, "N": 8, "coefficients": {"standard": 0}})"), 8, 4);
    CHECK(c.passed());
    const auto& rows = c.body["rows"];
    for (std::size_t k = 1; k < rows.size(); ++k) {
        CHECK(rows[k]["eps"].get<double>() < rows[k - 1]["eps"].get<double>());
        CHECK(rows[k]["order_estimate"].get<double>() == doctest::Approx(1.0).epsilon(0.15));
    }
    CHECK(c.csv_header == std::vector<std::string>{"N", "h", "eps", "order_estimate"});
    CHECK_THROWS_AS(run_convergence(parse(R"({"m": 1, "N": 2, "h": 0.1, "coefficients": {"samples":
        [[[0,0],[0,0]], [[0,0],[0,0]]]}})")), Error);
}

TEST_CASE("reference solution matches a closed form") {
    const Matrix b = (Matrix(2, 2) << 1.0, 0.0, 0.0, 1.0).finished();
    const auto sol = reference_solution(1, [&](double) { return b; }, {0.0, 0.5, 1.0});
    CHECK((sol[2] - rotation(1.0)).cwiseAbs().maxCoeff() < 1e-10);
}
