#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "mtem/model.hpp"
#include "mtem/truncation.hpp"
#include "mtem/validation.hpp"
#include "oracles.hpp"

using namespace mtem;

namespace {

// the benchmark coefficient set: f = (-2x + y/2 - x^3 - x y^4)/(1+t),
// g = sqrt((2x^2 y^4 + y^2/2 + 2x^4)/(1+t))
CoefficientSet bench_coefficients() {
    return polynomial_coefficients({{-2.0, 1, 0}, {0.5, 0, 1}, {-1.0, 3, 0}, {-1.0, 1, 4}},
                                   {{2.0, 2, 4}, {0.5, 0, 2}, {2.0, 4, 0}}, 0.0, 2.0, 3.5, 1.0,
                                   LipschitzEnvelope{5.0, 4.0, 2.0});
}

SddeProblem bench_problem() {
    SddeProblem p;
    p.coefficients = bench_coefficients();
    p.delay = exp_approach_delay(1.0, 0.5);
    p.history = constant_history(2.0, 1.0);
    return p;
}

const Finding* find_by_name(const ValidationReport& report, const std::string& name) {
    for (const Finding& f : report.findings)
        if (f.name == name) return &f;
    return nullptr;
}

} // namespace

TEST_CASE("constant delay") {
    const DelayFunction d = constant_delay(1.0);
    CHECK(d(0.0) == 1.0);
    CHECK(d(7.5) == 1.0);
    CHECK(d.eta == 0.0);
    CHECK(d.tau == 1.0);
    CHECK(d.is_bounded);
    REQUIRE(d.bound.has_value());
    CHECK(*d.bound == 1.0);
    CHECK(constant_delay(0.0)(3.0) == 0.0);
    CHECK_THROWS_AS(constant_delay(-0.1), std::invalid_argument);
}

TEST_CASE("exp-approach delay") {
    const DelayFunction d = exp_approach_delay(1.0, 0.5);
    CHECK(d(0.0) == 1.0);
    // 1 + (1 - e^{-1})/2, checked against a high-precision evaluation
    CHECK(d(1.0) == doctest::Approx(1.3160602794142788).epsilon(1e-14));
    CHECK(d(100.0) == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(d.eta == 0.5);
    CHECK(d.tau == 1.0);
    CHECK(d.is_bounded);
    REQUIRE(d.bound.has_value());
    CHECK(*d.bound == 1.5);
    // the slope is gain * e^{-t}, maximal at t = 0 where it equals eta
    const double fd = (d(1e-7) - d(0.0)) / 1e-7;
    CHECK(fd == doctest::Approx(0.5).epsilon(1e-5));
    CHECK_THROWS_AS(exp_approach_delay(-1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(exp_approach_delay(1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(exp_approach_delay(1.0, -0.1), std::invalid_argument);
}

TEST_CASE("pantograph delay") {
    const DelayFunction d = pantograph_delay(0.5);
    CHECK(d(0.0) == 0.0);
    CHECK(d(4.0) == 2.0);
    CHECK(d.eta == 0.5);
    CHECK(d.tau == 0.0);
    CHECK_FALSE(d.is_bounded);
    CHECK_FALSE(d.bound.has_value());
    CHECK(pantograph_delay(0.25).eta == 0.75);
    CHECK(pantograph_delay(1.0)(9.0) == 0.0); // q = 1 degenerates to no delay
    CHECK_THROWS_AS(pantograph_delay(0.0), std::invalid_argument);
    CHECK_THROWS_AS(pantograph_delay(1.5), std::invalid_argument);
}

TEST_CASE("polynomial evaluation") {
    const std::vector<PolyTerm> drift = {{-2.0, 1, 0}, {0.5, 0, 1}, {-1.0, 3, 0}, {-1.0, 1, 4}};
    CHECK(eval_polynomial(drift, 2.0, 0.0) == -12.0); // -4 - 8, exact in doubles
    CHECK(eval_polynomial(drift, 1.0, 1.0) == -3.5);  // -2 + 0.5 - 1 - 1
    CHECK(eval_polynomial({}, 3.0, 4.0) == 0.0);
    CHECK(eval_polynomial({{7.0, 0, 0}}, 0.0, 0.0) == 7.0); // 0^0 counts as 1
    const std::vector<PolyTerm> diff_sq = {{2.0, 2, 4}, {0.5, 0, 2}, {2.0, 4, 0}};
    CHECK(eval_polynomial(diff_sq, 2.0, 0.0) == 32.0);
}

TEST_CASE("polynomial coefficient set") {
    const CoefficientSet c = bench_coefficients();
    CHECK(c.state_dim == 1);
    CHECK(c.noise_dim == 1);
    CHECK(c.lambda1 == 3.5);

    CHECK(c.drift({2.0}, {0.0}, 0.0)[0] == -12.0);
    CHECK(c.diffusion({2.0}, {0.0}, 0.0)(0, 0) == doctest::Approx(5.6568542494923802).epsilon(1e-15));
    // the 1/(1+t) factor
    CHECK(c.drift({2.0}, {0.0}, 1.0)[0] == -6.0);
    CHECK(c.diffusion({2.0}, {0.0}, 1.0)(0, 0) == doctest::Approx(4.0).epsilon(1e-15));

    // envelope L(R,t) = 5 (R^4 + 2)/(1+t)
    CHECK(c.lipschitz(2.0, 0.0) == doctest::Approx(90.0).epsilon(1e-15));
    CHECK(c.lipschitz(2.0, 1.0) == doctest::Approx(45.0).epsilon(1e-15));

    // cross-check against directly transcribed scalar formulas
    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::uniform_real_distribution<double> ut(0.0, 10.0);
    for (int i = 0; i < 500; ++i) {
        const double x = u(rng), y = u(rng), t = ut(rng);
        CHECK(c.drift({x}, {y}, t)[0] == doctest::Approx(oracle::drift1(x, y, t)).epsilon(1e-13));
        CHECK(c.diffusion({x}, {y}, t)(0, 0) == doctest::Approx(oracle::diffusion1(x, y, t)).epsilon(1e-13));
    }

    CHECK_THROWS_AS(polynomial_coefficients({}, {}, -1.0, 1.0, 1.0, 0.0, {}), std::invalid_argument);
    CHECK_THROWS_AS(polynomial_coefficients({}, {}, 0.0, 1.0, 0.0, 0.0, {}), std::invalid_argument);
    CHECK_THROWS_AS(polynomial_coefficients({}, {}, 0.0, 1.0, 1.0, -0.5, {}), std::invalid_argument);
}

TEST_CASE("diffusion square root handling") {
    // rounding-sized negative squares are clamped to zero
    const CoefficientSet tiny =
        polynomial_coefficients({}, {{1e-15, 0, 0}, {-2e-15, 0, 0}}, 0.0, 1.0, 1.0, 0.0, {});
    CHECK(tiny.diffusion({0.0}, {0.0}, 0.0)(0, 0) == 0.0);
    // genuinely negative squares surface as NaN instead of being hidden
    const CoefficientSet bad = polynomial_coefficients({}, {{-1.0, 0, 0}}, 0.0, 1.0, 1.0, 0.0, {});
    CHECK(std::isnan(bad.diffusion({0.0}, {0.0}, 0.0)(0, 0)));
}

TEST_CASE("constant history") {
    const InitialHistory h = constant_history(2.0, 1.0, 3);
    CHECK(h.tau == 1.0);
    const Vec v = h.xi(-0.5);
    REQUIRE(v.size() == 3);
    CHECK(v[0] == 2.0);
    CHECK(v[2] == 2.0);
    CHECK_THROWS_AS(constant_history(1.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(constant_history(1.0, 1.0, 0), std::invalid_argument);
}

TEST_CASE("validate_problem accepts the benchmark problem") {
    const ValidationReport report = validate_problem(bench_problem());
    for (const Finding& f : report.findings) {
        INFO(f.name, " worst=", f.worst, " at ", f.witness);
        CHECK((f.passed || f.warning_only));
    }
    CHECK(report.all_passed());
    // every declared invariant shows up by name
    for (const char* name :
         {"delay value at zero", "delay slope exceeds eta", "delay nonnegative", "delay within bound",
          "trivial solution", "lipschitz envelope nondecreasing", "non-finite coefficient",
          "khasminskii condition", "history finite", "history tau consistent", "stability margin positive"})
        CHECK(find_by_name(report, name) != nullptr);
}

TEST_CASE("validate_problem flags a delay steeper than its declared eta") {
    SddeProblem p = bench_problem();
    p.delay.eval = [](double t) { return 1.0 + 0.9 * t; }; // slope 0.9, declared eta stays 0.5
    const ValidationReport report = validate_problem(p, 2.0);
    const Finding* f = find_by_name(report, "delay slope exceeds eta");
    REQUIRE(f != nullptr);
    CHECK_FALSE(f->passed);
    CHECK(f->worst > 0.3);
    CHECK_FALSE(report.all_passed());
}

TEST_CASE("validate_problem flags a negative delay") {
    SddeProblem p = bench_problem();
    p.delay = constant_delay(1.0);
    p.delay.eval = [](double t) { return 1.0 - t; };
    const ValidationReport report = validate_problem(p, 5.0);
    const Finding* f = find_by_name(report, "delay nonnegative");
    REQUIRE(f != nullptr);
    CHECK_FALSE(f->passed);
}

TEST_CASE("validate_problem flags coefficients without the trivial solution") {
    SddeProblem p = bench_problem();
    p.coefficients = polynomial_coefficients({{1.0, 0, 0}}, {}, 0.0, 2.0, 3.5, 1.0, {5.0, 4.0, 2.0});
    const ValidationReport report = validate_problem(p);
    const Finding* f = find_by_name(report, "trivial solution");
    REQUIRE(f != nullptr);
    CHECK_FALSE(f->passed);
}

TEST_CASE("validate_problem flags a non-finite history") {
    SddeProblem p = bench_problem();
    p.history.xi = [](double t) { return Vec{t < -0.5 ? std::nan("") : 2.0}; };
    const ValidationReport report = validate_problem(p);
    const Finding* f = find_by_name(report, "history finite");
    REQUIRE(f != nullptr);
    CHECK_FALSE(f->passed);
}

TEST_CASE("validate_problem flags an overstated dissipativity constant") {
    SddeProblem p = bench_problem();
    p.coefficients.lambda1 = 10.0; // the true coefficients only support 3.5
    const ValidationReport report = validate_problem(p);
    const Finding* f = find_by_name(report, "khasminskii condition");
    REQUIRE(f != nullptr);
    CHECK_FALSE(f->passed);
    CHECK(f->worst > 1e-9);
}

TEST_CASE("validate_problem warns but does not fail on a non-positive margin") {
    SddeProblem p = bench_problem();
    // lambda1 = 1 still satisfies the dissipativity bound (it is weaker than
    // 3.5) but leaves no stability margin: 1 - 1*(2+1) < 0
    p.coefficients.lambda1 = 1.0;
    const ValidationReport report = validate_problem(p);
    const Finding* f = find_by_name(report, "stability margin positive");
    REQUIRE(f != nullptr);
    CHECK_FALSE(f->passed);
    CHECK(f->warning_only);
    CHECK(f->worst == -2.0);
    CHECK(report.all_passed());
}

TEST_CASE("validate_problem rejects bad sampling parameters") {
    CHECK_THROWS_AS(validate_problem(bench_problem(), 10.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(validate_problem(bench_problem(), -1.0), std::invalid_argument);
}

TEST_CASE("check_khasminskii pointwise residuals") {
    const SddeProblem p = bench_problem();
    // at (1,1,0): 2*1*(-3.5) + 4.5 = -2.5 equals (0 - 3.5 + 1)/1 exactly
    const double r = check_khasminskii(p, {{{1.0}, {1.0}, 0.0}});
    CHECK(std::abs(r) <= 1e-12);
    // strictly inside: at (1,0,0): lhs = -6 + 2 = -4, rhs = -3.5
    const double r2 = check_khasminskii(p, {{{1.0}, {0.0}, 0.0}});
    CHECK(r2 == doctest::Approx(-0.5).epsilon(1e-12));

    // K term: zero coefficients, K = 1, lambda0 = 2 at the origin, t = 5
    SddeProblem pk;
    pk.coefficients = polynomial_coefficients({}, {}, 1.0, 2.0, 1.0, 0.0, {});
    pk.delay = constant_delay(0.0);
    pk.history = constant_history(0.0, 0.0);
    const double rk = check_khasminskii(pk, {{{0.0}, {0.0}, 5.0}});
    CHECK(rk == doctest::Approx(-std::pow(6.0, -2.0) / 6.0).epsilon(1e-14));

    CHECK_THROWS_AS(check_khasminskii(p, {}), std::invalid_argument);
    CHECK_THROWS_AS(check_khasminskii(p, {{{1.0}, {1.0}, -1.0}}), std::invalid_argument);

    // NaN from the coefficients is reported as an overflow, not as a residual
    SddeProblem bad = bench_problem();
    bad.coefficients = polynomial_coefficients({}, {{-1.0, 0, 0}}, 0.0, 2.0, 3.5, 1.0, {5.0, 4.0, 2.0});
    CHECK_THROWS_WITH_AS(check_khasminskii(bad, {{{1.0}, {1.0}, 0.0}}),
                         doctest::Contains("coefficient overflow"), std::runtime_error);
}

TEST_CASE("stability margin") {
    CHECK(stability_margin(bench_problem()) == 0.5); // 3.5 - 1*(2+1), exact

    SddeProblem p2 = bench_problem();
    p2.delay = pantograph_delay(0.5);
    p2.history = constant_history(3.0, 0.0);
    CHECK(stability_margin(p2) == 0.5);

    // eta = 0.9: 1/(1-eta) must round to exactly 10, not truncate to 9
    SddeProblem p3 = bench_problem();
    p3.delay = exp_approach_delay(1.0, 0.9);
    CHECK(stability_margin(p3) == 3.5 - 11.0);

    SddeProblem bad = bench_problem();
    bad.delay.eta = 1.0;
    CHECK_THROWS_AS(stability_margin(bad), std::invalid_argument);
}

TEST_CASE("truncation compatibility decay sequence") {
    const SddeProblem p = bench_problem();
    const TruncationPolicy policy = power_policy(1.0 / 9.0);
    const std::vector<double> r_values = {10.0, 100.0, 1000.0, 10000.0};
    const std::vector<double> t_grid = {0.0, 1.0, 10.0};
    const CompatibilityReport report = check_truncation_compatibility(p, policy, r_values, t_grid);

    REQUIRE(report.s_values.size() == 4);
    // s(R) = max_t (1+t) L(R,t)^2 R^{-9} = 25 (R^4+2)^2 / R^9, largest at t=0
    CHECK(report.s_values[0] == doctest::Approx(2.5010001).epsilon(1e-9));
    CHECK(report.s_values[1] == doctest::Approx(0.2500000100000001).epsilon(1e-9));
    CHECK(report.s_values[2] == doctest::Approx(0.0250000000001).epsilon(1e-9));
    CHECK(report.s_values[3] == doctest::Approx(0.002500000000000001).epsilon(1e-9));
    CHECK(report.decreasing);

    // an envelope growing like R^5 outpaces h_inverse = R^{-9}: s(R) ~ 25 R
    SddeProblem fat = bench_problem();
    fat.coefficients.lipschitz = [](double R, double t) {
        return 5.0 * (std::pow(R, 5.0) + 2.0) / (1.0 + t);
    };
    const CompatibilityReport grows = check_truncation_compatibility(fat, policy, r_values, t_grid);
    CHECK_FALSE(grows.decreasing);
    CHECK(grows.s_values[3] > grows.s_values[0]);

    TruncationPolicy no_inverse = policy;
    no_inverse.h_inverse = nullptr;
    CHECK_THROWS_WITH_AS(check_truncation_compatibility(p, no_inverse, r_values, t_grid),
                         doctest::Contains("inverse unavailable"), std::invalid_argument);
    CHECK_THROWS_AS(check_truncation_compatibility(p, policy, {10.0, 10.0}, t_grid), std::invalid_argument);
    CHECK_THROWS_AS(check_truncation_compatibility(p, policy, {}, t_grid), std::invalid_argument);
    CHECK_THROWS_AS(check_truncation_compatibility(p, policy, r_values, {}), std::invalid_argument);
}
