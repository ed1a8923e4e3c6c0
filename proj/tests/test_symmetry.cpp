#include <cmath>
#include <random>

#include "doctest.h"
#include "wingvol/black_scholes.hpp"
#include "wingvol/errors.hpp"
#include "wingvol/grid.hpp"
#include "wingvol/symmetry.hpp"

using namespace wingvol;

namespace {

const MarketSetup kSetup{100.0, 0.03, 1.5};
constexpr double kVol = 0.3;

PricingCurve bs_curve(const MarketSetup& s, OptionSide side) {
    return PricingCurve::from_prices(side, [s, side](double k) { return bs_price(s, k, kVol, side); });
}

DensityOracle lognormal_oracle(const MarketSetup& s) {
    const double sd = kVol * std::sqrt(s.maturity);
    const double mu = std::log(s.forward()) - 0.5 * sd * sd;
    DensityOracle d;
    d.log_density = [mu, sd](double x) {
        const double z = (std::log(x) - mu) / sd;
        return -0.5 * z * z - std::log(x * sd * std::sqrt(2.0 * M_PI));
    };
    d.log_width = sd;
    return d;
}

}  // namespace

TEST_CASE("strike reflection") {
    const MarketSetup s{100.0, 0.0, 1.0};
    CHECK(eta_T(s, 100.0) == doctest::Approx(100.0));
    CHECK(eta_T(s, 50.0) == doctest::Approx(200.0));
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> k(1.0, 1e4);
    for (int i = 0; i < 100; ++i) {
        const double x = k(rng);
        CHECK(eta_T(kSetup, eta_T(kSetup, x)) == doctest::Approx(x).epsilon(1e-14));
    }
}

TEST_CASE("Black-Scholes is its own symmetric model") {
    const auto g = symmetric_call(bs_curve(kSetup, OptionSide::Put), kSetup);
    for (double k : geometric_grid(20.0, 500.0, 30)) {
        CHECK(g.price(k) == doctest::Approx(bs_call_price(kSetup, k, kVol)).epsilon(1e-12));
    }
    const double f = kSetup.forward();
    CHECK(g.price(f) == doctest::Approx(bs_put_price(kSetup, f, kVol)).epsilon(1e-14));
    CHECK_THROWS_AS(symmetric_call(bs_curve(kSetup, OptionSide::Call), kSetup), WrongSide);
}

TEST_CASE("applying the transform twice returns the call") {
    const auto call = bs_curve(kSetup, OptionSide::Call);
    const auto g_put = symmetric_put(call, kSetup);
    const auto back = symmetric_call(g_put, kSetup);
    for (double k : geometric_grid(30.0, 300.0, 12)) {
        CHECK(back.price(k) == doctest::Approx(call.price(k)).epsilon(1e-12));
    }
    const auto pp = parity_put(call, kSetup);
    CHECK(pp.price(90.0) == doctest::Approx(bs_put_price(kSetup, 90.0, kVol)).epsilon(1e-12));
}

TEST_CASE("IV symmetry in a flat-smile world") {
    const auto call = bs_curve(kSetup, OptionSide::Call);
    const auto put = bs_curve(kSetup, OptionSide::Put);
    const auto ivc = otm_iv_function(call, put, kSetup);
    const auto ivg = symmetric_iv_function(call, put, kSetup);
    CHECK(iv_symmetry_check(ivc, ivg, kSetup, geometric_grid(30.0, 300.0, 40)) <= 2e-10);
    CHECK(iv_symmetry_check(ivc, ivg, kSetup, {kSetup.forward()}) <= 1e-12);
    CHECK(ivc(70.0) == doctest::Approx(kVol).epsilon(1e-10));
}

TEST_CASE("moment duality for the lognormal law") {
    const auto oracle = lognormal_oracle(kSetup);
    const double f = kSetup.forward();
    const auto half = moment_dual_check(oracle, 0.5, kSetup);
    CHECK(half.lhs == doctest::Approx(half.rhs).epsilon(1e-10));
    const auto one = moment_dual_check(oracle, 1.0, kSetup);
    CHECK(one.lhs == doctest::Approx(f).epsilon(1e-10));
    CHECK(one.rhs == doctest::Approx(f).epsilon(1e-10));
    for (double p : {0.3, 0.7, 1.8, -0.5}) {
        const auto d = moment_dual_check(oracle, p, kSetup);
        const double sd2 = kVol * kVol * kSetup.maturity;
        // E[X^p] of a lognormal with mean F
        const double exact = std::pow(f, p) * std::exp(0.5 * sd2 * p * (p - 1.0));
        CAPTURE(p);
        CHECK(d.lhs == doctest::Approx(exact).epsilon(1e-9));
        CHECK(d.relative_gap <= 1e-9);
    }
}

TEST_CASE("moments of the absolutely continuous part") {
    const auto oracle = lognormal_oracle(kSetup);
    const double center = std::log(kSetup.forward());
    CHECK(std::exp(log_moment(oracle.log_density, 0.0, center, oracle.log_width)) ==
          doctest::Approx(1.0).epsilon(1e-11));
    DensityOracle pareto;
    // density 3 x^{-4} on x > 1: moments of order >= 3 diverge
    pareto.log_density = [](double x) { return x > 1.0 ? std::log(3.0) - 4.0 * std::log(x) : -INFINITY; };
    CHECK_THROWS_AS(log_moment(pareto.log_density, 3.5, 0.5, 0.5), DivergentMoment);
}

TEST_CASE("atom at zero makes orders above one divergent") {
    auto oracle = lognormal_oracle(kSetup);
    oracle.atom_mass = 0.1;
    CHECK_THROWS_AS(moment_dual_check(oracle, 1.5, kSetup), DivergentMoment);
    CHECK_NOTHROW(moment_dual_check(oracle, 0.5, kSetup));
    CHECK_THROWS_AS(moment_dual_check(oracle, 0.0, kSetup), InvalidArgument);
}
