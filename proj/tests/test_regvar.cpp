#include <cmath>
#include <vector>

#include "doctest.h"
#include "wingvol/asymptotics.hpp"
#include "wingvol/black_scholes.hpp"
#include "wingvol/errors.hpp"
#include "wingvol/grid.hpp"
#include "wingvol/regvar.hpp"

using namespace wingvol;

namespace {

template <class F>
std::vector<double> sample(const std::vector<double>& y, F f) {
    std::vector<double> out;
    for (double v : y) out.push_back(f(v));
    return out;
}

}  // namespace

TEST_CASE("index of exact powers and scale invariance") {
    const auto y = geometric_grid(10.0, 1e8, 80);
    const auto f = sample(y, [](double v) { return std::pow(v, -3.0); });
    const auto fit = rv_index(y, f);
    CHECK(fit.index == doctest::Approx(-3.0).epsilon(1e-9));
    CHECK(fit.converged);
    const auto scaled = rv_index(y, sample(y, [](double v) { return 7.5 * std::pow(v, -3.0); }));
    CHECK(scaled.index == doctest::Approx(fit.index).epsilon(1e-12));
}

TEST_CASE("slowly varying factor shifts the index only slightly") {
    const auto y = geometric_grid(10.0, 1e12, 120);
    const auto fit = rv_index(y, sample(y, [](double v) { return std::pow(v, -3.0) * std::log(v); }));
    CHECK(std::abs(fit.index + 3.0) <= 0.05);
}

TEST_CASE("exponential decay is not regularly varying") {
    const auto y = geometric_grid(1.0, 1e4, 80);
    const auto log_f = sample(y, [](double v) { return -v; });
    CHECK_FALSE(rv_index_log(y, log_f).converged);
}

TEST_CASE("index estimation guards") {
    const auto short_grid = geometric_grid(1.0, 10.0, 40);
    CHECK_THROWS_AS(rv_index(short_grid, std::vector<double>(40, 1.0)), GridTooShort);
    const auto y = geometric_grid(1.0, 1e5, 40);
    auto f = sample(y, [](double v) { return 1.0 / v; });
    f[10] = 0.0;
    CHECK_THROWS_AS(rv_index(y, f), NonPositiveSample);
}

TEST_CASE("limit slope of power and oscillating calls") {
    const auto grid = geometric_grid(10.0, 1e10, 120);
    const auto pure = PricingCurve::from_prices(OptionSide::Call, [](double k) { return 1.0 / (k * k); });
    const auto a = limit_slope_right(pure, grid);
    CHECK(a.limit == doctest::Approx(2.0).epsilon(1e-2));
    CHECK(a.extrapolated == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(a.exists);
    const auto wobble = PricingCurve::from_prices(
        OptionSide::Call, [](double k) { return (2.0 + std::sin(std::log(k))) / (k * k); });
    const auto b = limit_slope_right(wobble, grid);
    CHECK_FALSE(b.exists);
    CHECK(b.oscillation > 1e-2);
    auto put = pure;
    put.side = OptionSide::Put;
    CHECK_THROWS_AS(limit_slope_right(put, grid), WrongSide);
}

TEST_CASE("weak Pareto type") {
    const auto y = geometric_grid(10.0, 1e12, 200);
    const auto pure = sample(y, [](double v) { return std::pow(v, -2.0); });
    const auto r = weak_pareto_check(y, pure, -2.0, TailKind::NearInfinity);
    CHECK(r.weak);
    CHECK(r.lower_slope == doctest::Approx(-2.0).epsilon(1e-9));
    CHECK(r.upper_slope == doctest::Approx(-2.0).epsilon(1e-9));
    CHECK(r.lower_intercept == doctest::Approx(r.upper_intercept).epsilon(1e-9));

    const auto bounded = sample(y, [](double v) { return std::pow(v, -2.0) * (2.0 + std::sin(std::log(std::log(v)))); });
    const auto b = weak_pareto_check(y, bounded, -2.0, TailKind::NearInfinity);
    CHECK(b.weak);
    CHECK(b.lower_slope <= b.upper_slope + 1e-12);

    const auto wrong = sample(y, [](double v) { return std::pow(v, -3.0); });
    CHECK_FALSE(weak_pareto_check(y, wrong, -2.0, TailKind::NearInfinity).weak);
}

TEST_CASE("weak Pareto type near zero") {
    const auto y = geometric_grid(1e-12, 1e-1, 200);
    const auto f = sample(y, [](double v) { return std::pow(v, 1.5); });
    const auto r = weak_pareto_check(y, f, -1.5, TailKind::NearZero);
    CHECK(r.weak);
    CHECK(r.kind == TailKind::NearZero);
}

TEST_CASE("wing predictions from tail indices") {
    ParetoTypeReport density;
    density.kind = TailKind::NearInfinity;
    density.weak = true;
    density.index = -4.0;
    const auto a = predict_wing_from_tail(density, TailQuantity::Density, 1.0);
    CHECK(a.moment_index == doctest::Approx(2.0));
    CHECK(a.coefficient == doctest::Approx(std::sqrt(psi(2.0))));
    ParetoTypeReport survival = density;
    survival.index = -3.0;
    const auto b = predict_wing_from_tail(survival, TailQuantity::Survival, 1.0);
    CHECK(b.coefficient == doctest::Approx(a.coefficient));
    ParetoTypeReport call = density;
    call.index = -2.0;
    CHECK(predict_wing_from_tail(call, TailQuantity::Call, 2.0).coefficient ==
          doctest::Approx(std::sqrt(psi(2.0) / 2.0)));

    ParetoTypeReport near_zero;
    near_zero.kind = TailKind::NearZero;
    near_zero.weak = true;
    near_zero.index = 0.0;  // density ~ x^0 gives q = 1
    const auto c = predict_wing_from_tail(near_zero, TailQuantity::Density, 1.0);
    CHECK_FALSE(c.right_wing);
    CHECK(c.moment_index == doctest::Approx(1.0));

    CHECK_THROWS_AS(predict_wing_from_tail(near_zero, TailQuantity::Survival, 1.0), InvalidArgument);
    ParetoTypeReport bad = density;
    bad.index = -1.0;
    CHECK_THROWS_AS(predict_wing_from_tail(bad, TailQuantity::Density, 1.0), InvalidIndex);
}

TEST_CASE("flat smile is flagged by the wing slope fit") {
    const MarketSetup s{1.0, 0.0, 1.0};
    const auto call = PricingCurve::from_log_prices(OptionSide::Call, [s](double k) { return bs_log_otm_price(s, k, 0.3); });
    const auto fit = measure_wing_slope(s, call, geometric_grid(2.0, 1e4, 40));
    CHECK(fit.flat_smile);
    CHECK(fit.failures == 0);
    CHECK(fit.last < fit.slopes.front());
}
