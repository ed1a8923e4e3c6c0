#include <cmath>
#include <complex>

#include "doctest.h"
#include "wingvol/asymptotics.hpp"
#include "wingvol/black_scholes.hpp"
#include "wingvol/errors.hpp"
#include "wingvol/grid.hpp"
#include "wingvol/heston_kou.hpp"
#include "wingvol/regvar.hpp"

using namespace wingvol;
using cplx = std::complex<double>;

namespace {

HestonKouParams diffusion_set() {
    HestonKouParams m;
    m.v0 = m.theta = 0.04;
    m.kappa = 1.0;
    m.volvol = 1.0;
    m.corr = -0.5;
    m.lambda = 1.0;
    m.eta1 = m.eta2 = 30.0;
    return m;
}

HestonKouParams jump_set() {
    HestonKouParams m;
    m.v0 = m.theta = 0.04;
    m.kappa = 2.0;
    m.volvol = 0.3;
    m.corr = -0.5;
    m.lambda = 0.05;
    m.eta1 = m.eta2 = 3.0;
    return m;
}

HestonKouParams near_bs() {
    HestonKouParams m;
    m.spot = 100.0;
    m.v0 = m.theta = 0.04;
    m.volvol = 1e-4;
    m.corr = 0.0;
    m.lambda = 0.0;
    return m;
}

// Fixed-step RK4 on the variance Riccati system in time to maturity, complex argument.
cplx riccati_cf(const HestonKouParams& m, double t, cplx u) {
    const cplx s = cplx(0.0, 1.0) * u;
    auto rhs = [&](cplx b) {
        return 0.5 * m.volvol * m.volvol * b * b + (m.corr * m.volvol * s - m.kappa) * b + 0.5 * (s * s - s);
    };
    const int steps = 20000;
    const double h = t / steps;
    cplx a = 0.0, b = 0.0;
    for (int i = 0; i < steps; ++i) {
        const cplx k1 = rhs(b), k2 = rhs(b + 0.5 * h * k1), k3 = rhs(b + 0.5 * h * k2), k4 = rhs(b + h * k3);
        const cplx l1 = b, l2 = b + 0.5 * h * k1, l3 = b + 0.5 * h * k2, l4 = b + h * k3;
        a += m.kappa * m.theta * h / 6.0 * (l1 + 2.0 * l2 + 2.0 * l3 + l4);
        b += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    // jump part from the double-exponential moment generating function
    const double eta = m.p_up / (m.eta1 - 1.0) - m.q_down() / (m.eta2 + 1.0);
    const cplx mgf = m.p_up * m.eta1 / (m.eta1 - s) + m.q_down() * m.eta2 / (m.eta2 + s);
    const cplx jumps = m.lambda * t * (mgf - 1.0);
    return s * (std::log(m.spot) + (m.rate - m.lambda * eta) * t) + a + b * m.v0 + jumps;
}

// Explosion time of the Heston moment of order s.
double explosion_time(const HestonKouParams& m, double s) {
    const double e = m.corr * m.volvol * s - m.kappa;
    const double disc = e * e - m.volvol * m.volvol * (s * s - s);
    if (disc >= 0.0) {
        if (e < 0.0) return INFINITY;
        const double r = std::sqrt(disc);
        return std::log((e + r) / (e - r)) / r;
    }
    const double r = std::sqrt(-disc);
    return 2.0 / r * ((e < 0.0 ? M_PI : 0.0) + std::atan(r / e));
}

}  // namespace

TEST_CASE("jump compensator") {
    HestonKouParams m;
    m.p_up = 0.5;
    m.eta1 = 2.0;
    m.eta2 = 3.0;
    CHECK(kou_eta(m) == doctest::Approx(0.375).epsilon(1e-15));
    CHECK(std::abs(kou_eta_quadrature(m) - kou_eta(m)) <= 1e-10);
    m.lambda = 1.0;
    CHECK(martingale_drift(m) == doctest::Approx(-0.375));
    m.lambda = 0.0;
    m.rate = 0.03;
    CHECK(martingale_drift(m) == 0.03);
    m.eta1 = m.eta2 = 1e7;
    CHECK(std::abs(kou_eta(m)) < 1e-7);
    const auto d = diffusion_set();
    CHECK(std::abs(kou_eta_quadrature(d) - kou_eta(d)) <= 1e-10);
}

TEST_CASE("parameter validation") {
    auto m = diffusion_set();
    m.corr = 0.2;
    CHECK_THROWS_AS(m.validate(), InvalidArgument);
    m = diffusion_set();
    m.eta1 = 1.0;
    CHECK_THROWS_AS(m.validate(), InvalidArgument);
    m = diffusion_set();
    m.p_up = 1.0;
    CHECK_THROWS_AS(m.validate(), InvalidArgument);
}

TEST_CASE("characteristic function normalization and symmetry") {
    for (const auto& m : {diffusion_set(), jump_set()}) {
        CHECK(std::abs(log_cf(m, 1.0, 0.0)) <= 1e-15);
        CHECK(std::abs(log_cf(m, 1.0, cplx(0.0, -1.0)).real() - std::log(m.spot)) <= 1e-12);
        for (cplx u : {cplx(0.7, 0.0), cplx(3.0, -0.4), cplx(12.0, 0.5)}) {
            const cplx a = log_cf(m, 1.0, -std::conj(u));
            const cplx b = std::conj(log_cf(m, 1.0, u));
            CHECK(std::abs(std::exp(a) - std::exp(b)) <= 1e-14);
        }
    }
}

TEST_CASE("characteristic function matches the Riccati ODE and stays on its branch") {
    auto m = diffusion_set();
    m.rate = 0.02;
    m.spot = 3.0;
    for (double t : {0.25, 1.0, 4.0}) {
        for (cplx u : {cplx(0.5, -0.5), cplx(5.0, -2.0), cplx(20.0, 0.5), cplx(40.0, -3.0)}) {
            CAPTURE(t);
            CAPTURE(u);
            const cplx closed = log_cf(m, t, u);
            const cplx ode = riccati_cf(m, t, u);
            CHECK(std::abs(closed - ode) <= 1e-8 * std::max(1.0, std::abs(ode)));
        }
    }
}

TEST_CASE("Black-Scholes degeneration of the transform") {
    const auto m = near_bs();
    const cplx u(1.3, -0.5);
    const cplx iu = cplx(0.0, 1.0) * u;
    const cplx bs = iu * std::log(m.spot) - 0.5 * m.v0 * (iu + u * u);
    CHECK(std::abs(log_cf(m, 1.0, u) - bs) <= 1e-6);
}

TEST_CASE("moments outside the strip are rejected") {
    const auto m = jump_set();
    CHECK_THROWS_AS(log_cf(m, 1.0, cplx(1.0, -3.5)), OutsideStrip);
    CHECK_THROWS_AS(log_cf(m, 1.0, cplx(1.0, 3.5)), OutsideStrip);
    const auto d = diffusion_set();
    CHECK_THROWS_AS(log_cf(d, 1.0, cplx(0.0, -7.5)), OutsideStrip);
    CHECK_NOTHROW(log_cf(d, 1.0, cplx(0.0, -6.5)));
}

TEST_CASE("explosion order matches the closed-form explosion time") {
    for (auto m : {diffusion_set(), jump_set()}) {
        m.lambda = 0.0;
        const double right = heston_explosion_order_right(m, 1.0);
        const double left = heston_explosion_order_left(m, 1.0);
        CAPTURE(right);
        CAPTURE(left);
        CHECK(right > 2.0);
        CHECK(left < 0.0);
        CHECK(explosion_time(m, right + 2e-4) < 1.0);
        CHECK(explosion_time(m, right - 2e-4) > 1.0);
        CHECK(explosion_time(m, left - 2e-4) < 1.0);
        CHECK(explosion_time(m, left + 2e-4) > 1.0);
        CHECK(heston_moment_explodes(m, 1.0, right + 1e-2));
        CHECK_FALSE(heston_moment_explodes(m, 1.0, right - 1e-2));
        CHECK(critical_moment_right(m, 1.0) == doctest::Approx(right - 1.0));
        CHECK(critical_moment_left(m, 1.0) == doctest::Approx(-left));
    }
}

TEST_CASE("critical moment is the smaller of the jump and diffusion bounds") {
    auto m = diffusion_set();
    const double diffusion = heston_explosion_order_right(m, 1.0) - 1.0;
    for (double eta1 : {20.0, 40.0}) {
        m.eta1 = eta1;
        CHECK(critical_moment_right(m, 1.0) == doctest::Approx(diffusion).epsilon(1e-12));
    }
    for (double eta1 : {3.0, 5.0}) {
        m.eta1 = eta1;
        CHECK(critical_moment_right(m, 1.0) == doctest::Approx(eta1 - 1.0).epsilon(1e-12));
    }
    m.eta1 = 1.0001;
    CHECK(critical_moment_right(m, 1.0) == doctest::Approx(1e-4).epsilon(1e-6));
    m = diffusion_set();
    m.eta2 = 1.5;
    CHECK(critical_moment_left(m, 1.0) == doctest::Approx(1.5).epsilon(1e-12));
    const auto j = jump_set();
    CHECK(critical_moment_right(j, 1.0) == doctest::Approx(2.0));
    CHECK(critical_moment_left(j, 1.0) == doctest::Approx(3.0));
}

TEST_CASE("Fourier prices degenerate to Black-Scholes") {
    const auto m = near_bs();
    const MarketSetup s{100.0, 0.0, 1.0};
    for (double k : {50.0, 80.0, 100.0, 120.0, 200.0}) {
        CHECK(std::abs(price_call_cf(m, 1.0, k) - bs_call_price(s, k, 0.2)) <= 1e-6 * 100.0);
        CHECK(std::abs(price_put_cf(m, 1.0, k) - bs_put_price(s, k, 0.2)) <= 1e-6 * 100.0);
    }
}

TEST_CASE("Fourier prices: limits, parity and convexity") {
    auto m = diffusion_set();
    m.spot = 100.0;
    m.rate = 0.02;
    const HestonKouPricer p(m, 1.0);
    CHECK(p.call(1e-6) == doctest::Approx(100.0).epsilon(1e-8));
    const double f = p.setup().forward();
    CHECK(std::abs(p.call(f) - p.put(f)) <= 1e-10 * 100.0);
    const auto grid = geometric_grid(30.0, 400.0, 60);
    std::vector<double> c;
    for (double k : grid) c.push_back(p.call(k));
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        const double left = (c[i] - c[i - 1]) / (grid[i] - grid[i - 1]);
        const double right = (c[i + 1] - c[i]) / (grid[i + 1] - grid[i]);
        CHECK(right >= left - 1e-12);
        CHECK(left <= 0.0);
    }
}

TEST_CASE("martingale point") {
    for (auto m : {diffusion_set(), jump_set()}) {
        m.spot = 100.0;
        m.rate = 0.03;
        const double mean = std::exp(log_cf(m, 2.0, cplx(0.0, -1.0)).real());
        CHECK(mean == doctest::Approx(100.0 * std::exp(0.06)).epsilon(1e-12));
        // E[X_T] = call at a vanishing strike, undiscounted
        const HestonKouPricer p(m, 2.0);
        CHECK(p.call(1e-8) * std::exp(0.06) == doctest::Approx(100.0 * std::exp(0.06)).epsilon(1e-6));
    }
}

TEST_CASE("measured call decay tracks the critical moment") {
    const auto m = jump_set();
    const HestonKouPricer p(m, 1.0);
    const auto fit = limit_slope_right(p.call_curve(), geometric_grid(std::exp(2.0), std::exp(8.0), 60));
    CHECK(fit.extrapolated == doctest::Approx(p.p_tilde()).epsilon(0.05));
}

TEST_CASE("wing slopes are close to psi of the critical moments") {
    const auto m = jump_set();
    const HestonKouPricer p(m, 1.0);
    const auto right = wing_slope_measured(m, 1.0, OptionSide::Call, geometric_grid(std::exp(4.0), std::exp(8.0), 24));
    const auto left = wing_slope_measured(m, 1.0, OptionSide::Put, geometric_grid(std::exp(-8.0), std::exp(-4.0), 24));
    CHECK(right.failures == 0);
    CHECK(left.failures == 0);
    CHECK(right.last == doctest::Approx(psi(p.p_tilde())).epsilon(0.1));
    CHECK(left.last == doctest::Approx(psi(p.q_tilde())).epsilon(0.1));
}
