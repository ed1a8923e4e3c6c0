#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <random>

#include "doctest.h"
#include "wingvol/errors.hpp"
#include "wingvol/special_functions.hpp"

using namespace wingvol;

TEST_CASE("scaled Bessel I against high-precision values") {
    struct Case {
        double order, x, expected;
    };
    // mpmath, 50 digits
    const Case cases[] = {
        {2.0, 50.0, 0.054321901691738377},     {0.5, 1.0, 0.34495131388824463},
        {1.5, 7.3, 0.12742850448335774},       {3.25, 0.2, 5.5701356062040956e-5},
        {0.8, 120.0, 0.036358901248827839},    {2.0, 30.5, 0.067860781494696322},
        {10.5, 45.0, 0.017377815415403789},
    };
    for (const auto& c : cases) {
        CAPTURE(c.order);
        CAPTURE(c.x);
        CHECK(bessel_i_scaled(c.order, c.x) == doctest::Approx(c.expected).epsilon(1e-12));
    }
}

TEST_CASE("scaled Bessel I against Boost on both sides of the switchover") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> order(0.05, 6.0), arg(0.01, 600.0);
    for (int i = 0; i < 500; ++i) {
        const double a = order(rng), x = arg(rng);
        const double ref = boost::math::cyl_bessel_i(a, x) * std::exp(-x);
        CAPTURE(a);
        CAPTURE(x);
        CHECK(bessel_i_scaled(a, x) == doctest::Approx(ref).epsilon(1e-10));
    }
    for (double x : {29.5, 29.999, 30.0, 30.001, 31.0}) {
        const double ref = boost::math::cyl_bessel_i(2.0, x) * std::exp(-x);
        CHECK(bessel_i_scaled(2.0, x) == doctest::Approx(ref).epsilon(1e-10));
    }
}

TEST_CASE("half-integer order closed form") {
    for (double x : {1.0, 10.0, 35.0}) {
        const double closed = std::sqrt(2.0 / (M_PI * x)) * std::sinh(x) * std::exp(-x);
        CHECK(bessel_i_scaled(0.5, x) == doctest::Approx(closed).epsilon(1e-12));
    }
}

TEST_CASE("Bessel limiting forms") {
    CHECK(bessel_i_scaled(1.0, 1e-8) == doctest::Approx(0.5e-8).epsilon(1e-7));
    CHECK(bessel_i_scaled(1.5, 1e6) * std::sqrt(2 * M_PI * 1e6) == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(bessel_i_scaled(2.0, 0.0) == 0.0);
    CHECK(log_bessel_i_scaled(40.0, 1e-3) < -400.0);
    CHECK(std::isfinite(log_bessel_i_scaled(40.0, 1e-3)));
    CHECK_THROWS_AS(bessel_i_scaled(-1.0, 2.0), UnsupportedOrder);
    CHECK_THROWS_AS(bessel_i_scaled(0.5, -1.0), InvalidArgument);
}

TEST_CASE("regularized incomplete gamma against high-precision values") {
    struct Case {
        double shape, y, p, log_q;
    };
    // mpmath, 50 digits
    const Case cases[] = {
        {1.0, 0.5, 0.39346934028736658, -0.5},
        {2.5, 1.7, 0.36143007689620491, -0.44852409798819304},
        {0.6, 10.0, 0.99998829308442163, -11.355330815702366},
        {2.0, 80.0, 1.0, -75.605550845327561},
        {3.7, 2.2, 0.22976730879644323, -0.26106261341827742},
    };
    for (const auto& c : cases) {
        CAPTURE(c.shape);
        CAPTURE(c.y);
        CHECK(reg_lower_gamma(c.shape, c.y) == doctest::Approx(c.p).epsilon(1e-13));
        CHECK(log_reg_upper_gamma(c.shape, c.y) == doctest::Approx(c.log_q).epsilon(1e-12));
    }
}

TEST_CASE("incomplete gamma against Boost and elementary forms") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> shape(0.05, 20.0), arg(0.0, 60.0);
    for (int i = 0; i < 500; ++i) {
        const double a = shape(rng), y = arg(rng);
        CAPTURE(a);
        CAPTURE(y);
        CHECK(reg_lower_gamma(a, y) == doctest::Approx(boost::math::gamma_p(a, y)).epsilon(1e-12));
        const double q = boost::math::gamma_q(a, y);
        if (q > 1e-300) CHECK(log_reg_upper_gamma(a, y) == doctest::Approx(std::log(q)).epsilon(1e-11));
    }
    for (double y : {0.1, 1.0, 5.0, 40.0}) CHECK(reg_lower_gamma(1.0, y) == doctest::Approx(-std::expm1(-y)));
    CHECK(reg_lower_gamma(2.0, 0.0) == 0.0);
    CHECK(log_reg_upper_gamma(1.0, 3200.0) == doctest::Approx(-3200.0).epsilon(1e-14));
}

TEST_CASE("incomplete gamma is increasing in its argument") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> shape(0.1, 10.0);
    for (int i = 0; i < 50; ++i) {
        const double a = shape(rng);
        double prev = 0.0;
        for (double y = 0.05; y < 50.0; y *= 1.3) {
            const double p = reg_lower_gamma(a, y);
            CHECK(p >= prev);
            CHECK(p <= 1.0);
            prev = p;
        }
    }
}
