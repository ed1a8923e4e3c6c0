#include "wingvol/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wingvol/detail/parallel.hpp"
#include "wingvol/errors.hpp"
#include "wingvol/quadrature.hpp"

namespace wingvol {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kTruncation = 1e-12;
// |log x| beyond which x leaves the double range.
constexpr double kLogRange = 700.0;

// Integrates exp(f(u)) over one direction from `start`, panels widening geometrically.
double march(const std::function<double(double)>& f, double start, double width, int direction, double log_total) {
    QuadratureOptions q;
    q.rel_tol = 1e-13;
    q.max_intervals = 4000;
    double acc = kNegInf;
    double edge = start;
    double h = width;
    double previous = kNegInf;
    int growing = 0;
    for (int step = 0; step < 400; ++step) {
        const double next = edge + direction * h;
        if (std::abs(next) > kLogRange) {
            throw DivergentMoment("moment integrand has not decayed within the double range");
        }
        const double piece = integrate_log(f, std::min(edge, next), std::max(edge, next), q).log_value;
        acc = log_add(acc, piece);
        const double reference = log_add(log_total, acc);
        if (piece < reference + std::log(kTruncation) && step > 0) return acc;
        growing = piece > previous + 1e-9 ? growing + 1 : 0;
        if (growing > 40) throw DivergentMoment("moment integrand keeps growing in the tail");
        previous = piece;
        edge = next;
        h *= 1.25;
    }
    throw DivergentMoment("moment integral did not settle within the panel budget");
}

}  // namespace

double eta_T(const MarketSetup& setup, double strike) {
    setup.validate();
    detail::require(strike > 0.0 && std::isfinite(strike), "strike must be positive");
    const double f = setup.forward();
    return f * (f / strike);
}

SymmetricCurve symmetric_call(const PricingCurve& put_curve, const MarketSetup& setup) {
    if (put_curve.side != OptionSide::Put) throw WrongSide("symmetric call needs a put curve");
    setup.validate();
    const double log_f = std::log(setup.forward());
    PricingCurve g{OptionSide::Call, [put_curve, setup, log_f](double k) {
                       return std::log(k) - log_f + put_curve.log_price(eta_T(setup, k));
                   }};
    return {setup, put_curve, g};
}

PricingCurve symmetric_put(const PricingCurve& call_curve, const MarketSetup& setup) {
    if (call_curve.side != OptionSide::Call) throw WrongSide("symmetric put needs a call curve");
    setup.validate();
    const double log_f = std::log(setup.forward());
    return {OptionSide::Put, [call_curve, setup, log_f](double k) {
                return std::log(k) - log_f + call_curve.log_price(eta_T(setup, k));
            }};
}

PricingCurve parity_put(const PricingCurve& call_curve, const MarketSetup& setup) {
    if (call_curve.side != OptionSide::Call) throw WrongSide("parity put needs a call curve");
    setup.validate();
    return {OptionSide::Put, [call_curve, setup](double k) {
                return std::log(call_curve.price(k) - setup.spot + k * setup.discount());
            }};
}

std::function<double(double)> otm_iv_function(const PricingCurve& call_curve, const PricingCurve& put_curve,
                                              const MarketSetup& setup) {
    if (call_curve.side != OptionSide::Call || put_curve.side != OptionSide::Put) {
        throw WrongSide("need a call curve and a put curve");
    }
    return [call_curve, put_curve, setup](double k) {
        const PricingCurve& c = otm_side(setup, k) == OptionSide::Call ? call_curve : put_curve;
        return implied_vol_from_log_otm(setup, k, c.log_price(k));
    };
}

std::function<double(double)> symmetric_iv_function(const PricingCurve& call_curve, const PricingCurve& put_curve,
                                                    const MarketSetup& setup) {
    const SymmetricCurve g = symmetric_call(put_curve, setup);
    const PricingCurve g_put = symmetric_put(call_curve, setup);
    return otm_iv_function(g.transformed, g_put, setup);
}

double iv_symmetry_check(const std::function<double(double)>& iv_c, const std::function<double(double)>& iv_g,
                         const MarketSetup& setup, const std::vector<double>& grid) {
    std::vector<double> dev(grid.size());
    detail::parallel_for(grid.size(),
                         [&](std::size_t i) { dev[i] = std::abs(iv_c(grid[i]) - iv_g(eta_T(setup, grid[i]))); });
    double worst = 0.0;
    for (double d : dev) worst = std::max(worst, d);
    return worst;
}

double log_moment(const std::function<double(double)>& log_density, double q, double center, double log_width) {
    detail::require(log_width > 0.0, "log width must be positive");
    auto integrand = [&](double u) { return (q + 1.0) * u + log_density(std::exp(u)); };
    // Locate the mode of the integrand near the center.
    double best_u = center;
    double best = integrand(center);
    for (int i = -400; i <= 400; ++i) {
        const double u = center + i * log_width * 0.05;
        const double v = integrand(u);
        if (v > best) {
            best = v;
            best_u = u;
        }
    }
    if (!std::isfinite(best)) throw DivergentMoment("moment integrand is not finite near its mode");
    const double right = march(integrand, best_u, log_width, +1, kNegInf);
    const double left = march(integrand, best_u, log_width, -1, right);
    return log_add(left, right);
}

MomentDuality moment_dual_check(const DensityOracle& oracle, double p, const MarketSetup& setup) {
    detail::require(p != 0.0 && std::isfinite(p), "moment order must be finite and non-zero");
    setup.validate();
    if (p > 1.0 && oracle.atom_mass > 0.0) {
        throw DivergentMoment("negative moment of a law with an atom at zero is infinite");
    }
    const double f = setup.forward();
    const double log_f = std::log(f);
    auto reflected = [&](double x) {
        return 3.0 * log_f - 3.0 * std::log(x) + oracle.log_density(eta_T(setup, x));
    };
    const double lhs = std::exp(log_moment(reflected, p, log_f, oracle.log_width));
    const double rhs = std::exp((2.0 * p - 1.0) * log_f + log_moment(oracle.log_density, 1.0 - p, log_f, oracle.log_width));
    return {lhs, rhs, std::abs(lhs - rhs) / std::abs(rhs)};
}

}  // namespace wingvol
