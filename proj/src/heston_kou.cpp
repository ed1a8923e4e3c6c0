#include "wingvol/heston_kou.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wingvol/errors.hpp"
#include "wingvol/quadrature.hpp"

namespace wingvol {

namespace {

using cplx = std::complex<double>;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.14159265358979323846;
constexpr double kBlowUp = 1e12;
constexpr double kOrderTol = 1e-4;
constexpr double kOrderCap = 1e4;
constexpr double kDampingCap = 200.0;

// log(1 + z) that keeps relative accuracy for small complex z.
cplx log1p_c(cplx z) {
    const cplx w = 1.0 + z;
    if (w == 1.0) return z;
    return std::log(w) * z / (w - 1.0);
}

// Closed form without the strip check. The small-trap arrangement keeps the
// logarithm on its principal branch, and beta - d is formed as a quotient so
// that the coefficients stay accurate as the vol of vol goes to zero.
cplx log_cf_unchecked(const HestonKouParams& m, double t, cplx u) {
    const cplx i(0.0, 1.0);
    const double xi2 = m.volvol * m.volvol;
    const cplx iu = i * u;
    const cplx beta = m.kappa - m.corr * m.volvol * iu;
    const cplx d = std::sqrt(beta * beta + xi2 * (iu + u * u));
    const cplx scaled = -(iu + u * u) / (beta + d);
    const cplx g = xi2 * scaled / (beta + d);
    const cplx e = std::exp(-d * t);
    const cplx a = m.kappa * m.theta * (scaled * t - 2.0 * log1p_c(g * (1.0 - e) / (1.0 - g)) / xi2);
    const cplx b = scaled * (1.0 - e) / (1.0 - g * e);
    cplx jumps = 0.0;
    if (m.lambda > 0.0) {
        const cplx phi = m.p_up * m.eta1 / (m.eta1 - iu) + m.q_down() * m.eta2 / (m.eta2 + iu);
        jumps = m.lambda * t * (phi - 1.0);
    }
    return iu * (std::log(m.spot) + martingale_drift(m) * t) + a + b * m.v0 + jumps;
}

// Riccati right-hand side for the variance coefficient at real moment order s.
double riccati(const HestonKouParams& m, double s, double b) {
    return 0.5 * m.volvol * m.volvol * b * b + (m.corr * m.volvol * s - m.kappa) * b + 0.5 * (s * s - s);
}

double rk4_step(const HestonKouParams& m, double s, double b, double h) {
    const double k1 = riccati(m, s, b);
    const double k2 = riccati(m, s, b + 0.5 * h * k1);
    const double k3 = riccati(m, s, b + 0.5 * h * k2);
    const double k4 = riccati(m, s, b + h * k3);
    return b + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Smallest order in the direction of `step` whose moment explodes, by doubling
// then bisection. `start` must not explode.
double explosion_order(const HestonKouParams& m, double t, double start, double step) {
    double good = start;
    double bad = kInf;
    for (double s = start + step; std::abs(s) <= kOrderCap; step *= 2.0, s = start + step) {
        if (heston_moment_explodes(m, t, s)) {
            bad = s;
            break;
        }
        good = s;
    }
    if (!std::isfinite(bad)) return step > 0.0 ? kInf : -kInf;
    while (std::abs(bad - good) > kOrderTol) {
        const double mid = 0.5 * (good + bad);
        (heston_moment_explodes(m, t, mid) ? bad : good) = mid;
    }
    return 0.5 * (good + bad);
}

}  // namespace

void HestonKouParams::validate() const {
    detail::require(spot > 0.0 && std::isfinite(spot), "spot must be positive");
    detail::require(rate >= 0.0 && std::isfinite(rate), "rate must be non-negative");
    detail::require(v0 > 0.0 && std::isfinite(v0), "initial variance must be positive");
    detail::require(kappa > 0.0 && std::isfinite(kappa), "mean-reversion speed must be positive");
    detail::require(theta > 0.0 && std::isfinite(theta), "long-run variance must be positive");
    detail::require(volvol > 0.0 && std::isfinite(volvol), "vol of vol must be positive");
    detail::require(corr >= -1.0 && corr <= 0.0, "correlation must lie in [-1, 0]");
    detail::require(lambda >= 0.0 && std::isfinite(lambda), "jump intensity must be non-negative");
    detail::require(p_up > 0.0 && p_up < 1.0, "up-jump probability must lie in (0, 1)");
    detail::require(eta1 > 1.0 && std::isfinite(eta1), "up-jump rate must exceed 1");
    detail::require(eta2 > 0.0 && std::isfinite(eta2), "down-jump rate must be positive");
}

double kou_eta(const HestonKouParams& params) {
    params.validate();
    return params.p_up / (params.eta1 - 1.0) - params.q_down() / (params.eta2 + 1.0);
}

double kou_eta_quadrature(const HestonKouParams& params) {
    params.validate();
    const double log_up = std::log(params.p_up * params.eta1);
    const double log_down = std::log(params.q_down() * params.eta2);
    auto up = [&](double u) { return log_up + (1.0 - params.eta1) * u; };
    auto down = [&](double u) { return log_down + (1.0 + params.eta2) * u; };
    const double up_part = integrate_log_around(up, 0.0, kInf, 0.0, 1.0 / (params.eta1 - 1.0)).log_value;
    const double down_part = integrate_log_around(down, -kInf, 0.0, 0.0, 1.0 / (params.eta2 + 1.0)).log_value;
    return std::expm1(log_add(up_part, down_part));
}

double martingale_drift(const HestonKouParams& params) {
    return params.rate - params.lambda * (params.lambda > 0.0 ? kou_eta(params) : 0.0);
}

bool heston_moment_explodes(const HestonKouParams& params, double maturity, double s) {
    params.validate();
    detail::require(maturity > 0.0 && std::isfinite(maturity), "maturity must be positive");
    double t = 0.0;
    double b = 0.0;
    double h = maturity / 64.0;
    constexpr double tol = 1e-10;
    for (int iter = 0; iter < 1000000; ++iter) {
        if (t >= maturity) return false;
        h = std::min(h, maturity - t);
        const double full = rk4_step(params, s, b, h);
        const double half = rk4_step(params, s, rk4_step(params, s, b, 0.5 * h), 0.5 * h);
        const double err = std::abs(full - half);
        const double scale = tol * std::max(1.0, std::abs(half));
        if (!std::isfinite(half) || std::abs(half) > kBlowUp) {
            if (h < 1e-15 * maturity) return true;
            h *= 0.5;
            continue;
        }
        if (err > scale && h > 1e-15 * maturity) {
            h *= 0.5;
            continue;
        }
        t += h;
        b = half;
        if (err < scale / 32.0) h *= 2.0;
    }
    throw NoConvergence("variance Riccati integration exceeded its step budget");
}

double heston_explosion_order_right(const HestonKouParams& params, double maturity) {
    return explosion_order(params, maturity, 1.0, 1.0);
}

double heston_explosion_order_left(const HestonKouParams& params, double maturity) {
    return explosion_order(params, maturity, 0.0, -1.0);
}

double critical_moment_right(const HestonKouParams& params, double maturity) {
    double s = heston_explosion_order_right(params, maturity);
    if (params.lambda > 0.0) s = std::min(s, params.eta1);
    return s - 1.0;
}

double critical_moment_left(const HestonKouParams& params, double maturity) {
    double q = -heston_explosion_order_left(params, maturity);
    if (params.lambda > 0.0) q = std::min(q, params.eta2);
    return q;
}

std::complex<double> log_cf(const HestonKouParams& params, double maturity, std::complex<double> u) {
    params.validate();
    detail::require(maturity > 0.0 && std::isfinite(maturity), "maturity must be positive");
    const double s = -u.imag();
    if (params.lambda > 0.0 && (s >= params.eta1 || s <= -params.eta2)) {
        throw OutsideStrip("moment order beyond the jump-size strip");
    }
    if ((s < 0.0 || s > 1.0) && heston_moment_explodes(params, maturity, s)) {
        throw OutsideStrip("moment order beyond the variance explosion bound");
    }
    return log_cf_unchecked(params, maturity, u);
}

HestonKouPricer::HestonKouPricer(const HestonKouParams& params, double maturity)
    : params_(params), maturity_(maturity) {
    params_.validate();
    detail::require(maturity > 0.0 && std::isfinite(maturity), "maturity must be positive");
    p_tilde_ = critical_moment_right(params_, maturity_);
    q_tilde_ = critical_moment_left(params_, maturity_);
}

double HestonKouPricer::log_damped(double strike, double alpha) const {
    const double k = std::log(strike);
    const double t = maturity_;
    const cplx shift_arg(0.0, -(alpha + 1.0));
    const double shift = log_cf_unchecked(params_, t, shift_arg).real();
    auto integrand = [&](double v) {
        const cplx num = log_cf_unchecked(params_, t, cplx(v, -(alpha + 1.0))) - shift - cplx(0.0, v * k);
        const cplx den(alpha * alpha + alpha - v * v, (2.0 * alpha + 1.0) * v);
        return (std::exp(num) / den).real();
    };
    const double scale = std::abs(integrand(0.0));
    QuadratureOptions q;
    q.rel_tol = 1e-12;
    q.abs_tol = 1e-16 * scale;
    q.max_intervals = 4000;
    double total = 0.0;
    double edge = 0.0;
    double h = std::min(1.0, 0.5 / std::max(std::abs(k), 1.0) + 0.25);
    for (int panel = 0; panel < 2000; ++panel) {
        const double next = edge + h;
        total += integrate(integrand, edge, next, q).value;
        double envelope = 0.0;
        for (int j = 0; j <= 8; ++j) envelope = std::max(envelope, std::abs(integrand(edge + h * j / 8.0)));
        if (envelope * h < 1e-15 * std::max(std::abs(total), 1e-3 * scale)) {
            if (!(total > 0.0)) throw QuadratureFailure("Fourier price is not positive at this strike");
            return -params_.rate * t - alpha * k + shift + std::log(total / kPi);
        }
        edge = next;
        h *= 1.3;
    }
    throw QuadratureFailure("Fourier integrand did not decay");
}

namespace {

// Damping that minimizes the bound e^{-alpha k} E[X^{alpha+1}], i.e. the size
// of the Fourier integrand relative to the price.
double saddle_damping(const HestonKouParams& m, double t, double k, double lo, double hi) {
    auto bound = [&](double a) { return -a * k + log_cf_unchecked(m, t, cplx(0.0, -(a + 1.0))).real(); };
    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - ratio * (b - a), d = a + ratio * (b - a);
    double fc = bound(c), fd = bound(d);
    for (int iter = 0; iter < 80 && b - a > 1e-6; ++iter) {
        if (!(fc <= fd) && std::isfinite(fd)) {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = bound(d);
        } else {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = bound(c);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

double HestonKouPricer::log_call(double strike) const {
    detail::require(strike > 0.0 && std::isfinite(strike), "strike must be positive");
    const MarketSetup s = setup();
    if (strike < s.forward()) return std::log(put(strike) + s.spot - strike * s.discount());
    const double hi = std::min(0.995 * p_tilde_, kDampingCap);
    if (!(hi > 0.0)) throw OutsideStrip("no damping available inside the right moment strip");
    const double lo = std::min(1e-3, 0.5 * hi);
    const double k = std::log(strike);
    return log_damped(strike, saddle_damping(params_, maturity_, k, lo, hi));
}

double HestonKouPricer::log_put(double strike) const {
    detail::require(strike > 0.0 && std::isfinite(strike), "strike must be positive");
    const MarketSetup s = setup();
    if (strike > s.forward()) return std::log(call(strike) - s.spot + strike * s.discount());
    const double width = std::min(0.995 * q_tilde_, kDampingCap);
    if (!(width > 0.0)) throw OutsideStrip("no damping available inside the left moment strip");
    const double k = std::log(strike);
    const double lo = -1.0 - width;
    const double hi = -1.0 - std::min(1e-3, 0.5 * width);
    return log_damped(strike, saddle_damping(params_, maturity_, k, lo, hi));
}

double HestonKouPricer::call(double strike) const { return std::exp(log_call(strike)); }

double HestonKouPricer::put(double strike) const { return std::exp(log_put(strike)); }

PricingCurve HestonKouPricer::call_curve() const {
    const HestonKouPricer self = *this;
    return {OptionSide::Call, [self](double k) { return self.log_call(k); }};
}

PricingCurve HestonKouPricer::put_curve() const {
    const HestonKouPricer self = *this;
    return {OptionSide::Put, [self](double k) { return self.log_put(k); }};
}

double price_call_cf(const HestonKouParams& params, double maturity, double strike) {
    return HestonKouPricer(params, maturity).call(strike);
}

double price_put_cf(const HestonKouParams& params, double maturity, double strike) {
    return HestonKouPricer(params, maturity).put(strike);
}

WingSlopeFit wing_slope_measured(const HestonKouParams& params, double maturity, OptionSide side,
                                 const std::vector<double>& grid) {
    const HestonKouPricer pricer(params, maturity);
    const PricingCurve curve = side == OptionSide::Call ? pricer.call_curve() : pricer.put_curve();
    return measure_wing_slope(pricer.setup(), curve, grid);
}

}  // namespace wingvol
