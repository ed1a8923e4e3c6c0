#include "wingvol/black_scholes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "wingvol/errors.hpp"

namespace wingvol {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kInvSqrtPi = 0.56418958354775628695;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

// Continued fraction of erfcx, used where exp(x^2) * erfc(x) underflows in erfc.
double erfcx_continued_fraction(double x) {
    double tail = x;
    for (int k = 60; k >= 1; --k) tail = x + 0.5 * k / tail;
    return kInvSqrtPi / tail;
}

// Normalized out-of-the-money Black value for a = |log(F/K)| and total vol s,
// returned as log b together with the erfcx difference used for the derivative.
struct NormalizedValue {
    double log_b;
    double dlogb_ds;
};

NormalizedValue normalized_otm(double a, double s) {
    const double h = -a / s;
    const double t = 0.5 * s;
    const double z1 = -(h + t) / kSqrt2;
    const double z2 = -(h - t) / kSqrt2;
    const double gauss_exponent = -0.5 * (h * h + t * t);
    if (z1 >= -1.0) {
        const double diff = erfcx(z1) - erfcx(z2);
        const double log_b = gauss_exponent + std::log(0.5 * diff);
        const double dlogb_ds = 2.0 * kInvSqrt2Pi / diff;
        return {log_b, dlogb_ds};
    }
    // Large total vol: neither term is small, so the direct form is accurate.
    const double b = std::exp(-0.5 * a) * norm_cdf(h + t) - std::exp(0.5 * a) * norm_cdf(h - t);
    const double log_b = std::log(b);
    return {log_b, std::exp(gauss_exponent - log_b) * kInvSqrt2Pi};
}

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) throw InvalidArgument(std::string(name) + " must be finite");
}

void check_inputs(const MarketSetup& setup, double strike, double vol) {
    setup.validate();
    require_finite(strike, "strike");
    if (!(strike > 0.0)) throw InvalidArgument("strike must be positive");
    if (std::isnan(vol) || vol < 0.0) throw InvalidArgument("volatility must be non-negative");
}

}  // namespace

std::string_view to_string(OptionSide side) { return side == OptionSide::Call ? "call" : "put"; }

OptionSide parse_side(std::string_view text) {
    if (text == "call" || text == "C" || text == "c") return OptionSide::Call;
    if (text == "put" || text == "P" || text == "p") return OptionSide::Put;
    throw InvalidArgument("unknown option side '" + std::string(text) + "'");
}

double MarketSetup::discount() const { return std::exp(-rate * maturity); }

double MarketSetup::forward() const { return spot * std::exp(rate * maturity); }

void MarketSetup::validate() const {
    require_finite(spot, "spot");
    require_finite(rate, "rate");
    require_finite(maturity, "maturity");
    if (!(spot > 0.0)) throw InvalidArgument("spot must be positive");
    if (!(maturity > 0.0)) throw InvalidArgument("maturity must be positive");
    if (rate < 0.0) throw InvalidArgument("rate must be non-negative");
}

double norm_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double norm_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double erfcx(double x) {
    if (std::isnan(x)) return x;
    if (x < 0.0) {
        if (x < -26.6) return std::numeric_limits<double>::infinity();
        const double hi = x * x;
        const double lo = std::fma(x, x, -hi);
        return 2.0 * std::exp(hi) * std::exp(lo) - erfcx(-x);
    }
    if (x < 25.0) {
        const double hi = x * x;
        const double lo = std::fma(x, x, -hi);
        return std::exp(hi) * std::exp(lo) * std::erfc(x);
    }
    return erfcx_continued_fraction(x);
}

OptionSide otm_side(const MarketSetup& setup, double strike) {
    return strike >= setup.forward() ? OptionSide::Call : OptionSide::Put;
}

double bs_log_otm_price(const MarketSetup& setup, double strike, double vol) {
    check_inputs(setup, strike, vol);
    const double a = std::abs(std::log(setup.forward() / strike));
    const double log_scale = 0.5 * (std::log(setup.spot) + std::log(strike) - setup.rate * setup.maturity);
    if (vol == 0.0) return -std::numeric_limits<double>::infinity();
    const double s = vol * std::sqrt(setup.maturity);
    if (std::isinf(s)) return log_scale - 0.5 * a;
    return log_scale + normalized_otm(a, s).log_b;
}

double bs_call_price(const MarketSetup& setup, double strike, double vol) {
    check_inputs(setup, strike, vol);
    const double discounted_strike = strike * setup.discount();
    const double intrinsic = std::max(setup.spot - discounted_strike, 0.0);
    if (vol == 0.0) return intrinsic;
    if (std::isinf(vol)) return setup.spot;
    const double otm = std::exp(bs_log_otm_price(setup, strike, vol));
    return otm_side(setup, strike) == OptionSide::Call ? otm : otm + (setup.spot - discounted_strike);
}

double bs_put_price(const MarketSetup& setup, double strike, double vol) {
    check_inputs(setup, strike, vol);
    const double discounted_strike = strike * setup.discount();
    const double intrinsic = std::max(discounted_strike - setup.spot, 0.0);
    if (vol == 0.0) return intrinsic;
    if (std::isinf(vol)) return discounted_strike;
    const double otm = std::exp(bs_log_otm_price(setup, strike, vol));
    return otm_side(setup, strike) == OptionSide::Put ? otm : otm + (discounted_strike - setup.spot);
}

double bs_price(const MarketSetup& setup, double strike, double vol, OptionSide side) {
    return side == OptionSide::Call ? bs_call_price(setup, strike, vol) : bs_put_price(setup, strike, vol);
}

double bs_vega(const MarketSetup& setup, double strike, double vol) {
    check_inputs(setup, strike, vol);
    const double sqrt_t = std::sqrt(setup.maturity);
    const double s = vol * sqrt_t;
    if (s == 0.0) return 0.0;
    const double d1 = (std::log(setup.forward() / strike) + 0.5 * s * s) / s;
    return setup.spot * norm_pdf(d1) * sqrt_t;
}

double implied_vol_from_log_otm(const MarketSetup& setup, double strike, double log_otm_price,
                                const ImpliedVolOptions& options) {
    setup.validate();
    require_finite(strike, "strike");
    if (!(strike > 0.0)) throw InvalidArgument("strike must be positive");
    if (std::isnan(log_otm_price)) throw InvalidArgument("log price must not be NaN");
    const double a = std::abs(std::log(setup.forward() / strike));
    const double log_scale = 0.5 * (std::log(setup.spot) + std::log(strike) - setup.rate * setup.maturity);
    const double target = log_otm_price - log_scale;
    if (!(target < -0.5 * a) || std::isinf(target)) {
        throw PriceOutOfBounds("out-of-the-money price outside the open no-arbitrage interval");
    }

    const double sqrt_t = std::sqrt(setup.maturity);
    auto residual = [&](double s) { return normalized_otm(a, s); };

    double lo = options.lower * sqrt_t;
    double hi = options.upper * sqrt_t;
    for (int i = 0; i < 60 && residual(hi).log_b < target; ++i) hi *= 2.0;
    if (residual(hi).log_b < target) throw NoConvergence("cannot bracket implied volatility from above");
    for (int i = 0; i < 60 && residual(lo).log_b > target; ++i) lo *= 0.1;
    if (residual(lo).log_b > target) throw NoConvergence("cannot bracket implied volatility from below");

    double s = a > 0.0 ? std::sqrt(2.0 * a) : std::sqrt(lo * hi);
    if (!(s > lo && s < hi)) s = std::sqrt(lo * hi);
    for (int it = 0; it < options.max_iterations; ++it) {
        const NormalizedValue v = residual(s);
        const double f = v.log_b - target;
        if (f == 0.0) return s / sqrt_t;
        if (f < 0.0) lo = s; else hi = s;
        double next = s - f / v.dlogb_ds;
        if (!(next > lo && next < hi) || !std::isfinite(next)) next = std::sqrt(lo * hi);
        if (std::abs(next - s) <= 4.0 * std::numeric_limits<double>::epsilon() * s ||
            hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) {
            return next / sqrt_t;
        }
        s = next;
    }
    throw NoConvergence("implied volatility iteration budget exhausted");
}

double implied_vol(const MarketSetup& setup, const OptionQuote& quote, const ImpliedVolOptions& options) {
    setup.validate();
    require_finite(quote.strike, "strike");
    require_finite(quote.price, "price");
    if (!(quote.strike > 0.0)) throw InvalidArgument("strike must be positive");
    const double discounted_strike = quote.strike * setup.discount();
    double lower = 0.0;
    double upper = 0.0;
    if (quote.side == OptionSide::Call) {
        lower = std::max(setup.spot - discounted_strike, 0.0);
        upper = setup.spot;
    } else {
        lower = std::max(discounted_strike - setup.spot, 0.0);
        upper = discounted_strike;
    }
    if (!(quote.price > lower && quote.price < upper)) {
        throw PriceOutOfBounds("price " + std::to_string(quote.price) + " outside (" + std::to_string(lower) + ", " +
                               std::to_string(upper) + ")");
    }
    double otm = quote.price;
    if (otm_side(setup, quote.strike) != quote.side) {
        otm = quote.side == OptionSide::Call ? quote.price - (setup.spot - discounted_strike)
                                             : quote.price - (discounted_strike - setup.spot);
    }
    if (!(otm > 0.0)) throw PriceOutOfBounds("time value vanishes after parity");
    return implied_vol_from_log_otm(setup, quote.strike, std::log(otm), options);
}

}  // namespace wingvol
