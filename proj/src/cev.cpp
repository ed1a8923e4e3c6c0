#include "wingvol/cev.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wingvol/errors.hpp"
#include "wingvol/quadrature.hpp"
#include "wingvol/special_functions.hpp"

namespace wingvol {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(e^d - 1) for d >= 0.
double log_expm1(double d) { return d > 30.0 ? d + std::log1p(-std::exp(-d)) : std::log(std::expm1(d)); }

// log(1 - e^{-d}) for d >= 0.
double log_one_minus_exp(double d) { return d > 0.7 ? std::log1p(-std::exp(-d)) : std::log(-std::expm1(-d)); }

}  // namespace

void CevParams::validate() const {
    detail::require(spot > 0.0 && std::isfinite(spot), "CEV spot must be positive");
    detail::require(sigma > 0.0 && std::isfinite(sigma), "CEV sigma must be positive");
    detail::require(rho > 0.0 && rho < 1.0, "CEV elasticity rho must lie in (0, 1)");
}

double CevParams::nu() const { return -1.0 / (2.0 * (1.0 - rho)); }

double CevParams::dimension() const { return (1.0 - 2.0 * rho) / (1.0 - rho); }

double CevParams::x0() const {
    const double scale = sigma * (1.0 - rho);
    return std::pow(spot, 2.0 * (1.0 - rho)) / (scale * scale);
}

CevModel::CevModel(const CevParams& params, double maturity) : params_(params), maturity_(maturity) {
    params_.validate();
    detail::require(maturity > 0.0 && std::isfinite(maturity), "maturity must be positive");
    order_ = -params_.nu();
    x0_ = params_.x0();
    log_mass_ = log_reg_upper_gamma(order_, x0_ / (2.0 * maturity_));
}

double CevModel::mass_at_zero() const { return std::exp(log_mass_); }

double CevModel::stock_of(double x) const {
    const double scale = params_.sigma * (1.0 - params_.rho);
    return std::exp((std::log(x) + 2.0 * std::log(scale)) / (2.0 * (1.0 - params_.rho)));
}

double CevModel::x_of(double stock) const {
    const double scale = params_.sigma * (1.0 - params_.rho);
    return std::exp(2.0 * (1.0 - params_.rho) * std::log(stock) - 2.0 * std::log(scale));
}

double CevModel::log_bessq_density(double x) const { return log_bessq_density_root(std::sqrt(x)); }

double CevModel::log_bessq_density_root(double y) const {
    if (!(y > 0.0)) return kNegInf;
    const double t = maturity_;
    const double y0 = std::sqrt(x0_);
    const double root = y - y0;
    return -std::log(2.0 * t) + params_.nu() * (std::log(y) - std::log(y0)) - root * root / (2.0 * t) +
           log_bessel_i_scaled(order_, y0 * y / t);
}

double CevModel::log_density(double s) const {
    if (!(s > 0.0)) return kNegInf;
    const double one_minus = 1.0 - params_.rho;
    const double jacobian = std::log(2.0) + (1.0 - 2.0 * params_.rho) * std::log(s) -
                            std::log(params_.sigma * params_.sigma * one_minus);
    return log_bessq_density(x_of(s)) + jacobian;
}

double CevModel::density(double s) const { return std::exp(log_density(s)); }

double CevModel::log_integral(double lo, double hi, double center,
                              const std::function<double(double)>& log_weight) const {
    const double sqrt_t = std::sqrt(maturity_);
    const double y0 = std::sqrt(x0_);
    double width = 0.25 * sqrt_t;
    if (center <= lo || center >= hi) {
        const double gap = std::min(std::abs(y0 - lo), std::abs(y0 - hi));
        if (gap > 0.0) width = std::min(width, 0.5 * maturity_ / gap);
    }
    auto integrand = [this, &log_weight](double y) {
        if (!(y > 0.0)) return kNegInf;
        return std::log(2.0 * y) + log_bessq_density_root(y) + log_weight(y);
    };
    // Rounding in the exponent of a far-wing integrand limits the attainable accuracy.
    const double yc = std::clamp(center, lo, hi);
    const double exponent_size = std::abs(yc - y0) * (yc + y0) / maturity_ + std::abs(integrand(yc));
    QuadratureOptions q;
    q.rel_tol = std::max(1e-13, 64.0 * std::numeric_limits<double>::epsilon() * exponent_size);
    q.max_intervals = 4000;
    return integrate_log_around(integrand, lo, hi, center, width, q).log_value;
}

double CevModel::log_call(double strike) const {
    detail::require(strike > 0.0 && std::isfinite(strike), "strike must be positive");
    const double y_k = std::sqrt(x_of(strike));
    const double log_k = std::log(strike);
    const double inv = 1.0 / (1.0 - params_.rho);
    // log(S / K) measured from y_k so that it keeps full precision close to the strike.
    auto weight = [=](double y) {
        const double d = inv * std::log1p((y - y_k) / y_k);
        return d > 0.0 ? log_k + log_expm1(d) : kNegInf;
    };
    const double y0 = std::sqrt(x0_);
    return log_integral(y_k, std::numeric_limits<double>::infinity(), std::max(y0, y_k), weight);
}

double CevModel::log_put_continuous(double strike) const {
    detail::require(strike > 0.0 && std::isfinite(strike), "strike must be positive");
    const double y_k = std::sqrt(x_of(strike));
    const double log_k = std::log(strike);
    const double inv = 1.0 / (1.0 - params_.rho);
    auto weight = [=](double y) {
        const double d = -inv * std::log1p((y - y_k) / y_k);
        return d > 0.0 ? log_k + log_one_minus_exp(d) : kNegInf;
    };
    const double y0 = std::sqrt(x0_);
    return log_integral(0.0, y_k, std::min(y0, y_k), weight);
}

double CevModel::log_put(double strike) const {
    return log_add(std::log(strike) + log_mass_, log_put_continuous(strike));
}

double CevModel::call(double strike) const { return std::exp(log_call(strike)); }

double CevModel::put(double strike) const { return std::exp(log_put(strike)); }

PricingCurve CevModel::call_curve() const {
    const CevModel self = *this;
    return {OptionSide::Call, [self](double k) { return self.log_call(k); }};
}

PricingCurve CevModel::put_curve() const {
    const CevModel self = *this;
    return {OptionSide::Put, [self](double k) { return self.log_put(k); }};
}

DensityOracle CevModel::density_oracle() const {
    const CevModel self = *this;
    DensityOracle oracle;
    oracle.log_density = [self](double s) { return self.log_density(s); };
    oracle.atom_mass = mass_at_zero();
    const double local = params_.sigma * std::pow(params_.spot, params_.rho - 1.0) * std::sqrt(maturity_);
    oracle.log_width = std::clamp(local, 1e-3, 1.0);
    return oracle;
}

double CevModel::moment(double q) const {
    const double inv = 1.0 / (1.0 - params_.rho);
    const double log_scale = std::log(params_.sigma * (1.0 - params_.rho));
    auto weight = [=](double y) { return q * (std::log(y) + log_scale) * inv; };
    const double y0 = std::sqrt(x0_);
    return std::exp(log_integral(0.0, std::numeric_limits<double>::infinity(), y0, weight));
}

double cev_log_mass_at_zero(const CevParams& params, double maturity) {
    return CevModel(params, maturity).log_mass_at_zero();
}

double cev_mass_at_zero(const CevParams& params, double maturity) {
    return CevModel(params, maturity).mass_at_zero();
}

double cev_density(const CevParams& params, double maturity, double stock) {
    return CevModel(params, maturity).density(stock);
}

double cev_call(const CevParams& params, double maturity, double strike) {
    return CevModel(params, maturity).call(strike);
}

double cev_put(const CevParams& params, double maturity, double strike) {
    return CevModel(params, maturity).put(strike);
}

double cev_log_inv_call_asymptote(const CevParams& params, double maturity, double strike) {
    params.validate();
    detail::require(maturity > 0.0, "maturity must be positive");
    detail::require(strike > 0.0, "strike must be positive");
    const double one_minus = 1.0 - params.rho;
    const double denom = maturity * params.sigma * params.sigma * one_minus * one_minus;
    const double kp = std::pow(strike, one_minus);
    return kp * kp / (2.0 * denom) - std::pow(params.spot, one_minus) * kp / denom -
           0.5 * (5.0 * params.rho - 4.0) * std::log(strike);
}

double cev_call_asymptote(const CevParams& params, double maturity, double strike) {
    return std::exp(-cev_log_inv_call_asymptote(params, maturity, strike));
}

double cev_iv_right_asym(const CevParams& params, double maturity, double strike) {
    params.validate();
    detail::require(maturity > 0.0, "maturity must be positive");
    if (!(strike > 1.0)) throw DomainError("right-wing CEV asymptote needs K > 1");
    const double one_minus = 1.0 - params.rho;
    return params.sigma * one_minus * std::log(strike) / std::pow(strike, one_minus);
}

double cev_iv_left_asym(const CevParams& params, double maturity, double strike, bool with_loglog) {
    params.validate();
    detail::require(maturity > 0.0, "maturity must be positive");
    detail::require(strike > 0.0, "strike must be positive");
    const double l = -std::log(strike);
    if (!(l > 1.0)) throw DomainError("left-wing CEV asymptote needs log(1/K) > 1");
    const double shift = with_loglog ? 0.5 * std::log(l) : 0.0;
    const double outer = (3.0 - 2.0 * params.rho) * l - shift;
    const double inner = (2.0 - 2.0 * params.rho) * l - shift;
    return std::sqrt(2.0 / maturity) * l / (std::sqrt(outer) + std::sqrt(inner));
}

}  // namespace wingvol
