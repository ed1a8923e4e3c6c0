#pragma once

#include "wingvol/black_scholes.hpp"
#include "wingvol/grid.hpp"
#include "wingvol/symmetry.hpp"

namespace wingvol {

/// dS = sigma S^rho dW with absorption at zero, zero rate.
struct CevParams {
    double spot = 1.0;
    double sigma = 0.25;
    double rho = 0.5;

    /// Throws InvalidArgument unless spot > 0, sigma > 0 and 0 < rho < 1.
    void validate() const;
    /// Index of the squared Bessel process, -1 / (2(1 - rho)).
    double nu() const;
    /// Dimension (1 - 2 rho) / (1 - rho).
    double dimension() const;
    /// Starting point of X = S^{2(1-rho)} / (sigma^2 (1-rho)^2).
    double x0() const;
};

/// Exact pricing oracle at one maturity. Prices come from the squared Bessel
/// transition law, integrated in sqrt(X) where the density is close to Gaussian.
class CevModel {
public:
    CevModel(const CevParams& params, double maturity);

    const CevParams& params() const { return params_; }
    double maturity() const { return maturity_; }
    MarketSetup setup() const { return {params_.spot, 0.0, maturity_}; }

    double log_mass_at_zero() const { return log_mass_; }
    double mass_at_zero() const;

    /// log density of X_T (continuous part) at x > 0.
    double log_bessq_density(double x) const;
    /// log density of S_T (continuous part) at s > 0.
    double log_density(double s) const;
    double density(double s) const;

    double log_call(double strike) const;
    /// Put including the atom at zero.
    double log_put(double strike) const;
    /// Put from the continuous part of the law only.
    double log_put_continuous(double strike) const;
    double call(double strike) const;
    double put(double strike) const;

    /// Stock level for a value of X, and back.
    double stock_of(double x) const;
    double x_of(double stock) const;

    PricingCurve call_curve() const;
    PricingCurve put_curve() const;
    DensityOracle density_oracle() const;

    /// int_0^inf s^q d_T(s) ds over the continuous part.
    double moment(double q) const;

private:
    // Same density parametrized by y = sqrt(x), which keeps the exponent accurate far out.
    double log_bessq_density_root(double y) const;
    // log of int over y = sqrt(x) in [lo, hi] of (2y) p_X(y^2) exp(log_weight(y)).
    double log_integral(double lo, double hi, double center, const std::function<double(double)>& log_weight) const;

    CevParams params_;
    double maturity_;
    double order_;
    double x0_;
    double log_mass_;
};

double cev_mass_at_zero(const CevParams& params, double maturity);
double cev_log_mass_at_zero(const CevParams& params, double maturity);
double cev_density(const CevParams& params, double maturity, double stock);
double cev_call(const CevParams& params, double maturity, double strike);
double cev_put(const CevParams& params, double maturity, double strike);

/// Approximating call value K^{(5rho-4)/2} exp{s0^{1-rho} K^{1-rho} / (T sigma^2 (1-rho)^2)}
/// exp{-K^{2(1-rho)} / (2 T sigma^2 (1-rho)^2)} with unit prefactor.
double cev_call_asymptote(const CevParams& params, double maturity, double strike);
/// log(1 / C~(K)) of the same expression, usable where C~ underflows.
double cev_log_inv_call_asymptote(const CevParams& params, double maturity, double strike);

/// sigma (1 - rho) log K / K^{1-rho}; needs K > 1.
double cev_iv_right_asym(const CevParams& params, double maturity, double strike);
/// Left-wing leading term with the log log corrections; needs log(1/K) > 1.
double cev_iv_left_asym(const CevParams& params, double maturity, double strike, bool with_loglog = true);

}  // namespace wingvol
