#pragma once

#include <complex>
#include <vector>

#include "wingvol/black_scholes.hpp"
#include "wingvol/grid.hpp"
#include "wingvol/regvar.hpp"

namespace wingvol {

/// Heston variance with a compound Poisson log-price jump of double-exponential size.
struct HestonKouParams {
    double spot = 1.0;
    double rate = 0.0;
    double v0 = 0.04;
    double kappa = 1.0;
    double theta = 0.04;
    double volvol = 0.5;
    double corr = -0.5;
    double lambda = 0.0;
    double p_up = 0.5;
    double eta1 = 10.0;
    double eta2 = 10.0;

    /// Throws InvalidArgument when a parameter is outside its range.
    void validate() const;
    double q_down() const { return 1.0 - p_up; }
};

/// E[e^J] - 1 for the jump size J, in closed form.
double kou_eta(const HestonKouParams& params);
/// The same quantity by quadrature against the jump density.
double kou_eta_quadrature(const HestonKouParams& params);
/// r - lambda * eta, the drift making the discounted price a martingale.
double martingale_drift(const HestonKouParams& params);

/// log E[exp(i u log X_T)]. Throws OutsideStrip when the moment order -Im(u)
/// lies outside the region where the transform is finite.
std::complex<double> log_cf(const HestonKouParams& params, double maturity, std::complex<double> u);

/// Whether the Heston variance Riccati equation at real moment order s blows up
/// before `maturity`.
bool heston_moment_explodes(const HestonKouParams& params, double maturity, double s);

/// Largest p with E[X_T^{1+p}] finite.
double critical_moment_right(const HestonKouParams& params, double maturity);
/// Largest q with E[X_T^{-q}] finite.
double critical_moment_left(const HestonKouParams& params, double maturity);
/// Diffusion-only bounds: the moment order at which the variance part explodes,
/// s* > 1 on the right and s* < 0 on the left. Infinite when nothing explodes.
double heston_explosion_order_right(const HestonKouParams& params, double maturity);
double heston_explosion_order_left(const HestonKouParams& params, double maturity);

/// Fourier pricer at one maturity with the critical moments computed once.
class HestonKouPricer {
public:
    HestonKouPricer(const HestonKouParams& params, double maturity);

    const HestonKouParams& params() const { return params_; }
    double maturity() const { return maturity_; }
    MarketSetup setup() const { return {params_.spot, params_.rate, maturity_}; }
    double p_tilde() const { return p_tilde_; }
    double q_tilde() const { return q_tilde_; }

    /// Damped Fourier prices; the damping is the saddle point of the damped transform inside the moment strip.
    double log_call(double strike) const;
    double log_put(double strike) const;
    double call(double strike) const;
    double put(double strike) const;

    PricingCurve call_curve() const;
    PricingCurve put_curve() const;

private:
    double log_damped(double strike, double alpha) const;

    HestonKouParams params_;
    double maturity_;
    double p_tilde_;
    double q_tilde_;
};

double price_call_cf(const HestonKouParams& params, double maturity, double strike);
double price_put_cf(const HestonKouParams& params, double maturity, double strike);

/// T I(K)^2 / |log(K/F)| along the requested wing, from Fourier prices on `grid`.
WingSlopeFit wing_slope_measured(const HestonKouParams& params, double maturity, OptionSide side,
                                 const std::vector<double>& grid);

}  // namespace wingvol
