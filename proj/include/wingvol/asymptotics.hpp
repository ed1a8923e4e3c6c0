#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "wingvol/grid.hpp"

namespace wingvol {

/// psi(u) = 2 - 4(sqrt(u^2 + u) - u), evaluated as 2 / (sqrt(1+u) + sqrt(u))^2
/// so it keeps full relative precision for large u. psi(inf) = 0.
double psi(double u);

/// Squared-vol slope psi(p)/T of the right wing.
double lee_right_slope(double p_tilde, double maturity);
/// Squared-vol slope psi(q)/T of the left wing.
double lee_left_slope(double q_tilde, double maturity);

struct WingExpansion {
    double main_term = 0.0;
    bool correction_included = false;
    /// Size of the remainder term, up to its unknown constant.
    double error_scale = 0.0;
};

/// Sharp right-wing expansion built from an approximating call value.
/// The remainder scale uses zeta(K) = log(e + log K).
WingExpansion sharp_iv_right(double strike, double c_tilde, double maturity, bool with_loglog);
/// Same expansion from log K and log(1/C~), for call values below the double range.
WingExpansion sharp_iv_right_log(double log_strike, double log_inv_c, double maturity, bool with_loglog);

/// Sharp left-wing expansion built from an approximating put value.
WingExpansion sharp_iv_left(double strike, double p_tilde, double maturity, bool with_loglog);
/// Same expansion from log(1/K) and log(K/P~).
WingExpansion sharp_iv_left_log(double log_inv_strike, double log_k_over_p, double maturity, bool with_loglog);

/// Leading term log K / sqrt(2T log(1/C~)) for wings with every moment finite.
/// error_scale is the larger of (log K)^2 / L^{3/2} and zeta / sqrt(L).
WingExpansion iv_infinite_moment_right(double strike, double c_tilde, double maturity);
WingExpansion iv_infinite_moment_right_log(double log_strike, double log_inv_c, double maturity);
WingExpansion iv_infinite_moment_left(double strike, double p_tilde, double maturity);
WingExpansion iv_infinite_moment_left_log(double log_inv_strike, double log_k_over_p, double maturity);

/// Positive increasing weight on (floor, inf) with an optional analytic derivative.
struct WFunction {
    std::string name;
    std::function<double(double)> value;
    std::function<double(double)> derivative;
    double floor = 0.0;

    double operator()(double y) const { return value(y); }
    /// Analytic derivative when available, central difference otherwise.
    double slope(double y) const;

    static WFunction power(double exponent);
    /// (log y)^exponent on y > 1.
    static WFunction log_power(double exponent);
};

/// I(K) sqrt(w(K)) / log K.
double piterbarg_lambda(double strike, double iv, const WFunction& w);

/// 1 / sqrt(2 T p_hat); zero when p_hat is infinite.
double piterbarg_gamma_predicted(double p_hat, double maturity);

struct PiterbargOptions {
    /// Fraction of the grid, from the top, used for the windowed extrema.
    double tail_fraction = 0.25;
    /// Ratio of the last-decade integral to the previous decade above which
    /// the weighted tail integral is declared divergent.
    double divergence_ratio = 1.0;
    std::size_t samples_per_decade = 400;
    double bisection_tol = 1e-10;
};

struct PiterbargConstants {
    double l_w = 0.0;
    double r_star_w = 0.0;
    double p_hat_w = 0.0;
    /// Only estimated when a density is supplied; NaN otherwise.
    double p_tilde_w = 0.0;
    std::vector<double> grid;
    /// log(1/C(K)) / w(K) on the grid.
    std::vector<double> ratios;
    /// True when the ratio changes monotonically over the tail window.
    bool monotone_tail = false;
};

/// Estimates l_w, r*_w, p_hat_w (and p_tilde_w when log_density is set) for a call curve.
/// Throws WrongSide for a put curve, GridTooShort below three decades and
/// DomainError when w fails the growth check.
PiterbargConstants estimate_piterbarg_constants(const PricingCurve& curve, const WFunction& w,
                                                const std::vector<double>& grid,
                                                const PiterbargOptions& options = {},
                                                const std::function<double(double)>& log_density = {});

/// True iff w(y)/log y increases beyond the grid midpoint and exceeds `threshold` at the end.
bool check_w_growth(const WFunction& w, const std::vector<double>& grid, double threshold = 5.0);

struct AdmissibilityFlags {
    bool integral_condition = false;
    bool derivative_upper = false;
    bool derivative_lower = false;
    /// First grid index from which each inequality holds through the end (grid size if never).
    std::size_t integral_from = 0;
    std::size_t upper_from = 0;
    std::size_t lower_from = 0;
};

/// Checks log int_floor^x e^w >= (1-eps) w(x) and e^{-eps w} <= w' <= e^{eps w} on the grid.
/// A flag holds when its inequality is satisfied on the whole upper half of the grid.
AdmissibilityFlags check_w_admissible(const WFunction& w, double eps, const std::vector<double>& grid);

}  // namespace wingvol
