#include "wingvol/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wingvol/detail/parallel.hpp"
#include "wingvol/errors.hpp"
#include "wingvol/quadrature.hpp"

namespace wingvol {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double zeta(double log_strike) { return std::log(M_E + std::max(log_strike, 0.0)); }

WingExpansion sharp_core(double log_moneyness, double log_ratio, double maturity, bool with_loglog) {
    detail::require(maturity > 0.0 && std::isfinite(maturity), "maturity must be positive");
    detail::require(log_moneyness >= 0.0 && std::isfinite(log_moneyness), "strike must lie in the wing");
    if (!(log_ratio > 0.0) || std::isnan(log_ratio)) throw DomainError("approximating price must be below its bound");
    if (with_loglog && !(log_ratio > 1.0)) throw DomainError("log log term needs log(1/price) > 1");
    const double shift = with_loglog ? 0.5 * std::log(log_ratio) : 0.0;
    const double inner = log_ratio - shift;
    const double outer = log_moneyness + inner;
    const double main = std::sqrt(2.0 / maturity) * log_moneyness / (std::sqrt(outer) + std::sqrt(inner));
    double err = zeta(log_moneyness);
    if (!with_loglog) err += std::max(std::log(log_ratio), 0.0);
    return {main, with_loglog, err / std::sqrt(log_ratio)};
}

WingExpansion infinite_core(double log_moneyness, double log_ratio, double maturity) {
    detail::require(maturity > 0.0 && std::isfinite(maturity), "maturity must be positive");
    detail::require(log_moneyness >= 0.0 && std::isfinite(log_moneyness), "strike must lie in the wing");
    if (!(log_ratio > 0.0) || std::isnan(log_ratio)) throw DomainError("approximating price must be below its bound");
    const double root = std::sqrt(log_ratio);
    const double main = log_moneyness / (std::sqrt(2.0 * maturity) * root);
    const double curvature = log_moneyness * log_moneyness / (log_ratio * root);
    const double slow = zeta(log_moneyness) / root;
    return {main, false, std::max(curvature, slow)};
}

// Trapezoid rule in log y for the log of int exp(log_g(y)) dy, g sampled at ys.
double log_trapezoid(const std::vector<double>& ys, const std::vector<double>& log_g) {
    double acc = -kInf;
    for (std::size_t i = 1; i < ys.size(); ++i) {
        const double h = std::log(ys[i] / ys[i - 1]);
        const double a = log_g[i - 1] + std::log(ys[i - 1]);
        const double b = log_g[i] + std::log(ys[i]);
        acc = log_add(acc, std::log(0.5 * h) + log_add(a, b));
    }
    return acc;
}

// Largest p at which the decade-ratio of int exp(base + p w) stays below the threshold.
double divergence_bisection(const std::vector<double>& prev_y, const std::vector<double>& prev_base,
                            const std::vector<double>& prev_w, const std::vector<double>& last_y,
                            const std::vector<double>& last_base, const std::vector<double>& last_w,
                            double log_threshold, double start, double tol) {
    auto divergent = [&](double p) {
        std::vector<double> a(prev_y.size());
        std::vector<double> b(last_y.size());
        for (std::size_t i = 0; i < a.size(); ++i) a[i] = prev_base[i] + p * prev_w[i];
        for (std::size_t i = 0; i < b.size(); ++i) b[i] = last_base[i] + p * last_w[i];
        const double lp = log_trapezoid(prev_y, a);
        const double ll = log_trapezoid(last_y, b);
        if (ll == -kInf) return false;
        if (lp == -kInf) return true;
        return ll - lp > log_threshold;
    };
    if (divergent(0.0)) return 0.0;
    double lo = 0.0;
    double hi = std::max(start, 1.0);
    while (!divergent(hi)) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) return kInf;
    }
    while (hi - lo > tol * std::max(1.0, hi)) {
        const double mid = 0.5 * (lo + hi);
        if (divergent(mid)) hi = mid; else lo = mid;
    }
    return 0.5 * (lo + hi);
}

void sample_decade(double lo, double hi, std::size_t count, std::vector<double>& ys) {
    ys = geometric_grid(lo, hi, count + 1);
}

}  // namespace

double psi(double u) {
    if (std::isnan(u) || u < 0.0) throw InvalidArgument("psi needs a non-negative argument");
    if (std::isinf(u)) return 0.0;
    const double s = std::sqrt(1.0 + u) + std::sqrt(u);
    return 2.0 / (s * s);
}

double lee_right_slope(double p_tilde, double maturity) {
    detail::require(maturity > 0.0, "maturity must be positive");
    return psi(p_tilde) / maturity;
}

double lee_left_slope(double q_tilde, double maturity) {
    detail::require(maturity > 0.0, "maturity must be positive");
    return psi(q_tilde) / maturity;
}

WingExpansion sharp_iv_right(double strike, double c_tilde, double maturity, bool with_loglog) {
    detail::require(strike > 1.0 && std::isfinite(strike), "right-wing expansion needs K > 1");
    if (!(c_tilde > 0.0 && c_tilde < 1.0)) throw DomainError("approximating call value must lie in (0, 1)");
    return sharp_core(std::log(strike), -std::log(c_tilde), maturity, with_loglog);
}

WingExpansion sharp_iv_right_log(double log_strike, double log_inv_c, double maturity, bool with_loglog) {
    return sharp_core(log_strike, log_inv_c, maturity, with_loglog);
}

WingExpansion sharp_iv_left(double strike, double p_tilde, double maturity, bool with_loglog) {
    detail::require(strike > 0.0 && strike < 1.0, "left-wing expansion needs 0 < K < 1");
    if (!(p_tilde > 0.0 && p_tilde < strike)) throw DomainError("approximating put value must lie in (0, K)");
    return sharp_core(-std::log(strike), std::log(strike) - std::log(p_tilde), maturity, with_loglog);
}

WingExpansion sharp_iv_left_log(double log_inv_strike, double log_k_over_p, double maturity, bool with_loglog) {
    return sharp_core(log_inv_strike, log_k_over_p, maturity, with_loglog);
}

WingExpansion iv_infinite_moment_right(double strike, double c_tilde, double maturity) {
    detail::require(strike > 1.0 && std::isfinite(strike), "right-wing expansion needs K > 1");
    if (!(c_tilde > 0.0 && c_tilde < 1.0)) throw DomainError("approximating call value must lie in (0, 1)");
    return infinite_core(std::log(strike), -std::log(c_tilde), maturity);
}

WingExpansion iv_infinite_moment_right_log(double log_strike, double log_inv_c, double maturity) {
    return infinite_core(log_strike, log_inv_c, maturity);
}

WingExpansion iv_infinite_moment_left(double strike, double p_tilde, double maturity) {
    detail::require(strike > 0.0 && strike < 1.0, "left-wing expansion needs 0 < K < 1");
    if (!(p_tilde > 0.0 && p_tilde < strike)) throw DomainError("approximating put value must lie in (0, K)");
    return infinite_core(-std::log(strike), std::log(strike) - std::log(p_tilde), maturity);
}

WingExpansion iv_infinite_moment_left_log(double log_inv_strike, double log_k_over_p, double maturity) {
    return infinite_core(log_inv_strike, log_k_over_p, maturity);
}

double WFunction::slope(double y) const {
    if (derivative) return derivative(y);
    const double h = 1e-6 * std::max(std::abs(y), 1.0);
    const double lo = std::max(y - h, floor);
    return (value(y + h) - value(lo)) / (y + h - lo);
}

WFunction WFunction::power(double exponent) {
    detail::require(exponent > 0.0, "power weight needs a positive exponent");
    WFunction w;
    w.name = "power";
    w.value = [exponent](double y) { return std::pow(y, exponent); };
    w.derivative = [exponent](double y) { return exponent * std::pow(y, exponent - 1.0); };
    w.floor = 0.0;
    return w;
}

WFunction WFunction::log_power(double exponent) {
    detail::require(exponent > 0.0, "log-power weight needs a positive exponent");
    WFunction w;
    w.name = "log-power";
    w.value = [exponent](double y) { return std::pow(std::log(y), exponent); };
    w.derivative = [exponent](double y) { return exponent * std::pow(std::log(y), exponent - 1.0) / y; };
    w.floor = 1.0;
    return w;
}

double piterbarg_lambda(double strike, double iv, const WFunction& w) {
    detail::require(strike > 1.0, "Lambda needs K > 1");
    detail::require(iv >= 0.0, "implied volatility must be non-negative");
    return iv * std::sqrt(w(strike)) / std::log(strike);
}

double piterbarg_gamma_predicted(double p_hat, double maturity) {
    detail::require(p_hat > 0.0, "p_hat must be positive");
    detail::require(maturity > 0.0, "maturity must be positive");
    if (std::isinf(p_hat)) return 0.0;
    return 1.0 / std::sqrt(2.0 * maturity * p_hat);
}

bool check_w_growth(const WFunction& w, const std::vector<double>& grid, double threshold) {
    std::vector<double> ratio;
    for (double y : grid) {
        if (y > 1.0) ratio.push_back(w(y) / std::log(y));
    }
    if (ratio.size() < 4) return false;
    for (std::size_t i = ratio.size() / 2 + 1; i < ratio.size(); ++i) {
        if (!(ratio[i] > ratio[i - 1])) return false;
    }
    return ratio.back() > threshold;
}

PiterbargConstants estimate_piterbarg_constants(const PricingCurve& curve, const WFunction& w,
                                                const std::vector<double>& grid, const PiterbargOptions& options,
                                                const std::function<double(double)>& log_density) {
    if (curve.side != OptionSide::Call) throw WrongSide("Piterbarg constants need a call curve");
    if (grid.size() < 8 || !(grid.front() > 0.0) || grid.back() / grid.front() < 1e3 - 1e-6) {
        throw GridTooShort("Piterbarg estimation needs a grid spanning three decades");
    }
    if (!check_w_growth(w, grid)) throw DomainError("weight " + w.name + " does not outgrow log y on the grid");

    const std::size_t n = grid.size();
    PiterbargConstants out;
    out.grid = grid;
    out.ratios.resize(n);
    std::vector<double> log_inv_c(n);
    std::vector<double> wv(n);
    detail::parallel_for(n, [&](std::size_t i) {
        log_inv_c[i] = -curve.log_price(grid[i]);
        wv[i] = w(grid[i]);
        out.ratios[i] = log_inv_c[i] / wv[i];
    });

    const std::size_t start = std::min(n - 3, static_cast<std::size_t>(std::floor(n * (1.0 - options.tail_fraction))));
    out.l_w = *std::min_element(out.ratios.begin() + start, out.ratios.end());
    bool up = true;
    bool down = true;
    for (std::size_t i = start + 1; i < n; ++i) {
        up = up && out.ratios[i] >= out.ratios[i - 1];
        down = down && out.ratios[i] <= out.ratios[i - 1];
    }
    out.monotone_tail = up || down;

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double m = static_cast<double>(n - start);
    for (std::size_t i = start; i < n; ++i) {
        sx += wv[i];
        sy += log_inv_c[i];
        sxx += wv[i] * wv[i];
        sxy += wv[i] * log_inv_c[i];
    }
    out.r_star_w = (m * sxy - sx * sy) / (m * sxx - sx * sx);

    const double top = grid.back();
    std::vector<double> prev_y, last_y;
    sample_decade(top / 100.0, top / 10.0, options.samples_per_decade, prev_y);
    sample_decade(top / 10.0, top, options.samples_per_decade, last_y);
    const std::size_t s = prev_y.size();
    std::vector<double> prev_w(s), last_w(s), prev_c(s), last_c(s), prev_dw(s), last_dw(s);
    detail::parallel_for(s, [&](std::size_t i) {
        prev_w[i] = w(prev_y[i]);
        last_w[i] = w(last_y[i]);
        prev_dw[i] = std::log(w.slope(prev_y[i]));
        last_dw[i] = std::log(w.slope(last_y[i]));
        prev_c[i] = curve.log_price(prev_y[i]) + prev_dw[i];
        last_c[i] = curve.log_price(last_y[i]) + last_dw[i];
    });
    const double log_threshold = std::log(options.divergence_ratio);
    out.p_hat_w = divergence_bisection(prev_y, prev_c, prev_w, last_y, last_c, last_w, log_threshold, out.l_w,
                                       options.bisection_tol);

    if (log_density) {
        std::vector<double> prev_d(s), last_d(s);
        for (std::size_t i = 0; i < s; ++i) {
            prev_d[i] = log_density(prev_y[i]);
            last_d[i] = log_density(last_y[i]);
        }
        out.p_tilde_w = divergence_bisection(prev_y, prev_d, prev_w, last_y, last_d, last_w, log_threshold, out.l_w,
                                             options.bisection_tol);
    } else {
        out.p_tilde_w = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

AdmissibilityFlags check_w_admissible(const WFunction& w, double eps, const std::vector<double>& grid) {
    detail::require(eps > 0.0 && eps < 1.0, "eps must lie in (0, 1)");
    detail::require(grid.size() >= 2 && grid.front() > w.floor, "grid must start above the weight floor");
    const std::size_t n = grid.size();
    QuadratureOptions q;
    q.rel_tol = 1e-9;
    q.max_intervals = 5000;
    auto log_exp_w = [&](double y) { return w(y); };
    std::vector<double> log_int(n);
    double acc = integrate_log(log_exp_w, w.floor, grid[0], q).log_value;
    log_int[0] = acc;
    for (std::size_t i = 1; i < n; ++i) {
        acc = log_add(acc, integrate_log(log_exp_w, grid[i - 1], grid[i], q).log_value);
        log_int[i] = acc;
    }
    AdmissibilityFlags flags;
    flags.integral_from = flags.upper_from = flags.lower_from = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double wy = w(grid[i]);
        const double log_dw = std::log(w.slope(grid[i]));
        if (!(log_int[i] >= (1.0 - eps) * wy)) flags.integral_from = i + 1;
        if (!(log_dw <= eps * wy)) flags.upper_from = i + 1;
        if (!(log_dw >= -eps * wy)) flags.lower_from = i + 1;
    }
    flags.integral_condition = flags.integral_from <= n / 2;
    flags.derivative_upper = flags.upper_from <= n / 2;
    flags.derivative_lower = flags.lower_from <= n / 2;
    return flags;
}

}  // namespace wingvol
