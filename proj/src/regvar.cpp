#include "wingvol/regvar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "wingvol/asymptotics.hpp"
#include "wingvol/detail/parallel.hpp"
#include "wingvol/errors.hpp"

namespace wingvol {

namespace {

struct Line {
    double slope;
    double intercept;
};

Line least_squares(const std::vector<double>& x, const std::vector<double>& z, std::size_t from, std::size_t to) {
    const double m = static_cast<double>(to - from);
    double sx = 0.0, sz = 0.0;
    for (std::size_t i = from; i < to; ++i) {
        sx += x[i];
        sz += z[i];
    }
    const double mx = sx / m;
    const double mz = sz / m;
    double sxx = 0.0, sxz = 0.0;
    for (std::size_t i = from; i < to; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxz += (x[i] - mx) * (z[i] - mz);
    }
    const double slope = sxz / sxx;
    return {slope, mz - slope * mx};
}

void check_samples(const std::vector<double>& y, const std::vector<double>& values) {
    if (y.size() != values.size()) throw InvalidArgument("sample vectors differ in length");
    if (y.size() < 20) throw GridTooShort("need at least 20 samples");
    const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
    if (!(*lo > 0.0)) throw NonPositiveSample("sample abscissae must be positive");
    if (*hi / *lo < 1e3 * (1.0 - 1e-12)) throw GridTooShort("samples must span three decades");
}

std::vector<double> logs_of(const std::vector<double>& f) {
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!(f[i] > 0.0)) throw NonPositiveSample("sample values must be positive");
        out[i] = std::log(f[i]);
    }
    return out;
}

std::size_t tail_start(std::size_t n, double fraction, std::size_t minimum) {
    const auto count = std::max<std::size_t>(minimum, static_cast<std::size_t>(std::ceil(n * fraction)));
    return count >= n ? 0 : n - count;
}

// Pinball loss at quantile q after choosing the optimal intercept for this slope.
double quantile_loss(const std::vector<double>& x, const std::vector<double>& z, double slope, double q,
                     double* intercept) {
    std::vector<double> r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = z[i] - slope * x[i];
    std::vector<double> sorted = r;
    const std::size_t k = std::min(sorted.size() - 1, static_cast<std::size_t>(std::floor(q * sorted.size())));
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k), sorted.end());
    const double c = sorted[k];
    double loss = 0.0;
    for (double v : r) {
        const double e = v - c;
        loss += e >= 0.0 ? q * e : (q - 1.0) * e;
    }
    if (intercept) *intercept = c;
    return loss;
}

Line quantile_line(const std::vector<double>& x, const std::vector<double>& z, double q) {
    const Line ls = least_squares(x, z, 0, x.size());
    const double span = 4.0 * (std::abs(ls.slope) + 1.0);
    double lo = ls.slope - span;
    double hi = ls.slope + span;
    for (int it = 0; it < 200 && hi - lo > 1e-12 * (1.0 + std::abs(lo)); ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (quantile_loss(x, z, m1, q, nullptr) <= quantile_loss(x, z, m2, q, nullptr)) hi = m2; else lo = m1;
    }
    const double slope = 0.5 * (lo + hi);
    double intercept = 0.0;
    quantile_loss(x, z, slope, q, &intercept);
    return {slope, intercept};
}

}  // namespace

RvFit rv_index_log(const std::vector<double>& y, const std::vector<double>& log_f, const RvOptions& options) {
    check_samples(y, log_f);
    for (double v : log_f) {
        if (std::isnan(v) || v == -std::numeric_limits<double>::infinity()) {
            throw NonPositiveSample("sample values must be positive");
        }
    }
    const std::size_t n = y.size();
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = std::log(y[i]);
    const std::size_t start = tail_start(n, options.tail_fraction, 5);
    const Line fit = least_squares(x, log_f, start, n);
    const std::size_t mid = start + (n - start) / 2;
    const Line first = least_squares(x, log_f, start, mid + 1);
    const Line second = least_squares(x, log_f, mid, n);

    RvFit out;
    out.index = fit.slope;
    out.grid = y;
    for (std::size_t i = start; i < n; ++i) out.residuals.push_back(log_f[i] - fit.slope * x[i]);
    out.residual_slope = second.slope - fit.slope;
    out.converged = std::abs(first.slope - second.slope) <= options.slope_tolerance * std::max(1.0, std::abs(fit.slope));
    return out;
}

RvFit rv_index(const std::vector<double>& y, const std::vector<double>& f, const RvOptions& options) {
    check_samples(y, f);
    return rv_index_log(y, logs_of(f), options);
}

LimitSlope limit_slope_right(const PricingCurve& curve, const std::vector<double>& grid, const LimitOptions& options) {
    if (curve.side != OptionSide::Call) throw WrongSide("limit slope needs a call curve");
    if (grid.size() < 8 || !(grid.front() > 1.0) || grid.back() / grid.front() < 10.0) {
        throw GridTooShort("limit slope needs at least 8 strikes above 1 spanning a decade");
    }
    const std::size_t n = grid.size();
    std::vector<double> x(n), z(n);
    detail::parallel_for(n, [&](std::size_t i) {
        x[i] = std::log(grid[i]);
        z[i] = -curve.log_price(grid[i]);
    });
    std::size_t start = tail_start(n, options.tail_fraction, 4);
    const double decade_floor = grid.back() / 10.0;
    while (start > 0 && grid[start - 1] >= decade_floor * (1.0 - 1e-12)) --start;

    LimitSlope out;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        out.tau.push_back(z[i] / x[i]);
        if (i >= start) sum += out.tau.back();
    }
    out.limit = sum / static_cast<double>(n - start);
    const Line fit = least_squares(x, z, start, n);
    out.extrapolated = fit.slope;
    double rmin = std::numeric_limits<double>::infinity();
    double rmax = -rmin;
    for (std::size_t i = start; i < n; ++i) {
        const double r = z[i] - fit.intercept - fit.slope * x[i];
        rmin = std::min(rmin, r);
        rmax = std::max(rmax, r);
    }
    out.oscillation = (rmax - rmin) / x.back();
    out.exists = out.oscillation < options.oscillation_tolerance;
    return out;
}

ParetoTypeReport weak_pareto_check_log(const std::vector<double>& y, const std::vector<double>& log_f, double index,
                                       TailKind kind, const ParetoOptions& options) {
    check_samples(y, log_f);
    std::vector<double> x(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) x[i] = kind == TailKind::NearInfinity ? std::log(y[i]) : -std::log(y[i]);
    const Line lower = quantile_line(x, log_f, options.lower_quantile);
    const Line upper = quantile_line(x, log_f, options.upper_quantile);
    ParetoTypeReport out;
    out.kind = kind;
    out.index = index;
    out.lower_slope = std::min(lower.slope, upper.slope);
    out.upper_slope = std::max(lower.slope, upper.slope);
    out.lower_intercept = lower.intercept;
    out.upper_intercept = upper.intercept;
    out.weak = std::abs(lower.slope - index) <= options.slope_tolerance &&
               std::abs(upper.slope - index) <= options.slope_tolerance;
    return out;
}

ParetoTypeReport weak_pareto_check(const std::vector<double>& y, const std::vector<double>& f, double index,
                                   TailKind kind, const ParetoOptions& options) {
    check_samples(y, f);
    return weak_pareto_check_log(y, logs_of(f), index, kind, options);
}

WingPrediction predict_wing_from_tail(const ParetoTypeReport& report, TailQuantity quantity, double maturity) {
    detail::require(maturity > 0.0, "maturity must be positive");
    if (!report.weak) throw InvalidIndex("tail is not of weak Pareto type with the candidate index");
    const double a = report.index;
    WingPrediction out;
    if (report.kind == TailKind::NearInfinity) {
        out.right_wing = true;
        switch (quantity) {
            case TailQuantity::Survival: out.moment_index = -a - 1.0; break;
            case TailQuantity::Density: out.moment_index = -a - 2.0; break;
            case TailQuantity::Call: out.moment_index = -a; break;
            default: throw InvalidArgument("quantity has no right-wing index convention");
        }
    } else {
        out.right_wing = false;
        switch (quantity) {
            case TailQuantity::Distribution: out.moment_index = -a; break;
            case TailQuantity::Density: out.moment_index = 1.0 - a; break;
            case TailQuantity::Put: out.moment_index = -a - 1.0; break;
            default: throw InvalidArgument("quantity has no left-wing index convention");
        }
    }
    if (out.moment_index < 0.0) {
        throw InvalidIndex("tail index " + std::to_string(a) + " implies a negative moment index");
    }
    out.coefficient = std::sqrt(psi(out.moment_index) / maturity);
    return out;
}

WingSlopeFit measure_wing_slope(const MarketSetup& setup, const PricingCurve& curve, const std::vector<double>& grid,
                                double tail_fraction) {
    setup.validate();
    const std::size_t n = grid.size();
    const double forward = setup.forward();
    std::vector<double> iv(n, std::numeric_limits<double>::quiet_NaN());
    std::vector<int> status(n, 0);
    detail::parallel_for(n, [&](std::size_t i) {
        const double k = grid[i];
        if (k == forward || otm_side(setup, k) != curve.side) return;
        try {
            iv[i] = implied_vol_from_log_otm(setup, k, curve.log_price(k));
            status[i] = 1;
        } catch (const Error&) {
            status[i] = -1;
        }
    });
    WingSlopeFit out;
    for (std::size_t i = 0; i < n; ++i) {
        if (status[i] < 0) ++out.failures;
        if (status[i] <= 0) continue;
        out.strikes.push_back(grid[i]);
        out.implied_vols.push_back(iv[i]);
        out.slopes.push_back(setup.maturity * iv[i] * iv[i] / std::abs(std::log(grid[i] / forward)));
    }
    const std::size_t m = out.slopes.size();
    if (m == 0) throw NoConvergence("no strike on the grid produced an implied volatility");
    const bool right = curve.side == OptionSide::Call;
    // Order from the forward outwards so the tail is the far wing on both sides.
    if (!right) {
        std::reverse(out.strikes.begin(), out.strikes.end());
        std::reverse(out.implied_vols.begin(), out.implied_vols.end());
        std::reverse(out.slopes.begin(), out.slopes.end());
    }
    const std::size_t start = tail_start(m, tail_fraction, std::min<std::size_t>(m, 3));
    double sum = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double iv_sum = 0.0;
    bool up = true, down = true;
    for (std::size_t i = start; i < m; ++i) {
        sum += out.slopes[i];
        iv_sum += out.implied_vols[i];
        lo = std::min(lo, out.implied_vols[i]);
        hi = std::max(hi, out.implied_vols[i]);
        if (i > start) {
            up = up && out.slopes[i] >= out.slopes[i - 1];
            down = down && out.slopes[i] <= out.slopes[i - 1];
        }
    }
    const double count = static_cast<double>(m - start);
    out.tail_mean = sum / count;
    out.last = out.slopes.back();
    out.iv_spread = (hi - lo) / (iv_sum / count);
    out.flat_smile = out.iv_spread < 1e-6;
    out.monotone_tail = up || down;
    return out;
}

}  // namespace wingvol
