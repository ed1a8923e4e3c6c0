#include "wingvol/pathological_w.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "wingvol/errors.hpp"
#include "wingvol/quadrature.hpp"

namespace wingvol {

namespace {

double log_expm1(double z) { return z > 30.0 ? z + std::log1p(-std::exp(-z)) : std::log(std::expm1(z)); }

}  // namespace

PathologicalW::PathologicalW(int n_max) : n_max_(n_max) {
    detail::require(n_max >= 2, "pathological weight needs at least two levels");
    a_.resize(static_cast<std::size_t>(n_max) + 2);
    a_[0] = 1.0;
    a_[1] = 3.0 * a_[0] + 4.0 * std::log(2.0);
    for (int n = 1; n <= n_max; ++n) a_[n + 1] = 3.0 * a_[n] + 4.0 * std::log(2.0 * n);
}

double PathologicalW::height(int n) const {
    detail::require(n >= 0 && n <= n_max_ + 1, "level out of range");
    return a_[static_cast<std::size_t>(n)];
}

double PathologicalW::log_delta(int n) const {
    detail::require(n >= 0 && n <= n_max_, "level out of range");
    return -a_[static_cast<std::size_t>(n) + 1];
}

double PathologicalW::value_at(Point p) const {
    detail::require(p.level >= 0 && p.level <= n_max_, "level out of range");
    detail::require(p.ramp_fraction >= 0.0 && p.ramp_fraction <= 1.0, "ramp fraction must lie in [0, 1]");
    const double lo = height(p.level);
    return lo + (height(p.level + 1) - lo) * p.ramp_fraction;
}

double PathologicalW::log_integral_at(Point p) const {
    detail::require(p.level >= 0 && p.level <= n_max_, "level out of range");
    detail::require(p.ramp_fraction >= 0.0 && p.ramp_fraction <= 1.0, "ramp fraction must lie in [0, 1]");
    double acc = -std::numeric_limits<double>::infinity();
    for (int k = 0; k <= p.level; ++k) {
        const double ak = height(k);
        const double rise = height(k + 1) - ak;
        acc = log_add(acc, ak + std::log1p(-std::exp(log_delta(k))));
        if (k < p.level) {
            acc = log_add(acc, std::log(-std::expm1(-rise)) - std::log(rise));
        } else if (p.ramp_fraction > 0.0) {
            acc = log_add(acc, ak - height(k + 1) + log_expm1(rise * p.ramp_fraction) - std::log(rise));
        }
    }
    return acc;
}

double PathologicalW::identity_residual(int n) const {
    detail::require(n >= 1 && n <= n_max_, "identity holds for levels n >= 1");
    return 0.25 * (height(n) + height(n + 1)) - (height(n) + std::log(2.0 * n));
}

std::vector<PathologicalW::LevelCheck> PathologicalW::counterexample_checks() const {
    std::vector<LevelCheck> out;
    for (int n = 2; n <= n_max_; ++n) {
        const Point p = designated_point(n);
        LevelCheck c;
        c.level = n;
        c.log_integral = log_integral_at(p);
        c.half_w = 0.5 * value_at(p);
        c.holds = c.log_integral <= c.half_w;
        out.push_back(c);
    }
    return out;
}

AdmissibilityFlags PathologicalW::admissibility(double eps) const {
    detail::require(eps > 0.0 && eps < 1.0, "eps must lie in (0, 1)");
    AdmissibilityFlags flags;
    const std::size_t count = static_cast<std::size_t>(n_max_);
    for (int n = 1; n <= n_max_; ++n) {
        const std::size_t idx = static_cast<std::size_t>(n);
        const Point mid = designated_point(n);
        const double w_mid = value_at(mid);
        if (!(log_integral_at(mid) >= (1.0 - eps) * w_mid)) flags.integral_from = idx;
        // Ramp slope (a_{n+1} - a_n) / delta_n, taken at the ramp start where w is smallest.
        const double log_slope = std::log(height(n + 1) - height(n)) - log_delta(n);
        if (!(log_slope <= eps * height(n))) flags.upper_from = idx;
        // The slope vanishes on every plateau.
        flags.lower_from = idx;
    }
    flags.integral_condition = flags.integral_from <= count / 2;
    flags.derivative_upper = flags.upper_from <= count / 2;
    flags.derivative_lower = flags.lower_from <= count / 2;
    return flags;
}

WFunction PathologicalW::as_function() const {
    WFunction w;
    w.name = "pathological";
    w.floor = 0.0;
    const std::vector<double> a = a_;
    const int top = n_max_;
    auto locate = [a, top](double x, double& u) {
        if (!(x >= 0.0) || x >= top + 1.0) throw DomainError("pathological weight evaluated beyond its levels");
        const int n = static_cast<int>(std::floor(x));
        const double t = x - n;
        u = (t - 1.0) * std::exp(a[static_cast<std::size_t>(n) + 1]) + 1.0;
        return n;
    };
    w.value = [a, locate](double x) {
        double u = 0.0;
        const int n = locate(x, u);
        const std::size_t i = static_cast<std::size_t>(n);
        return u <= 0.0 ? a[i] : a[i] + (a[i + 1] - a[i]) * u;
    };
    w.derivative = [a, locate](double x) {
        double u = 0.0;
        const int n = locate(x, u);
        const std::size_t i = static_cast<std::size_t>(n);
        return u <= 0.0 ? 0.0 : (a[i + 1] - a[i]) * std::exp(a[i + 1]);
    };
    return w;
}

}  // namespace wingvol
