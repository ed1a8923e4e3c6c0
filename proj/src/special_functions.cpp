#include "wingvol/special_functions.hpp"

#include <cmath>
#include <limits>

#include "wingvol/errors.hpp"

namespace wingvol {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kLog2Pi = 1.8378770664093454836;
constexpr double kSeriesLimit = 30.0;

void check_bessel_args(double order, double x) {
    if (!(order > -1.0) || !std::isfinite(order)) throw UnsupportedOrder("Bessel order must exceed -1");
    if (std::isnan(x) || x < 0.0) throw InvalidArgument("Bessel argument must be non-negative");
}

// log of sum_k (x/2)^{2k+order} / (k! Gamma(k+order+1)) minus x.
double log_series(double order, double x) {
    const double q = 0.25 * x * x;
    const double log_first = order * std::log(0.5 * x) - std::lgamma(order + 1.0) - x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 100000; ++k) {
        term *= q / (k * (k + order));
        sum += term;
        if (term < kEps * sum * 0.25 && double(k) * k > q) break;
    }
    return log_first + std::log(sum);
}

// Hankel expansion: e^{-x} I(x) sqrt(2 pi x) = sum_k (-1)^k a_k / x^k, truncated at the smallest term.
double log_asymptotic(double order, double x) {
    const double mu = 4.0 * order * order;
    double term = 1.0;
    double sum = 1.0;
    double previous = std::numeric_limits<double>::infinity();
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        const double next = -term * (mu - odd * odd) / (8.0 * k * x);
        if (std::abs(next) >= previous && k > 2) break;
        previous = std::abs(next);
        term = next;
        sum += term;
        if (std::abs(term) < kEps * std::abs(sum) * 0.25) break;
    }
    return std::log(sum) - 0.5 * (kLog2Pi + std::log(x));
}

bool use_asymptotic(double order, double x) { return x > kSeriesLimit && order * order < x; }

// Series for P(a, y), used for y < a + 1.
double log_lower_series(double a, double y) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 100000; ++n) {
        term *= y / (a + n);
        sum += term;
        if (term < sum * kEps * 0.25) break;
    }
    return -y + a * std::log(y) - std::lgamma(a) + std::log(sum);
}

// Modified Lentz continued fraction for Q(a, y), used for y >= a + 1.
double log_upper_fraction(double a, double y) {
    constexpr double tiny = 1e-300;
    double b = y + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 100000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) break;
    }
    return -y + a * std::log(y) - std::lgamma(a) + std::log(h);
}

void check_gamma_args(double shape, double y) {
    if (!(shape > 0.0) || !std::isfinite(shape)) throw InvalidArgument("gamma shape must be positive");
    if (std::isnan(y) || y < 0.0) throw InvalidArgument("gamma argument must be non-negative");
}

}  // namespace

double log_bessel_i_scaled(double order, double x) {
    check_bessel_args(order, x);
    if (x == 0.0) {
        if (order == 0.0) return 0.0;
        return order > 0.0 ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
    }
    if (std::isinf(x)) return -std::numeric_limits<double>::infinity();
    return use_asymptotic(order, x) ? log_asymptotic(order, x) : log_series(order, x);
}

double bessel_i_scaled(double order, double x) { return std::exp(log_bessel_i_scaled(order, x)); }

double log_reg_lower_gamma(double shape, double y) {
    check_gamma_args(shape, y);
    if (y == 0.0) return -std::numeric_limits<double>::infinity();
    if (std::isinf(y)) return 0.0;
    if (y < shape + 1.0) return log_lower_series(shape, y);
    return std::log1p(-std::exp(log_upper_fraction(shape, y)));
}

double reg_lower_gamma(double shape, double y) { return std::exp(log_reg_lower_gamma(shape, y)); }

double log_reg_upper_gamma(double shape, double y) {
    check_gamma_args(shape, y);
    if (y == 0.0) return 0.0;
    if (std::isinf(y)) return -std::numeric_limits<double>::infinity();
    if (y < shape + 1.0) return std::log1p(-std::exp(log_lower_series(shape, y)));
    return log_upper_fraction(shape, y);
}

}  // namespace wingvol
