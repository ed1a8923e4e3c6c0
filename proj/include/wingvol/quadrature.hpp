#pragma once

#include <functional>

namespace wingvol {

struct QuadratureOptions {
    double abs_tol = 0.0;
    double rel_tol = 1e-12;
    int max_intervals = 2000;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    int intervals = 0;
};

/// Adaptive Gauss-Kronrod (7/15) integration of f over [a, b], splitting the
/// interval with the largest error estimate first. Throws QuadratureFailure
/// when the interval budget is spent before the tolerance is met.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& options = {});

struct LogQuadratureResult {
    double log_value = 0.0;
    double rel_error = 0.0;
};

/// log of the integral of exp(log_f) over [a, b]. The integrand is shifted by
/// its sampled maximum so that values far below the double range still integrate.
LogQuadratureResult integrate_log(const std::function<double(double)>& log_f, double a, double b,
                                  const QuadratureOptions& options = {});

/// log of the integral of exp(log_f) over [a, b] (b may be infinite), marching
/// outward from `center` in panels that start at `width` and widen geometrically,
/// until a panel adds less than `truncation` of the running total.
LogQuadratureResult integrate_log_around(const std::function<double(double)>& log_f, double a, double b,
                                         double center, double width, const QuadratureOptions& options = {},
                                         double truncation = 1e-16);

/// log(exp(x) + exp(y)) without overflow.
double log_add(double x, double y);

}  // namespace wingvol
