#pragma once

namespace wingvol {

/// e^{-x} I_order(x) for order > -1 and x >= 0.
/// Power series up to x = 30, large-argument expansion beyond.
double bessel_i_scaled(double order, double x);

/// log(e^{-x} I_order(x)); finite wherever the scaled value underflows.
double log_bessel_i_scaled(double order, double x);

/// Regularized lower incomplete gamma P(shape, y).
double reg_lower_gamma(double shape, double y);
/// log P(shape, y).
double log_reg_lower_gamma(double shape, double y);
/// log Q(shape, y) = log(1 - P(shape, y)), accurate when Q underflows.
double log_reg_upper_gamma(double shape, double y);

}  // namespace wingvol
