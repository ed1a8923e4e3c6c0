#pragma once

#include <cstddef>
#include <vector>

#include "wingvol/black_scholes.hpp"
#include "wingvol/grid.hpp"

namespace wingvol {

struct RvFit {
    double index = 0.0;
    /// log f - index * log y over the tail window.
    std::vector<double> residuals;
    /// Log-slope of the residuals over the second half of the window.
    double residual_slope = 0.0;
    bool converged = false;
    std::vector<double> grid;
};

struct RvOptions {
    double tail_fraction = 0.25;
    /// Largest tolerated change in local slope across the tail window.
    double slope_tolerance = 0.05;
};

/// Regular-variation index of f from samples on a geometric grid: least-squares
/// slope of log f against log y over the tail window.
/// Throws GridTooShort below 20 points or three decades and NonPositiveSample for f <= 0.
RvFit rv_index(const std::vector<double>& y, const std::vector<double>& f, const RvOptions& options = {});
/// Same fit from log f, for samples that underflow a double.
RvFit rv_index_log(const std::vector<double>& y, const std::vector<double>& log_f, const RvOptions& options = {});

struct LimitSlope {
    /// Mean of tau(K) = log(1/C(K)) / log K over the tail window.
    double limit = 0.0;
    /// Slope of the fit log(1/C) = c + p log K over the window, i.e. tau extrapolated to K = inf.
    double extrapolated = 0.0;
    /// Range of the fit residuals divided by the largest log K, in tau units.
    double oscillation = 0.0;
    bool exists = false;
    std::vector<double> tau;
};

struct LimitOptions {
    double tail_fraction = 0.25;
    double oscillation_tolerance = 1e-2;
};

/// Limit of log(1/C(K)) / log K. The window is the larger of the last decade and
/// the tail fraction of the grid. Throws WrongSide for put curves and GridTooShort.
LimitSlope limit_slope_right(const PricingCurve& curve, const std::vector<double>& grid,
                             const LimitOptions& options = {});

enum class TailKind { NearInfinity, NearZero };

struct ParetoTypeReport {
    TailKind kind = TailKind::NearInfinity;
    bool weak = false;
    double index = 0.0;
    double lower_slope = 0.0;
    double upper_slope = 0.0;
    double lower_intercept = 0.0;
    double upper_intercept = 0.0;
};

struct ParetoOptions {
    double lower_quantile = 0.05;
    double upper_quantile = 0.95;
    double slope_tolerance = 0.1;
};

/// Fits lower and upper quantile lines of log f against log y (near infinity) or
/// log(1/y) (near zero) and accepts weak Pareto type when both slopes match `index`.
ParetoTypeReport weak_pareto_check(const std::vector<double>& y, const std::vector<double>& f, double index,
                                   TailKind kind, const ParetoOptions& options = {});
ParetoTypeReport weak_pareto_check_log(const std::vector<double>& y, const std::vector<double>& log_f, double index,
                                       TailKind kind, const ParetoOptions& options = {});

/// What a tail report was measured on.
enum class TailQuantity { Survival, Distribution, Density, Call, Put };

struct WingPrediction {
    bool right_wing = true;
    /// p~ for the right wing, q~ for the left.
    double moment_index = 0.0;
    /// sqrt(psi(moment_index) / T), the asymptotic ratio I(K) / sqrt(|log K|).
    double coefficient = 0.0;
};

/// Maps a tail index to the wing moment index and the implied-vol coefficient.
/// Throws InvalidArgument when the quantity does not live on the report's side
/// and InvalidIndex when the implied moment index is negative.
WingPrediction predict_wing_from_tail(const ParetoTypeReport& report, TailQuantity quantity, double maturity);

struct WingSlopeFit {
    std::vector<double> strikes;
    std::vector<double> implied_vols;
    /// T I(K)^2 / |log(K/F)| per strike.
    std::vector<double> slopes;
    double tail_mean = 0.0;
    double last = 0.0;
    /// Relative range of I over the tail: near zero for a flat smile, where the slope tends to 0.
    double iv_spread = 0.0;
    bool flat_smile = false;
    bool monotone_tail = false;
    std::size_t failures = 0;
};

/// Measures T I(K)^2 / |log(K/F)| along out-of-the-money strikes of a curve
/// (call curve right of the forward, put curve left of it).
WingSlopeFit measure_wing_slope(const MarketSetup& setup, const PricingCurve& curve, const std::vector<double>& grid,
                                double tail_fraction = 0.25);

}  // namespace wingvol
