#pragma once

#include <vector>

#include "wingvol/asymptotics.hpp"

namespace wingvol {

/// Piecewise-linear weight that violates the integral admissibility condition
/// infinitely often. Level n is a plateau at height a_n on [n, n+1-delta_n]
/// followed by a linear ramp to a_{n+1} of width delta_n = exp(-a_{n+1}).
///
/// delta_n underflows a double for n >= 3, so points on a ramp are addressed
/// structurally by (level, fraction of the ramp) and every integral is kept in logs.
class PathologicalW {
public:
    struct Point {
        int level = 0;
        /// 0 at the start of the ramp, 1 at its end.
        double ramp_fraction = 0.0;
    };

    struct LevelCheck {
        int level = 0;
        double log_integral = 0.0;
        double half_w = 0.0;
        bool holds = false;
    };

    /// Throws InvalidArgument for n_max < 2.
    explicit PathologicalW(int n_max);

    int levels() const { return n_max_; }
    /// Plateau height a_n for 0 <= n <= levels() + 1.
    double height(int n) const;
    /// log delta_n = -a_{n+1}.
    double log_delta(int n) const;

    double value_at(Point p) const;
    /// log of the integral of e^w from 0 to the point.
    double log_integral_at(Point p) const;
    /// Midpoint of the n-th ramp, where w = (a_n + a_{n+1}) / 2.
    Point designated_point(int n) const { return {n, 0.5}; }

    /// (a_n + a_{n+1}) / 4 against a_n + log(2n).
    double identity_residual(int n) const;

    /// log int_0^x e^w <= w(x)/2 at each designated point, n = 2..levels().
    std::vector<LevelCheck> counterexample_checks() const;

    /// Admissibility flags evaluated on structured points, one per level.
    AdmissibilityFlags admissibility(double eps) const;

    /// Double-precision evaluator for generic code; ramps narrower than the
    /// spacing of doubles collapse to jumps.
    WFunction as_function() const;

private:
    int n_max_;
    std::vector<double> a_;
};

}  // namespace wingvol
