#pragma once

#include <functional>
#include <vector>

#include "wingvol/black_scholes.hpp"
#include "wingvol/grid.hpp"

namespace wingvol {

/// Strike reflection through the forward: F^2 / K.
double eta_T(const MarketSetup& setup, double strike);

/// Call pricing function G(K) = (K/F) P(eta(K)) built from a put curve.
struct SymmetricCurve {
    MarketSetup setup;
    PricingCurve source;
    PricingCurve transformed;

    double price(double strike) const { return transformed.price(strike); }
    double log_price(double strike) const { return transformed.log_price(strike); }
};

/// Throws WrongSide unless `put_curve` is a put curve.
SymmetricCurve symmetric_call(const PricingCurve& put_curve, const MarketSetup& setup);

/// Put K -> (K/F) C(eta(K)) of the reflected model, from the original call curve.
PricingCurve symmetric_put(const PricingCurve& call_curve, const MarketSetup& setup);

/// Put curve obtained from a call curve by put-call parity.
PricingCurve parity_put(const PricingCurve& call_curve, const MarketSetup& setup);

/// Implied vol from whichever of the two curves is out of the money at K.
std::function<double(double)> otm_iv_function(const PricingCurve& call_curve, const PricingCurve& put_curve,
                                              const MarketSetup& setup);

/// Implied vol of the reflected model G at K, again from its out-of-the-money side.
std::function<double(double)> symmetric_iv_function(const PricingCurve& call_curve, const PricingCurve& put_curve,
                                                    const MarketSetup& setup);

/// max over the grid of |I_C(K) - I_G(eta(K))|.
double iv_symmetry_check(const std::function<double(double)>& iv_c, const std::function<double(double)>& iv_g,
                         const MarketSetup& setup, const std::vector<double>& grid);

/// Law of X_T: log density of the absolutely continuous part plus an atom at zero.
struct DensityOracle {
    std::function<double(double)> log_density;
    double atom_mass = 0.0;
    /// Typical width of the density in log x, used to size quadrature panels.
    double log_width = 0.1;
};

struct MomentDuality {
    double lhs = 0.0;
    double rhs = 0.0;
    double relative_gap = 0.0;
};

/// E[U^q] over the absolutely continuous part, integrated in log x from the mode
/// outwards until panels fall below 1e-12 of the total. Throws DivergentMoment
/// when panel contributions keep growing.
double log_moment(const std::function<double(double)>& log_density, double q, double center, double log_width);

/// Compares m_p of the reflected law (quadrature against its density) with
/// F^{2p-1} m_{1-p}(X_T). The atom at zero carries no weight on the right-hand
/// side; for p > 1 an atom makes the negative moment infinite and DivergentMoment is thrown.
MomentDuality moment_dual_check(const DensityOracle& oracle, double p, const MarketSetup& setup);

}  // namespace wingvol
