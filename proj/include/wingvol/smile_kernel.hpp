#pragma once

#include <string>
#include <vector>

#include "wingvol/black_scholes.hpp"
#include "wingvol/grid.hpp"

namespace wingvol {

/// One evaluated strike of a smile.
struct SmilePoint {
    double strike = 0.0;
    double price = 0.0;
    OptionSide side = OptionSide::Call;
    /// NaN when the implied vol could not be extracted; `flag` says why.
    double implied_vol = 0.0;
    double log_strike = 0.0;
    double log_price = 0.0;
    std::string flag;
};

/// Prices and implied vols on the out-of-the-money side at every strike of the
/// grid. Strikes are evaluated in parallel; the result is in grid order.
std::vector<SmilePoint> evaluate_smile(const MarketSetup& setup, const PricingCurve& call_curve,
                                       const PricingCurve& put_curve, const std::vector<double>& grid);

/// Single-threaded reference with identical output.
std::vector<SmilePoint> evaluate_smile_serial(const MarketSetup& setup, const PricingCurve& call_curve,
                                              const PricingCurve& put_curve, const std::vector<double>& grid);

}  // namespace wingvol
