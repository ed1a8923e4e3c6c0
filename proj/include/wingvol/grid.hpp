#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "wingvol/black_scholes.hpp"

namespace wingvol {

/// n points from lo to hi, equally spaced in log.
std::vector<double> geometric_grid(double lo, double hi, std::size_t n);

/// Strike-to-price mapping on one side of the market. Prices are carried as
/// logs so that wing values below the double range stay usable.
struct PricingCurve {
    OptionSide side = OptionSide::Call;
    std::function<double(double)> log_price;

    double price(double strike) const;

    static PricingCurve from_prices(OptionSide side, std::function<double(double)> price_fn);
    static PricingCurve from_log_prices(OptionSide side, std::function<double(double)> log_price_fn);
    /// Piecewise-linear interpolation in (log strike, log price) through positive samples.
    static PricingCurve from_samples(OptionSide side, std::vector<double> strikes, std::vector<double> prices);
};

}  // namespace wingvol
