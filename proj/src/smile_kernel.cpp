#include "wingvol/smile_kernel.hpp"

#include <cmath>
#include <limits>

#include "wingvol/detail/parallel.hpp"
#include "wingvol/errors.hpp"

namespace wingvol {

namespace {

SmilePoint evaluate_point(const MarketSetup& setup, const PricingCurve& call_curve, const PricingCurve& put_curve,
                          double strike) {
    SmilePoint pt;
    pt.strike = strike;
    pt.log_strike = std::log(strike);
    pt.side = otm_side(setup, strike);
    pt.implied_vol = std::numeric_limits<double>::quiet_NaN();
    const PricingCurve& curve = pt.side == OptionSide::Call ? call_curve : put_curve;
    try {
        pt.log_price = curve.log_price(strike);
    } catch (const Error&) {
        pt.log_price = std::numeric_limits<double>::quiet_NaN();
        pt.price = pt.log_price;
        pt.flag = "pricing_failed";
        return pt;
    }
    pt.price = std::exp(pt.log_price);
    if (pt.log_price == -std::numeric_limits<double>::infinity()) {
        pt.flag = "zero_price";
        return pt;
    }
    try {
        pt.implied_vol = implied_vol_from_log_otm(setup, strike, pt.log_price);
        if (pt.price == 0.0) pt.flag = "underflow";
    } catch (const PriceOutOfBounds&) {
        pt.flag = "out_of_bounds";
    } catch (const Error&) {
        pt.flag = "no_convergence";
    }
    return pt;
}

}  // namespace

std::vector<SmilePoint> evaluate_smile(const MarketSetup& setup, const PricingCurve& call_curve,
                                       const PricingCurve& put_curve, const std::vector<double>& grid) {
    setup.validate();
    std::vector<SmilePoint> out(grid.size());
    detail::parallel_for(grid.size(),
                         [&](std::size_t i) { out[i] = evaluate_point(setup, call_curve, put_curve, grid[i]); });
    return out;
}

std::vector<SmilePoint> evaluate_smile_serial(const MarketSetup& setup, const PricingCurve& call_curve,
                                              const PricingCurve& put_curve, const std::vector<double>& grid) {
    setup.validate();
    std::vector<SmilePoint> out;
    out.reserve(grid.size());
    for (double k : grid) out.push_back(evaluate_point(setup, call_curve, put_curve, k));
    return out;
}

}  // namespace wingvol
