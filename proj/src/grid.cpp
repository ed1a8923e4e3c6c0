#include "wingvol/grid.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

#include "wingvol/errors.hpp"

namespace wingvol {

std::vector<double> geometric_grid(double lo, double hi, std::size_t n) {
    detail::require(lo > 0.0 && std::isfinite(lo) && std::isfinite(hi), "grid bounds must be positive and finite");
    detail::require(hi > lo, "grid upper bound must exceed lower bound");
    detail::require(n >= 2, "grid needs at least two points");
    std::vector<double> out(n);
    const double log_lo = std::log(lo);
    const double step = (std::log(hi) - log_lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(log_lo + step * static_cast<double>(i));
    out.front() = lo;
    out.back() = hi;
    return out;
}

double PricingCurve::price(double strike) const { return std::exp(log_price(strike)); }

PricingCurve PricingCurve::from_prices(OptionSide side, std::function<double(double)> price_fn) {
    return {side, [fn = std::move(price_fn)](double k) { return std::log(fn(k)); }};
}

PricingCurve PricingCurve::from_log_prices(OptionSide side, std::function<double(double)> log_price_fn) {
    return {side, std::move(log_price_fn)};
}

PricingCurve PricingCurve::from_samples(OptionSide side, std::vector<double> strikes, std::vector<double> prices) {
    detail::require(strikes.size() == prices.size(), "strike and price samples differ in length");
    detail::require(strikes.size() >= 2, "need at least two samples");
    std::vector<std::size_t> order(strikes.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return strikes[a] < strikes[b]; });
    auto xs = std::make_shared<std::vector<double>>();
    auto ys = std::make_shared<std::vector<double>>();
    for (std::size_t i : order) {
        if (!(strikes[i] > 0.0) || !(prices[i] > 0.0)) throw NonPositiveSample("samples must be positive");
        xs->push_back(std::log(strikes[i]));
        ys->push_back(std::log(prices[i]));
    }
    return {side, [xs, ys](double k) {
                const double x = std::log(k);
                auto it = std::upper_bound(xs->begin(), xs->end(), x);
                std::size_t j = static_cast<std::size_t>(it - xs->begin());
                j = std::clamp<std::size_t>(j, 1, xs->size() - 1);
                const double w = ((*xs)[j] - x) / ((*xs)[j] - (*xs)[j - 1]);
                return w * (*ys)[j - 1] + (1.0 - w) * (*ys)[j];
            }};
}

}  // namespace wingvol
