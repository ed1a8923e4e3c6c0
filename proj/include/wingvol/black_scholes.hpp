#pragma once

#include <string_view>

namespace wingvol {

enum class OptionSide { Call, Put };

std::string_view to_string(OptionSide side);
OptionSide parse_side(std::string_view text);

/// Fixed-maturity market slice: spot x0, continuously compounded rate r, maturity T.
struct MarketSetup {
    double spot = 1.0;
    double rate = 0.0;
    double maturity = 1.0;

    double discount() const;
    double forward() const;
    /// Throws InvalidArgument unless spot > 0, maturity > 0, rate >= 0 (all finite).
    void validate() const;
};

struct OptionQuote {
    double strike = 0.0;
    double price = 0.0;
    OptionSide side = OptionSide::Call;
};

double norm_pdf(double x);
/// Standard normal CDF through erfc, accurate in the far left tail.
double norm_cdf(double x);
/// Scaled complementary error function exp(x^2) * erfc(x).
double erfcx(double x);

double bs_call_price(const MarketSetup& setup, double strike, double vol);
double bs_put_price(const MarketSetup& setup, double strike, double vol);
double bs_price(const MarketSetup& setup, double strike, double vol, OptionSide side);
double bs_vega(const MarketSetup& setup, double strike, double vol);

/// Side that is out of the money at `strike`: call for K >= forward, put below.
OptionSide otm_side(const MarketSetup& setup, double strike);

/// log of the out-of-the-money Black-Scholes price. Finite even where the
/// price itself underflows a double.
double bs_log_otm_price(const MarketSetup& setup, double strike, double vol);

struct ImpliedVolOptions {
    double lower = 1e-8;
    double upper = 5.0;
    int max_iterations = 200;
};

/// Implied volatility of a quote.
///
/// Works on the out-of-the-money equivalent of the quote (parity moves ITM
/// quotes across) and runs a bracketed Newton iteration on the log of the
/// normalized price, so deep-wing quotes keep full relative precision.
/// Throws PriceOutOfBounds when the price is not strictly inside the
/// no-arbitrage bounds and NoConvergence when the iteration budget runs out.
double implied_vol(const MarketSetup& setup, const OptionQuote& quote, const ImpliedVolOptions& options = {});

/// Implied volatility from the log of an out-of-the-money price.
double implied_vol_from_log_otm(const MarketSetup& setup, double strike, double log_otm_price,
                                const ImpliedVolOptions& options = {});

}  // namespace wingvol
