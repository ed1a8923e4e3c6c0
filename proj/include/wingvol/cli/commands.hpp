#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "wingvol/black_scholes.hpp"
#include "wingvol/cli/config.hpp"
#include "wingvol/grid.hpp"
#include "wingvol/smile_kernel.hpp"
#include "wingvol/symmetry.hpp"

namespace wingvol::cli {

/// Pricing curves and wing predictions of the configured model.
struct ModelHandle {
    MarketSetup setup;
    PricingCurve call;
    PricingCurve put;
    std::optional<DensityOracle> density;
    /// Moment indices p~ and q~ the model predicts; infinite when every moment
    /// is finite, NaN when unknown.
    double p_tilde = 0.0;
    double q_tilde = 0.0;
    std::string right_note;
    std::string left_note;
    /// Quotes of the external-csv model, in file order.
    std::vector<OptionQuote> quotes;
};

ModelHandle build_model(const ExperimentConfig& config);

/// Reads `strike,price,side` quotes and rejects prices outside the no-arbitrage bounds.
std::vector<OptionQuote> read_quotes_csv(const std::string& path, const MarketSetup& setup);

/// strike, price, side, implied_vol, log_strike, flag with 17 significant digits.
void write_smile_csv(const std::vector<SmilePoint>& rows, std::ostream& out);

/// Each command writes a text report to `report` and its CSV / plot files as configured.
int cmd_smile(const ExperimentConfig& config, std::ostream& report);
int cmd_wings(const ExperimentConfig& config, std::ostream& report);
int cmd_piterbarg(const ExperimentConfig& config, std::ostream& report);
int cmd_symmetry(const ExperimentConfig& config, std::ostream& report);

}  // namespace wingvol::cli
