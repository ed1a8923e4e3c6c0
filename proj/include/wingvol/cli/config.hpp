#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "wingvol/errors.hpp"

namespace wingvol::cli {

/// Bad configuration input; the message carries the source and line or field.
class ConfigError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// One experiment: model, parameters, strike grid and outputs.
struct ExperimentConfig {
    std::string model = "blackscholes";
    /// Numeric model parameters keyed by name (sigma, rho, eta1, ...).
    std::map<std::string, double> params;
    double kmin = 0.0;
    double kmax = 0.0;
    std::size_t count = 50;
    double maturity = 1.0;
    /// CSV output path; empty writes nothing.
    std::string out;
    /// Prefix for two-column plot data files; empty writes nothing.
    std::string plot;
    /// Quote file for the external-csv model.
    std::string input;
    /// Weight for the piterbarg command: power, log-power or pathological.
    std::string w_kind = "power";
    std::vector<double> moment_orders = {0.3, 0.5, 0.7, 1.0};
    /// Reserved; no command draws random numbers.
    unsigned long seed = 0;
    /// Where each key was last set, for diagnostics.
    std::map<std::string, std::string> origin;

    /// Parameter value or `fallback` when it was never set.
    double param(const std::string& key, double fallback) const;
    bool has_param(const std::string& key) const { return params.count(key) != 0; }
};

/// Parses flat `key = value` lines; `#` starts a comment.
ExperimentConfig parse_config(const std::string& text, const std::string& source);
ExperimentConfig load_config(const std::string& path);

/// Sets one key, as read from a file line or a command-line flag. Dashes in
/// the key are read as underscores.
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value,
                   const std::string& origin);

/// Fills grid defaults and checks ranges and model invariants.
void finalize_config(ExperimentConfig& config);

}  // namespace wingvol::cli
