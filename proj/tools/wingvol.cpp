#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wingvol/cli/commands.hpp"
#include "wingvol/cli/config.hpp"

namespace {

struct Flag {
    const char* name;
    const char* key;
    const char* help;
};

const std::vector<Flag> kFlags = {
    {"--model", "model", "blackscholes | cev | heston_kou | external-csv"},
    {"--out", "out", "CSV output path"},
    {"--plot", "plot", "prefix for two-column plot data files"},
    {"--input", "input", "quote file for external-csv"},
    {"--kmin", "kmin", "lowest strike"},
    {"--kmax", "kmax", "highest strike"},
    {"--n", "n", "number of strikes"},
    {"--maturity", "maturity", "maturity in years"},
    {"--spot", "spot", "spot price"},
    {"--rate", "rate", "interest rate"},
    {"--sigma", "sigma", "volatility (blackscholes, cev)"},
    {"--rho", "rho", "CEV elasticity"},
    {"--eta1", "eta1", "up-jump rate"},
    {"--eta2", "eta2", "down-jump rate"},
    {"--lambda", "lambda", "jump intensity"},
    {"--p-up", "p_up", "up-jump probability"},
    {"--v0", "v0", "initial variance"},
    {"--kappa", "kappa", "mean-reversion speed"},
    {"--theta", "theta", "long-run variance"},
    {"--volvol", "volvol", "vol of vol"},
    {"--corr", "corr", "spot-variance correlation"},
    {"--w", "w", "piterbarg weight: power | log-power | pathological"},
    {"--w-exponent", "w_exponent", "exponent of the power or log-power weight"},
    {"--eps", "eps", "admissibility tolerance"},
    {"--levels", "levels", "levels of the pathological weight"},
    {"--p-list", "p_list", "comma-separated moment orders for symmetry"},
    {"--tail-fraction", "tail_fraction", "fraction of the grid used for wing fits"},
    {"--seed", "seed", "reserved"},
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Implied volatility wing experiments"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "flat key = value config file");
    std::map<std::string, std::string> values;
    std::vector<CLI::Option*> options;
    for (const auto& f : kFlags) options.push_back(app.add_option(f.name, values[f.key], f.help));
    auto* smile = app.add_subcommand("smile", "prices and implied vols on the strike grid");
    auto* wings = app.add_subcommand("wings", "measured and predicted wing slopes");
    auto* piterbarg = app.add_subcommand("piterbarg", "weighted decay constants for all-moments-finite wings");
    auto* symmetry = app.add_subcommand("symmetry", "smile symmetry and moment duality");
    for (auto* sub : {smile, wings, piterbarg, symmetry}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        wingvol::cli::ExperimentConfig config;
        if (!config_path.empty()) config = wingvol::cli::load_config(config_path);
        for (std::size_t i = 0; i < kFlags.size(); ++i) {
            if (options[i]->count() > 0) {
                wingvol::cli::apply_setting(config, kFlags[i].key, values[kFlags[i].key],
                                            std::string("flag ") + kFlags[i].name);
            }
        }
        wingvol::cli::finalize_config(config);
        if (smile->parsed()) return wingvol::cli::cmd_smile(config, std::cout);
        if (wings->parsed()) return wingvol::cli::cmd_wings(config, std::cout);
        if (piterbarg->parsed()) return wingvol::cli::cmd_piterbarg(config, std::cout);
        return wingvol::cli::cmd_symmetry(config, std::cout);
    } catch (const wingvol::InvalidArgument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const wingvol::Error& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    }
}
