#include "wingvol/cli/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "wingvol/cev.hpp"
#include "wingvol/heston_kou.hpp"

namespace wingvol::cli {

namespace {

const std::set<std::string> kModels = {"blackscholes", "cev", "heston_kou", "external-csv"};
const std::set<std::string> kWeights = {"power", "log-power", "pathological"};
const std::set<std::string> kParams = {"spot",  "rate",   "sigma", "rho",   "eta1",  "eta2",       "lambda",
                                       "p_up",  "v0",     "kappa", "theta", "volvol", "corr",      "w_exponent",
                                       "eps",   "levels", "tail_fraction"};

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double to_number(const std::string& value, const std::string& origin, const std::string& key) {
    const std::string v = trim(value);
    char* end = nullptr;
    errno = 0;
    const double x = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE || !std::isfinite(x)) {
        throw ConfigError(origin + ": " + key + " expects a finite number, got '" + v + "'");
    }
    return x;
}

std::size_t to_count(const std::string& value, const std::string& origin, const std::string& key) {
    const double x = to_number(value, origin, key);
    if (x < 0.0 || x != std::floor(x) || x > 1e7) {
        throw ConfigError(origin + ": " + key + " expects a non-negative integer, got '" + trim(value) + "'");
    }
    return static_cast<std::size_t>(x);
}

void check(bool ok, const ExperimentConfig& c, const std::string& key, const std::string& what) {
    if (ok) return;
    const auto it = c.origin.find(key);
    const std::string where = it == c.origin.end() ? "default" : it->second;
    throw ConfigError(where + ": " + key + " " + what);
}

}  // namespace

double ExperimentConfig::param(const std::string& key, double fallback) const {
    const auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

void apply_setting(ExperimentConfig& config, const std::string& raw_key, const std::string& value,
                   const std::string& origin) {
    std::string key = trim(raw_key);
    std::replace(key.begin(), key.end(), '-', '_');
    const std::string v = trim(value);
    if (key == "model") {
        if (!kModels.count(v)) throw ConfigError(origin + ": unknown model '" + v + "'");
        config.model = v;
    } else if (key == "kmin") {
        config.kmin = to_number(v, origin, key);
    } else if (key == "kmax") {
        config.kmax = to_number(v, origin, key);
    } else if (key == "n") {
        config.count = to_count(v, origin, key);
    } else if (key == "maturity") {
        config.maturity = to_number(v, origin, key);
    } else if (key == "out") {
        config.out = v;
    } else if (key == "plot") {
        config.plot = v;
    } else if (key == "input") {
        config.input = v;
    } else if (key == "w") {
        if (!kWeights.count(v)) throw ConfigError(origin + ": unknown weight '" + v + "'");
        config.w_kind = v;
    } else if (key == "p_list") {
        config.moment_orders.clear();
        std::stringstream ss(v);
        std::string item;
        while (std::getline(ss, item, ',')) config.moment_orders.push_back(to_number(item, origin, key));
        if (config.moment_orders.empty()) throw ConfigError(origin + ": p_list is empty");
    } else if (key == "seed") {
        config.seed = to_count(v, origin, key);
    } else if (kParams.count(key)) {
        config.params[key] = to_number(v, origin, key);
    } else {
        throw ConfigError(origin + ": unknown key '" + trim(raw_key) + "'");
    }
    config.origin[key] = origin;
}

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
    ExperimentConfig config;
    std::istringstream in(text);
    std::string line;
    for (int number = 1; std::getline(in, line); ++number) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const std::string origin = source + ":" + std::to_string(number);
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(origin + ": expected key = value");
        apply_setting(config, line.substr(0, eq), line.substr(eq + 1), origin);
    }
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), path);
}

void finalize_config(ExperimentConfig& c) {
    const double spot = c.param("spot", 1.0);
    check(spot > 0.0, c, "spot", "must be positive");
    if (c.kmin == 0.0 && !c.origin.count("kmin")) c.kmin = 0.5 * spot;
    if (c.kmax == 0.0 && !c.origin.count("kmax")) c.kmax = 2.0 * spot;
    check(c.kmin > 0.0, c, "kmin", "must be positive");
    check(c.kmin < c.kmax, c, "kmax", "must exceed kmin");
    check(c.count >= 10, c, "n", "must be at least 10");
    check(c.maturity > 0.0, c, "maturity", "must be positive");
    check(c.param("rate", 0.0) >= 0.0, c, "rate", "must be non-negative");
    if (c.model == "blackscholes") {
        check(c.param("sigma", 0.2) > 0.0, c, "sigma", "must be positive");
    } else if (c.model == "cev") {
        check(c.param("rate", 0.0) == 0.0, c, "rate", "must be zero for the cev model");
        CevParams p{spot, c.param("sigma", 0.25), c.param("rho", 0.5)};
        try {
            p.validate();
        } catch (const InvalidArgument& e) {
            throw ConfigError(std::string("cev parameters: ") + e.what());
        }
    } else if (c.model == "heston_kou") {
        HestonKouParams p;
        p.spot = spot;
        p.rate = c.param("rate", p.rate);
        p.v0 = c.param("v0", p.v0);
        p.kappa = c.param("kappa", p.kappa);
        p.theta = c.param("theta", p.theta);
        p.volvol = c.param("volvol", p.volvol);
        p.corr = c.param("corr", p.corr);
        p.lambda = c.param("lambda", p.lambda);
        p.p_up = c.param("p_up", p.p_up);
        p.eta1 = c.param("eta1", p.eta1);
        p.eta2 = c.param("eta2", p.eta2);
        try {
            p.validate();
        } catch (const InvalidArgument& e) {
            throw ConfigError(std::string("heston_kou parameters: ") + e.what());
        }
    } else if (c.model == "external-csv") {
        check(!c.input.empty(), c, "input", "is required for the external-csv model");
    }
}

}  // namespace wingvol::cli
