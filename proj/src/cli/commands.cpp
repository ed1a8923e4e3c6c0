#include "wingvol/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "wingvol/asymptotics.hpp"
#include "wingvol/cev.hpp"
#include "wingvol/heston_kou.hpp"
#include "wingvol/pathological_w.hpp"
#include "wingvol/regvar.hpp"

namespace wingvol::cli {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double x) {
    if (std::isnan(x)) return "";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string short_num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError(path + ": cannot open output file");
    return out;
}

void write_dat(const std::string& path, const std::vector<double>& x, const std::vector<double>& y) {
    std::ofstream out = open_output(path);
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
        if (std::isnan(y[i])) continue;
        out << num(x[i]) << ' ' << num(y[i]) << '\n';
    }
}

std::vector<double> config_grid(const ExperimentConfig& c) { return geometric_grid(c.kmin, c.kmax, c.count); }

// Lognormal law of X_T under Black-Scholes.
DensityOracle lognormal_oracle(const MarketSetup& setup, double vol) {
    const double sd = vol * std::sqrt(setup.maturity);
    const double mean = std::log(setup.forward()) - 0.5 * sd * sd;
    DensityOracle oracle;
    oracle.log_density = [sd, mean](double s) {
        if (!(s > 0.0)) return -kInf;
        const double z = (std::log(s) - mean) / sd;
        return -0.5 * z * z - std::log(s * sd) - 0.5 * std::log(2.0 * 3.14159265358979323846);
    };
    oracle.log_width = std::clamp(sd, 1e-3, 1.0);
    return oracle;
}

HestonKouParams heston_kou_params(const ExperimentConfig& c) {
    HestonKouParams p;
    p.spot = c.param("spot", 1.0);
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
    return p;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto first = item.find_first_not_of(" \t\r");
        const auto last = item.find_last_not_of(" \t\r");
        out.push_back(first == std::string::npos ? "" : item.substr(first, last - first + 1));
    }
    return out;
}

}  // namespace

std::vector<OptionQuote> read_quotes_csv(const std::string& path, const MarketSetup& setup) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open quote file");
    std::string line;
    if (!std::getline(in, line) || split_csv_line(line) != std::vector<std::string>{"strike", "price", "side"}) {
        throw ConfigError(path + ":1: header must be strike,price,side");
    }
    std::vector<OptionQuote> quotes;
    for (int number = 2; std::getline(in, line); ++number) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::string where = path + ":" + std::to_string(number);
        const auto fields = split_csv_line(line);
        if (fields.size() != 3) throw ConfigError(where + ": expected 3 fields");
        OptionQuote q;
        try {
            std::size_t used = 0;
            q.strike = std::stod(fields[0], &used);
            if (used != fields[0].size()) throw std::invalid_argument("trailing");
            q.price = std::stod(fields[1], &used);
            if (used != fields[1].size()) throw std::invalid_argument("trailing");
            q.side = parse_side(fields[2]);
        } catch (const std::exception&) {
            throw ConfigError(where + ": cannot parse quote '" + line + "'");
        }
        if (!(q.strike > 0.0) || !std::isfinite(q.strike)) throw ConfigError(where + ": strike must be positive");
        const double df = setup.discount();
        const double lower = q.side == OptionSide::Call ? std::max(setup.spot - q.strike * df, 0.0)
                                                        : std::max(q.strike * df - setup.spot, 0.0);
        const double upper = q.side == OptionSide::Call ? setup.spot : q.strike * df;
        if (!(q.price > lower && q.price < upper)) {
            throw ConfigError(where + ": price " + short_num(q.price) + " outside the no-arbitrage bounds (" +
                              short_num(lower) + ", " + short_num(upper) + ")");
        }
        quotes.push_back(q);
    }
    if (quotes.empty()) throw ConfigError(path + ": no quotes");
    return quotes;
}

ModelHandle build_model(const ExperimentConfig& c) {
    ModelHandle h;
    const double spot = c.param("spot", 1.0);
    h.setup = {spot, c.param("rate", 0.0), c.maturity};
    if (c.model == "blackscholes") {
        const double vol = c.param("sigma", 0.2);
        const MarketSetup s = h.setup;
        h.call = {OptionSide::Call, [s, vol](double k) {
                      return k >= s.forward() ? bs_log_otm_price(s, k, vol) : std::log(bs_call_price(s, k, vol));
                  }};
        h.put = {OptionSide::Put, [s, vol](double k) {
                     return k <= s.forward() ? bs_log_otm_price(s, k, vol) : std::log(bs_put_price(s, k, vol));
                 }};
        h.density = lognormal_oracle(s, vol);
        h.p_tilde = kInf;
        h.q_tilde = kInf;
        h.right_note = "lognormal: every moment finite";
        h.left_note = h.right_note;
    } else if (c.model == "cev") {
        const CevModel model({spot, c.param("sigma", 0.25), c.param("rho", 0.5)}, c.maturity);
        h.setup = model.setup();
        h.call = model.call_curve();
        h.put = model.put_curve();
        h.density = model.density_oracle();
        h.p_tilde = kInf;
        h.q_tilde = 2.0 * (1.0 - model.params().rho);
        h.right_note = "every positive moment finite";
        h.left_note = "continuous part; atom at zero has log mass " + short_num(model.log_mass_at_zero());
    } else if (c.model == "heston_kou") {
        const HestonKouPricer pricer(heston_kou_params(c), c.maturity);
        h.call = pricer.call_curve();
        h.put = pricer.put_curve();
        h.p_tilde = pricer.p_tilde();
        h.q_tilde = pricer.q_tilde();
        h.right_note = "critical moment from the Riccati explosion and the up-jump rate";
        h.left_note = "critical moment from the Riccati explosion and the down-jump rate";
    } else {
        h.quotes = read_quotes_csv(c.input, h.setup);
        std::vector<double> ck, cp, pk, pp;
        for (const auto& q : h.quotes) {
            (q.side == OptionSide::Call ? ck : pk).push_back(q.strike);
            (q.side == OptionSide::Call ? cp : pp).push_back(q.price);
        }
        if (ck.size() >= 2) h.call = PricingCurve::from_samples(OptionSide::Call, ck, cp);
        if (pk.size() >= 2) h.put = PricingCurve::from_samples(OptionSide::Put, pk, pp);
        h.p_tilde = kNaN;
        h.q_tilde = kNaN;
        h.right_note = "external quotes";
        h.left_note = h.right_note;
    }
    return h;
}

void write_smile_csv(const std::vector<SmilePoint>& rows, std::ostream& out) {
    out << "strike,price,side,implied_vol,log_strike,flag\n";
    for (const auto& r : rows) {
        out << num(r.strike) << ',' << num(r.price) << ',' << to_string(r.side) << ',' << num(r.implied_vol) << ','
            << num(r.log_strike) << ',' << r.flag << '\n';
    }
}

int cmd_smile(const ExperimentConfig& c, std::ostream& report) {
    const ModelHandle h = build_model(c);
    std::vector<SmilePoint> rows;
    if (c.model == "external-csv") {
        for (const auto& q : h.quotes) {
            SmilePoint pt;
            pt.strike = q.strike;
            pt.price = q.price;
            pt.side = q.side;
            pt.log_strike = std::log(q.strike);
            pt.log_price = std::log(q.price);
            try {
                pt.implied_vol = implied_vol(h.setup, q);
            } catch (const Error&) {
                pt.implied_vol = kNaN;
                pt.flag = "no_convergence";
            }
            rows.push_back(pt);
        }
    } else {
        rows = evaluate_smile(h.setup, h.call, h.put, config_grid(c));
    }
    std::size_t flagged = 0;
    for (const auto& r : rows) flagged += std::isnan(r.implied_vol) ? 1 : 0;
    if (!c.out.empty()) {
        std::ofstream out = open_output(c.out);
        write_smile_csv(rows, out);
    }
    if (!c.plot.empty()) {
        std::vector<double> k, iv, lp;
        for (const auto& r : rows) {
            k.push_back(r.strike);
            iv.push_back(r.implied_vol);
            lp.push_back(r.log_price);
        }
        write_dat(c.plot + "_iv.dat", k, iv);
        write_dat(c.plot + "_logprice.dat", k, lp);
    }
    report << "smile: model " << c.model << ", " << rows.size() << " strikes, " << flagged
           << " without implied vol\n";
    if (c.out.empty()) write_smile_csv(rows, report);
    return 0;
}

int cmd_wings(const ExperimentConfig& c, std::ostream& report) {
    const ModelHandle h = build_model(c);
    const std::vector<double> grid = config_grid(c);
    const double tail = c.param("tail_fraction", 0.25);
    std::ostringstream csv;
    csv << "wing,strikes,measured_tail_mean,measured_last,moment_index,predicted,gap,flat_smile,monotone_tail\n";
    int status = 0;
    for (const bool right : {true, false}) {
        const std::string name = right ? "right" : "left";
        const PricingCurve& curve = right ? h.call : h.put;
        const double index = right ? h.p_tilde : h.q_tilde;
        if (!curve.log_price) {
            report << name << " wing: no quotes on this side\n";
            continue;
        }
        WingSlopeFit fit;
        try {
            fit = measure_wing_slope(h.setup, curve, grid, tail);
        } catch (const NoConvergence& e) {
            report << name << " wing: " << e.what() << '\n';
            status = 3;
            continue;
        }
        const double predicted = std::isnan(index) ? kNaN : psi(index);
        const double gap = predicted > 0.0 ? std::abs(fit.last - predicted) / predicted : kNaN;
        report << name << " wing (" << (right ? h.right_note : h.left_note) << ")\n";
        report << "  measured T I^2/|log(K/F)|: tail mean " << short_num(fit.tail_mean) << ", last "
               << short_num(fit.last) << " over " << fit.slopes.size() << " strikes";
        if (fit.failures) report << " (" << fit.failures << " strikes without implied vol)";
        report << '\n';
        if (fit.flat_smile) report << "  flat smile: slope tends to 0 along the wing\n";
        if (!std::isnan(index)) {
            report << "  predicted psi(" << short_num(index) << ") = " << short_num(predicted);
            if (!std::isnan(gap)) report << ", relative gap " << short_num(gap);
            report << '\n';
        }
        if (right && c.model == "heston_kou" && std::isfinite(index)) {
            report << "  candidates: psi(p~) = " << short_num(psi(index)) << ", psi(p~ + 1) = "
                   << short_num(psi(index + 1.0)) << "; measurement closer to "
                   << (std::abs(fit.last - psi(index)) <= std::abs(fit.last - psi(index + 1.0)) ? "psi(p~)"
                                                                                              : "psi(p~ + 1)")
                   << '\n';
        }
        csv << name << ',' << fit.slopes.size() << ',' << num(fit.tail_mean) << ',' << num(fit.last) << ','
            << num(index) << ',' << num(predicted) << ',' << num(gap) << ',' << (fit.flat_smile ? 1 : 0) << ','
            << (fit.monotone_tail ? 1 : 0) << '\n';
        if (!c.plot.empty()) write_dat(c.plot + "_" + name + ".dat", fit.strikes, fit.slopes);
    }
    if (!c.out.empty()) {
        std::ofstream out = open_output(c.out);
        out << csv.str();
    }
    return status;
}

int cmd_piterbarg(const ExperimentConfig& c, std::ostream& report) {
    const double eps = c.param("eps", 0.1);
    if (c.w_kind == "pathological") {
        const int levels = static_cast<int>(c.param("levels", 10));
        const PathologicalW w(levels);
        const AdmissibilityFlags flags = w.admissibility(eps);
        report << "pathological w with " << levels << " levels, eps " << short_num(eps) << '\n';
        report << "  integral condition: " << (flags.integral_condition ? "holds" : "fails") << '\n';
        report << "  derivative upper bound: " << (flags.derivative_upper ? "holds" : "fails") << '\n';
        report << "  derivative lower bound: " << (flags.derivative_lower ? "holds" : "fails") << '\n';
        std::ostringstream csv;
        csv << "level,log_integral,half_w,holds\n";
        for (const auto& check : w.counterexample_checks()) {
            report << "  level " << check.level << ": log int e^w = " << short_num(check.log_integral)
                   << " vs w/2 = " << short_num(check.half_w) << (check.holds ? "  (<=)" : "  (>)") << '\n';
            csv << check.level << ',' << num(check.log_integral) << ',' << num(check.half_w) << ','
                << (check.holds ? 1 : 0) << '\n';
        }
        if (!c.out.empty()) {
            std::ofstream out = open_output(c.out);
            out << csv.str();
        }
        return 0;
    }
    const ModelHandle h = build_model(c);
    if (!h.call.log_price) throw ConfigError("piterbarg needs call prices");
    const double default_exponent = c.model == "cev" ? 2.0 * (1.0 - c.param("rho", 0.5)) : 2.0;
    const double exponent = c.param("w_exponent", c.w_kind == "power" ? default_exponent : 2.0);
    const WFunction w = c.w_kind == "power" ? WFunction::power(exponent) : WFunction::log_power(exponent);
    const std::vector<double> grid = config_grid(c);
    if (!check_w_growth(w, grid)) {
        report << "w = " << w.name << " fails the growth check on [" << short_num(c.kmin) << ", "
               << short_num(c.kmax) << "]: w(y)/log y must increase and exceed 5 at the top of the grid\n";
        return 3;
    }
    const PiterbargConstants pc = estimate_piterbarg_constants(h.call, w, grid);
    const double gamma = piterbarg_gamma_predicted(pc.p_hat_w, h.setup.maturity);
    const AdmissibilityFlags flags = check_w_admissible(w, eps, grid);
    std::vector<double> lambda(grid.size(), kNaN);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] <= h.setup.forward()) continue;
        try {
            const double iv = implied_vol_from_log_otm(h.setup, grid[i], h.call.log_price(grid[i]));
            lambda[i] = piterbarg_lambda(grid[i], iv, w);
        } catch (const Error&) {
        }
    }
    report << "w = " << w.name << '\n';
    report << "  l_w = " << short_num(pc.l_w) << ", r*_w = " << short_num(pc.r_star_w)
           << ", p^_w = " << short_num(pc.p_hat_w) << '\n';
    report << "  predicted gamma_w = 1/sqrt(2 T p^_w) = " << short_num(gamma) << '\n';
    report << "  Lambda(K) at the top strikes:";
    for (std::size_t i = grid.size() >= 3 ? grid.size() - 3 : 0; i < grid.size(); ++i) {
        report << ' ' << short_num(lambda[i]);
    }
    report << '\n';
    report << "  admissibility (eps " << short_num(eps) << "): integral " << (flags.integral_condition ? "holds" : "fails")
           << ", w' upper " << (flags.derivative_upper ? "holds" : "fails") << ", w' lower "
           << (flags.derivative_lower ? "holds" : "fails") << '\n';
    if (!c.out.empty()) {
        std::ofstream out = open_output(c.out);
        out << "strike,ratio,lambda\n";
        for (std::size_t i = 0; i < grid.size(); ++i) {
            out << num(grid[i]) << ',' << num(i < pc.ratios.size() ? pc.ratios[i] : kNaN) << ',' << num(lambda[i])
                << '\n';
        }
    }
    if (!c.plot.empty()) {
        write_dat(c.plot + "_ratio.dat", pc.grid, pc.ratios);
        write_dat(c.plot + "_lambda.dat", grid, lambda);
    }
    return 0;
}

int cmd_symmetry(const ExperimentConfig& c, std::ostream& report) {
    const ModelHandle h = build_model(c);
    if (!h.call.log_price || !h.put.log_price) throw ConfigError("symmetry needs both call and put prices");
    const std::vector<double> grid = config_grid(c);
    const auto iv_c = otm_iv_function(h.call, h.put, h.setup);
    const auto iv_g = symmetric_iv_function(h.call, h.put, h.setup);
    const double deviation = iv_symmetry_check(iv_c, iv_g, h.setup, grid);
    report << "max |I_C(K) - I_G(F^2/K)| over " << grid.size() << " strikes: " << short_num(deviation) << '\n';
    std::ostringstream csv;
    csv << "quantity,order,lhs,rhs,value\n";
    csv << "iv_symmetry,," << ",," << num(deviation) << '\n';
    if (h.density) {
        for (double p : c.moment_orders) {
            try {
                const MomentDuality d = moment_dual_check(*h.density, p, h.setup);
                report << "moment duality p = " << short_num(p) << ": " << short_num(d.lhs) << " vs "
                       << short_num(d.rhs) << ", relative gap " << short_num(d.relative_gap) << '\n';
                csv << "moment_duality," << num(p) << ',' << num(d.lhs) << ',' << num(d.rhs) << ','
                    << num(d.relative_gap) << '\n';
            } catch (const DivergentMoment& e) {
                report << "moment duality p = " << short_num(p) << ": divergent (" << e.what() << ")\n";
                csv << "moment_duality," << num(p) << ",,,\n";
            }
        }
    } else {
        report << "moment duality: no density for model " << c.model << '\n';
    }
    if (!c.out.empty()) {
        std::ofstream out = open_output(c.out);
        out << csv.str();
    }
    if (!c.plot.empty()) {
        std::vector<double> a(grid.size()), b(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            a[i] = iv_c(grid[i]);
            b[i] = iv_g(eta_T(h.setup, grid[i]));
        }
        write_dat(c.plot + "_iv_c.dat", grid, a);
        write_dat(c.plot + "_iv_g.dat", grid, b);
    }
    return 0;
}

}  // namespace wingvol::cli
