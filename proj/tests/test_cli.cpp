#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "wingvol/cli/commands.hpp"
#include "wingvol/cli/config.hpp"

using namespace wingvol;
using namespace wingvol::cli;

namespace {

namespace fs = std::filesystem;

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / "wingvol_cli_tests";
    fs::create_directories(dir);
    return dir;
}

std::string write_file(const std::string& name, const std::string& text) {
    const fs::path p = scratch_dir() / name;
    std::ofstream(p) << text;
    return p.string();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ExperimentConfig finalized(const std::string& text) {
    auto c = parse_config(text, "test.cfg");
    finalize_config(c);
    return c;
}

int run_cli(const std::string& args, std::string* err = nullptr) {
    const std::string err_path = (scratch_dir() / "stderr.txt").string();
    const std::string cmd = std::string(WINGVOL_CLI_PATH) + " " + args + " > /dev/null 2> " + err_path;
    const int status = std::system(cmd.c_str());
    if (err) *err = read_file(err_path);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("config parsing") {
    const auto c = parse_config("# experiment\nmodel = cev\nsigma = 0.3  # scale\n\nrho=0.6\nn = 20\nkmin = 50\nkmax = 150\n"
                                "p-list = 0.2, 0.8\n",
                                "exp.cfg");
    CHECK(c.model == "cev");
    CHECK(c.param("sigma", 0.0) == 0.3);
    CHECK(c.param("rho", 0.0) == 0.6);
    CHECK(c.count == 20);
    CHECK(c.kmin == 50.0);
    CHECK(c.moment_orders == std::vector<double>{0.2, 0.8});
    CHECK(c.origin.at("sigma") == "exp.cfg:3");
    CHECK(c.param("eta1", 7.0) == 7.0);
}

TEST_CASE("config diagnostics carry source and line") {
    try {
        parse_config("model = cev\nsigma = abc\n", "bad.cfg");
        FAIL("expected a ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("bad.cfg:2") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config("colour = blue\n", "x.cfg"), ConfigError);
    CHECK_THROWS_AS(parse_config("sigma 0.2\n", "x.cfg"), ConfigError);
    CHECK_THROWS_AS(finalized("model = cev\nrho = 1.5\n"), ConfigError);
    CHECK_THROWS_AS(finalized("model = cev\nrate = 0.01\n"), ConfigError);
    CHECK_THROWS_AS(finalized("n = 5\n"), ConfigError);
    CHECK_THROWS_AS(finalized("kmin = 3\nkmax = 2\n"), ConfigError);
    CHECK_THROWS_AS(finalized("model = heston_kou\ncorr = 0.3\n"), ConfigError);
    CHECK_THROWS_AS(finalized("model = nonsense\n"), ConfigError);
    CHECK_THROWS_AS(finalized("model = external-csv\n"), ConfigError);
}

TEST_CASE("flags override config values") {
    auto c = parse_config("sigma = 0.3\n", "a.cfg");
    apply_setting(c, "sigma", "0.4", "flag --sigma");
    apply_setting(c, "p-up", "0.3", "flag --p-up");
    CHECK(c.param("sigma", 0.0) == 0.4);
    CHECK(c.param("p_up", 0.0) == 0.3);
    CHECK(c.origin.at("sigma") == "flag --sigma");
    finalize_config(c);
    CHECK(c.kmin == 0.5);
    CHECK(c.kmax == 2.0);
}

TEST_CASE("smile CSV format") {
    SmilePoint a;
    a.strike = 100.0;
    a.price = 7.9655674554057963;
    a.side = OptionSide::Call;
    a.implied_vol = 0.2;
    a.log_strike = std::log(100.0);
    SmilePoint b = a;
    b.implied_vol = std::nan("");
    b.price = 0.0;
    b.flag = "underflow";
    std::ostringstream out;
    write_smile_csv({a, b}, out);
    std::istringstream lines(out.str());
    std::string header, first, second;
    std::getline(lines, header);
    std::getline(lines, first);
    std::getline(lines, second);
    CHECK(header == "strike,price,side,implied_vol,log_strike,flag");
    CHECK(first == "100,7.9655674554057967,call,0.20000000000000001,4.6051701859880918,");
    CHECK(second == "100,0,call,,4.6051701859880918,underflow");
}

TEST_CASE("Black-Scholes smile has a flat implied vol column") {
    const auto c = finalized("model = blackscholes\nsigma = 0.2\nspot = 100\nkmin = 40\nkmax = 250\nn = 30\n");
    const auto h = build_model(c);
    const auto rows = evaluate_smile(h.setup, h.call, h.put, geometric_grid(c.kmin, c.kmax, c.count));
    REQUIRE(rows.size() == 30);
    for (const auto& r : rows) CHECK(std::abs(r.implied_vol - 0.2) <= 1e-10);
}

TEST_CASE("CEV smile decreases along the right wing") {
    const auto c = finalized("model = cev\nspot = 100\nsigma = 2.5\nrho = 0.5\nkmin = 110\nkmax = 2000\nn = 20\n");
    const auto h = build_model(c);
    const auto rows = evaluate_smile(h.setup, h.call, h.put, geometric_grid(c.kmin, c.kmax, c.count));
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].implied_vol < rows[i - 1].implied_vol);
}

TEST_CASE("external quotes pass through") {
    const std::string path = write_file("quotes.csv", "strike,price,side\n90,12.0,call\n100,7.9655674554057963,call\n"
                                                      "110,12.5,put\n");
    auto c = finalized("model = external-csv\nspot = 100\ninput = " + path + "\n");
    std::ostringstream report;
    c.out = (scratch_dir() / "external_out.csv").string();
    CHECK(cmd_smile(c, report) == 0);
    const std::string csv = read_file(c.out);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
    CHECK(csv.find("100,7.9655674554057967,call,0.2") != std::string::npos);
}

TEST_CASE("external quotes outside the bounds are rejected with a line number") {
    const MarketSetup s{100.0, 0.0, 1.0};
    const std::string bad = write_file("bad_quotes.csv", "strike,price,side\n90,12.0,call\n80,85,put\n");
    try {
        read_quotes_csv(bad, s);
        FAIL("expected a ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("bad_quotes.csv:3") != std::string::npos);
    }
    CHECK_THROWS_AS(read_quotes_csv(write_file("hdr.csv", "k,p,s\n90,12,call\n"), s), ConfigError);
}

TEST_CASE("smile CSV output is byte-identical across runs") {
    auto c = finalized("model = heston_kou\nspot = 100\nvolvol = 1\nlambda = 1\neta1 = 30\neta2 = 30\nkmin = 20\nkmax = 500\n"
                       "n = 25\n");
    std::ostringstream report;
    c.out = (scratch_dir() / "run1.csv").string();
    cmd_smile(c, report);
    c.out = (scratch_dir() / "run2.csv").string();
    cmd_smile(c, report);
    const std::string a = read_file((scratch_dir() / "run1.csv").string());
    CHECK(!a.empty());
    CHECK(a == read_file(c.out));
}

TEST_CASE("model predictions") {
    const auto cev = build_model(finalized("model = cev\nspot = 100\nrho = 0.7\n"));
    CHECK(cev.q_tilde == doctest::Approx(0.6));
    CHECK(std::isinf(cev.p_tilde));
    const auto bs = build_model(finalized("model = blackscholes\n"));
    CHECK(std::isinf(bs.p_tilde));
    CHECK(std::isinf(bs.q_tilde));
    CHECK(bs.density.has_value());
}

TEST_CASE("command reports") {
    std::ostringstream wings;
    CHECK(cmd_wings(finalized("model = blackscholes\nkmin = 0.01\nkmax = 100\nn = 40\n"), wings) == 0);
    CHECK(wings.str().find("flat") != std::string::npos);

    std::ostringstream pit;
    CHECK(cmd_piterbarg(finalized("model = cev\nspot = 100\nsigma = 0.25\nrho = 0.5\nkmin = 1e4\nkmax = 1e7\nn = 40\n"
                                  "w = power\nw_exponent = 1\n"),
                        pit) == 0);
    CHECK(pit.str().find("gamma") != std::string::npos);

    std::ostringstream refused;
    CHECK(cmd_piterbarg(finalized("model = cev\nspot = 100\nkmin = 1e4\nkmax = 1e7\nn = 40\nw = log-power\n"
                                  "w_exponent = 1\n"),
                        refused) == 3);

    std::ostringstream patho;
    CHECK(cmd_piterbarg(finalized("w = pathological\nlevels = 6\n"), patho) == 0);
    CHECK(patho.str().find("integral") != std::string::npos);

    std::ostringstream sym;
    CHECK(cmd_symmetry(finalized("model = cev\nspot = 100\nsigma = 2.5\nkmin = 20\nkmax = 500\nn = 15\n"), sym) == 0);
}

TEST_CASE("executable exit codes") {
    std::string err;
    CHECK(run_cli("smile --model blackscholes --sigma 0.2 --n 12") == 0);
    CHECK(run_cli("smile --model cev --rho 1.5", &err) == 2);
    CHECK(err.find("rho") != std::string::npos);
    CHECK(run_cli("smile --no-such-flag") == 2);
    const std::string cfg = write_file("bad_exit.cfg", "model = cev\nsigma = x\n");
    CHECK(run_cli("smile --config " + cfg, &err) == 2);
    CHECK(err.find("bad_exit.cfg:2") != std::string::npos);
    CHECK(run_cli("piterbarg --model cev --spot 100 --kmin 1e4 --kmax 1e7 --n 40 --w log-power --w-exponent 1") == 3);
}
