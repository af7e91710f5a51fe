#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numbers>
#include <regex>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "poincare/config.hpp"
#include "poincare/errors.hpp"
#include "poincare/export.hpp"

using namespace poincare;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code;
    std::string output;
};

RunResult run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + (env.empty() ? "" : " ") + POINCARE_LAB_BIN + std::string(" ") + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    while (std::fgets(buf, sizeof buf, pipe)) out += buf;
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

fs::path fresh_dir(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / "poincare_cli_test" / name;
    fs::remove_all(d);
    return d;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("complex parsing") {
    CHECK(parse_complex("3") == Complex(3, 0));
    CHECK(parse_complex("-0.5i") == Complex(0, -0.5));
    CHECK(parse_complex("2+2i") == Complex(2, 2));
    CHECK(parse_complex("1e-3-4.5i") == Complex(1e-3, -4.5));
    CHECK(parse_complex("-i") == Complex(0, -1));
    CHECK(parse_complex(" i ") == Complex(0, 1));
    CHECK(parse_complex("-2.5e+2+1E1i") == Complex(-250, 10));
    for (const char* bad : {"", "2+", "abc", "1i2", "2++3i"}) CHECK_THROWS_AS(parse_complex(bad), UsageError);
    const auto list = parse_complex_list("-2,0,1");
    REQUIRE(list.size() == 3);
    CHECK(list[0] == Complex(-2, 0));
    CHECK(parse_double_list("0.7, 1.3") == std::vector<double>{0.7, 1.3});
}

TEST_CASE("run configuration") {
    RunConfig cfg;
    CHECK(cfg.get("base") == "0,0,1");
    CHECK(cfg.get_int("order") == 512);
    cfg.load_text("# comment\n\nbase = -2,0,1\nt_grid=0.5,1.5\n");
    CHECK(cfg.get_complexes("base").size() == 3);
    CHECK(cfg.get_doubles("t_grid") == std::vector<double>{0.5, 1.5});
    try {
        cfg.set("no_such_key", "1");
        FAIL("expected UsageError");
    } catch (const UsageError& e) {
        CHECK(std::string(e.what()).find("no_such_key") != std::string::npos);
    }
    try {
        cfg.load_text("n = 3\nbogus = 1\n", "file.cfg");
        FAIL("expected UsageError");
    } catch (const UsageError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("bogus") != std::string::npos);
        CHECK(msg.find("2") != std::string::npos);
    }
    CHECK_THROWS_AS(cfg.load_text("just text\n"), UsageError);
    cfg.set("n", "x");
    CHECK_THROWS_AS(cfg.get_int("n"), UsageError);
    CHECK_THROWS_AS(RunConfig().load_file("/nonexistent/config.cfg"), UsageError);
}

TEST_CASE("base map and fixed point selection") {
    RunConfig cfg;
    cfg.set("base", "-2,0,1");
    const BaseMap cheb = base_map_from_config(cfg);
    CHECK(cheb.polynomial() == Polynomial::quadratic(-2));
    CHECK(std::abs(fixed_point_from_config(cfg, cheb) - 2.0) < 1e-14);
    cfg.set("fixed_point", "1.9");
    CHECK(std::abs(fixed_point_from_config(cfg, cheb) - 2.0) < 1e-14);
    cfg.set("fixed_point", "index:5");
    CHECK_THROWS_AS(fixed_point_from_config(cfg, cheb), UsageError);

    cfg.set("base", "exp a=6.283185307179586i");
    cfg.set("fixed_point", "auto");
    const BaseMap e = base_map_from_config(cfg);
    CHECK_FALSE(e.is_polynomial());
    CHECK(std::abs(fixed_point_from_config(cfg, e) - Complex(0, 2 * std::numbers::pi)) < 1e-12);
    cfg.set("base", "exp b=1");
    CHECK_THROWS_AS(base_map_from_config(cfg), UsageError);
}

TEST_CASE("hypdim command") {
    const fs::path out = fresh_dir("hypdim");
    const RunResult r = run("hypdim --poly 0,0,1 --out " + out.string());
    CHECK(r.code == 0);
    std::smatch m;
    REQUIRE(std::regex_search(r.output, m, std::regex("hypdim = ([0-9.]+)")));
    CHECK(std::abs(std::stod(m[1]) - 1.0) <= 0.02);
    REQUIRE(fs::exists(out / "run-manifest.json"));
    const Json manifest = Json::parse(slurp(out / "run-manifest.json"));
    CHECK(manifest["command"] == "hypdim");
    CHECK(manifest["config"]["base"] == "0,0,1");
    CHECK(manifest["exit_code"] == 0);
    CHECK(manifest.contains("wall_time_s"));
    CHECK(manifest["versions"].contains("poincare_lab"));
}

TEST_CASE("negative leading coefficients parse as option values") {
    const fs::path out = fresh_dir("fixed");
    const RunResult r = run("fixed-points --poly \"-2,0,1\" --out " + out.string());
    CHECK(r.code == 0);
    const std::string csv = slurp(out / "fixed_points.csv");
    CHECK(csv.rfind("index,re,im,", 0) == 0);
    CHECK(csv.find("repelling") != std::string::npos);
    CHECK(run("--poly=-2,0,1 fixed-points --out " + out.string()).code == 0);
}

TEST_CASE("exit codes") {
    const fs::path out = fresh_dir("codes");
    const RunResult unknown = run("hypdim --set nonsense=1 --out " + out.string());
    CHECK(unknown.code == 2);
    CHECK(unknown.output.find("nonsense") != std::string::npos);
    CHECK(run("no-such-command").code == 2);
    CHECK(run("partition --metric hyperbolic --out " + out.string()).code == 2);
    const RunResult domain = run("lineariser build --poly 0,0,1 --fixed-point 0 --out " + out.string());
    CHECK(domain.code == 1);
    const Json manifest = Json::parse(slurp(out / "run-manifest.json"));
    CHECK(manifest["exit_code"] == 1);
    CHECK(manifest.contains("error"));
}

TEST_CASE("output directory precedence") {
    const fs::path env_dir = fresh_dir("env"), flag_dir = fresh_dir("flag");
    CHECK(run("fixed-points", "POINCARE_LAB_OUT=" + env_dir.string()).code == 0);
    CHECK(fs::exists(env_dir / "fixed_points.csv"));
    CHECK(run("fixed-points --out " + flag_dir.string(), "POINCARE_LAB_OUT=" + env_dir.string() + "/unused").code == 0);
    CHECK(fs::exists(flag_dir / "fixed_points.csv"));
    CHECK_FALSE(fs::exists(env_dir / "unused"));
}

TEST_CASE("a manifest reproduces its run") {
    const fs::path first = fresh_dir("first"), second = fresh_dir("second");
    REQUIRE(run("lineariser levels --poly -2,0,1 --w 1000 --n-max 6 --out " + first.string()).code == 0);
    const Json manifest = Json::parse(slurp(first / "run-manifest.json"));
    const fs::path cfg = fresh_dir("cfg");
    fs::create_directories(cfg);
    {
        std::ofstream f(cfg / "rerun.cfg");
        for (const auto& [k, v] : manifest["config"].items()) f << k << " = " << v.get<std::string>() << "\n";
    }
    REQUIRE(run("lineariser levels --config " + (cfg / "rerun.cfg").string() + " --out " + second.string()).code == 0);
    CHECK(slurp(first / "levels.csv") == slurp(second / "levels.csv"));
    CHECK_FALSE(slurp(first / "levels.csv").empty());
}

TEST_CASE("theta command brackets one for z^2 - 2") {
    const fs::path out = fresh_dir("theta");
    const RunResult r = run("theta --poly \"-2,0,1\" --tgrid 0.7,1.3 --w-moduli 100,1000 --n-max 12 --out " + out.string());
    CHECK(r.code == 0);
    std::smatch m;
    REQUIRE(std::regex_search(r.output, m, std::regex("theta in \\[([0-9.]+), ([0-9.]+)\\]")));
    CHECK(std::stod(m[1]) <= 1.0);
    CHECK(std::stod(m[2]) >= 1.0);
    CHECK(fs::exists(out / "theta.csv"));
}

TEST_CASE("other subcommands run") {
    const fs::path out = fresh_dir("misc");
    const std::string o = " --out " + out.string();
    CHECK(run("preimages --poly -1,0,1 --n 6" + o).code == 0);
    CHECK(run("partition --n 3 --w 1 --t 1 --metric euclidean" + o).output.find("Z = 1") != std::string::npos);
    CHECK(run("pressure --tgrid 0,1,2 --n-max 10" + o).code == 0);
    CHECK(run("lineariser build --poly -2,0,1" + o).code == 0);
    CHECK(run("lineariser eval --lineariser " + (out / "lineariser.json").string() + " --z 1" + o).code == 0);
    CHECK(run("ifs build --poly -2,0,1 --disc-center 1 --disc-radius 0.5 --n 4" + o).code == 0);
    CHECK(run("ifs bowen --lambdas 0.3333333333333333,0.3333333333333333" + o).output.find("0.630929") != std::string::npos);
    CHECK(run("ifs sp-check --p 4,6" + o).code == 0);
    CHECK(run("ifs far --poly -2,0,1 --k 8 --max-branches 8" + o).code == 0);
    CHECK(run("wv --r-list 10,100 --K 2" + o).code == 0);
    CHECK(run("trap-check --lambda 0.02,0.04" + o).code == 0);
    CHECK(run("render --resolution 64 --n 6 --w 300" + o).code == 0);
    CHECK(fs::exists(out / "domain.ppm"));
}
