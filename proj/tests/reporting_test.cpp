#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "expsamp/reporting.hpp"

using namespace expsamp;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path fresh_dir(const std::string& tag) {
    fs::path p = fs::temp_directory_path() / ("expsamp_test_" + tag);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json base_config() {
    return json{{"schema_version", 1},
                {"kernel", {{"family", "bspline"}, {"n", 3}}},
                {"functions", {"log_windowed"}},
                {"w_list", {8.0, 16.0, 32.0}},
                {"probes", {"approximate"}}};
}

} // namespace

TEST_CASE("kernel descriptors parse from strings") {
    CHECK(parse_kernel_descriptor(std::string("bspline:3")).name() == "bspline(3)");
    CHECK(parse_kernel_descriptor(std::string("jackson:1:2")).name() == "jackson(1,2)");
    CHECK(parse_kernel_descriptor(std::string("averaged:bspline:2")).name() == "averaged(bspline(2))");
    CHECK_THROWS_AS(parse_kernel_descriptor(std::string("bspline")), ConfigError);
    CHECK_THROWS_AS(parse_kernel_descriptor(std::string("bspline:x")), ConfigError);
    CHECK_THROWS_AS(parse_kernel_descriptor(std::string("gauss:1")), ConfigError);
    CHECK_THROWS_AS(parse_kernel_descriptor(std::string("")), ConfigError);
}

TEST_CASE("kernel descriptors parse from JSON and reject strays") {
    CHECK(parse_kernel_descriptor(json{{"family", "bspline"}, {"n", 2}}).name() == "bspline(2)");
    CHECK(parse_kernel_descriptor(json{{"family", "jackson"}, {"alpha", 1.0}, {"n", 2}}).name() ==
          "jackson(1,2)");
    json avg = {{"family", "averaged"}, {"inner", {{"family", "bspline"}, {"n", 3}}}};
    CHECK(parse_kernel_descriptor(avg).name() == "averaged(bspline(3))");
    CHECK_THROWS_AS(parse_kernel_descriptor(json{{"family", "bspline"}, {"n", 2}, {"m", 1}}),
                    ConfigError);
    CHECK_THROWS_AS(parse_kernel_descriptor(json{{"family", "splinex"}}), ConfigError);
    CHECK_THROWS_AS(parse_kernel_descriptor(json::array()), ConfigError);
}

TEST_CASE("config parsing is strict") {
    auto cfg = parse_config(base_config());
    CHECK(cfg.kernel.name() == "bspline(3)");
    CHECK(cfg.w_list == std::vector<double>{8.0, 16.0, 32.0});
    CHECK(cfg.grid.log_lo == -2.0); // default grid

    json bad = base_config();
    bad["surprise"] = 1;
    CHECK_THROWS_AS(parse_config(bad), ConfigError);

    bad = base_config();
    bad["schema_version"] = 2;
    CHECK_THROWS_AS(parse_config(bad), ConfigError);

    bad = base_config();
    bad.erase("schema_version");
    CHECK_THROWS_AS(parse_config(bad), ConfigError);

    bad = base_config();
    bad["probes"] = {"approximate", "telepathy"};
    CHECK_THROWS_AS(parse_config(bad), ConfigError);

    bad = base_config();
    bad["w_list"] = {32.0, 8.0};
    CHECK_THROWS_AS(parse_config(bad), ConfigError);

    bad = base_config();
    bad["w_list"] = json::array();
    CHECK_THROWS_AS(parse_config(bad), ConfigError);

    bad = base_config();
    bad["functions"] = {"not_registered"};
    CHECK_THROWS_AS(parse_config(bad), std::invalid_argument);

    bad = base_config();
    bad["grid"] = {{"log_lo", -1.0}, {"log_hi", 1.0}, {"count", 30}, {"step", 0.1}};
    CHECK_THROWS_AS(parse_config(bad), ConfigError);

    json tol = base_config();
    tol["tolerances"] = {{"lemma31", 1e-7}};
    CHECK(parse_config(tol).tol_lemma31 == 1e-7);
    tol["tolerances"] = {{"lemma31", 1e-7}, {"extra", 1.0}};
    CHECK_THROWS_AS(parse_config(tol), ConfigError);
}

TEST_CASE("output directory can be overridden from the environment") {
    setenv("EXPSAMP_OUTPUT_DIR", "/tmp/expsamp_env_override", 1);
    auto cfg = parse_config(base_config());
    CHECK(cfg.output_dir == "/tmp/expsamp_env_override");
    unsetenv("EXPSAMP_OUTPUT_DIR");
    CHECK(parse_config(base_config()).output_dir == "out");
}

TEST_CASE("run_experiment writes tables and the rate of the saturated class") {
    auto cfg = parse_config(base_config());
    cfg.probes = {"approximate", "rates", "saturation"};
    cfg.w_list = {8.0, 16.0, 32.0, 64.0};
    auto dir = fresh_dir("run");
    cfg.output_dir = dir.string();
    std::ostringstream log;
    int rc = run_experiment(cfg, log);
    CHECK(rc == 0);

    auto csv = slurp(dir / "approximate_log_windowed.csv");
    CHECK(csv.rfind("w,sup_error,w_times_error\n", 0) == 0);

    json rates = json::parse(slurp(dir / "rates_log_windowed.json"));
    CHECK(rates.at("fitted_rate").get<double>() == doctest::Approx(1.0).epsilon(1e-6));

    auto sat = slurp(dir / "saturation.csv");
    CHECK(sat.find("log_windowed,saturated-at-1/w") != std::string::npos);

    json summary = json::parse(slurp(dir / "summary.json"));
    CHECK(summary.at("pass") == true);
    CHECK(summary.at("probes").at("rates").at("pass") == true);
    CHECK(log.str().find("pass  rates") != std::string::npos);
}

TEST_CASE("run_experiment certify probe emits a certificate") {
    auto cfg = parse_config(base_config());
    cfg.probes = {"certify"};
    auto dir = fresh_dir("cert");
    cfg.output_dir = dir.string();
    std::ostringstream log;
    CHECK(run_experiment(cfg, log) == 0);
    json cert = json::parse(slurp(dir / "certificate.json"));
    CHECK(cert.at("family") == "bspline(3)");
    CHECK(cert.at("m1_is_constant") == true);
}

TEST_CASE("g-functional probe converges for the exactly-saturated function") {
    auto cfg = parse_config(base_config());
    cfg.probes = {"g-functional"};
    cfg.w_list = {10.0, 20.0};
    auto dir = fresh_dir("gfun");
    cfg.output_dir = dir.string();
    std::ostringstream log;
    CHECK(run_experiment(cfg, log) == 0);
    auto csv = slurp(dir / "g_functional_log_windowed.csv");
    CHECK(csv.rfind("w,G,target,gap\n", 0) == 0);
}

TEST_CASE("identical configs produce byte-identical outputs") {
    auto cfg = parse_config(base_config());
    cfg.probes = {"approximate", "rates"};
    auto a = fresh_dir("det_a");
    auto b = fresh_dir("det_b");
    std::ostringstream log;
    cfg.output_dir = a.string();
    CHECK(run_experiment(cfg, log) == 0);
    cfg.output_dir = b.string();
    CHECK(run_experiment(cfg, log) == 0);
    for (auto& entry : fs::directory_iterator(a)) {
        auto name = entry.path().filename();
        CHECK(slurp(a / name) == slurp(b / name));
    }
}

TEST_CASE("registry listing names every test function") {
    auto listing = registry_listing();
    for (auto& id : registry_ids()) {
        CHECK(listing.find(id) != std::string::npos);
    }
    CHECK(listing.find("bspline") != std::string::npos);
    CHECK(listing.find("log_holder(0.5,1)") != std::string::npos);
}

TEST_CASE("load_config reports unreadable and malformed files") {
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
    auto dir = fresh_dir("badcfg");
    auto p = dir / "broken.json";
    std::ofstream(p) << "{ not json";
    CHECK_THROWS_AS(load_config(p.string()), ConfigError);
}
