#include "expsamp/reporting.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "expsamp/quadrature.hpp"

namespace expsamp {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::vector<std::string> kKnownProbes = {
    "certify", "approximate", "rates", "voronovskaya",
    "lemma31", "saturation", "inverse", "g-functional"};

void reject_unknown_fields(const json& j, const std::vector<std::string>& allowed,
                           const std::string& where) {
    for (auto& [key, val] : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ConfigError("unknown field '" + key + "' in " + where);
        }
    }
}

std::string num(double v) { return fmt::format("{}", v); }

struct ProbeOutcome {
    bool pass = true;
    json violations = json::array();

    void require(bool ok, const std::string& assertion, double measured, double required) {
        if (!ok) {
            pass = false;
            violations.push_back(
                {{"assertion", assertion}, {"measured", measured}, {"required", required}});
        }
    }
};

void write_text(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file " + p.string());
    out << content;
}

double g_functional_target(const TestFunction& f, const TestFunction& phi, const KernelSpec& k) {
    double m1 = moment(k, 1, PositiveReal::from_log(0.3));
    auto [lo, hi] = *phi.log_support;
    auto integrand = [&](double v) {
        double x = std::exp(v);
        return (*phi.theta_analytic)(x)*f.eval(x);
    };
    return -(m1 + 0.5) * quad::adaptive(integrand, lo, hi, 1e-10);
}

} // namespace

KernelSpec parse_kernel_descriptor(const json& j) {
    if (!j.is_object() || !j.contains("family")) {
        throw ConfigError("kernel descriptor must be an object with a 'family' field");
    }
    std::string family = j.at("family").get<std::string>();
    if (family == "bspline") {
        reject_unknown_fields(j, {"family", "n"}, "kernel");
        return KernelSpec::bspline(j.at("n").get<int>());
    }
    if (family == "jackson") {
        reject_unknown_fields(j, {"family", "alpha", "n"}, "kernel");
        return KernelSpec::jackson(j.at("alpha").get<double>(), j.at("n").get<int>());
    }
    if (family == "averaged") {
        reject_unknown_fields(j, {"family", "inner"}, "kernel");
        return KernelSpec::averaged(parse_kernel_descriptor(j.at("inner")));
    }
    throw ConfigError("unknown kernel family: " + family);
}

KernelSpec parse_kernel_descriptor(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.empty()) throw ConfigError("empty kernel descriptor");
    try {
        if (parts[0] == "bspline" && parts.size() == 2) {
            return KernelSpec::bspline(std::stoi(parts[1]));
        }
        if (parts[0] == "jackson" && parts.size() == 3) {
            return KernelSpec::jackson(std::stod(parts[1]), std::stoi(parts[2]));
        }
        if (parts[0] == "averaged" && parts.size() >= 2) {
            std::string rest = text.substr(text.find(':') + 1);
            return KernelSpec::averaged(parse_kernel_descriptor(rest));
        }
    } catch (const std::invalid_argument&) {
        throw ConfigError("bad numeric parameter in kernel descriptor: " + text);
    }
    throw ConfigError("cannot parse kernel descriptor: " + text +
                      " (expected bspline:N, jackson:ALPHA:N, averaged:<descriptor>)");
}

ExperimentConfig parse_config(const json& j) {
    reject_unknown_fields(j,
                          {"schema_version", "kernel", "functions", "w_list", "grid", "probes",
                           "output_dir", "tolerances"},
                          "config");
    if (!j.contains("schema_version") || j.at("schema_version").get<int>() != 1) {
        throw ConfigError("config requires schema_version = 1");
    }
    ExperimentConfig cfg;
    cfg.kernel = parse_kernel_descriptor(j.at("kernel"));
    cfg.functions = j.value("functions", std::vector<std::string>{});
    for (auto& id : cfg.functions) registry_get(id); // must exist
    cfg.w_list = j.at("w_list").get<std::vector<double>>();
    if (cfg.w_list.empty() || !std::is_sorted(cfg.w_list.begin(), cfg.w_list.end())) {
        throw ConfigError("w_list must be nonempty and ascending");
    }
    if (j.contains("grid")) {
        auto& g = j.at("grid");
        reject_unknown_fields(g, {"log_lo", "log_hi", "count", "margin"}, "grid");
        cfg.grid = GridSpec{g.at("log_lo").get<double>(), g.at("log_hi").get<double>(),
                            g.at("count").get<int>(), g.value("margin", 0.0)};
    }
    cfg.probes = j.at("probes").get<std::vector<std::string>>();
    if (cfg.probes.empty()) throw ConfigError("probes must be nonempty");
    for (auto& p : cfg.probes) {
        if (std::find(kKnownProbes.begin(), kKnownProbes.end(), p) == kKnownProbes.end()) {
            throw ConfigError("unknown probe: " + p);
        }
    }
    cfg.output_dir = j.value("output_dir", std::string("out"));
    if (const char* env = std::getenv("EXPSAMP_OUTPUT_DIR")) {
        cfg.output_dir = env;
    }
    if (j.contains("tolerances")) {
        auto& t = j.at("tolerances");
        reject_unknown_fields(t, {"lemma31", "certify_m0_compact", "certify_m0_decay", "tail_eps"},
                              "tolerances");
        cfg.tol_lemma31 = t.value("lemma31", cfg.tol_lemma31);
        cfg.tol_certify_m0_compact = t.value("certify_m0_compact", cfg.tol_certify_m0_compact);
        cfg.tol_certify_m0_decay = t.value("certify_m0_decay", cfg.tol_certify_m0_decay);
        cfg.tail_eps = t.value("tail_eps", cfg.tail_eps);
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return parse_config(j);
}

int run_experiment(const ExperimentConfig& cfg, std::ostream& log) {
    fs::create_directories(cfg.output_dir);
    const fs::path out(cfg.output_dir);
    const KernelSpec& k = cfg.kernel;
    SamplingConfig base;
    base.tail_eps = cfg.tail_eps;
    json summary;
    summary["kernel"] = k.name();
    bool all_pass = true;

    auto record = [&](const std::string& probe, const ProbeOutcome& o) {
        summary["probes"][probe] = {{"pass", o.pass}, {"violations", o.violations}};
        all_pass = all_pass && o.pass;
        log << (o.pass ? "pass" : "FAIL") << "  " << probe << "\n";
    };

    for (const std::string& probe : cfg.probes) {
        ProbeOutcome o;
        if (probe == "certify") {
            GridSpec fundamental{0.0, 1.0, 1000, 0.0};
            auto rep = certify_kernel(k, fundamental, cfg.w_list, 1.0);
            write_text(out / "certificate.json", to_json(rep).dump(2) + "\n");
            double m0_tol = k.compact() ? cfg.tol_certify_m0_compact : cfg.tol_certify_m0_decay;
            o.require(rep.m0_sup_deviation <= m0_tol, "m0 partition of unity",
                      rep.m0_sup_deviation, m0_tol);
            double m1_tol = k.compact() ? 1e-9 : 1e-6;
            o.require(rep.m1_spread <= m1_tol, "m1 constant", rep.m1_spread, m1_tol);
            for (auto& [b, v] : rep.M_beta) {
                o.require(std::isfinite(v), "M_beta finite (beta=" + num(b) + ")", v, 0.0);
            }
        } else if (probe == "approximate" || probe == "rates") {
            for (auto& id : cfg.functions) {
                const TestFunction& f = registry_get(id);
                ErrorTable table;
                for (double w : cfg.w_list) {
                    table.rows.push_back(
                        {w, sup_error(f, k, base.with_w(w), cfg.grid, SeriesOperator::I),
                         std::nullopt});
                }
                std::string csv = "w,sup_error,w_times_error\n";
                for (auto& row : table.rows) {
                    csv += num(row.w) + "," + num(row.sup_error) + "," +
                           num(row.w * row.sup_error) + "\n";
                }
                write_text(out / (probe + "_" + id + ".csv"), csv);
                double first = table.rows.front().sup_error;
                double last = table.rows.back().sup_error;
                o.require(last <= std::max(first, 1e-12), "error non-increasing for " + id, last,
                          first);
                if (probe == "rates") {
                    json fit;
                    try {
                        auto [rate, r2] = rate_fit(table);
                        fit = {{"fitted_rate", rate}, {"fit_r2", r2}};
                    } catch (const AtNumericFloor&) {
                        fit = {{"at_numeric_floor", true}};
                    } catch (const InsufficientData& e) {
                        fit = {{"error", e.what()}};
                        o.require(false, "rate fit for " + id, 0.0, 3.0);
                    }
                    write_text(out / ("rates_" + id + ".json"), fit.dump(2) + "\n");
                }
            }
        } else if (probe == "voronovskaya") {
            for (auto& id : cfg.functions) {
                const TestFunction& f = registry_get(id);
                if (!f.theta_analytic) continue;
                auto devs = voronovskaya_probe(f, k, PositiveReal(1.0), cfg.w_list, base);
                std::string csv = "w,theorem_dev,corollary_dev\n";
                for (auto& d : devs) {
                    csv += num(d.w) + "," + num(d.theorem_dev) + "," + num(d.corollary_dev) + "\n";
                }
                write_text(out / ("voronovskaya_" + id + ".csv"), csv);
                o.require(devs.back().corollary_dev <= devs.front().corollary_dev * 1.05 + 1e-9,
                          "corollary deviation non-increasing for " + id,
                          devs.back().corollary_dev, devs.front().corollary_dev);
            }
        } else if (probe == "lemma31") {
            std::string csv = "function,w,max_residual\n";
            GridSpec g = cfg.grid;
            g.count = std::min(g.count, 50);
            for (auto& id : cfg.functions) {
                const TestFunction& f = registry_get(id);
                for (double w : cfg.w_list) {
                    SamplingConfig c = base.with_w(w);
                    GridSpec gw = g;
                    if (k.compact()) gw.margin = g.margin + (*k.log_support() + 1.5) / w;
                    double worst = 0.0;
                    for (double v : gw.log_points()) {
                        worst = std::max(worst,
                                         lemma31_residual(f, k, c, PositiveReal::from_log(v)));
                    }
                    csv += id + "," + num(w) + "," + num(worst) + "\n";
                    o.require(worst <= cfg.tol_lemma31, "lemma31 residual " + id + " w=" + num(w),
                              worst, cfg.tol_lemma31);
                }
            }
            write_text(out / "lemma31.csv", csv);
        } else if (probe == "saturation") {
            std::string csv = "function,verdict,fitted_rate\n";
            for (auto& id : cfg.functions) {
                const TestFunction& f = registry_get(id);
                auto res = saturation_probe(f, k, cfg.grid, cfg.w_list, base);
                const char* v =
                    res.verdict == SaturationVerdict::SaturatedAtOneOverW ? "saturated-at-1/w"
                    : res.verdict == SaturationVerdict::SuperconvergentConstant
                        ? "superconvergent-constant"
                        : "inconclusive";
                csv += id + "," + v + "," + num(res.table.fitted_rate) + "\n";
                o.require(res.verdict != SaturationVerdict::Inconclusive,
                          "saturation verdict conclusive for " + id, 0.0, 1.0);
            }
            write_text(out / "saturation.csv", csv);
        } else if (probe == "inverse") {
            std::string csv = "function,alpha,fitted_rate,holder_quotient,consistent\n";
            for (auto& id : cfg.functions) {
                const TestFunction& f = registry_get(id);
                if (!f.log_holder) continue;
                auto res = inverse_probe(f, k, cfg.grid, cfg.w_list, f.log_holder->alpha, base);
                csv += id + "," + num(f.log_holder->alpha) + "," + num(res.fitted_rate) + "," +
                       num(res.holder_quotient) + "," + (res.consistent ? "true" : "false") + "\n";
                o.require(res.consistent, "inverse consistency for " + id, res.holder_quotient,
                          0.0);
            }
            write_text(out / "inverse.csv", csv);
        } else if (probe == "g-functional") {
            const TestFunction& phi = registry_get("bump");
            for (auto& id : cfg.functions) {
                const TestFunction& f = registry_get(id);
                double target = g_functional_target(f, phi, k);
                std::string csv = "w,G,target,gap\n";
                double prev_gap = -1.0;
                double final_gap = 0.0;
                bool decreasing = true;
                for (double w : cfg.w_list) {
                    double G = saturation_functional(f, phi, k, w, base);
                    double gap = std::abs(G - target);
                    csv += num(w) + "," + num(G) + "," + num(target) + "," + num(gap) + "\n";
                    if (prev_gap >= 0.0 && gap > prev_gap * 1.05 + 1e-9) decreasing = false;
                    prev_gap = gap;
                    final_gap = gap;
                }
                write_text(out / ("g_functional_" + id + ".csv"), csv);
                o.require(decreasing, "G-functional gap decreasing for " + id, final_gap, 0.0);
                o.require(final_gap <= 0.02 * std::abs(target) + 1e-3,
                          "G-functional limit for " + id, final_gap,
                          0.02 * std::abs(target) + 1e-3);
            }
        }
        record(probe, o);
    }

    summary["pass"] = all_pass;
    write_text(out / "summary.json", summary.dump(2) + "\n");
    return all_pass ? 0 : 1;
}

std::string registry_listing() {
    std::string s;
    s += "kernel families:\n";
    s += "  bspline(n >= 1)            compact, log-support n/2\n";
    s += "  jackson(alpha >= 1, n >= 1) decay exponent 2n, normalized\n";
    s += "  averaged(inner)            log-domain unit-window average\n";
    s += "test functions:\n";
    for (auto& id : registry_ids()) {
        const TestFunction& f = registry_get(id);
        s += "  " + id;
        if (f.theta_analytic) s += " [theta]";
        if (f.log_holder) {
            s += " [log_holder(" + num(f.log_holder->alpha) + "," + num(f.log_holder->K) + ")]";
        }
        if (f.log_support) s += " [compact support]";
        s += "\n";
    }
    return s;
}

} // namespace expsamp
