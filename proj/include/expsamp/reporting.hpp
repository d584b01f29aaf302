#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "expsamp/analysis.hpp"
#include "expsamp/registry.hpp"

namespace expsamp {

/// Declarative experiment description; parsed from versioned JSON, unknown
/// fields rejected.
struct ExperimentConfig {
    KernelSpec kernel = KernelSpec::bspline(3);
    std::vector<std::string> functions;
    std::vector<double> w_list;
    GridSpec grid{-2.0, 2.0, 50, 0.0};
    std::vector<std::string> probes;
    std::string output_dir = "out";
    double tol_lemma31 = 1e-8;
    double tol_certify_m0_compact = 1e-12;
    double tol_certify_m0_decay = 1e-6;
    double tail_eps = 1e-10;
};

KernelSpec parse_kernel_descriptor(const nlohmann::json& j);
/// Parse "bspline:3", "jackson:1:2", "averaged:bspline:3" style descriptors.
KernelSpec parse_kernel_descriptor(const std::string& text);

ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

/// Run all enabled probes; write per-probe CSV/JSON plus summary.json under
/// output_dir. Returns 0 iff every probe passed its contract.
int run_experiment(const ExperimentConfig& cfg, std::ostream& log);

std::string registry_listing();

} // namespace expsamp
