#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "expsamp/reporting.hpp"

int main(int argc, char** argv) {
    CLI::App app{"exponential sampling operators: experiment runner"};
    app.require_subcommand(1);

    std::string config_path;
    auto* run = app.add_subcommand("run", "run the experiments described by a JSON config");
    run->add_option("config", config_path, "path to config.json")->required();

    auto* list = app.add_subcommand("list", "list kernel families and registered test functions");

    std::string descriptor;
    std::string cert_out;
    auto* certify = app.add_subcommand("certify", "certify a kernel descriptor");
    certify->add_option("kernel", descriptor, "e.g. bspline:3, jackson:1:2, averaged:bspline:3")
        ->required();
    certify->add_option("-o,--output", cert_out, "write certificate JSON to this file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            auto cfg = expsamp::load_config(config_path);
            return expsamp::run_experiment(cfg, std::cout);
        }
        if (*list) {
            std::cout << expsamp::registry_listing();
            return 0;
        }
        if (*certify) {
            auto kernel = expsamp::parse_kernel_descriptor(descriptor);
            expsamp::GridSpec fundamental{0.0, 1.0, 1000, 0.0};
            auto report = expsamp::certify_kernel(kernel, fundamental, {5.0, 10.0, 20.0}, 1.0);
            auto j = expsamp::to_json(report);
            if (!cert_out.empty()) {
                std::ofstream out(cert_out);
                out << j.dump(2) << "\n";
            }
            std::cout << j.dump(2) << "\n";
            bool ok = report.m0_sup_deviation <= (kernel.compact() ? 1e-12 : 1e-6) &&
                      report.m1_is_constant;
            return ok ? 0 : 1;
        }
    } catch (const expsamp::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
