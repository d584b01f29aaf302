#include "expsamp/registry.hpp"

#include <cmath>
#include <map>

namespace expsamp {

namespace {

// Quintic Hermite blend used to clamp log x outside [-3, 3]:
// h(0)=3, h'(0)=1, h''(0)=0, h(1)=3.5, h'(1)=0, h''(1)=0.
double blend(double t) { return 3.0 + t - t * t * t + 0.5 * t * t * t * t; }
double blend_d1(double t) { return 1.0 - 3.0 * t * t + 2.0 * t * t * t; }
double blend_d2(double t) { return -6.0 * t + 6.0 * t * t; }

double log_windowed_v(double v) {
    double av = std::abs(v);
    double s = v < 0.0 ? -1.0 : 1.0;
    if (av <= 3.0) return v;
    if (av >= 4.0) return s * 3.5;
    return s * blend(av - 3.0);
}

double log_windowed_theta_v(double v) {
    double av = std::abs(v);
    if (av <= 3.0) return 1.0;
    if (av >= 4.0) return 0.0;
    return blend_d1(av - 3.0);
}

double log_windowed_theta2_v(double v) {
    double av = std::abs(v);
    if (av <= 3.0 || av >= 4.0) return 0.0;
    double s = v < 0.0 ? -1.0 : 1.0;
    return s * blend_d2(av - 3.0);
}

double bump_v(double v) {
    if (std::abs(v) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - v * v));
}

double bump_theta_v(double v) {
    if (std::abs(v) >= 1.0) return 0.0;
    double d = 1.0 - v * v;
    return bump_v(v) * (-2.0 * v / (d * d));
}

std::map<std::string, TestFunction> build_registry() {
    std::map<std::string, TestFunction> reg;

    {
        TestFunction f;
        f.id = "const1";
        f.eval = [](double) { return 1.0; };
        f.theta_analytic = [](double) { return 0.0; };
        f.theta2_analytic = [](double) { return 0.0; };
        f.log_holder = LogHolderFlag{1.0, 0.0};
        reg[f.id] = f;
    }
    {
        TestFunction f;
        f.id = "log_windowed";
        f.eval = [](double x) { return log_windowed_v(std::log(x)); };
        f.theta_analytic = [](double x) { return log_windowed_theta_v(std::log(x)); };
        f.theta2_analytic = [](double x) { return log_windowed_theta2_v(std::log(x)); };
        reg[f.id] = f;
    }
    {
        TestFunction f;
        f.id = "sin_log";
        f.eval = [](double x) { return std::sin(std::log(x)); };
        f.theta_analytic = [](double x) { return std::cos(std::log(x)); };
        f.theta2_analytic = [](double x) { return -std::sin(std::log(x)); };
        f.log_holder = LogHolderFlag{1.0, 1.0};
        reg[f.id] = f;
    }
    {
        TestFunction f;
        f.id = "holder_half";
        f.eval = [](double x) { return std::min(std::sqrt(std::abs(std::log(x))), 1.0); };
        f.log_holder = LogHolderFlag{0.5, 1.0};
        reg[f.id] = f;
    }
    {
        TestFunction f;
        f.id = "abs_sin_log";
        f.eval = [](double x) { return std::abs(std::sin(std::log(x))); };
        f.log_holder = LogHolderFlag{1.0, 1.0};
        reg[f.id] = f;
    }
    {
        TestFunction f;
        f.id = "bump";
        f.eval = [](double x) { return bump_v(std::log(x)); };
        f.theta_analytic = [](double x) { return bump_theta_v(std::log(x)); };
        f.log_support = std::make_pair(-1.0, 1.0);
        reg[f.id] = f;
    }
    return reg;
}

const std::map<std::string, TestFunction>& registry() {
    static const std::map<std::string, TestFunction> reg = build_registry();
    return reg;
}

} // namespace

const TestFunction& registry_get(const std::string& id) {
    auto it = registry().find(id);
    if (it == registry().end()) {
        throw InvalidGrid("unknown test function id: " + id);
    }
    return it->second;
}

const std::vector<std::string>& registry_ids() {
    static const std::vector<std::string> ids = [] {
        std::vector<std::string> out;
        for (auto& [id, fn] : registry()) out.push_back(id);
        return out;
    }();
    return ids;
}

} // namespace expsamp
