#include "expsamp/operators.hpp"

#include <cmath>

#include "expsamp/quadrature.hpp"

namespace expsamp {

namespace {

double check_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw NumericDomainError(std::string("non-finite value in ") + what);
    }
    return v;
}

struct IndexRange {
    long lo;
    long hi;
};

IndexRange retained_indices(const KernelSpec& k, double a, double eps, double weight_power) {
    double R = k.series_radius(eps, weight_power);
    return {static_cast<long>(std::ceil(a - R)), static_cast<long>(std::floor(a + R))};
}

// Mean of f(e^u) over [lo, hi] by fixed Gauss-Legendre.
double cell_mean(const TestFunction& f, double lo, double hi, int nodes) {
    auto g = [&f](double u) { return f.eval(std::exp(u)); };
    double integral;
    switch (nodes) {
        case 8: integral = quad::gauss<8>(g, lo, hi); break;
        case 32: integral = quad::gauss<32>(g, lo, hi); break;
        default: integral = quad::gauss<16>(g, lo, hi); break;
    }
    return integral / (hi - lo);
}

} // namespace

double generalized_series(const TestFunction& f, const KernelSpec& k, const SamplingConfig& cfg,
                          PositiveReal x) {
    double a = cfg.w * x.log_value();
    auto [lo, hi] = retained_indices(k, a, cfg.tail_eps, 0.0);
    double sum = 0.0;
    for (long kk = lo; kk <= hi; ++kk) {
        double chi = k.eval_log(a - static_cast<double>(kk));
        if (chi == 0.0) continue;
        sum += chi * check_finite(f.eval(std::exp(kk / cfg.w)), "sample value");
    }
    return sum;
}

double kantorovich_series(const TestFunction& f, const KernelSpec& k, const SamplingConfig& cfg,
                          PositiveReal x) {
    double a = cfg.w * x.log_value();
    auto [lo, hi] = retained_indices(k, a, cfg.tail_eps, 0.0);
    double sum = 0.0;
    for (long kk = lo; kk <= hi; ++kk) {
        double chi = k.eval_log(a - static_cast<double>(kk));
        if (chi == 0.0) continue;
        double mean = cell_mean(f, kk / cfg.w, (kk + 1) / cfg.w, cfg.inner_nodes);
        sum += chi * check_finite(mean, "cell average");
    }
    return sum;
}

double theta_generalized(const TestFunction& F, const KernelSpec& k, const SamplingConfig& cfg,
                         PositiveReal x) {
    double a = cfg.w * x.log_value();
    auto [lo, hi] = retained_indices(k, a, cfg.tail_eps, 0.0);
    double sum = 0.0;
    for (long kk = lo; kk <= hi; ++kk) {
        double tchi = k.theta_log(a - static_cast<double>(kk));
        if (tchi == 0.0) continue;
        sum += tchi * cfg.w * check_finite(F.eval(std::exp(kk / cfg.w)), "sample value");
    }
    return sum;
}

double theta_kantorovich(const TestFunction& f, const KernelSpec& k, const SamplingConfig& cfg,
                         PositiveReal x) {
    double a = cfg.w * x.log_value();
    auto [lo, hi] = retained_indices(k, a, cfg.tail_eps, 0.0);
    double sum = 0.0;
    for (long kk = lo; kk <= hi; ++kk) {
        double tchi = k.theta_log(a - static_cast<double>(kk));
        if (tchi == 0.0) continue;
        double mean = cell_mean(f, kk / cfg.w, (kk + 1) / cfg.w, cfg.inner_nodes);
        sum += tchi * cfg.w * check_finite(mean, "cell average");
    }
    return sum;
}

std::vector<double> antiderivative_nodes(const TestFunction& f, double w, long jmin, long jmax,
                                         int nodes) {
    auto g = [&f](double u) { return f.eval(std::exp(u)); };
    auto cell = [&](double lo, double hi) {
        switch (nodes) {
            case 8: return quad::gauss<8>(g, lo, hi);
            case 32: return quad::gauss<32>(g, lo, hi);
            default: return quad::gauss<16>(g, lo, hi);
        }
    };
    std::vector<double> F(static_cast<size_t>(jmax - jmin + 1), 0.0);
    // Cumulative from node 0 (x = 1, the base point); offsets cancel downstream.
    double acc = 0.0;
    for (long j = 1; j <= jmax; ++j) {
        acc += cell((j - 1) / w, j / w);
        if (j >= jmin) F[static_cast<size_t>(j - jmin)] = acc;
    }
    acc = 0.0;
    for (long j = -1; j >= jmin; --j) {
        acc -= cell(j / w, (j + 1) / w);
        if (j <= jmax) F[static_cast<size_t>(j - jmin)] = acc;
    }
    if (jmin <= 0 && 0 <= jmax) F[static_cast<size_t>(-jmin)] = 0.0;
    return F;
}

double lemma31_residual(const TestFunction& f, const KernelSpec& k, const SamplingConfig& cfg,
                        PositiveReal x) {
    double iw = kantorovich_series(f, k, cfg, x);

    KernelSpec chibar = averaged_kernel(k);
    // Evaluation point x e^{1/2w}: the scaled log argument is w log x + 1/2.
    double a = cfg.w * x.log_value() + 0.5;
    auto [lo, hi] = retained_indices(chibar, a, cfg.tail_eps, 0.0);
    auto F = antiderivative_nodes(f, cfg.w, lo, hi, cfg.inner_nodes);
    double theta_s = 0.0;
    for (long j = lo; j <= hi; ++j) {
        double tchi = chibar.theta_log(a - static_cast<double>(j));
        if (tchi == 0.0) continue;
        theta_s += F[static_cast<size_t>(j - lo)] * cfg.w * tchi;
    }
    return std::abs(iw - theta_s);
}

double saturation_functional(const TestFunction& f, const TestFunction& phi, const KernelSpec& k,
                             double w, const SamplingConfig& base_cfg) {
    if (!phi.log_support) {
        throw InvalidGrid("saturation_functional needs a compactly supported test function phi");
    }
    SamplingConfig cfg = base_cfg.with_w(w);
    auto [vlo, vhi] = *phi.log_support;
    auto integrand = [&](double v) {
        PositiveReal xv = PositiveReal::from_log(v);
        return (kantorovich_series(f, k, cfg, xv) - f.eval(xv.value())) * phi.eval(xv.value());
    };
    return w * quad::adaptive(integrand, vlo, vhi, 1e-9);
}

} // namespace expsamp
