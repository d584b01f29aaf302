#pragma once

#include <vector>

#include "expsamp/kernels.hpp"
#include "expsamp/mellin.hpp"

namespace expsamp {

struct SamplingConfig {
    double w = 1.0;           // sampling rate
    double tail_eps = 1e-10;  // tail tolerance for non-compact kernels
    int inner_nodes = 16;     // Gauss-Legendre order for Kantorovich cell averages

    SamplingConfig with_w(double new_w) const {
        SamplingConfig c = *this;
        c.w = new_w;
        return c;
    }
};

/// (S_w f)(x) = sum_k chi(e^{-k} x^w) f(e^{k/w}). Exact finite sum for compact kernels.
double generalized_series(const TestFunction& f, const KernelSpec& k, const SamplingConfig& cfg,
                          PositiveReal x);

/// (I_w f)(x) = sum_k chi(e^{-k} x^w) w int_{k/w}^{(k+1)/w} f(e^u) du.
double kantorovich_series(const TestFunction& f, const KernelSpec& k, const SamplingConfig& cfg,
                          PositiveReal x);

/// theta S_w F at x, computed term by term through theta chi.
double theta_generalized(const TestFunction& F, const KernelSpec& k, const SamplingConfig& cfg,
                         PositiveReal x);

/// theta I_w f at x, term by term through theta chi.
double theta_kantorovich(const TestFunction& f, const KernelSpec& k, const SamplingConfig& cfg,
                         PositiveReal x);

/// |I_w f(x) - theta S_w^{chibar} F(x e^{1/2w})| with F the Mellin anti-derivative.
/// The identity is exact; the residual is pure numerics.
double lemma31_residual(const TestFunction& f, const KernelSpec& k, const SamplingConfig& cfg,
                        PositiveReal x);

/// G_f(phi) = w int [(I_w f)(x) - f(x)] phi(x) dx/x over supp(phi).
double saturation_functional(const TestFunction& f, const TestFunction& phi, const KernelSpec& k,
                             double w, const SamplingConfig& base_cfg = {});

/// Mellin anti-derivative F (base point 1) at the nodes e^{j/w}, j in [jmin, jmax],
/// by cumulative per-cell Gauss-Legendre integration.
std::vector<double> antiderivative_nodes(const TestFunction& f, double w, long jmin, long jmax,
                                         int nodes = 16);

} // namespace expsamp
