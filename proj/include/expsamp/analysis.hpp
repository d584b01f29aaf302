#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "expsamp/operators.hpp"

namespace expsamp {

enum class SeriesOperator { S, I };

struct ErrorRow {
    double w;
    double sup_error;
    std::optional<double> theory_bound;
};

struct ErrorTable {
    std::vector<ErrorRow> rows; // sorted by w ascending
    double fitted_rate = std::numeric_limits<double>::quiet_NaN();
    double fit_r2 = std::numeric_limits<double>::quiet_NaN();
};

/// Grid estimate of ||op f - f||_inf on the safe window (the grid shrinks by
/// (log_support + 1)/w for compact kernels).
double sup_error(const TestFunction& f, const KernelSpec& k, const SamplingConfig& cfg,
                 const GridSpec& grid, SeriesOperator op);

/// Least-squares slope of log(error) vs log(w), negated, with r^2. Rows at the
/// numeric floor (< 1e-12) are excluded. Throws AtNumericFloor when all rows sit
/// at the floor, InsufficientData when fewer than 3 usable rows remain.
std::pair<double, double> rate_fit(const ErrorTable& table);

struct VoronovskayaPoint {
    double w;
    double theorem_dev;   // |w (S_w f(x) - f(x)) - m1 theta f(x)|
    double corollary_dev; // |w (S_w f(x e^{1/2w}) - f(x)) - (2 m1 + 1) theta f(x)/2|
};

std::vector<VoronovskayaPoint> voronovskaya_probe(const TestFunction& f, const KernelSpec& k,
                                                  PositiveReal x,
                                                  const std::vector<double>& w_list,
                                                  const SamplingConfig& base_cfg = {});

/// ||I_w f - f||_inf <= K w^{-alpha}/(alpha+1) ((2^alpha - 1) M_{alpha+1} + M_0),
/// machine-checked row by row. Throws BoundViolated on failure.
ErrorTable direct_bound_check(const TestFunction& f, const KernelSpec& k, const GridSpec& grid,
                              const std::vector<double>& w_list,
                              const SamplingConfig& base_cfg = {});

enum class SaturationVerdict { SaturatedAtOneOverW, SuperconvergentConstant, Inconclusive };

struct SaturationResult {
    SaturationVerdict verdict;
    ErrorTable table;
};

SaturationResult saturation_probe(const TestFunction& f, const KernelSpec& k, const GridSpec& grid,
                                  const std::vector<double>& w_list,
                                  const SamplingConfig& base_cfg = {});

struct InverseProbeResult {
    double fitted_rate;
    double theta_kernel_M1;   // M_1(theta chi), the theorem's hypothesis
    double holder_quotient;   // grid-pair sup of |f(x)-f(y)| / |log x - log y|^alpha
    bool consistent;          // rate >= alpha - 0.05 and quotient finite
    ErrorTable table;
};

InverseProbeResult inverse_probe(const TestFunction& f, const KernelSpec& k, const GridSpec& grid,
                                 const std::vector<double>& w_list, double alpha,
                                 const SamplingConfig& base_cfg = {});

} // namespace expsamp
