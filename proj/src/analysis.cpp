#include "expsamp/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace expsamp {

namespace {

constexpr double kNumericFloor = 1e-13;

GridSpec safe_window(const GridSpec& grid, const KernelSpec& k, double w) {
    GridSpec g = grid;
    if (k.compact()) {
        g.margin = grid.margin + (*k.log_support() + 1.0) / w;
    }
    return g;
}

KernelSpec theta_kernel_spec(const KernelSpec& k) {
    return KernelSpec::custom("theta(" + k.name() + ")",
                              [k](double x) { return k.theta_log(std::log(x)); },
                              k.log_support(), k.decay_exponent());
}

} // namespace

double sup_error(const TestFunction& f, const KernelSpec& k, const SamplingConfig& cfg,
                 const GridSpec& grid, SeriesOperator op) {
    auto pts = safe_window(grid, k, cfg.w).log_points();
    double sup = 0.0;
    for (double v : pts) {
        PositiveReal x = PositiveReal::from_log(v);
        double approx = op == SeriesOperator::S ? generalized_series(f, k, cfg, x)
                                                : kantorovich_series(f, k, cfg, x);
        sup = std::max(sup, std::abs(approx - f.eval(x.value())));
    }
    return sup;
}

std::pair<double, double> rate_fit(const ErrorTable& table) {
    std::vector<std::pair<double, double>> pts; // (log w, log err)
    for (auto& row : table.rows) {
        if (row.sup_error > 10.0 * kNumericFloor) {
            pts.emplace_back(std::log(row.w), std::log(row.sup_error));
        }
    }
    if (pts.empty() && !table.rows.empty()) {
        throw AtNumericFloor("all errors at numeric floor; exact reproduction");
    }
    if (pts.size() < 3) {
        throw InsufficientData("rate_fit needs >= 3 rows above the numeric floor");
    }
    double n = static_cast<double>(pts.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (auto& [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double ss_tot = syy - sy * sy / n;
    double intercept = (sy - slope * sx) / n;
    double ss_res = 0.0;
    for (auto& [x, y] : pts) {
        double r = y - (intercept + slope * x);
        ss_res += r * r;
    }
    double r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return {-slope, r2};
}

std::vector<VoronovskayaPoint> voronovskaya_probe(const TestFunction& f, const KernelSpec& k,
                                                  PositiveReal x,
                                                  const std::vector<double>& w_list,
                                                  const SamplingConfig& base_cfg) {
    if (!f.theta_analytic) {
        throw UnsupportedOrder("voronovskaya_probe needs an analytic theta derivative");
    }
    double m1 = moment(k, 1, PositiveReal::from_log(0.3));
    double tf = (*f.theta_analytic)(x.value());
    double fx = f.eval(x.value());
    std::vector<VoronovskayaPoint> out;
    for (double w : w_list) {
        SamplingConfig cfg = base_cfg.with_w(w);
        double s_here = generalized_series(f, k, cfg, x);
        double s_shift =
            generalized_series(f, k, cfg, PositiveReal::from_log(x.log_value() + 0.5 / w));
        out.push_back({w, std::abs(w * (s_here - fx) - m1 * tf),
                       std::abs(w * (s_shift - fx) - (2.0 * m1 + 1.0) * tf / 2.0)});
    }
    return out;
}

ErrorTable direct_bound_check(const TestFunction& f, const KernelSpec& k, const GridSpec& grid,
                              const std::vector<double>& w_list,
                              const SamplingConfig& base_cfg) {
    if (!f.log_holder) {
        throw ConditionViolation("direct_bound_check needs a log_holder(alpha, K) flag");
    }
    double alpha = f.log_holder->alpha;
    double K = f.log_holder->K;
    GridSpec fundamental{0.0, 1.0, 1000, 0.0};
    double M_a1 = absolute_moment(k, alpha + 1.0, fundamental);
    double M_0 = absolute_moment(k, 0.0, fundamental);
    ErrorTable table;
    for (double w : w_list) {
        double err = sup_error(f, k, base_cfg.with_w(w), grid, SeriesOperator::I);
        double bound = K * std::pow(w, -alpha) / (alpha + 1.0) *
                       ((std::pow(2.0, alpha) - 1.0) * M_a1 + M_0);
        if (err > bound + 1e-12) {
            throw BoundViolated("direct bound violated for " + f.id + " at w = " +
                                std::to_string(w) + ": error " + std::to_string(err) +
                                " > bound " + std::to_string(bound));
        }
        table.rows.push_back({w, err, bound});
    }
    try {
        std::tie(table.fitted_rate, table.fit_r2) = rate_fit(table);
    } catch (const AtNumericFloor&) {
        // constants: nothing to fit
    }
    return table;
}

SaturationResult saturation_probe(const TestFunction& f, const KernelSpec& k, const GridSpec& grid,
                                  const std::vector<double>& w_list,
                                  const SamplingConfig& base_cfg) {
    SaturationResult res;
    for (double w : w_list) {
        res.table.rows.push_back(
            {w, sup_error(f, k, base_cfg.with_w(w), grid, SeriesOperator::I), std::nullopt});
    }
    try {
        std::tie(res.table.fitted_rate, res.table.fit_r2) = rate_fit(res.table);
    } catch (const AtNumericFloor&) {
        double worst = 0.0;
        for (auto& row : res.table.rows) worst = std::max(worst, row.sup_error);
        res.verdict = worst <= 1e-12 ? SaturationVerdict::SuperconvergentConstant
                                     : SaturationVerdict::Inconclusive;
        return res;
    } catch (const InsufficientData&) {
        res.verdict = SaturationVerdict::Inconclusive;
        return res;
    }
    // Saturated: rate compatible with 1/w and w * error stabilizing to a positive constant.
    auto& rows = res.table.rows;
    double we_last = rows.back().w * rows.back().sup_error;
    double we_prev = rows[rows.size() - 2].w * rows[rows.size() - 2].sup_error;
    bool stabilizing = we_last > 10.0 * 1e-13 && we_prev > 0.0 &&
                       std::abs(we_last / we_prev - 1.0) <= 0.3;
    if (res.table.fitted_rate <= 1.1 && stabilizing) {
        res.verdict = SaturationVerdict::SaturatedAtOneOverW;
    } else {
        res.verdict = SaturationVerdict::Inconclusive;
    }
    return res;
}

InverseProbeResult inverse_probe(const TestFunction& f, const KernelSpec& k, const GridSpec& grid,
                                 const std::vector<double>& w_list, double alpha,
                                 const SamplingConfig& base_cfg) {
    InverseProbeResult res;
    GridSpec fundamental{0.0, 1.0, 500, 0.0};
    res.theta_kernel_M1 = absolute_moment(theta_kernel_spec(k), 1.0, fundamental);
    for (double w : w_list) {
        res.table.rows.push_back(
            {w, sup_error(f, k, base_cfg.with_w(w), grid, SeriesOperator::I), std::nullopt});
    }
    double rate;
    try {
        std::tie(rate, res.table.fit_r2) = rate_fit(res.table);
    } catch (const AtNumericFloor&) {
        rate = std::numeric_limits<double>::infinity(); // exact reproduction
    }
    res.table.fitted_rate = rate;
    res.fitted_rate = rate;

    // Log-Holder quotient over grid pairs (consistency check, not a proof).
    GridSpec g = grid;
    g.count = std::min(g.count, 120);
    auto pts = g.log_points();
    double q = 0.0;
    for (size_t i = 0; i < pts.size(); ++i) {
        double fi = f.eval(std::exp(pts[i]));
        for (size_t j = i + 1; j < pts.size(); ++j) {
            double dv = pts[j] - pts[i];
            q = std::max(q, std::abs(f.eval(std::exp(pts[j])) - fi) / std::pow(dv, alpha));
        }
    }
    res.holder_quotient = q;
    res.consistent = rate >= alpha - 0.05 && std::isfinite(q);
    return res;
}

} // namespace expsamp
