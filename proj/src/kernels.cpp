#include "expsamp/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "expsamp/quadrature.hpp"

namespace expsamp {

namespace {

double ipow(double b, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

// (x)_+^p with (x)_+^0 read as the right-continuous indicator.
double pos_pow(double x, int p) {
    if (p == 0) return x >= 0.0 ? 1.0 : 0.0;
    return x > 0.0 ? ipow(x, p) : 0.0;
}

// Classical B-spline B_n(v), v = log t.
double bspline_log_eval(int n, double v) {
    double half = 0.5 * n;
    // n = 1: half-open indicator, keeping the partition of unity exact at knots.
    if (n == 1) return (v >= -0.5 && v < 0.5) ? 1.0 : 0.0;
    if (std::abs(v) >= half) return 0.0;
    double sum = 0.0;
    double binom = 1.0;
    double sign = 1.0;
    for (int j = 0; j <= n; ++j) {
        sum += sign * binom * pos_pow(half + v - j, n - 1);
        sign = -sign;
        binom = binom * (n - j) / (j + 1);
    }
    return sum / factorial(n - 1);
}

// d/dv B_n(v); right-limit at knots. Zero a.e. for n = 1.
double bspline_log_theta(int n, double v) {
    if (n == 1) return 0.0;
    double half = 0.5 * n;
    if (std::abs(v) >= half) return 0.0;
    double sum = 0.0;
    double binom = 1.0;
    double sign = 1.0;
    for (int j = 0; j <= n; ++j) {
        sum += sign * binom * pos_pow(half + v - j, n - 2);
        sign = -sign;
        binom = binom * (n - j) / (j + 1);
    }
    return sum / factorial(n - 2);
}

// sin(s)/s with series fallback near 0.
double sinc_unit(double s) {
    if (std::abs(s) < 1e-6) return 1.0 - s * s / 6.0;
    return std::sin(s) / s;
}

double central_binom_over_4n(int n) {
    // binom(2n, n) / 4^n, the mean value of sin^{2n}.
    double r = 1.0;
    for (int i = 1; i <= n; ++i) r *= (n + i) / (4.0 * i);
    return r;
}

} // namespace

KernelSpec KernelSpec::bspline(int n) {
    if (n < 1) throw ConditionViolation("bspline order must be >= 1");
    KernelSpec k;
    k.family_ = KernelFamily::BSpline;
    k.n_ = n;
    k.log_support_ = 0.5 * n;
    return k;
}

KernelSpec KernelSpec::jackson(double alpha, int n) {
    if (alpha < 1.0 || n < 1) throw ConditionViolation("jackson requires alpha >= 1, n >= 1");
    KernelSpec k;
    k.family_ = KernelFamily::Jackson;
    k.n_ = n;
    k.alpha_ = alpha;
    k.decay_exponent_ = 2.0 * n;
    k.normalization_ = jackson_normalization(alpha, n);
    return k;
}

KernelSpec KernelSpec::averaged(KernelSpec inner) {
    KernelSpec k;
    k.family_ = KernelFamily::Averaged;
    if (inner.log_support_) k.log_support_ = *inner.log_support_ + 0.5;
    k.decay_exponent_ = inner.decay_exponent_;
    k.inner_ = std::make_shared<const KernelSpec>(std::move(inner));
    return k;
}

KernelSpec KernelSpec::custom(std::string name, RealFn eval_of_x,
                              std::optional<double> log_support,
                              std::optional<double> decay_exponent) {
    KernelSpec k;
    k.family_ = KernelFamily::Custom;
    k.custom_name_ = std::move(name);
    k.custom_eval_ = std::move(eval_of_x);
    k.log_support_ = log_support;
    k.decay_exponent_ = decay_exponent;
    return k;
}

std::string KernelSpec::name() const {
    switch (family_) {
        case KernelFamily::BSpline: return "bspline(" + std::to_string(n_) + ")";
        case KernelFamily::Jackson: {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "jackson(%g,%d)", alpha_, n_);
            return buf;
        }
        case KernelFamily::Averaged: return "averaged(" + inner_->name() + ")";
        case KernelFamily::Custom: return custom_name_;
    }
    return "?";
}

double KernelSpec::eval_log(double v) const {
    switch (family_) {
        case KernelFamily::BSpline:
            return bspline_log_eval(n_, v);
        case KernelFamily::Jackson: {
            double rho = 1.0 / (2.0 * alpha_ * n_);
            return normalization_ * ipow(sinc_unit(rho * v), 2 * n_);
        }
        case KernelFamily::Averaged: {
            if (log_support_ && std::abs(v) >= *log_support_) return 0.0;
            std::vector<double> cuts{-0.5, 0.5};
            if (inner_->compact()) {
                for (double kn : inner_->knots()) {
                    double p = kn - v;
                    if (p > -0.5 + 1e-13 && p < 0.5 - 1e-13) cuts.push_back(p);
                }
                std::sort(cuts.begin(), cuts.end());
            }
            double sum = 0.0;
            for (size_t i = 0; i + 1 < cuts.size(); ++i) {
                sum += quad::gauss32([&](double p) { return inner_->eval_log(v + p); },
                                     cuts[i], cuts[i + 1]);
            }
            return sum;
        }
        case KernelFamily::Custom:
            return custom_eval_(std::exp(v));
    }
    return 0.0;
}

double KernelSpec::theta_log(double v) const {
    switch (family_) {
        case KernelFamily::BSpline:
            return bspline_log_theta(n_, v);
        case KernelFamily::Jackson: {
            double rho = 1.0 / (2.0 * alpha_ * n_);
            double s = rho * v;
            double b = sinc_unit(s);
            double bprime; // d/ds of sin(s)/s
            if (std::abs(s) < 1e-3) {
                bprime = -s / 3.0 + s * s * s / 30.0;
            } else {
                bprime = (std::cos(s) - b) / s;
            }
            return normalization_ * 2.0 * n_ * rho * ipow(b, 2 * n_ - 1) * bprime;
        }
        case KernelFamily::Averaged:
            // Exact identity: theta chibar(t) = chi(t e^{1/2}) - chi(t e^{-1/2}).
            return inner_->eval_log(v + 0.5) - inner_->eval_log(v - 0.5);
        case KernelFamily::Custom: {
            const double h = 1e-5;
            return (eval_log(v + h) - eval_log(v - h)) / (2.0 * h);
        }
    }
    return 0.0;
}

std::vector<double> KernelSpec::knots() const {
    switch (family_) {
        case KernelFamily::BSpline: {
            std::vector<double> ks;
            for (int j = 0; j <= n_; ++j) ks.push_back(-0.5 * n_ + j);
            return ks;
        }
        case KernelFamily::Averaged: {
            if (!inner_->compact()) return {};
            std::vector<double> ks;
            for (double kn : inner_->knots()) {
                ks.push_back(kn - 0.5);
                ks.push_back(kn + 0.5);
            }
            std::sort(ks.begin(), ks.end());
            ks.erase(std::unique(ks.begin(), ks.end(),
                                 [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                     ks.end());
            return ks;
        }
        default:
            return {};
    }
}

double KernelSpec::series_radius(double eps, double weight_power) const {
    if (log_support_) return *log_support_;
    if (!decay_exponent_) {
        throw ConditionViolation("kernel declares neither compact support nor decay");
    }
    double p = *decay_exponent_;
    double s = p - 1.0 - weight_power; // tail behaves like R^{-s}/s
    if (s <= 0.0) {
        throw ConditionViolation("kernel decay exponent " + std::to_string(p) +
                                 " too slow for weight power " + std::to_string(weight_power));
    }
    // |chi(e^v)| <= A |v|^{-p}; for Jackson A = C (2 alpha n)^{2n}.
    double A = 1.0;
    if (family_ == KernelFamily::Jackson) {
        A = normalization_ * ipow(2.0 * alpha_ * n_, 2 * n_);
    } else if (family_ == KernelFamily::Averaged &&
               inner_->family_ == KernelFamily::Jackson) {
        A = 2.0 * inner_->normalization_ * ipow(2.0 * inner_->alpha_ * inner_->n_, 2 * inner_->n_);
    }
    double R = std::pow(A / (eps * s), 1.0 / s);
    return std::max(R, 2.0);
}

double eval_kernel(const KernelSpec& k, PositiveReal t) {
    return k.eval_log(t.log_value());
}

double theta_kernel(const KernelSpec& k, PositiveReal t) {
    return k.theta_log(t.log_value());
}

KernelSpec averaged_kernel(const KernelSpec& k) {
    return KernelSpec::averaged(k);
}

double theta_averaged_kernel(const KernelSpec& inner, PositiveReal t) {
    double v = t.log_value();
    return inner.eval_log(v + 0.5) - inner.eval_log(v - 0.5);
}

double moment(const KernelSpec& k, int nu, PositiveReal u, double eps) {
    if (nu != 0 && nu != 1) throw UnsupportedOrder("moment supports nu in {0, 1}");
    double R = k.series_radius(eps, static_cast<double>(nu));
    double lv = u.log_value();
    long kmin = static_cast<long>(std::ceil(lv - R));
    long kmax = static_cast<long>(std::floor(lv + R));
    double sum = 0.0;
    for (long kk = kmin; kk <= kmax; ++kk) {
        double chi = k.eval_log(lv - static_cast<double>(kk));
        if (chi == 0.0) continue;
        sum += nu == 0 ? chi : chi * (static_cast<double>(kk) - lv);
    }
    return sum;
}

namespace {

double absolute_moment_at(const KernelSpec& k, double beta, double lv, double R) {
    long kmin = static_cast<long>(std::ceil(lv - R));
    long kmax = static_cast<long>(std::floor(lv + R));
    double sum = 0.0;
    for (long kk = kmin; kk <= kmax; ++kk) {
        double d = std::abs(static_cast<double>(kk) - lv);
        double chi = k.eval_log(lv - static_cast<double>(kk));
        if (chi == 0.0) continue;
        sum += std::abs(chi) * std::pow(d, beta);
    }
    return sum;
}

constexpr double kAbsMomentRadiusCap = 1e4;

} // namespace

double absolute_moment(const KernelSpec& k, double beta, const GridSpec& grid) {
    if (beta < 0.0) throw ConditionViolation("beta must be >= 0");
    double R;
    if (k.compact()) {
        R = *k.log_support();
    } else {
        // series_radius throws when the weighted sum is non-summable (beta >= p - 1)
        R = std::min(k.series_radius(1e-8, beta), kAbsMomentRadiusCap);
    }
    auto pts = grid.log_points();
    // Knot-aligned refinement: the summand in u has kinks where log u - k hits a knot.
    if (k.compact()) {
        for (double kn : k.knots()) {
            double fr = kn - std::floor(kn);
            for (double cand : {grid.log_lo + fr, grid.log_lo + fr - 1e-7, grid.log_lo + fr + 1e-7}) {
                if (cand >= grid.log_lo && cand <= grid.log_hi) pts.push_back(cand);
            }
        }
    }
    double sup = 0.0;
    for (double lv : pts) {
        sup = std::max(sup, absolute_moment_at(k, beta, lv, R));
    }
    return sup;
}

double chi4_tail(const KernelSpec& k, double w, double gamma, const GridSpec& grid) {
    if (!(w > 0.0) || !(gamma > 0.0)) throw ConditionViolation("chi4_tail requires w, gamma > 0");
    double cutoff = w * gamma;
    if (k.compact() && cutoff >= *k.log_support()) return 0.0;
    double R = k.compact() ? *k.log_support() : std::min(k.series_radius(1e-6, 1.0), 1e6);
    if (cutoff >= R) return 0.0;
    auto pts = grid.log_points();
    // The tail sup depends on frac(w log x); a modest subsample suffices.
    size_t stride = std::max<size_t>(1, pts.size() / 50);
    double sup = 0.0;
    for (size_t i = 0; i < pts.size(); i += stride) {
        double a = w * pts[i];
        long kmin = static_cast<long>(std::ceil(a - R));
        long kmax = static_cast<long>(std::floor(a + R));
        double sum = 0.0;
        for (long kk = kmin; kk <= kmax; ++kk) {
            double d = std::abs(a - static_cast<double>(kk));
            if (d <= cutoff) continue;
            sum += std::abs(k.eval_log(a - static_cast<double>(kk))) * d;
        }
        sup = std::max(sup, sum);
    }
    return sup;
}

double jackson_normalization(double alpha, int n) {
    if (alpha < 1.0 || n < 1) throw ConditionViolation("jackson requires alpha >= 1, n >= 1");
    double rho = 1.0 / (2.0 * alpha * n);
    auto g = [&](double v) { return ipow(sinc_unit(rho * v), 2 * n); };
    const double U = 4000.0 * alpha * n;
    const double panel = M_PI / (8.0 * rho); // eighth of the sin^2 period
    double integral = 0.0;
    for (double a = 0.0; a < U; a += panel) {
        integral += quad::gauss16(g, a, std::min(a + panel, U));
    }
    // Analytic tail estimate: replace sin^{2n} by its mean beyond U.
    double mu = central_binom_over_4n(n);
    double tail = mu * std::pow(rho, -2.0 * n) * std::pow(U, 1.0 - 2.0 * n) / (2.0 * n - 1.0);
    double inv = 2.0 * (integral + tail);
    if (!std::isfinite(inv) || inv <= 0.0) {
        throw ToleranceNotMet("jackson normalization integral failed");
    }
    return 1.0 / inv;
}

MomentReport certify_kernel(const KernelSpec& k, const GridSpec& grid,
                            const std::vector<double>& w_list, double gamma,
                            const std::vector<double>& betas) {
    MomentReport rep;
    rep.kernel = k.name();
    double eps = k.compact() ? 1e-12 : 1e-8;

    auto pts = grid.log_points();
    double m0_dev = 0.0;
    for (double lv : pts) {
        m0_dev = std::max(m0_dev, std::abs(moment(k, 0, PositiveReal::from_log(lv), eps) - 1.0));
    }
    rep.m0_sup_deviation = m0_dev;

    size_t stride = std::max<size_t>(1, pts.size() / 20);
    double m1_min = 0.0, m1_max = 0.0, m1_sum = 0.0;
    bool first = true;
    for (size_t i = 0; i < pts.size(); i += stride) {
        double m1 = moment(k, 1, PositiveReal::from_log(pts[i]), eps);
        rep.m1_values.emplace_back(std::exp(pts[i]), m1);
        if (first) {
            m1_min = m1_max = m1;
            first = false;
        } else {
            m1_min = std::min(m1_min, m1);
            m1_max = std::max(m1_max, m1);
        }
        m1_sum += m1;
    }
    rep.m1 = m1_sum / rep.m1_values.size();
    rep.m1_spread = m1_max - m1_min;
    rep.m1_is_constant = rep.m1_spread <= 1e-9;

    for (double beta : betas) {
        rep.M_beta.emplace_back(beta, absolute_moment(k, beta, grid));
    }
    for (double w : w_list) {
        rep.chi4_tail.emplace_back(w, gamma, chi4_tail(k, w, gamma, grid));
    }
    return rep;
}

nlohmann::json to_json(const MomentReport& r) {
    nlohmann::json j;
    j["family"] = r.kernel;
    j["m0_sup_deviation"] = r.m0_sup_deviation;
    j["m1"] = r.m1;
    j["m1_spread"] = r.m1_spread;
    j["m1_is_constant"] = r.m1_is_constant;
    j["m1_values"] = nlohmann::json::array();
    for (auto& [u, m1] : r.m1_values) j["m1_values"].push_back({u, m1});
    j["M_beta"] = nlohmann::json::array();
    for (auto& [b, v] : r.M_beta) j["M_beta"].push_back({b, v});
    j["chi4"] = nlohmann::json::array();
    for (auto& [w, g, t] : r.chi4_tail) j["chi4"].push_back({w, g, t});
    return j;
}

} // namespace expsamp
