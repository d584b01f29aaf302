#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "expsamp/mellin.hpp"

namespace expsamp {

enum class KernelFamily { BSpline, Jackson, Averaged, Custom };

/// A kernel family instance. Immutable after construction; the Jackson
/// normalization constant is computed eagerly.
class KernelSpec {
  public:
    static KernelSpec bspline(int n);
    static KernelSpec jackson(double alpha, int n);
    static KernelSpec averaged(KernelSpec inner);
    static KernelSpec custom(std::string name, RealFn eval_of_x,
                             std::optional<double> log_support,
                             std::optional<double> decay_exponent);

    KernelFamily family() const { return family_; }
    std::string name() const;
    int order() const { return n_; }
    double alpha() const { return alpha_; }
    const KernelSpec& inner() const { return *inner_; }
    /// Jackson normalization constant C_{alpha,n}; 1 for other families.
    double normalization() const { return normalization_; }

    std::optional<double> log_support() const { return log_support_; }
    std::optional<double> decay_exponent() const { return decay_exponent_; }
    bool compact() const { return log_support_.has_value(); }

    /// Kernel value at t = e^v.
    double eval_log(double v) const;
    /// Mellin derivative at t = e^v (right-limit at knots).
    double theta_log(double v) const;
    double operator()(double t) const { return eval_log(std::log(t)); }

    /// Kink locations in the log coordinate (compact piecewise families).
    std::vector<double> knots() const;

    /// Radius so that the tail of sum |chi(e^{-k}u)| |k - log u|^q is below eps.
    /// Returns log_support for compact kernels. Throws ConditionViolation when
    /// the decay is too slow for the weighted sum to converge.
    double series_radius(double eps, double weight_power) const;

  private:
    KernelSpec() = default;
    KernelFamily family_ = KernelFamily::Custom;
    int n_ = 0;
    double alpha_ = 0.0;
    double normalization_ = 1.0;
    std::shared_ptr<const KernelSpec> inner_;
    RealFn custom_eval_;
    std::string custom_name_;
    std::optional<double> log_support_;
    std::optional<double> decay_exponent_;
};

/// Per-kernel certification results for conditions (chi1)-(chi4).
struct MomentReport {
    std::string kernel;
    double m0_sup_deviation = 0.0;
    std::vector<std::pair<double, double>> m1_values; // (u, m1(chi, u))
    double m1 = 0.0;                                  // mean over the grid
    double m1_spread = 0.0;
    bool m1_is_constant = false;
    std::vector<std::pair<double, double>> M_beta;            // (beta, sup estimate)
    std::vector<std::tuple<double, double, double>> chi4_tail; // (w, gamma, tail)
};

double eval_kernel(const KernelSpec& k, PositiveReal t);
double theta_kernel(const KernelSpec& k, PositiveReal t);
KernelSpec averaged_kernel(const KernelSpec& k);
/// Exact two-point identity: theta chibar(t) = chi(t e^{1/2}) - chi(t e^{-1/2}).
double theta_averaged_kernel(const KernelSpec& inner, PositiveReal t);

/// Discrete moment m_nu(chi, u) = sum_k chi(e^{-k}u)(k - log u)^nu, nu in {0, 1}.
double moment(const KernelSpec& k, int nu, PositiveReal u, double eps = 1e-10);

/// M_beta(chi): sup over the fundamental-interval grid of the absolute moment sum.
double absolute_moment(const KernelSpec& k, double beta, const GridSpec& grid);

/// Sup over the grid of the (chi4) tail sum at rate w and margin gamma.
double chi4_tail(const KernelSpec& k, double w, double gamma, const GridSpec& grid);

/// C_{alpha,n} with C^{-1} = int_0^inf sinc^{2n}(log x / (2 alpha n pi)) dx/x.
double jackson_normalization(double alpha, int n);

MomentReport certify_kernel(const KernelSpec& k, const GridSpec& grid,
                            const std::vector<double>& w_list, double gamma,
                            const std::vector<double>& betas = {0.0, 1.0, 2.0});

nlohmann::json to_json(const MomentReport& report);

} // namespace expsamp
