#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "expsamp/errors.hpp"

namespace expsamp {

/// A point of the multiplicative half-line, carrying its log coordinate.
class PositiveReal {
  public:
    explicit PositiveReal(double v) : value_(v), log_value_(std::log(v)) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw NumericDomainError("PositiveReal requires a finite value > 0");
        }
    }
    static PositiveReal from_log(double lv) { return PositiveReal(std::exp(lv), lv); }

    double value() const { return value_; }
    double log_value() const { return log_value_; }

  private:
    PositiveReal(double v, double lv) : value_(v), log_value_(lv) {}
    double value_;
    double log_value_;
};

using RealFn = std::function<double(double)>;

struct LogHolderFlag {
    double alpha; // exponent in (0, 1]
    double K;     // Holder constant
};

/// A registered target function on R+ with optional analytic Mellin derivatives.
struct TestFunction {
    std::string id;
    RealFn eval;
    std::optional<RealFn> theta_analytic;  // first Mellin derivative
    std::optional<RealFn> theta2_analytic; // second Mellin derivative
    double antiderivative_base = 1.0;      // base point a of F(x) = int_a^x f dt/t
    bool bounded = true;
    bool log_uniformly_continuous = true;
    std::optional<LogHolderFlag> log_holder;
    // Compact log-support [lo, hi], when known (bump test functions).
    std::optional<std::pair<double, double>> log_support;

    double operator()(double x) const { return eval(x); }
};

/// Log-uniform evaluation grid; margin shrinks the window symmetrically.
struct GridSpec {
    double log_lo;
    double log_hi;
    int count;
    double margin = 0.0;

    std::vector<double> log_points() const;
};

struct MellinTransformQuery {
    double c = 0.0;                   // vertical line Re(s); 0 throughout this artifact
    double s = 0.0;                   // frequency, transform taken at c + i*s
    double truncation_radius = 40.0;  // in the log domain
    double quadrature_tolerance = 1e-10;
};

struct MellinTransformResult {
    std::complex<double> value;
    bool truncation_unsound = false; // integrand not decayed at +-R
};

/// theta^order f at x; analytic closure when registered, else central differences
/// in the log coordinate. order in {1, 2}.
double mellin_derivative(const TestFunction& f, PositiveReal x, int order,
                         std::optional<double> fd_step = std::nullopt);

/// F(x) = int_a^x f(t) dt/t with a = f.antiderivative_base; adaptive quadrature.
double mellin_antiderivative(const TestFunction& f, PositiveReal x, double abs_tol = 1e-10);

/// int f(e^v) e^{(c + i s) v} dv over [-R, R].
MellinTransformResult mellin_transform(const RealFn& f_of_x, const MellinTransformQuery& q);

/// Grid estimator (lower bound) of omega(f, delta) = sup |f(u)-f(v)| over
/// |log u - log v| <= delta.
double log_modulus_of_continuity(const TestFunction& f, double delta, const GridSpec& grid);

/// Degree-n Mellin Taylor polynomial of f about x, evaluated at t*x.
double mellin_taylor_eval(const TestFunction& f, PositiveReal x, double t, int n);

} // namespace expsamp
