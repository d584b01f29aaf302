#include "expsamp/mellin.hpp"

#include <algorithm>
#include <cmath>

#include "expsamp/quadrature.hpp"

namespace expsamp {

namespace {
constexpr double kFdStep1 = 1e-5; // first-order central difference step (log domain)
constexpr double kFdStep2 = 1e-4; // second-order stencil step

double check_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw NumericDomainError(std::string("non-finite value in ") + what);
    }
    return v;
}
} // namespace

std::vector<double> GridSpec::log_points() const {
    if (count < 2 || !(log_lo < log_hi)) {
        throw InvalidGrid("GridSpec requires log_lo < log_hi and count >= 2");
    }
    double lo = log_lo + margin;
    double hi = log_hi - margin;
    if (!(lo < hi)) {
        throw InvalidGrid("GridSpec margin leaves an empty window");
    }
    std::vector<double> pts(count);
    for (int i = 0; i < count; ++i) {
        pts[i] = lo + (hi - lo) * static_cast<double>(i) / (count - 1);
    }
    return pts;
}

double mellin_derivative(const TestFunction& f, PositiveReal x, int order,
                         std::optional<double> fd_step) {
    if (order != 1 && order != 2) {
        throw UnsupportedOrder("mellin_derivative supports order 1 or 2");
    }
    if (order == 1) {
        if (f.theta_analytic) {
            return check_finite((*f.theta_analytic)(x.value()), "theta_analytic");
        }
        double h = fd_step.value_or(kFdStep1);
        double fp = check_finite(f.eval(std::exp(x.log_value() + h)), "f eval");
        double fm = check_finite(f.eval(std::exp(x.log_value() - h)), "f eval");
        return (fp - fm) / (2.0 * h);
    }
    if (f.theta2_analytic) {
        return check_finite((*f.theta2_analytic)(x.value()), "theta2_analytic");
    }
    double h = fd_step.value_or(kFdStep2);
    double fp = check_finite(f.eval(std::exp(x.log_value() + h)), "f eval");
    double f0 = check_finite(f.eval(x.value()), "f eval");
    double fm = check_finite(f.eval(std::exp(x.log_value() - h)), "f eval");
    return (fp - 2.0 * f0 + fm) / (h * h);
}

double mellin_antiderivative(const TestFunction& f, PositiveReal x, double abs_tol) {
    double a = std::log(f.antiderivative_base);
    double b = x.log_value();
    if (a == b) {
        return 0.0;
    }
    auto g = [&f](double v) { return f.eval(std::exp(v)); };
    // Signed: negative when x < a.
    if (b < a) return -quad::adaptive(g, b, a, abs_tol);
    return quad::adaptive(g, a, b, abs_tol);
}

MellinTransformResult mellin_transform(const RealFn& f_of_x, const MellinTransformQuery& q) {
    const double R = q.truncation_radius;
    auto integrand = [&](double v) { return f_of_x(std::exp(v)) * std::exp(q.c * v); };
    auto re = [&](double v) { return integrand(v) * std::cos(q.s * v); };
    auto im = [&](double v) { return integrand(v) * std::sin(q.s * v); };
    MellinTransformResult out;
    out.value = {quad::adaptive(re, -R, R, q.quadrature_tolerance),
                 quad::adaptive(im, -R, R, q.quadrature_tolerance)};
    out.truncation_unsound = std::abs(integrand(R)) > q.quadrature_tolerance ||
                             std::abs(integrand(-R)) > q.quadrature_tolerance;
    return out;
}

double log_modulus_of_continuity(const TestFunction& f, double delta, const GridSpec& grid) {
    auto pts = grid.log_points();
    std::vector<double> vals(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) {
        vals[i] = f.eval(std::exp(pts[i]));
    }
    double best = 0.0;
    bool any_pair = false;
    for (size_t i = 0; i < pts.size(); ++i) {
        for (size_t j = i + 1; j < pts.size() && pts[j] - pts[i] <= delta; ++j) {
            any_pair = true;
            best = std::max(best, std::abs(vals[i] - vals[j]));
        }
    }
    if (!any_pair) {
        throw InvalidGrid("no grid pairs within delta; refine the grid");
    }
    return best;
}

double mellin_taylor_eval(const TestFunction& f, PositiveReal x, double t, int n) {
    if (n != 1 && n != 2) {
        throw UnsupportedOrder("mellin_taylor_eval supports n in {1, 2}");
    }
    if (!f.theta_analytic || (n == 2 && !f.theta2_analytic)) {
        throw UnsupportedOrder("analytic Mellin derivatives up to n must be registered");
    }
    double lt = std::log(t);
    double out = f.eval(x.value()) + (*f.theta_analytic)(x.value()) * lt;
    if (n == 2) {
        out += (*f.theta2_analytic)(x.value()) * lt * lt / 2.0;
    }
    return out;
}

} // namespace expsamp
