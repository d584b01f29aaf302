#pragma once

#include <functional>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "expsamp/errors.hpp"

namespace expsamp::quad {

/// Adaptive Gauss-Kronrod on [a, b] with an absolute error budget.
/// Throws ToleranceNotMet if the error estimate exceeds the budget.
template <class F>
double adaptive(F&& f, double a, double b, double abs_tol = 1e-10) {
    double err = 0.0;
    double result = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        std::forward<F>(f), a, b, /*max_depth=*/17, /*tol=*/abs_tol * 0.1, &err);
    if (!(err <= abs_tol * std::max(1.0, std::abs(result)))) {
        throw ToleranceNotMet("adaptive quadrature error estimate " + std::to_string(err) +
                              " exceeds budget on [" + std::to_string(a) + ", " +
                              std::to_string(b) + "]");
    }
    return result;
}

/// Fixed-order Gauss-Legendre on [a, b].
template <int Nodes, class F>
double gauss(F&& f, double a, double b) {
    return boost::math::quadrature::gauss<double, Nodes>::integrate(std::forward<F>(f), a, b);
}

template <class F>
double gauss16(F&& f, double a, double b) {
    return gauss<16>(std::forward<F>(f), a, b);
}

template <class F>
double gauss32(F&& f, double a, double b) {
    return gauss<32>(std::forward<F>(f), a, b);
}

} // namespace expsamp::quad
