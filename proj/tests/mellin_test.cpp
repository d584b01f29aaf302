#include <doctest.h>

#include <cmath>

#include "expsamp/kernels.hpp"
#include "expsamp/mellin.hpp"
#include "expsamp/registry.hpp"

using namespace expsamp;

namespace {

TestFunction plain(RealFn eval) {
    TestFunction f;
    f.id = "plain";
    f.eval = std::move(eval);
    return f;
}

} // namespace

TEST_CASE("PositiveReal carries consistent log coordinate") {
    PositiveReal x(2.5);
    CHECK(x.value() == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(x.log_value() == doctest::Approx(std::log(2.5)).epsilon(1e-15));
    PositiveReal y = PositiveReal::from_log(-1.25);
    CHECK(y.log_value() == -1.25);
    CHECK(y.value() == doctest::Approx(std::exp(-1.25)).epsilon(1e-15));
    CHECK_THROWS_AS(PositiveReal(0.0), NumericDomainError);
    CHECK_THROWS_AS(PositiveReal(-1.0), NumericDomainError);
    CHECK_THROWS_AS(PositiveReal(std::nan("")), NumericDomainError);
}

TEST_CASE("GridSpec produces the requested log-uniform points") {
    GridSpec g{-2.0, 2.0, 5, 0.0};
    auto pts = g.log_points();
    REQUIRE(pts.size() == 5);
    CHECK(pts.front() == -2.0);
    CHECK(pts.back() == 2.0);
    CHECK(pts[2] == doctest::Approx(0.0).epsilon(1e-15));

    GridSpec shrunk{-2.0, 2.0, 3, 0.5};
    auto sp = shrunk.log_points();
    CHECK(sp.front() == doctest::Approx(-1.5));
    CHECK(sp.back() == doctest::Approx(1.5));

    CHECK_THROWS_AS((GridSpec{0.0, 1.0, 1, 0.0}).log_points(), InvalidGrid);
    CHECK_THROWS_AS((GridSpec{0.0, 1.0, 10, 0.6}).log_points(), InvalidGrid);
    CHECK_THROWS_AS((GridSpec{1.0, 0.0, 10, 0.0}).log_points(), InvalidGrid);
}

TEST_CASE("mellin_derivative uses analytic closures when registered") {
    const TestFunction& f = registry_get("sin_log");
    CHECK(mellin_derivative(f, PositiveReal(1.0), 1) == doctest::Approx(1.0).epsilon(1e-15));
    double x = std::exp(0.4);
    CHECK(mellin_derivative(f, PositiveReal(x), 1) == doctest::Approx(std::cos(0.4)).epsilon(1e-14));
    CHECK(mellin_derivative(f, PositiveReal(x), 2) ==
          doctest::Approx(-std::sin(0.4)).epsilon(1e-14));
    CHECK_THROWS_AS(mellin_derivative(f, PositiveReal(1.0), 3), UnsupportedOrder);
    CHECK_THROWS_AS(mellin_derivative(f, PositiveReal(1.0), 0), UnsupportedOrder);
}

TEST_CASE("finite differences agree with the analytic theta derivatives") {
    TestFunction f = plain([](double x) { return std::sin(std::log(x)); });
    for (double v : {-1.1, -0.3, 0.0, 0.45, 1.7}) {
        PositiveReal x = PositiveReal::from_log(v);
        CHECK(mellin_derivative(f, x, 1) == doctest::Approx(std::cos(v)).epsilon(1e-9));
        CHECK(mellin_derivative(f, x, 2) == doctest::Approx(-std::sin(v)).epsilon(5e-7));
    }
}

TEST_CASE("mellin_antiderivative integrates against the Haar measure from the base point") {
    const TestFunction& one = registry_get("const1");
    CHECK(mellin_antiderivative(one, PositiveReal(std::exp(2.0))) ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK(mellin_antiderivative(one, PositiveReal(std::exp(-2.0))) ==
          doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(mellin_antiderivative(one, PositiveReal(1.0)) == 0.0);

    const TestFunction& s = registry_get("sin_log");
    // int_0^pi sin = 2
    CHECK(mellin_antiderivative(s, PositiveReal(std::exp(M_PI))) ==
          doctest::Approx(2.0).epsilon(1e-9));

    const TestFunction& lw = registry_get("log_windowed");
    CHECK(mellin_antiderivative(lw, PositiveReal(std::exp(1.0))) ==
          doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("theta of the anti-derivative recovers the integrand") {
    const TestFunction& s = registry_get("sin_log");
    TestFunction F = plain([&](double x) {
        return mellin_antiderivative(s, PositiveReal(x), 1e-12);
    });
    for (double v : {-1.4, -0.6, 0.2, 0.9, 1.5}) {
        CHECK(mellin_derivative(F, PositiveReal::from_log(v), 1) ==
              doctest::Approx(std::sin(v)).epsilon(1e-6));
    }
}

TEST_CASE("mellin transform of the order-3 spline kernel matches the sinc cube") {
    KernelSpec b3 = KernelSpec::bspline(3);
    RealFn f = [&](double x) { return b3(x); };
    MellinTransformQuery q;
    q.truncation_radius = 2.0;
    q.quadrature_tolerance = 1e-11;

    auto expected = [](double s) {
        double h = 0.5 * s;
        double c = std::sin(h) / h;
        return c * c * c;
    };

    q.s = 0.0;
    auto r0 = mellin_transform(f, q);
    CHECK(r0.value.real() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(r0.value.imag()) <= 1e-9);
    CHECK_FALSE(r0.truncation_unsound);

    for (double s : {M_PI / 2.0, M_PI, 3.0}) {
        q.s = s;
        auto r = mellin_transform(f, q);
        CHECK(r.value.real() == doctest::Approx(expected(s)).epsilon(1e-8));
        CHECK(std::abs(r.value.imag()) <= 1e-9);
    }
    for (double s : {2.0 * M_PI, 4.0 * M_PI}) {
        q.s = s;
        auto r = mellin_transform(f, q);
        CHECK(std::abs(r.value.real()) <= 1e-9);
    }
}

TEST_CASE("transform flags an unsound truncation radius") {
    RealFn wide = [](double x) {
        double v = std::log(x);
        return 1.0 / (1.0 + v * v);
    };
    MellinTransformQuery q;
    q.truncation_radius = 5.0;
    q.quadrature_tolerance = 1e-8;
    q.s = 0.0;
    CHECK(mellin_transform(wide, q).truncation_unsound);
}

TEST_CASE("log modulus of continuity behaves like the sine modulus") {
    const TestFunction& s = registry_get("sin_log");
    GridSpec g{-2.0, 2.0, 801, 0.0};
    double w02 = log_modulus_of_continuity(s, 0.2, g);
    // omega(sin, d) = 2 sin(d/2); the grid estimate is a lower bound.
    CHECK(w02 <= 2.0 * std::sin(0.1) + 1e-12);
    CHECK(w02 >= 2.0 * std::sin(0.1) - 0.01);
    double w01 = log_modulus_of_continuity(s, 0.1, g);
    CHECK(w01 <= w02);

    CHECK(log_modulus_of_continuity(registry_get("const1"), 0.2, g) == 0.0);
    CHECK_THROWS_AS(log_modulus_of_continuity(s, 1e-4, g), InvalidGrid);
}

TEST_CASE("Mellin Taylor polynomial is exact on log and second order elsewhere") {
    const TestFunction& lw = registry_get("log_windowed");
    // log is its own first Taylor expansion in the linear window.
    CHECK(mellin_taylor_eval(lw, PositiveReal(1.0), std::exp(0.5), 1) ==
          doctest::Approx(0.5).epsilon(1e-15));

    const TestFunction& s = registry_get("sin_log");
    PositiveReal x = PositiveReal::from_log(0.2);
    for (double h : {0.2, 0.1, 0.05}) {
        double t2 = mellin_taylor_eval(s, x, std::exp(h), 2);
        double exact = std::sin(0.2 + h);
        // |theta^3 sin| <= 1, so the remainder is below h^3/6.
        CHECK(std::abs(exact - t2) <= h * h * h / 6.0 + 1e-15);
    }
    CHECK(mellin_taylor_eval(s, x, 1.0, 2) == doctest::Approx(std::sin(0.2)).epsilon(1e-15));

    CHECK_THROWS_AS(mellin_taylor_eval(s, x, 2.0, 3), UnsupportedOrder);
    CHECK_THROWS_AS(mellin_taylor_eval(registry_get("holder_half"), x, 2.0, 1), UnsupportedOrder);
}
