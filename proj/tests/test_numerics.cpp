#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "ou/interp.hpp"
#include "ou/quad.hpp"
#include "ou/roots.hpp"

using namespace ou;

TEST_CASE("quadrature: smooth closed forms") {
    double err;
    CHECK(quad_g7k15([](double x) { return x * x; }, 0.0, 1.0, err) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-14));

    quad_result r = integrate([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-12);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));

    r = integrate([](double x) { return std::exp(-x * x); }, -8.0, 8.0, 1e-12);
    CHECK(r.value == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-12));
}

TEST_CASE("quadrature: integrable endpoint singularities") {
    // int_0^1 log(1/x) dx = 1
    quad_result r = integrate([](double x) { return -std::log(x); }, 1e-300, 1.0, 1e-10);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-8));

    // int_0^1 x^{-1/2} dx = 2; adaptive splitting must dig into the endpoint
    r = integrate([](double x) { return 1.0 / std::sqrt(x); }, 1e-300, 1.0, 1e-10);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("quadrature: error estimate is honest on a smooth integrand") {
    quad_result r = integrate([](double x) { return std::cos(3.0 * x); }, 0.0, 2.0, 1e-11);
    double exact = std::sin(6.0) / 3.0;
    CHECK(std::fabs(r.value - exact) <= std::max(r.error, 1e-13));
}

TEST_CASE("bisect: simple roots") {
    auto f = [](double x) { return std::cos(x) - x; };
    root_result r = bisect(f, 0.0, 1.0);
    CHECK(r.converged);
    CHECK(r.x == doctest::Approx(0.7390851332151607).epsilon(1e-12));

    CHECK_THROWS_AS(bisect([](double x) { return x * x + 1.0; }, -1.0, 1.0), numeric_error);
}

TEST_CASE("expand_bracket: finds a sign change by growth") {
    auto f = [](double x) { return std::log(x) - 3.0; };  // root at e^3 ~ 20.1
    double lo = 1.0, hi = 2.0;
    expand_bracket(f, lo, hi);
    CHECK(f(lo) * f(hi) <= 0);
    root_result r = bisect(f, lo, hi);
    CHECK(r.x == doctest::Approx(std::exp(3.0)).epsilon(1e-10));
}

TEST_CASE("newton_bracketed: quadratic convergence with safeguard") {
    auto fdf = [](double x) {
        return std::pair<double, double>(x * x * x - 2.0, 3.0 * x * x);
    };
    root_result r = newton_bracketed(fdf, 1.0, 0.0, 4.0);
    CHECK(r.x == doctest::Approx(std::cbrt(2.0)).epsilon(1e-13));
    CHECK(r.iterations < 20);
}

TEST_CASE("golden_min: unimodal minimum") {
    auto f = [](double x) { return (x - 2.0) * (x - 2.0) + 1.0; };
    golden_result r = golden_min(f, -10.0, 10.0, 1e-12);
    CHECK(r.x == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(r.fx == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("monotone_cubic: interpolates nodes and preserves monotonicity") {
    std::vector<double> x = {0.0, 0.5, 1.2, 2.0, 3.5, 5.0};
    std::vector<double> y;
    for (double xi : x) y.push_back(std::atan(xi));
    monotone_cubic m(x, y);

    for (size_t i = 0; i < x.size(); ++i)
        CHECK(m(x[i]) == doctest::Approx(y[i]).epsilon(1e-14));

    double prev = m(0.0);
    for (double t = 0.0; t <= 5.0; t += 0.001) {
        double v = m(t);
        CHECK(v >= prev - 1e-13);
        prev = v;
    }
}

TEST_CASE("monotone_cubic: exact slopes tighten the fit") {
    std::vector<double> x, y, dy;
    for (double t = 1.0; t <= 3.0 + 1e-9; t += 0.125) {
        x.push_back(t);
        y.push_back(std::log(t));
        dy.push_back(1.0 / t);
    }
    monotone_cubic m(x, y, dy);
    double worst = 0;
    for (double t = 1.0; t <= 3.0; t += 0.01)
        worst = std::max(worst, std::fabs(m(t) - std::log(t)));
    // Hermite cubic error bound: h^4 max|f''''| / 384 = 0.125^4 * 6 / 384 ~ 3.8e-6.
    CHECK(worst < 4e-6);
}

TEST_CASE("monotone_cubic: random monotone data stays monotone") {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> U(0.01, 1.0);
    std::vector<double> x = {0.0}, y = {0.0};
    for (int i = 0; i < 30; ++i) {
        x.push_back(x.back() + U(rng));
        y.push_back(y.back() + U(rng) * (i % 7 == 0 ? 0.001 : 1.0));
    }
    monotone_cubic m(x, y);
    double prev = m(x.front());
    for (double t = x.front(); t <= x.back(); t += (x.back() - x.front()) / 5000.0) {
        double v = m(t);
        CHECK(v >= prev - 1e-12);
        prev = v;
    }
}
