#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "ou/gauss_core.hpp"
#include "ou/norm_engine.hpp"
#include "ou/orlicz.hpp"

using namespace ou;

namespace {

const gauss_tail& gt() {
    static gauss_tail g;
    return g;
}

const weight_theta& wt() {
    static weight_theta w(gt());
    return w;
}

}  // namespace

TEST_CASE("xi multiplier closed form for a constant weight under t^2") {
    power_young B(2.0);
    auto h = [](double) { return 3.0; };
    auto m = solve_xi(B, h, 0.2);
    // 0.3 (3 xi / 2)^2 = 1
    double expect = 2.0 / 3.0 * std::sqrt(10.0 / 3.0);
    CHECK(m.value == doctest::Approx(expect).epsilon(1e-10));
    CHECK(std::fabs(m.residual) <= 1e-10);
    CHECK(m.iterations > 0);
    CHECK(m.lo <= m.value);
    CHECK(m.hi >= m.value);
    double norm = orlicz_norm_weighted(B, h, 0.2, &m);
    CHECK(norm == doctest::Approx(0.9 * std::sqrt(10.0 / 3.0)).epsilon(1e-10));
    // a constant is a scaled characteristic function, and the norm the
    // multiplier computes lives under the conjugate Young function
    conjugate_young conj(B);
    CHECK(norm == doctest::Approx(3.0 * char_norm(0.3, conj)).epsilon(1e-10));
}

TEST_CASE("xi scaling invariance and norm homogeneity") {
    exp_beta_family B(0.5, 1.0, 0.0, exp_patch::convex_envelope);
    auto h = [](double r) { return std::pow(r, -0.25); };
    auto h2 = [](double r) { return 2.0 * std::pow(r, -0.25); };
    auto m1 = solve_xi(B, h, 0.05);
    auto m2 = solve_xi(B, h2, 0.05);
    CHECK(m2.value == doctest::Approx(0.5 * m1.value).epsilon(1e-9));
    double n1 = orlicz_norm_weighted(B, h, 0.05, &m1);
    double n2 = orlicz_norm_weighted(B, h2, 0.05, &m2);
    CHECK(n2 == doctest::Approx(2.0 * n1).epsilon(1e-9));
}

TEST_CASE("xi and norm anchors for h = r^{-1/4} under the beta = 1/2 envelope") {
    exp_beta_family B(0.5, 1.0, 0.0, exp_patch::convex_envelope);
    auto h = [](double r) { return std::pow(r, -0.25); };
    auto m = solve_xi(B, h, 0.05);
    CHECK(m.value == doctest::Approx(1.0568688019288046).epsilon(1e-9));
    CHECK(std::fabs(m.residual) <= 1e-10);
    double norm = orlicz_norm_weighted(B, h, 0.05, &m);
    CHECK(norm == doctest::Approx(1.0813529270953025).epsilon(1e-8));
    conjugate_young conj(B);
    double amem = orlicz_norm_amemiya(conj, h, {0.05, 0.5});
    CHECK(amem == doctest::Approx(norm).epsilon(1e-6));
}

TEST_CASE("xi route, lambda route, and Amemiya agree on Theta at s = 0.05") {
    exp_beta_family B(1.0, 1.0, 0.0, exp_patch::convex_envelope);
    const auto& W = wt();
    auto h = [&](double r) { return W.theta(r); };
    CHECK(W.theta(0.05) == doctest::Approx(7.0610476059939156).epsilon(1e-9));
    auto mxi = solve_xi(B, h, 0.05);
    CHECK(mxi.value == doctest::Approx(1.534140496365038).epsilon(1e-8));
    double nr = orlicz_norm_weighted(B, h, 0.05, &mxi);
    CHECK(nr == doctest::Approx(1.3431610665198583).epsilon(1e-8));

    double ell = -std::log(0.05);
    auto wn = theta_orlicz_norm(B, W, ell);
    CHECK(wn.mult.value == doctest::Approx(mxi.value).epsilon(1e-6));
    CHECK(wn.norm == doctest::Approx(nr).epsilon(1e-6));

    conjugate_young conj(B);
    double amem = orlicz_norm_amemiya(conj, h, {0.05, 0.5});
    CHECK(amem == doctest::Approx(wn.norm).epsilon(1e-6));
}

TEST_CASE("xi and norm anchors tighten at s = 0.005") {
    exp_beta_family B(1.0, 1.0, 0.0, exp_patch::convex_envelope);
    const auto& W = wt();
    auto h = [&](double r) { return W.theta(r); };
    CHECK(W.theta(0.005) == doctest::Approx(33.400590306155456).epsilon(1e-9));
    auto m = solve_xi(B, h, 0.005);
    CHECK(m.value == doctest::Approx(0.95693509122644409).epsilon(1e-8));
    double norm = orlicz_norm_weighted(B, h, 0.005, &m);
    CHECK(norm == doctest::Approx(2.3978759244761619).epsilon(1e-8));
    auto wn = theta_orlicz_norm(B, W, -std::log(0.005));
    CHECK(wn.norm == doctest::Approx(norm).epsilon(1e-6));
}

TEST_CASE("lambda solve and norm anchors for beta = 2 at t = 100") {
    exp_beta_family B(2.0, 1.0, 0.0, exp_patch::convex_envelope);
    const auto& W = wt();
    auto m = solve_lambda_t(B, W, std::log(100.0));
    CHECK(m.value == doctest::Approx(2.0034687157504804).epsilon(1e-8));
    CHECK(std::fabs(m.residual) <= 1e-10);
    CHECK(W.theta_inv(100.0) == doctest::Approx(0.0011572787857644844).epsilon(1e-8));
    double ell = W.theta_inv_ell(100.0);
    auto wn = theta_orlicz_norm(B, W, ell);
    CHECK(wn.norm == doctest::Approx(2.1327380493953702).epsilon(1e-7));
}

TEST_CASE("lambda decreases in t and follows its growth law") {
    const auto& W = wt();
    exp_beta_family Bh(0.5, 1.0, 0.0, exp_patch::convex_envelope);
    auto l1 = solve_lambda_t(Bh, W, std::log(1e3));
    auto l2 = solve_lambda_t(Bh, W, std::log(2e3));
    CHECK(l2.value < l1.value);
    // for beta = 1/2 the multiplier behaves like (2 - 2 beta) / log t
    auto l10 = solve_lambda_t(Bh, W, std::log(1e10));
    double ratio = l10.value * std::log(1e10);
    CHECK(ratio > 0.6);
    CHECK(ratio < 1.4);
    // for beta > 1 it converges to a positive limit
    exp_beta_family B2(2.0, 1.0, 0.0, exp_patch::convex_envelope);
    auto la = solve_lambda_t(B2, W, std::log(1e8));
    auto lb = solve_lambda_t(B2, W, std::log(1e10));
    CHECK(la.value / lb.value > 0.95);
    CHECK(la.value / lb.value < 1.05);
    CHECK(lb.value < la.value);
}

TEST_CASE("centering constant: zero at the median, Lambda norm at the mean") {
    exp_beta_family B(1.0, 1.0, 0.0, exp_patch::convex_envelope);
    const auto& W = wt();
    CHECK(c_constant(B, W, center_kind::median) == 0.0);
    CHECK(W.lambda(0.05) == doctest::Approx(1.2647685789012895).epsilon(1e-9));
    CHECK(W.lambda(1e-6) == doctest::Approx(2.2148843632210096).epsilon(1e-9));
    double cm = c_constant(B, W, center_kind::mean);
    CHECK(cm == doctest::Approx(0.44440623683029068).epsilon(1e-7));
}

TEST_CASE("growth function pieces: value at one half, tail term, monotonicity") {
    exp_beta_family B(1.0, 1.0, 0.0, exp_patch::convex_envelope);
    const auto& W = wt();
    g_function G(B, W, center_kind::mean);
    CHECK(G.c_const() == doctest::Approx(0.44440623683029068).epsilon(1e-7));
    auto at_half = G.eval_ell(log_two);
    CHECK(at_half.norm_part == 0.0);
    CHECK(at_half.tail_part == 0.0);
    CHECK(at_half.total == doctest::Approx(G.c_const()));
    auto p3 = G.eval_ell(3.0);
    auto p4 = G.eval_ell(4.0);
    CHECK(p4.total > p3.total);
    CHECK(p3.total == doctest::Approx(p3.norm_part + p3.tail_part + p3.c_part));
    double s = std::exp(-3.0);
    double tail = W.theta(s) * s * B.value_inv(1.0 / s);
    CHECK(p3.tail_part == doctest::Approx(tail).epsilon(1e-9));
}

TEST_CASE("norm of Theta approaches its leading growth for beta = 1") {
    exp_beta_family B(1.0, 1.0, 0.0, exp_patch::convex_envelope);
    const auto& W = wt();
    auto wn = theta_orlicz_norm(B, W, 30.0);
    double lead = 0.5 * 30.0;
    CHECK(wn.norm / lead > 0.75);
    CHECK(wn.norm / lead < 1.25);
    // second-order deficit: norm - L/2 runs like -(1/8)(log L)^2 - (1/2)log L,
    // so the ratio to (log L)^2 sits moderately below -1/8 at this scale
    for (double ell : {40.0, 55.0}) {
        auto w2 = theta_orlicz_norm(B, W, ell);
        double LL = std::log(ell);
        double d = (w2.norm - 0.5 * ell) / (LL * LL);
        CHECK(d < -0.10);
        CHECK(d > -0.35);
    }
}

TEST_CASE("norm of Theta second order for beta = 1/2 closes on -(3/4) L log L") {
    exp_beta_family B(0.5, 1.0, 0.0, exp_patch::convex_envelope);
    const auto& W = wt();
    double r40, r55;
    {
        auto wn = theta_orlicz_norm(B, W, 40.0);
        r40 = (wn.norm - 0.25 * 40.0 * 40.0) / (-0.75 * 40.0 * std::log(40.0));
    }
    {
        auto wn = theta_orlicz_norm(B, W, 55.0);
        r55 = (wn.norm - 0.25 * 55.0 * 55.0) / (-0.75 * 55.0 * std::log(55.0));
    }
    CHECK(r40 > 0.6);
    CHECK(r40 < 1.4);
    CHECK(r55 > 0.6);
    CHECK(r55 < 1.4);
    // the ratio climbs toward 1 as the scale grows
    CHECK(r55 > r40);
}

TEST_CASE("growth function second order for beta = 1/2 closes on -(3/2) log L") {
    exp_beta_family B(0.5, 1.0, 0.0, exp_patch::convex_envelope);
    const auto& W = wt();
    g_function G(B, W, center_kind::median);
    auto ratio = [&](double ell) {
        auto p = G.eval_ell(ell);
        double lhs = std::sqrt(4.0 * p.total);
        return (lhs - ell) / (-1.5 * std::log(ell));
    };
    double r40 = ratio(40.0);
    double r55 = ratio(55.0);
    CHECK(r40 > 0.5);
    CHECK(r40 < 1.5);
    CHECK(r55 > 0.5);
    CHECK(r55 < 1.5);
    CHECK(r55 > r40);
}
