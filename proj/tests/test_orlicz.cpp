#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "ou/orlicz.hpp"
#include "ou/quad.hpp"

using namespace ou;

namespace {

// Oracle: conjugate by its integral representation conj(T) = int_0^T b^{-1},
// sharing no code with the closed-form conj_value.
double conj_oracle(const young_function& B, double T) {
    return integrate([&](double x) { return B.deriv_inv(x); }, 0.0, T, 1e-12).value;
}

const exp_beta_family& env_half() {
    static exp_beta_family f(0.5, 1.0, 0.0, exp_patch::convex_envelope);
    return f;
}

}  // namespace

TEST_CASE("power young: closed forms and the t^2 -> t^2/4 conjugate") {
    power_young sq(2.0);
    CHECK(sq.value(3.0) == doctest::Approx(9.0).epsilon(1e-14));
    CHECK(sq.deriv(3.0) == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(sq.deriv_inv(6.0) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(sq.value_inv(9.0) == doctest::Approx(3.0).epsilon(1e-14));
    for (double t : {0.1, 0.7, 1.3, 2.9, 8.0}) {
        CHECK(sq.conj_value(t) == doctest::Approx(t * t / 4.0).epsilon(1e-13));
        CHECK(sq.conj_value(t) == doctest::Approx(conj_oracle(sq, t)).epsilon(1e-11));
    }
    CHECK(sq.conj_inv(1.0) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("envelope tangency for beta = 1/2: frozen root and residual") {
    // frozen: u* solving e^u (u/2 - 1) + 1 = 0 and t* = u*^2
    CHECK(envelope_tangency(0.5) ==
          doctest::Approx(2.5396382821881653).epsilon(1e-13));
    const exp_beta_family& f = env_half();
    CHECK(f.tau0() == doctest::Approx(2.5396382821881653).epsilon(1e-13));
    // tangency: secant slope from (0, 1) equals the derivative at t*
    double tstar = f.tau0();
    double g = std::exp(std::sqrt(tstar));
    double gp = 0.5 / std::sqrt(tstar) * g;
    CHECK(std::fabs(gp * tstar - (g - 1.0)) <= 1e-10);
    // frozen slope of the linear piece
    CHECK(f.deriv(1.0) == doctest::Approx(1.5441386523708701).epsilon(1e-13));
}

TEST_CASE("envelope stays below exp^beta and matches it beyond the tangency") {
    const exp_beta_family& f = env_half();
    for (int i = 1; i <= 1000; ++i) {
        double t = 8.0 * i / 1000.0;
        double raw = f.raw_envelope(t);
        CHECK(raw <= std::exp(std::sqrt(t)) * (1.0 + 1e-14));
        if (t > f.tau0())
            CHECK(raw == doctest::Approx(std::exp(std::sqrt(t))).epsilon(1e-14));
    }
    // beta >= 1: no patch, agreement everywhere
    exp_beta_family g(1.5, 1.0, 0.0, exp_patch::convex_envelope);
    CHECK(g.tau0() == 0.0);
    for (double t : {0.2, 0.9, 1.4, 2.2})
        CHECK(g.raw_envelope(t) ==
              doctest::Approx(std::exp(std::pow(t, 1.5))).epsilon(1e-14));
}

TEST_CASE("exp family: frozen anchors for value, inverse derivative, conjugate") {
    const exp_beta_family& f = env_half();
    CHECK(f.value(3.0) == doctest::Approx(4.6522336740340921).epsilon(1e-14));
    CHECK(f.deriv_inv(10.0) == doctest::Approx(20.247797656595095).epsilon(1e-12));
    CHECK(f.conj_value(10.0) == doctest::Approx(113.48287079548119).epsilon(1e-12));
    CHECK(f.conj_value(10.0) == doctest::Approx(conj_oracle(f, 10.0)).epsilon(1e-10));
}

TEST_CASE("infeasible patches are rejected") {
    // beta = 1/2, tau0 = 1: tau0^beta = 1 < 1/beta = 2, neither patch convex
    CHECK_THROWS_AS(exp_beta_family(0.5, 1.0, 1.0, exp_patch::linear_cap),
                    std::invalid_argument);
    CHECK_THROWS_AS(exp_beta_family(0.5, 1.0, 1.0, exp_patch::tangent_truncation),
                    std::invalid_argument);
    // feasible once tau0^beta >= 2
    CHECK_NOTHROW(exp_beta_family(0.5, 1.0, 4.1, exp_patch::linear_cap));
}

TEST_CASE("patched families: convexity, continuity at tau0, exact exp branch") {
    std::vector<exp_beta_family> fams;
    fams.emplace_back(0.5, 1.0, 0.0, exp_patch::convex_envelope);
    fams.emplace_back(1.0, 1.0, 1.0, exp_patch::linear_cap);
    fams.emplace_back(1.0, 2.0, 1.5, exp_patch::tangent_truncation);
    fams.emplace_back(0.5, 1.0, 5.0, exp_patch::linear_cap);
    fams.emplace_back(0.5, 3.0, 6.0, exp_patch::tangent_truncation);
    fams.emplace_back(2.0, 1.0, 0.0, exp_patch::convex_envelope);
    for (const auto& f : fams) {
        CHECK(f.value(0.0) == 0.0);
        // continuity at the patch boundary
        if (f.tau0() > 0.0) {
            double below = f.value(f.tau0());
            double above = f.n_coef() * std::exp(std::pow(f.tau0() * (1 + 1e-12),
                                                           f.beta())) + f.shift();
            CHECK(below == doctest::Approx(above).epsilon(1e-9));
        }
        // exact exponential form above tau0
        double t = f.tau0() + 1.3;
        CHECK(f.value(t) ==
              f.n_coef() * std::exp(std::pow(t, f.beta())) + f.shift());
        // midpoint convexity on sampled triples
        for (double a : {0.1, 0.6, 1.9, 3.5})
            for (double h : {0.3, 1.1, 2.7}) {
                double lhs = f.value(a + 0.5 * h);
                double rhs = 0.5 * (f.value(a) + f.value(a + h));
                CHECK(lhs <= rhs * (1.0 + 1e-12) + 1e-12);
            }
    }
}

TEST_CASE("young inequality with equality along tau = b(t)") {
    std::vector<const young_function*> fams;
    power_young sq(2.0);
    exp_beta_family cap(1.0, 1.0, 1.0, exp_patch::linear_cap);
    exp_beta_family tan(0.5, 2.0, 5.0, exp_patch::tangent_truncation);
    fams = {&sq, &env_half(), &cap, &tan};
    for (const young_function* B : fams) {
        for (double t : {0.2, 0.8, 1.7, 2.6, 4.0}) {
            double bt = B->deriv(t);
            // inequality on a grid of tau around b(t)
            for (double tau : {0.1, 0.5 * bt, bt, 2.0 * bt}) {
                double gap = B->value(t) + B->conj_value(tau) - t * tau;
                CHECK(gap >= -1e-9 * (1.0 + B->value(t) + B->conj_value(tau)));
            }
            // equality at tau = b(t)
            double eq = B->value(t) + B->conj_value(bt) - t * bt;
            CHECK(std::fabs(eq) <= 1e-9 * (1.0 + t * bt));
        }
    }
}

TEST_CASE("inverse derivative round trips at continuity points") {
    const exp_beta_family& f = env_half();
    exp_beta_family cap(0.5, 1.0, 5.0, exp_patch::linear_cap);
    for (double t : {3.0, 4.2, 7.5, 30.0, 90.0}) {
        CHECK(f.deriv_inv(f.deriv(t)) == doctest::Approx(t).epsilon(1e-11));
        if (t > cap.tau0())
            CHECK(cap.deriv_inv(cap.deriv(t)) == doctest::Approx(t).epsilon(1e-11));
    }
    // inside the linear flat the left-continuous inverse collapses to 0
    CHECK(f.deriv_inv(0.5 * f.deriv(1.0)) == 0.0);
    CHECK(f.deriv_inv(f.deriv(1.0)) == 0.0);
    // inside the jump of the capped family the inverse sits at tau0
    double lo = cap.deriv(cap.tau0());
    double hi = cap.n_coef() * cap.beta() * std::pow(cap.tau0(), cap.beta() - 1.0) *
                std::exp(std::pow(cap.tau0(), cap.beta()));
    CHECK(lo < hi);  // genuine jump
    CHECK(cap.deriv_inv(0.5 * (lo + hi)) == doctest::Approx(cap.tau0()).epsilon(1e-12));
}

TEST_CASE("biconjugation returns the original function") {
    exp_beta_family cap(1.0, 1.0, 1.0, exp_patch::linear_cap);
    std::vector<const young_function*> fams = {&env_half(), &cap};
    for (const young_function* B : fams) {
        conjugate_young conj(*B);
        for (int i = 1; i <= 20; ++i) {
            double t = 0.3 * i;
            double direct = B->value(t);
            double twice = conj.conj_value(t);
            CHECK(twice == doctest::Approx(direct).epsilon(1e-8));
        }
    }
}

TEST_CASE("log-domain entries agree with plain ones and reach huge arguments") {
    const exp_beta_family& f = env_half();
    for (double T : {5.0, 40.0, 1e6, 1e12}) {
        CHECK(f.deriv_inv_log(std::log(T)) ==
              doctest::Approx(f.deriv_inv(T)).epsilon(1e-12));
        CHECK(f.log_value_of_deriv_inv(std::log(T)) ==
              doctest::Approx(std::log(f.value_of_deriv_inv(T))).epsilon(1e-12));
    }
    // far beyond double range: log T = 1000, b^{-1} close to (log T)^2
    double tau = f.deriv_inv_log(1000.0);
    CHECK(tau > 1000.0 * 1000.0);
    CHECK(tau < 1.2 * 1000.0 * 1000.0);
    // identity B(b^{-1}(T)) = (T/beta) b^{-1}(T)^{1-beta} + shift, log form
    double lv = f.log_value_of_deriv_inv(1000.0);
    double expect = 1000.0 - std::log(0.5) + 0.5 * std::log(tau);
    CHECK(lv == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("value_inv is the right-continuous inverse on every piece") {
    exp_beta_family tan(0.5, 1.0, 5.0, exp_patch::tangent_truncation);
    CHECK(tan.tau0_prime() == doctest::Approx(5.0 - std::sqrt(5.0) * 2.0).epsilon(1e-13));
    CHECK(tan.value_inv(0.0) == doctest::Approx(tan.tau0_prime()).epsilon(1e-13));
    for (double t : {tan.tau0_prime() + 0.3, 4.0, tan.tau0(), 7.0, 12.0})
        CHECK(tan.value_inv(tan.value(t)) == doctest::Approx(t).epsilon(1e-11));
    const exp_beta_family& f = env_half();
    for (double y : {0.5, 2.0, 3.9, 4.0, 9.0, 300.0})
        CHECK(f.value(f.value_inv(y)) == doctest::Approx(y).epsilon(1e-11));
}

TEST_CASE("luxemburg norm: constants, indicator sets, modular bridge") {
    const exp_beta_family& f = env_half();
    interval full{0.0, 1.0};
    // constant c on (0,1): modular equation B(c/lambda) = 1
    for (double c : {0.5, 2.0, 11.0}) {
        double expect = c / f.value_inv(1.0);
        double got = luxemburg_norm(f, [&](double) { return c; }, full);
        CHECK(got == doctest::Approx(expect).epsilon(1e-9));
    }
    // indicator of (0, 1/4): norm = 1 / B^{-1}(4), and B^{-1}(4) = (log 5)^2 here
    double m = 0.25;
    double got = luxemburg_norm(f, [&](double r) { return r < m ? 1.0 : 0.0; }, full);
    double l5 = std::log(5.0);
    CHECK(f.value_inv(4.0) == doctest::Approx(l5 * l5).epsilon(1e-13));
    CHECK(got == doctest::Approx(1.0 / (l5 * l5)).epsilon(1e-9));
    // frozen anchor: || 4(1+r) || on (0,1)
    double anchor = luxemburg_norm(f, [](double r) { return 4.0 * (1.0 + r); }, full);
    CHECK(anchor == doctest::Approx(9.2648319142252205).epsilon(1e-9));
    // modular-norm bridge on randomized profiles
    std::mt19937 rng(20260825);
    std::uniform_real_distribution<double> amp(0.1, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        double a = amp(rng), b = amp(rng);
        auto u = [&](double r) { return a + b * r; };
        if (modular(f, u, full) <= 1.0)
            CHECK(luxemburg_norm(f, u, full) <= 1.0 + 1e-9);
    }
    // u = 0 has norm 0
    CHECK(luxemburg_norm(f, [](double) { return 0.0; }, full) == 0.0);
}

TEST_CASE("amemiya norm: closed-form example, scaling, frozen anchor") {
    power_young sq(2.0);
    interval half{0.0, 0.5};
    // constant 1 on a set of measure 1/2 under t^2: inf_k (1 + k^2/2)/k = sqrt(2)
    double got = orlicz_norm_amemiya(sq, [](double) { return 1.0; }, half);
    CHECK(got == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
    // homogeneity under u -> 3u
    interval full{0.0, 1.0};
    auto u = [](double r) { return 0.4 + r * r; };
    double n1 = orlicz_norm_amemiya(sq, u, full);
    double n3 = orlicz_norm_amemiya(sq, [&](double r) { return 3.0 * u(r); }, full);
    CHECK(n3 == doctest::Approx(3.0 * n1).epsilon(1e-8));
    // frozen anchor on the exp family
    double anchor = orlicz_norm_amemiya(
        env_half(), [](double r) { return 4.0 * (1.0 + r); }, full);
    CHECK(anchor == doctest::Approx(11.183984897604468).epsilon(1e-8));
    // L^infty via the indicator function: norm is the sup; adaptive nodes
    // cannot pin the jump tighter than the outermost node gap, hence 5e-3
    indicator_young ind;
    double sup = orlicz_norm_amemiya(ind, [](double r) { return 1.0 + r; }, full);
    CHECK(sup == doctest::Approx(2.0).epsilon(5e-3));
}

TEST_CASE("characteristic-set norm formula against the amemiya oracle") {
    power_young sq(2.0);
    CHECK(char_norm(0.5, sq) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    // m = 1: norm of the constant 1 on the whole interval
    CHECK(char_norm(1.0, sq) == doctest::Approx(2.0).epsilon(1e-12));
    // frozen anchor: exp family beta = 1, N = 1, tau0 = 1, chord patch, m = 0.3
    exp_beta_family cap(1.0, 1.0, 1.0, exp_patch::linear_cap);
    CHECK(char_norm(0.3, cap) == doctest::Approx(1.5527673028602735).epsilon(1e-10));
    double am = orlicz_norm_amemiya(
        cap, [](double r) { return r < 0.3 ? 1.0 : 0.0; }, interval{0.0, 1.0});
    CHECK(am == doctest::Approx(char_norm(0.3, cap)).epsilon(1e-7));
    // ten random measures under t^2
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> md(0.05, 0.95);
    for (int i = 0; i < 10; ++i) {
        double m = md(rng);
        double a = orlicz_norm_amemiya(
            sq, [&](double r) { return r < m ? 1.0 : 0.0; }, interval{0.0, 1.0});
        CHECK(a == doctest::Approx(char_norm(m, sq)).epsilon(1e-8));
    }
}

TEST_CASE("norm equivalence: lux <= orlicz <= 2 lux on randomized profiles") {
    power_young sq(2.0);
    const exp_beta_family& f = env_half();
    interval full{0.0, 1.0};
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> amp(0.2, 3.0);
    for (int trial = 0; trial < 12; ++trial) {
        double a = amp(rng), b = amp(rng), c = amp(rng);
        auto u = [&](double r) { return a + b * r + c * r * r; };
        for (const young_function* B : {(const young_function*)&sq,
                                        (const young_function*)&f}) {
            double lux = luxemburg_norm(*B, u, full);
            double orl = orlicz_norm_amemiya(*B, u, full);
            CHECK(orl >= lux * (1.0 - 1e-8));
            CHECK(orl <= 2.0 * lux * (1.0 + 1e-8));
        }
    }
}

TEST_CASE("holder inequality: unity case, random steps, equality construction") {
    power_young sq(2.0);
    interval full{0.0, 1.0};
    auto one = [](double) { return 1.0; };
    holder_report rep = holder_check(sq, one, one, full);
    CHECK(rep.lhs == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.slack >= -1e-9);
    CHECK(rep.norm_lux * rep.norm_orl == doctest::Approx(1.0).epsilon(1e-8));
    // randomized step profiles
    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> amp(0.1, 2.5), cut(0.2, 0.8);
    for (int trial = 0; trial < 100; ++trial) {
        double a = amp(rng), b = amp(rng), s = cut(rng);
        double c = amp(rng), d = amp(rng), t = cut(rng);
        auto u = [&](double r) { return r < s ? a : b; };
        auto v = [&](double r) { return r < t ? c : d; };
        holder_report h = holder_check(sq, u, v, full);
        CHECK(h.slack >= -1e-10 * (1.0 + h.norm_lux * h.norm_orl));
    }
    // near-equality: v = b(u / ||u||) for a smooth profile
    auto u = [](double r) { return 1.0 + r; };
    double nu = luxemburg_norm(sq, u, full);
    auto v = [&](double r) { return sq.deriv(u(r) / nu); };
    holder_report h = holder_check(sq, u, v, full);
    CHECK(h.slack >= -1e-10);
    CHECK(h.slack <= 1e-3);
}

TEST_CASE("inverse-derivative expansion: frozen ratios and the beta = 1 degeneracy") {
    const exp_beta_family& f = env_half();
    // frozen: b^{-1}(1e12) and the residual ratios there; the first ratio
    // approaches 1 like 1 + log 2 / loglog t, so at t = 1e12 it is still 1.345
    CHECK(f.deriv_inv(1e12) == doctest::Approx(1010.1656424028418).epsilon(1e-10));
    binv_expansion_report rep = b_inverse_expansion_check(f, {1e12, 1e300});
    CHECK(!rep.second_term_degenerate);
    CHECK(rep.rows[0].ratio1 == doctest::Approx(1.3450220568085937).epsilon(1e-8));
    CHECK(rep.rows[0].ratio2 == doctest::Approx(1.6520404686154907).epsilon(1e-8));
    // the advertised band holds once t is large enough for loglog to grow
    CHECK(rep.rows[1].ratio1 == doctest::Approx(1.1134218863807480).epsilon(1e-8));
    CHECK(rep.rows[1].ratio1 > 0.8);
    CHECK(rep.rows[1].ratio1 < 1.2);
    // beta = 1, N = 1: second term vanishes identically, b^{-1}(t) = log t exactly
    exp_beta_family g(1.0, 1.0, 0.0, exp_patch::convex_envelope);
    binv_expansion_report rd = b_inverse_expansion_check(g, {100.0, 1e8});
    CHECK(rd.second_term_degenerate);
    CHECK(g.deriv_inv(100.0) == doctest::Approx(std::log(100.0)).epsilon(1e-13));
    CHECK(g.deriv_inv(1e8) == doctest::Approx(std::log(1e8)).epsilon(1e-13));
    // round trip at tau = 2 tau0 for a patched family
    exp_beta_family cap(0.5, 1.0, 5.0, exp_patch::linear_cap);
    double tau = 2.0 * cap.tau0();
    CHECK(cap.deriv_inv(cap.deriv(tau)) == doctest::Approx(tau).epsilon(1e-11));
}
