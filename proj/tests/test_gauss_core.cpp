#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "ou/gauss_core.hpp"
#include "ou/quad.hpp"
#include "ou/roots.hpp"

using namespace ou;

namespace {

const gauss_tail& G() {
    static gauss_tail g;
    return g;
}

const weight_theta& W() {
    static weight_theta w(G());
    return w;
}

// Oracle: upper-tail probability by direct quadrature of the density over
// [t, t+45], no shared code path with gauss_tail::phi's erfc/series branches.
double phi_oracle(double t) {
    auto dens = [](double x) { return inv_sqrt_2pi * std::exp(-0.5 * x * x); };
    return integrate(dens, t, t + 45.0, 1e-13).value;
}

// Oracle: fixed-step composite Simpson for Theta(s) = int_s^{1/2} dr/I(r)^2,
// with a self-contained I built on erfc and plain bisection.
double theta_simpson_oracle(double s, int n) {
    auto phi_plain = [](double t) { return 0.5 * std::erfc(t * 0.7071067811865475244); };
    auto phi_inv_plain = [&](double p) {
        double lo = -10.0, hi = 10.0;
        for (int i = 0; i < 200; ++i) {
            double mid = 0.5 * (lo + hi);
            if (phi_plain(mid) > p) lo = mid; else hi = mid;
        }
        return 0.5 * (lo + hi);
    };
    auto inv_i2 = [&](double r) {
        double t = phi_inv_plain(r);
        double dens = inv_sqrt_2pi * std::exp(-0.5 * t * t);
        return 1.0 / (dens * dens);
    };
    double h = (0.5 - s) / n;
    double acc = inv_i2(s) + inv_i2(0.5);
    for (int i = 1; i < n; ++i) acc += inv_i2(s + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

}  // namespace

TEST_CASE("phi: anchors and reflection") {
    CHECK(G().phi(0.0) == doctest::Approx(0.5).epsilon(1e-14));
    // frozen from phi_oracle(1.0)
    CHECK(G().phi(1.0) == doctest::Approx(0.15865525393145705).epsilon(1e-10));
    CHECK(G().phi(1.0) == doctest::Approx(phi_oracle(1.0)).epsilon(1e-11));
    CHECK(G().phi(-2.3) + G().phi(2.3) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("phi: tail branch joins the direct branch") {
    // compare both branches against the oracle across the switch at t = 8
    for (double t : {6.0, 7.5, 7.999, 8.001, 9.0, 12.0}) {
        double want = phi_oracle(t);
        CHECK(G().phi(t) == doctest::Approx(want).epsilon(1e-11));
    }
    // log form deep in the tail: compare with oracle in log space
    for (double t : {15.0, 20.0, 30.0}) {
        double lw = std::log(phi_oracle(t));
        CHECK(G().log_phi(t) == doctest::Approx(lw).epsilon(1e-11));
    }
}

TEST_CASE("phi_inv: anchors and round trips") {
    CHECK(G().phi_inv(0.5) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(G().phi_inv(G().phi(3.7)) == doctest::Approx(3.7).epsilon(1e-10));
    for (double t = -8.0; t <= 8.0; t += 0.5) {
        // for t < 0 the tail hides in 1 - s, so one rounding of s near 1 costs
        // up to ulp(1)/2 / density(t) in the recovered t
        double tol = 1e-10 * (1.0 + std::fabs(t)) + (t < 0 ? 1.2e-16 / G().density(t) : 0.0);
        CHECK(std::fabs(G().phi_inv(G().phi(t)) - t) <= tol);
    }
    for (double ell : {1.0, 5.0, 20.0, 45.0, 300.0}) {
        double t = G().phi_inv_ell(ell);
        CHECK(-G().log_phi(t) == doctest::Approx(ell).epsilon(1e-12));
    }
    CHECK_THROWS_AS(G().phi_inv(0.0), std::invalid_argument);
    CHECK_THROWS_AS(G().phi_inv(1.0), std::invalid_argument);
}

TEST_CASE("phi_inv: two-term log expansion at ell = 20") {
    // 2 ell = t^2 + 2 log t + 2 log sqrt(2 pi) + 2/t^2 + O(1/t^4)
    double ell = 20.0;
    double t = G().phi_inv_ell(ell);
    double resid = 2.0 * ell - t * t - 2.0 * std::log(t) - 2.0 * log_sqrt_2pi;
    CHECK(resid > 1.6 / (t * t));
    CHECK(resid < 2.2 / (t * t));
}

TEST_CASE("iso_profile: anchors, symmetry, leading behavior") {
    CHECK(G().iso_profile(0.5) == doctest::Approx(inv_sqrt_2pi).epsilon(1e-14));
    CHECK(G().iso_profile(0.2) == doctest::Approx(G().iso_profile(0.8)).epsilon(1e-13));
    CHECK(G().iso_profile(0.0) == 0.0);
    CHECK(G().iso_profile(1.0) == 0.0);

    double ell = 25.0;
    double s = std::exp(-ell);
    double ratio = G().iso_profile_ell(ell) / (s * std::sqrt(2.0 * ell));
    CHECK(ratio > 0.9);
    CHECK(ratio < 1.0);
}

TEST_CASE("iso_profile: I(phi(t)) equals -phi'(t) = density(t)") {
    for (double t = 0.0; t <= 12.0; t += 0.75) {
        double lhs = G().iso_profile(G().phi(t));
        double rhs = G().density(t);
        CHECK(std::fabs(lhs - rhs) <= 1e-10 * rhs);
    }
}

TEST_CASE("phi tail: two-term derivative expansion ratio") {
    // (-phi'(t) - t phi(t)) * t / phi(t) -> 1
    double t = 30.0;
    double p = G().phi(t);
    double resid = (G().density(t) - t * p) * t / p;
    CHECK(std::fabs(resid - 1.0) < 0.1);
}

TEST_CASE("theta: endpoint, Simpson oracle, round trips") {
    CHECK(W().theta(0.5) == 0.0);
    CHECK_THROWS_AS(W().theta(0.7), std::invalid_argument);

    // frozen from theta_simpson_oracle(0.25, 1 << 17)
    double oracle = theta_simpson_oracle(0.25, 1 << 17);
    CHECK(W().theta(0.25) == doctest::Approx(oracle).epsilon(1e-6));

    CHECK(W().theta_inv(0.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(W().theta_inv(W().theta(0.1)) == doctest::Approx(0.1).epsilon(1e-8));
    for (double ell : {1.5, 7.0, 25.0, 50.0}) {
        double t = W().theta_ell(ell);
        CHECK(W().theta_inv_ell(t) == doctest::Approx(ell).epsilon(1e-9));
    }
}

TEST_CASE("theta: second-order residual against exact anchors") {
    // (Theta(s) 2 s ell - 1) 2 ell = log ell + c + o(1) with c near 2.6;
    // anchors frozen from 40-digit quadrature of the defining integral
    struct row { double ell, resid, logth; };
    for (row r : {row{25.0, 6.54458410551691, 21.210983415333696},
                  row{40.0, 6.76090792198632, 35.699102881309340}}) {
        double s = std::exp(-r.ell);
        double resid = (W().theta_ell(r.ell) * 2.0 * s * r.ell - 1.0) * 2.0 * r.ell;
        CHECK(resid == doctest::Approx(r.resid).epsilon(2e-6));
        CHECK(W().log_theta_ell(r.ell) == doctest::Approx(r.logth).epsilon(1e-9));
        CHECK(resid > std::log(r.ell));  // second-order term is positive
    }
}

TEST_CASE("theta: quadrature self-consistency under tolerance halving") {
    gauss_tail tight({.precision_target = 5e-11, .tail_switch = 8.0});
    weight_theta wt(tight);
    double a = W().theta(0.03);
    double b = wt.theta(0.03);
    CHECK(std::fabs(a - b) <= W().cache_error_estimate() + a * 1e-9);
}

TEST_CASE("iso2_theta_inv: matches direct composition") {
    for (double tau : {1e-9, 0.5, 3.0, 1e3, 1e8, 1e12}) {
        double s = W().theta_inv(tau);
        double direct = G().iso_profile(s);
        CHECK(W().iso2_theta_inv(tau) == doctest::Approx(direct * direct).epsilon(1e-7));
    }
}

TEST_CASE("iso2_theta_inv: tail expansion 1/(2 t^2 log t)") {
    double t = 1e8;
    double ratio = W().iso2_theta_inv(t) * 2.0 * t * t * std::log(t);
    CHECK(std::fabs(ratio - 1.0) < 0.2);
}

TEST_CASE("lambda: endpoint, anchors, log-log growth") {
    CHECK(W().lambda(0.5) == 0.0);
    CHECK(W().lambda(0.1) > W().lambda(0.2));

    // anchors frozen from 40-digit quadrature of int_s^{1/2} r/I(r)^2 dr
    CHECK(W().lambda_ell(2.0) == doctest::Approx(0.96675070636982008).epsilon(1e-8));
    CHECK(W().lambda_ell(10.0) == doctest::Approx(2.0297000022197907).epsilon(1e-8));
    CHECK(W().lambda_ell(30.0) == doctest::Approx(2.6399189070286939).epsilon(1e-8));
    CHECK(W().lambda_ell(55.0) == doctest::Approx(2.9597476959971356).epsilon(1e-8));

    // growth hits the (1/2) log ell rate: difference quotient and a stable offset
    double diff = (W().lambda_ell(55.0) - W().lambda_ell(10.0)) / (0.5 * std::log(5.5));
    CHECK(diff > 1.0);
    CHECK(diff < 1.15);
    double c30 = W().lambda_ell(30.0) - 0.5 * std::log(30.0);
    double c55 = W().lambda_ell(55.0) - 0.5 * std::log(55.0);
    CHECK(std::fabs(c55 - c30) < 0.03);
}

TEST_CASE("theta and lambda: strictly decreasing in s on a grid") {
    double prev_th = -1, prev_la = -1;
    for (double ell = 1.0; ell <= 55.0; ell += 1.5) {
        double th = W().theta_ell(ell);
        double la = W().lambda_ell(ell);
        CHECK(th > prev_th);
        CHECK(la > prev_la);
        prev_th = th;
        prev_la = la;
    }
}

TEST_CASE("iso inequality margins") {
    iso_report rep = check_iso_inequality(G(), {0.5});
    CHECK(rep.rows[0].raw_margin ==
          doctest::Approx(M_PI - 1.0 / std::log(2.0)).epsilon(1e-10));

    std::vector<double> grid;
    int n = 200;
    double ell_hi = -std::log(1e-12);
    for (int i = 0; i < n; ++i) {
        double ell = log_two + (ell_hi - log_two) * i / (n - 1.0);
        grid.push_back(std::exp(-ell));
    }
    rep = check_iso_inequality(G(), grid);
    CHECK(rep.all_nonnegative);
    CHECK(rep.min_raw_margin >= 0.0);

    // relative margin shrinks toward 0 as s -> 0
    iso_report two = check_iso_inequality(
        G(), {std::exp(-10.0), std::exp(-30.0)});
    CHECK(two.rows[1].rel_margin < two.rows[0].rel_margin);
    CHECK(two.rows[1].rel_margin > 0.0);
}

TEST_CASE("theta integral: cross-check by-parts route against direct quadrature") {
    // int_s^{1/2} Theta(r) dr by a one-off adaptive pass in the r domain
    double s = 0.02;
    auto f = [&](double r) { return W().theta(r); };
    double direct = integrate(f, s, 0.5, 1e-10).value;
    CHECK(W().theta_integral_ell(-std::log(s)) ==
          doctest::Approx(direct).epsilon(1e-7));
    // frozen from 40-digit quadrature at ell = 10
    CHECK(W().theta_integral_ell(10.0) ==
          doctest::Approx(1.9626982920745823).epsilon(1e-8));
}

TEST_CASE("theta log form: round trips far beyond double overflow") {
    double ell = 800.0;
    double lt = W().log_theta_ell(ell);
    // Theta(ell) ~ e^ell/(2 ell): log form must sit between the crude bounds
    CHECK(lt > ell - std::log(2.0 * ell) - 1.0);
    CHECK(lt < ell);
    CHECK(W().theta_inv_ell_log(lt) == doctest::Approx(ell).epsilon(1e-9));
    CHECK(W().log_iso2_theta_inv(lt) ==
          doctest::Approx(2.0 * G().log_iso_ell(ell)).epsilon(1e-9));
    CHECK_THROWS_AS(W().theta_ell(800.0), numeric_error);
}
