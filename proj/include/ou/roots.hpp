#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "ou/quad.hpp"  // numeric_error

namespace ou {

struct root_result {
    double x = 0;
    double fx = 0;
    int iterations = 0;
    bool converged = false;
    double lo = 0, hi = 0;  // final bracket
};

// Bisection on a sign-changing bracket. Tolerances: bracket width relative to |x|
// (plus absolute floor) or |f| below ftol.
template <class Func>
root_result bisect(const Func& f, double lo, double hi,
                   double xtol_rel = 1e-14, double xtol_abs = 1e-300,
                   double ftol = 0.0, int max_iter = 200) {
    root_result r;
    double flo = f(lo), fhi = f(hi);
    r.lo = lo;
    r.hi = hi;
    if (flo == 0) { r.x = lo; r.fx = 0; r.converged = true; return r; }
    if (fhi == 0) { r.x = hi; r.fx = 0; r.converged = true; return r; }
    if ((flo > 0) == (fhi > 0))
        throw numeric_error("bisect: endpoints do not bracket a sign change");

    double mid = lo, fmid = flo;
    for (int i = 0; i < max_iter; ++i) {
        mid = 0.5 * (lo + hi);
        fmid = f(mid);
        ++r.iterations;
        if (fmid == 0 || (ftol > 0 && std::fabs(fmid) <= ftol)) break;
        if ((fmid > 0) == (fhi > 0)) {
            hi = mid;
            fhi = fmid;
        } else {
            lo = mid;
            flo = fmid;
        }
        if (hi - lo <= xtol_rel * std::fabs(mid) + xtol_abs) break;
    }
    r.x = mid;
    r.fx = fmid;
    r.lo = lo;
    r.hi = hi;
    r.converged = true;
    return r;
}

// Grow [lo, hi] geometrically until f changes sign. f(lo) is taken as the anchor sign.
template <class Func>
void expand_bracket(const Func& f, double& lo, double& hi,
                    double grow = 2.0, int max_grow = 200) {
    double flo = f(lo);
    if (flo == 0) { hi = lo; return; }
    double fhi = f(hi);
    for (int i = 0; i < max_grow; ++i) {
        if (fhi == 0 || (flo > 0) != (fhi > 0)) return;
        lo = hi;
        flo = fhi;
        hi *= grow;
        fhi = f(hi);
    }
    throw numeric_error("expand_bracket: no sign change found");
}

// Newton iteration safeguarded by a bracket; falls back to bisection steps.
// fdf returns pair (f, f').
template <class FDF>
root_result newton_bracketed(const FDF& fdf, double x0, double lo, double hi,
                             double xtol_rel = 1e-14, int max_iter = 100) {
    root_result r;
    double x = std::fmin(std::fmax(x0, lo), hi);
    for (int i = 0; i < max_iter; ++i) {
        auto [fx, dfx] = fdf(x);
        ++r.iterations;
        if (fx == 0) { r.x = x; r.fx = 0; r.converged = true; r.lo = lo; r.hi = hi; return r; }
        if (fx > 0) hi = std::fmin(hi, x); else lo = std::fmax(lo, x);
        double step = (dfx != 0) ? fx / dfx : 0;
        double xn = x - step;
        if (!(xn > lo && xn < hi) || dfx == 0) xn = 0.5 * (lo + hi);
        if (std::fabs(xn - x) <= xtol_rel * std::fabs(x) + 1e-300) {
            x = xn;
            break;
        }
        x = xn;
    }
    auto [fx, dfx] = fdf(x);
    (void)dfx;
    r.x = x;
    r.fx = fx;
    r.lo = lo;
    r.hi = hi;
    r.converged = true;
    return r;
}

// Golden-section minimization on [a, b] for a unimodal function.
struct golden_result {
    double x = 0;
    double fx = 0;
    int iterations = 0;
};

template <class Func>
golden_result golden_min(const Func& f, double a, double b,
                         double xtol = 1e-10, int max_iter = 200) {
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);  // 0.618...
    golden_result r;
    double x1 = b - phi * (b - a);
    double x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < max_iter && (b - a) > xtol * (std::fabs(a) + std::fabs(b) + 1.0); ++i) {
        ++r.iterations;
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        }
    }
    if (f1 <= f2) {
        r.x = x1;
        r.fx = f1;
    } else {
        r.x = x2;
        r.fx = f2;
    }
    return r;
}

}  // namespace ou
