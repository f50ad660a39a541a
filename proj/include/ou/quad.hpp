#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ou {

struct quad_result {
    double value = 0;
    double error = 0;   // accumulated error estimate
    int panels = 0;     // number of accepted panels
    bool converged = true;
};

struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Gauss 7 / Kronrod 15 pair on one panel (QUADPACK dqk15 constants).
template <class Func>
double quad_g7k15(const Func& f, double a, double b, double& err) {
    static const double xk[8] = {
        0.0,
        0.4058451513773971669066064120769615,
        0.7415311855993944398638647732807884,
        0.9491079123427585245261896840478513,
        0.2077849550078984676006894037732449,
        0.5860872354676911302941448382587296,
        0.8648644233597690727897127886409262,
        0.9914553711208126392068546975263285,
    };
    static const double wg[4] = {
        0.4179591836734693877551020408163265,
        0.3818300505051189449503697754889751,
        0.2797053914892766679014677714237796,
        0.1294849661688696932706114326790820,
    };
    static const double wk[8] = {
        0.2094821410847278280129991748917143,
        0.1903505780647854099132564024210137,
        0.1406532597155259187451895905102379,
        0.0630920926299785532907006631892043,
        0.2044329400752988924141619992346491,
        0.1690047266392679028265834265985503,
        0.1047900103222501838398763225415180,
        0.0229353220105292249637320080589696,
    };

    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);

    double fv[15];
    fv[0] = f(c);
    for (int i = 1; i < 8; ++i) {
        double dx = h * xk[i];
        fv[2 * i - 1] = f(c + dx);
        fv[2 * i] = f(c - dx);
    }
    double g7 = wg[0] * fv[0];
    double k15 = wk[0] * fv[0];
    double resabs = wk[0] * std::fabs(fv[0]);
    for (int i = 1; i < 8; ++i) {
        double s = fv[2 * i - 1] + fv[2 * i];
        k15 += wk[i] * s;
        resabs += wk[i] * (std::fabs(fv[2 * i - 1]) + std::fabs(fv[2 * i]));
        if (i < 4) g7 += wg[i] * s;
    }

    // QUADPACK dqk15 error estimate: sharpen |g7-k15| relative to the
    // deviation integral resasc so the scaling works for any magnitude f.
    double mean = 0.5 * k15;
    double resasc = wk[0] * std::fabs(fv[0] - mean);
    for (int i = 1; i < 8; ++i)
        resasc += wk[i] * (std::fabs(fv[2 * i - 1] - mean) + std::fabs(fv[2 * i] - mean));

    double ah = std::fabs(h);
    g7 *= h;
    k15 *= h;
    resabs *= ah;
    resasc *= ah;

    err = std::fabs(g7 - k15);
    if (resasc != 0.0 && err != 0.0) {
        double r = 200.0 * err / resasc;
        err = resasc * std::min(1.0, r * std::sqrt(r));
    }
    double floor_err = 50.0 * 2.22e-16 * resabs;
    if (err < floor_err) err = floor_err;
    return k15;
}

// Globally adaptive bisection: refine the worst panel until the summed error
// estimate meets the tolerance on the whole integral.  A per-panel test would
// loop forever on panels whose value is cancellation noise, so the stopping
// rule must compare against the global scale.
template <class Func>
quad_result integrate(const Func& f, double a, double b,
                      double rel_tol = 1e-10, double abs_tol = 1e-300,
                      int max_panels = 40000) {
    quad_result out;
    if (a == b) return out;

    struct seg {
        double a, b, val, err;
        bool operator<(const seg& o) const { return err < o.err; }
    };
    std::vector<seg> heap;   // max-heap on err: splittable panels
    std::vector<seg> frozen; // panels at the width limit, kept as they are
    double e0;
    double v0 = quad_g7k15(f, a, b, e0);
    heap.push_back({a, b, v0, e0});
    double tv = v0, te = e0;

    int splits = 0;
    while (te > rel_tol * std::fabs(tv) + abs_tol && !heap.empty()) {
        std::pop_heap(heap.begin(), heap.end());
        seg s = heap.back();
        heap.pop_back();
        if (std::fabs(s.b - s.a) <=
            5e-15 * (std::fabs(s.a) + std::fabs(s.b)) + 1e-305) {
            frozen.push_back(s);
            continue;
        }
        if (++splits > max_panels) {
            heap.push_back(s);
            out.converged = false;
            break;
        }
        double m = 0.5 * (s.a + s.b);
        double e1, e2;
        double v1 = quad_g7k15(f, s.a, m, e1);
        double v2 = quad_g7k15(f, m, s.b, e2);
        tv += v1 + v2 - s.val;
        te += e1 + e2 - s.err;
        heap.push_back({s.a, m, v1, e1});
        std::push_heap(heap.begin(), heap.end());
        heap.push_back({m, s.b, v2, e2});
        std::push_heap(heap.begin(), heap.end());
    }
    // te already holds every panel's estimate, frozen ones included
    out.value = tv;
    out.error = te;
    out.panels = static_cast<int>(heap.size() + frozen.size());
    if (te > rel_tol * std::fabs(tv) + abs_tol) out.converged = false;
    return out;
}

inline double integrate_checked(const std::function<double(double)>& f, double a, double b,
                                double rel_tol = 1e-10, const char* what = "integral") {
    quad_result r = integrate(f, a, b, rel_tol);
    if (!r.converged)
        throw numeric_error(std::string(what) + ": quadrature did not converge, error estimate " +
                            std::to_string(r.error));
    return r.value;
}

}  // namespace ou
