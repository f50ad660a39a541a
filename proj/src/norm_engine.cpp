#include "ou/norm_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "ou/quad.hpp"
#include "ou/roots.hpp"

namespace ou {

namespace {

struct constraint_overflow {};

constexpr double overflow_cut = 1e290;

// int_s^{1/2} B(b^{-1}(xi h)) dr, +inf once the integrand leaves double range
double xi_constraint(const young_function& B, const profile_fn& h, double s,
                     double xi) {
    auto f = [&](double r) {
        double v = B.value_of_deriv_inv(xi * h(r));
        if (!(v < overflow_cut)) throw constraint_overflow{};
        return v;
    };
    try {
        return integrate(f, s, 0.5, 1e-12, 1e-300).value;
    } catch (const constraint_overflow&) {
        return std::numeric_limits<double>::infinity();
    }
}

// bracket the increasing constraint g (g(0+) < 0) around its root starting
// from 1, then bisect; expansions are counted into the iteration total
multiplier_solve solve_increasing(const std::function<double(double)>& g,
                                  double rel_tol, const char* who) {
    double lo = 0.0, hi = 1.0;
    int expand = 0;
    if (g(hi) < 0) {
        do {
            lo = hi;
            hi *= 4.0;
            if (++expand > 600)
                throw std::runtime_error(std::string(who) +
                                         ": constraint stays below 1");
        } while (g(hi) < 0);
    } else {
        while (lo == 0.0 && hi > 1e-290) {
            double mid = hi / 4.0;
            ++expand;
            if (g(mid) < 0)
                lo = mid;
            else
                hi = mid;
        }
    }
    auto r = bisect(g, lo, hi, rel_tol);
    multiplier_solve out;
    out.value = r.x;
    out.residual = r.fx;
    out.iterations = r.iterations + expand;
    out.lo = r.lo;
    out.hi = r.hi;
    return out;
}

// integral of a weight-carrying integrand over tau in (0, t): the stretch up
// to min(t, 1) runs in tau directly, the rest in y = log tau; the family's
// b^{-1} kink levels become split points at tau = level / lambda
template <class FD, class FL>
double split_integral(const FD& direct, const FL& in_log, double log_t,
                      const std::vector<double>& levels, double lam,
                      double rel_tol) {
    double total = 0.0;
    double t_direct = log_t <= 0 ? std::exp(log_t) : 1.0;
    std::vector<double> pts{0.0};
    for (double level : levels) {
        double tau = level / lam;
        if (tau > 0.0 && tau < t_direct) pts.push_back(tau);
    }
    pts.push_back(t_direct);
    std::sort(pts.begin(), pts.end());
    for (size_t i = 0; i + 1 < pts.size(); ++i)
        if (pts[i + 1] > pts[i])
            total += integrate(direct, pts[i], pts[i + 1], rel_tol, 1e-300).value;
    if (log_t > 0) {
        double log_lam = std::log(lam);
        std::vector<double> ys{0.0};
        for (double level : levels) {
            double y = std::log(level) - log_lam;
            if (y > 0.0 && y < log_t) ys.push_back(y);
        }
        ys.push_back(log_t);
        std::sort(ys.begin(), ys.end());
        for (size_t i = 0; i + 1 < ys.size(); ++i)
            if (ys[i + 1] > ys[i])
                total += integrate(in_log, ys[i], ys[i + 1], rel_tol, 1e-300).value;
    }
    return total;
}

double lambda_constraint(const young_function& B, const weight_theta& W,
                         double log_t, double lam,
                         const std::vector<double>& levels) {
    double log_lam = std::log(lam);
    auto direct = [&](double tau) {
        double v = B.value_of_deriv_inv(lam * tau);
        if (!(v < overflow_cut)) throw constraint_overflow{};
        return v * W.iso2_theta_inv(tau);
    };
    auto in_log = [&](double y) {
        double e = B.log_value_of_deriv_inv(log_lam + y) +
                   W.log_iso2_theta_inv(y) + y;
        if (e > 700.0) throw constraint_overflow{};
        return e > -740.0 ? std::exp(e) : 0.0;
    };
    try {
        return split_integral(direct, in_log, log_t, levels, lam, 1e-12);
    } catch (const constraint_overflow&) {
        return std::numeric_limits<double>::infinity();
    }
}

}  // namespace

multiplier_solve solve_xi(const young_function& B, const profile_fn& h, double s,
                          double rel_tol) {
    if (!(s > 0.0 && s < 0.5))
        throw std::invalid_argument("solve_xi: need s in (0, 1/2)");
    auto g = [&](double xi) { return xi_constraint(B, h, s, xi) - 1.0; };
    return solve_increasing(g, rel_tol, "solve_xi");
}

double orlicz_norm_weighted(const young_function& B, const profile_fn& h, double s,
                            const multiplier_solve* pre) {
    multiplier_solve m = pre ? *pre : solve_xi(B, h, s);
    auto f = [&](double r) {
        double hv = h(r);
        return B.deriv_inv(m.value * hv) * hv;
    };
    return integrate(f, s, 0.5, 1e-11, 1e-300).value;
}

multiplier_solve solve_lambda_t(const young_function& B, const weight_theta& W,
                                double log_t, double rel_tol) {
    if (!std::isfinite(log_t))
        throw std::invalid_argument("solve_lambda_t: log t must be finite");
    std::vector<double> levels = B.deriv_inv_breaks();
    auto g = [&](double lam) {
        return lambda_constraint(B, W, log_t, lam, levels) - 1.0;
    };
    return solve_increasing(g, rel_tol, "solve_lambda_t");
}

weighted_norm theta_orlicz_norm(const young_function& B, const weight_theta& W,
                                double ell) {
    if (!(ell >= log_two))
        throw std::invalid_argument("theta_orlicz_norm: need s <= 1/2");
    weighted_norm out;
    // Theta(s) -> 0 at s = 1/2: the norm is over a vanishing interval
    if (ell <= log_two + 1e-12) {
        out.mult.value = std::numeric_limits<double>::infinity();
        return out;
    }
    // at the L-infinity endpoint the conjugate is the identity, the norm is
    // the plain integral of Theta, and no finite multiplier exists
    if (dynamic_cast<const indicator_young*>(&B)) {
        out.norm = W.theta_integral_ell(ell);
        out.mult.value = std::numeric_limits<double>::infinity();
        return out;
    }
    double log_t = W.log_theta_ell(ell);
    if (!(log_t > -690.0)) {
        out.mult.value = std::numeric_limits<double>::infinity();
        return out;
    }
    out.mult = solve_lambda_t(B, W, log_t);
    double lam = out.mult.value;
    double log_lam = std::log(lam);
    auto direct = [&](double tau) {
        return B.deriv_inv(lam * tau) * tau * W.iso2_theta_inv(tau);
    };
    auto in_log = [&](double y) {
        double binv = B.deriv_inv_log(log_lam + y);
        return binv * std::exp(W.log_iso2_theta_inv(y) + 2.0 * y);
    };
    out.norm = split_integral(direct, in_log, log_t, B.deriv_inv_breaks(), lam,
                              1e-11);
    return out;
}

double c_constant(const young_function& B, const weight_theta& W, center_kind mu) {
    if (mu == center_kind::median) return 0.0;
    if (dynamic_cast<const indicator_young*>(&B)) {
        auto f = [&](double r) { return W.lambda(std::max(r, 1e-300)); };
        return integrate(f, 0.0, 0.5, 1e-10, 1e-14).value;
    }
    conjugate_young conj(B);
    auto lam_profile = [&](double r) {
        if (r >= 0.5) return 0.0;
        return W.lambda(std::max(r, 1e-300));
    };
    return orlicz_norm_amemiya(conj, lam_profile, {0.0, 0.5});
}

g_function::g_function(const young_function& B, const weight_theta& W,
                       center_kind mu)
    : B_(&B), W_(&W), c_(c_constant(B, W, mu)) {}

g_point g_function::eval_ell(double ell) const {
    if (!(ell >= log_two))
        throw std::invalid_argument("g_function: need s <= 1/2");
    g_point p;
    p.ell = ell;
    weighted_norm wn = theta_orlicz_norm(*B_, *W_, ell);
    p.norm_part = wn.norm;
    p.mult = wn.mult;
    if (ell <= log_two + 1e-12) {
        p.c_part = c_;
        p.total = c_;
        return p;
    }
    // Theta(s) s B^{-1}(1/s), the product Theta(s) s formed in logs
    double ts = W_->log_theta_ell(ell) - ell;
    p.tail_part = ts > -700.0 ? std::exp(ts) * B_->value_inv_log(ell) : 0.0;
    p.c_part = c_;
    p.total = p.norm_part + p.tail_part + p.c_part;
    return p;
}

}  // namespace ou
