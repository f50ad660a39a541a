#include "ou/orlicz.hpp"

#include <algorithm>
#include <cmath>

#include "ou/roots.hpp"

namespace ou {

namespace {

// sentinel for modular integrands that leave double range
struct modular_overflow {};

constexpr double overflow_cut = 1e290;

}  // namespace

double young_function::conj_inv(double y) const {
    if (y < 0) throw std::invalid_argument("conj_inv: need y >= 0");
    auto ct = [&](double T) { return conj_value(T); };
    if (y == 0) {
        // right-continuous inverse at 0: end of the flat where conj stays 0
        double hi = 1.0;
        while (ct(hi) <= 0) {
            hi *= 2.0;
            if (hi > 1e300) return std::numeric_limits<double>::infinity();
        }
        if (ct(hi / 2.0) > 0) {
            double lo = 0.0;
            return bisect([&](double T) { return ct(T) > 0 ? 1.0 : -1.0; }, lo, hi, 1e-13).x;
        }
        return hi / 2.0;
    }
    double hi = 1.0;
    while (ct(hi) < y) {
        hi *= 2.0;
        if (hi > 1e300)
            throw numeric_error("conj_inv: conjugate never reaches requested level");
    }
    return bisect([&](double T) { return ct(T) - y; }, 0.0, hi, 1e-13).x;
}

// --- exp_beta_family ---

double envelope_tangency(double beta) {
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("envelope_tangency: need beta in (0,1)");
    // in u = t^beta the secant-tangency condition reads e^u (beta u - 1) + 1 = 0;
    // the function dips negative from u = 0 and grows afterwards
    auto q = [&](double u) { return std::exp(u) * (beta * u - 1.0) + 1.0; };
    double lo = (1.0 - beta) / beta;  // stationary point of q, q(lo) < 0
    double hi = lo + 1.0;
    while (q(hi) <= 0) hi *= 2.0;
    double u = bisect(q, lo, hi, 1e-15).x;
    return std::pow(u, 1.0 / beta);
}

exp_beta_family::exp_beta_family(double beta, double n_coef, double tau0, exp_patch patch)
    : beta_(beta), n_(n_coef), tau0_(tau0), patch_(patch) {
    if (!(beta > 0.0) || !(n_coef > 0.0))
        throw std::invalid_argument("exp_beta_family: need beta > 0, N > 0");
    switch (patch_) {
        case exp_patch::convex_envelope:
            c0_ = -n_;
            if (beta_ < 1.0) {
                tau0_ = envelope_tangency(beta_);
                slope_ = n_ * std::expm1(std::pow(tau0_, beta_)) / tau0_;
                b_at_tau0_ = slope_;
            } else {
                tau0_ = 0.0;  // e^{t^beta} is already convex
                slope_ = 0.0;
                b_at_tau0_ = beta_ == 1.0 ? n_ : 0.0;
            }
            break;
        case exp_patch::linear_cap:
            if (!(tau0 > 0.0))
                throw std::invalid_argument("exp_beta_family: linear_cap needs tau0 > 0");
            if (std::pow(tau0, beta_) * beta_ < 1.0)
                throw std::invalid_argument(
                    "exp_beta_family: linear_cap not convex, need tau0^beta >= 1/beta");
            slope_ = n_ * std::exp(std::pow(tau0, beta_)) / tau0;
            b_at_tau0_ = slope_;
            break;
        case exp_patch::tangent_truncation: {
            if (!(tau0 > 0.0))
                throw std::invalid_argument("exp_beta_family: tangent needs tau0 > 0");
            tau0p_ = tau0 - std::pow(tau0, 1.0 - beta_) / beta_;
            if (tau0p_ < 0.0)
                throw std::invalid_argument(
                    "exp_beta_family: tangent truncation infeasible, need tau0^beta >= 1/beta");
            b_at_tau0_ = exp_deriv(tau0);
            break;
        }
    }
}

double exp_beta_family::exp_deriv(double t) const {
    return n_ * beta_ * std::pow(t, beta_ - 1.0) * std::exp(std::pow(t, beta_));
}

double exp_beta_family::log_exp_deriv(double t) const {
    return std::log(n_ * beta_) + (beta_ - 1.0) * std::log(t) + std::pow(t, beta_);
}

double exp_beta_family::raw_envelope(double t) const {
    if (patch_ != exp_patch::convex_envelope)
        throw std::logic_error("raw_envelope: only defined for the envelope patch");
    return value(t) - c0_;
}

double exp_beta_family::value(double t) const {
    if (t < 0) throw std::invalid_argument("young value: need t >= 0");
    if (t > tau0_) return n_ * std::exp(std::pow(t, beta_)) + c0_;
    switch (patch_) {
        case exp_patch::convex_envelope:
        case exp_patch::linear_cap:
            return slope_ * t;
        case exp_patch::tangent_truncation:
            if (t <= tau0p_) return 0.0;
            return n_ * std::exp(std::pow(tau0_, beta_)) + b_at_tau0_ * (t - tau0_);
    }
    return 0.0;
}

double exp_beta_family::log_value(double t) const {
    if (t > tau0_) {
        double e = std::pow(t, beta_);
        return std::log(n_) + e + std::log1p(c0_ / n_ * std::exp(-e));
    }
    return std::log(value(t));
}

double exp_beta_family::deriv(double t) const {
    if (t < 0) throw std::invalid_argument("young deriv: need t >= 0");
    if (t > tau0_) return exp_deriv(t);
    switch (patch_) {
        case exp_patch::convex_envelope:
            if (beta_ >= 1.0) return t == 0.0 ? (beta_ == 1.0 ? n_ : 0.0) : exp_deriv(t);
            return t == 0.0 ? 0.0 : slope_;
        case exp_patch::linear_cap:
            return t == 0.0 ? 0.0 : slope_;
        case exp_patch::tangent_truncation:
            return t <= tau0p_ ? 0.0 : b_at_tau0_;
    }
    return 0.0;
}

double exp_beta_family::deriv_inv(double T) const {
    if (T <= 0) return 0.0;
    return deriv_inv_log(std::log(T));
}

double exp_beta_family::deriv_inv_log(double log_T) const {
    // flats and jumps of b resolved by the left-continuous convention
    double log_join;  // log b at the start of the exponential branch
    double flat_top;  // value returned while T is at or below the branch start
    switch (patch_) {
        case exp_patch::convex_envelope:
            if (beta_ >= 1.0) {
                if (beta_ == 1.0 && log_T <= std::log(n_)) return 0.0;
                log_join = -std::numeric_limits<double>::infinity();
                flat_top = 0.0;
            } else {
                log_join = std::log(slope_);
                flat_top = 0.0;  // b continuous at the tangency, no jump plateau
            }
            break;
        case exp_patch::linear_cap:
            log_join = log_exp_deriv(tau0_);
            if (log_T <= std::log(slope_)) return 0.0;
            flat_top = tau0_;  // inside the jump at tau0
            break;
        case exp_patch::tangent_truncation:
            log_join = log_exp_deriv(tau0_);
            flat_top = tau0p_;  // inside the jump at tau0'
            break;
    }
    if (log_T <= log_join) return flat_top;

    // solve log b(tau) = log T on the exponential branch, Newton in x = log tau
    double u = std::max(log_T - std::log(n_ * beta_), 1e-8);
    if (u > 1e-3)
        for (int i = 0; i < 3; ++i)
            u = std::max(log_T - std::log(n_ * beta_) - (beta_ - 1.0) / beta_ * std::log(u), 1e-8);
    double seed = std::log(u) / beta_;
    double lo = beta_ < 1.0 ? std::log(tau0_) : std::min(seed, -700.0 / std::max(beta_, 1.0));
    double hi = std::max(seed + 5.0, lo + 10.0);
    auto fdf = [&](double x) {
        double tb = std::exp(beta_ * x);
        double f = std::log(n_ * beta_) + (beta_ - 1.0) * x + tb - log_T;
        return std::pair<double, double>(f, (beta_ - 1.0) + beta_ * tb);
    };
    while (fdf(hi).first < 0) hi += 5.0;
    if (beta_ >= 1.0)
        while (fdf(lo).first > 0) lo -= 50.0;
    root_result r = newton_bracketed(fdf, std::clamp(seed, lo, hi), lo, hi, 1e-15);
    return std::exp(r.x);
}

double exp_beta_family::value_inv(double y) const {
    if (y <= 0) return patch_ == exp_patch::tangent_truncation ? tau0p_ : 0.0;
    double at_join = tau0_ > 0.0 ? value(tau0_) : 0.0;
    if (tau0_ > 0.0 && y <= at_join) {
        switch (patch_) {
            case exp_patch::convex_envelope:
            case exp_patch::linear_cap:
                return y / slope_;
            case exp_patch::tangent_truncation:
                return tau0_ + (y - n_ * std::exp(std::pow(tau0_, beta_))) / b_at_tau0_;
        }
    }
    return std::pow(std::log((y - c0_) / n_), 1.0 / beta_);
}

double exp_beta_family::value_of_deriv_inv(double T) const {
    if (T <= 0) return 0.0;
    double tau = deriv_inv(T);
    if (tau > tau0_) return T / beta_ * std::pow(tau, 1.0 - beta_) + c0_;
    return value(tau);
}

double exp_beta_family::value_inv_log(double log_y) const {
    // above the patch B^{-1}(y) = (log((y - c0)/N))^{1/beta}; once y dwarfs
    // both c0 and N the inner log collapses to log y - log N
    if (log_y > 690.0) return std::pow(log_y - std::log(n_), 1.0 / beta_);
    return value_inv(std::exp(log_y));
}

std::vector<double> exp_beta_family::deriv_inv_breaks() const {
    switch (patch_) {
        case exp_patch::convex_envelope:
            if (beta_ < 1.0) return {slope_};
            if (beta_ == 1.0) return {n_};
            return {};
        case exp_patch::linear_cap:
            return {slope_, exp_deriv(tau0_)};
        case exp_patch::tangent_truncation:
            return {exp_deriv(tau0_)};
    }
    return {};
}

double exp_beta_family::log_value_of_deriv_inv(double log_T) const {
    double tau = deriv_inv_log(log_T);
    if (tau > tau0_) {
        // log of (T/beta) tau^{1-beta} + c0 without forming T
        double main = log_T - std::log(beta_) + (1.0 - beta_) * std::log(tau);
        if (c0_ == 0.0) return main;
        return main + std::log1p(c0_ * std::exp(-main));
    }
    return std::log(value(tau));
}

// --- norms ---

double modular(const young_function& B, const profile_fn& u, interval iv, double rel_tol) {
    auto f = [&](double r) {
        double v = B.value(std::fabs(u(r)));
        if (!(v < overflow_cut)) throw modular_overflow{};
        return v;
    };
    try {
        return integrate(f, iv.a, iv.b, rel_tol, 1e-280).value;
    } catch (const modular_overflow&) {
        return std::numeric_limits<double>::infinity();
    }
}

double luxemburg_norm(const young_function& B, const profile_fn& u, interval iv,
                      double rel_tol) {
    auto rho = [&](double lam) {
        return modular(B, [&](double r) { return u(r) / lam; }, iv, 1e-11);
    };
    double lam = 1.0;
    int guard = 0;
    while (!(rho(lam) <= 1.0)) {
        lam *= 2.0;
        if (++guard > 2100)
            throw numeric_error("luxemburg_norm: modular stays above 1, not in the Orlicz class");
    }
    double hi = lam, lo = lam;
    guard = 0;
    while (rho(lo / 2.0) <= 1.0) {
        lo /= 2.0;
        hi = lo;
        if (lo < 1e-280) return 0.0;  // u vanishes a.e.
        if (++guard > 2100) return 0.0;
    }
    lo /= 2.0;
    root_result r = bisect([&](double l) { return rho(l) - 1.0; }, lo, hi, rel_tol);
    // inf{lam : rho(lam) <= 1}: land on the feasible side of the final bracket
    return rho(r.x) <= 1.0 ? r.x : r.hi;
}

double orlicz_norm_amemiya(const young_function& B, const profile_fn& u, interval iv,
                           double rel_tol) {
    // the Amemiya objective (1 + int B(k|u|))/k has derivative
    // (int Btilde(b(k|u|)) - 1)/k^2, so bracket that monotone constraint;
    // Young equality turns the integrand into t b(t) - B(t), no inner inversion
    auto gtil = [&](double k) {
        auto f = [&](double r) {
            double t = k * std::fabs(u(r));
            double T = B.deriv(t);
            double Bv = B.value(t);
            if (!(T < overflow_cut) || !(Bv < overflow_cut)) throw modular_overflow{};
            return t * T - Bv;
        };
        try {
            return integrate(f, iv.a, iv.b, 1e-11, 1e-280).value;
        } catch (const modular_overflow&) {
            return std::numeric_limits<double>::infinity();
        }
    };
    double hi = 1.0;
    int guard = 0;
    while (!(gtil(hi) >= 1.0)) {
        hi *= 2.0;
        if (++guard > 2100)
            throw numeric_error("orlicz_norm: constraint never reaches 1 (u may vanish)");
    }
    double lo = hi;
    guard = 0;
    while (gtil(lo) >= 1.0) {
        lo /= 2.0;
        if (lo < 1e-280)
            throw numeric_error("orlicz_norm: constraint above 1 for every k");
        if (++guard > 2100) break;
    }
    root_result r = bisect(
        [&](double k) { return (gtil(k) >= 1.0) ? 1.0 : -1.0; }, lo, hi, rel_tol);
    // evaluate on the side where the constraint is < 1 so the modular stays
    // finite even when B jumps to +inf (the L^infty indicator case)
    double k = r.lo;
    return (1.0 + modular(B, [&](double x) { return k * u(x); }, iv, 1e-11)) / k;
}

double char_norm(double m, const young_function& B) {
    if (!(m > 0.0 && m <= 1.0))
        throw std::invalid_argument("char_norm: need measure in (0,1]");
    return m * B.conj_inv(1.0 / m);
}

holder_report holder_check(const young_function& B, const profile_fn& u,
                           const profile_fn& v, interval iv) {
    holder_report rep;
    rep.lhs = integrate([&](double r) { return u(r) * v(r); }, iv.a, iv.b, 1e-11).value;
    rep.norm_lux = luxemburg_norm(B, u, iv);
    conjugate_young conj(B);
    rep.norm_orl = orlicz_norm_amemiya(conj, v, iv);
    rep.slack = rep.norm_lux * rep.norm_orl - rep.lhs;
    return rep;
}

binv_expansion_report b_inverse_expansion_check(const exp_beta_family& B,
                                                const std::vector<double>& points) {
    binv_expansion_report rep;
    rep.second_term_degenerate = B.beta() == 1.0;
    double beta = B.beta();
    double lognb = std::log(B.n_coef() * beta);
    for (double t : points) {
        double L = std::log(t);
        double LL = std::log(L);
        double e1 = std::pow(L, 1.0 / beta);
        double e2 = (1.0 - beta) / (beta * beta) * std::pow(L, 1.0 / beta - 1.0) * LL;
        double e3 = -lognb / beta * std::pow(L, 1.0 / beta - 1.0);
        double binv = B.deriv_inv(t);
        double r1 = rep.second_term_degenerate
                        ? std::numeric_limits<double>::quiet_NaN()
                        : (binv - e1) / e2;
        double r2 = e3 == 0.0 ? std::numeric_limits<double>::quiet_NaN()
                              : (binv - e1 - e2) / e3;
        rep.rows.push_back({t, r1, r2});
    }
    return rep;
}

}  // namespace ou
