#include "ou/gauss_core.hpp"

#include <algorithm>
#include <cmath>

#include "ou/roots.hpp"

namespace ou {

double gauss_tail::tail_series(double t) const {
    // 1 - 1/t^2 + 3/t^4 - 15/t^6 + ...; asymptotic, so stop when terms stop shrinking
    double t2 = t * t;
    double term = 1.0, sum = 1.0, prev = 1.0;
    for (int k = 1; k <= 60; ++k) {
        term *= -(2.0 * k - 1.0) / t2;
        if (std::fabs(term) >= prev) break;
        sum += term;
        prev = std::fabs(term);
        if (prev < 1e-17 * std::fabs(sum)) break;
    }
    return sum;
}

double gauss_tail::phi(double t) const {
    if (t < p_.tail_switch) return 0.5 * std::erfc(t * 0.7071067811865475244);
    return std::exp(log_phi(t));
}

double gauss_tail::log_phi(double t) const {
    if (t < p_.tail_switch) {
        double p = phi(t);
        return std::log(p);
    }
    return -0.5 * t * t - std::log(t) - log_sqrt_2pi + std::log(tail_series(t));
}

double gauss_tail::phi_inv(double s) const {
    if (!(s > 0.0 && s < 1.0))
        throw std::invalid_argument("phi_inv: s must lie in (0,1)");
    if (s == 0.5) return 0.0;
    if (s > 0.5) return -phi_inv_ell(-std::log(1.0 - s));  // 1-s exact for s in [.5,1]
    return phi_inv_ell(-std::log(s));
}

double gauss_tail::phi_inv_ell(double ell) const {
    if (!(ell > 0.0) || !std::isfinite(ell))
        throw std::invalid_argument("phi_inv_ell: need finite ell > 0");

    // seed by inverting ell = t^2/2 + log(t sqrt(2 pi)), valid for moderate ell
    double seed = 0.0;
    if (ell > 2.0) {
        double t = std::sqrt(2.0 * ell);
        for (int i = 0; i < 3; ++i) {
            double arg = 2.0 * (ell - std::log(t) - log_sqrt_2pi);
            if (arg <= 0) { t = std::sqrt(2.0 * ell); break; }
            t = std::sqrt(arg);
        }
        seed = t;
    }

    double lo = -41.0;
    double hi = std::max(10.0, seed + 3.0);
    auto fdf = [&](double t) {
        double lp = log_phi(t);
        double f = -lp - ell;
        double hazard = std::exp(log_density(t) - lp);
        return std::pair<double, double>(f, hazard);
    };
    // widen upward if the seed under-shoots (can happen only for huge ell)
    while (-log_phi(hi) < ell) hi *= 1.5;
    root_result r = newton_bracketed(fdf, seed, lo, hi, 1e-15);
    return r.x;
}

double gauss_tail::iso_profile(double s) const {
    if (s <= 0.0 || s >= 1.0) return 0.0;
    if (s == 0.5) return inv_sqrt_2pi;
    return density(phi_inv(s));
}

iso_report check_iso_inequality(const gauss_tail& g, const std::vector<double>& svals) {
    iso_report rep;
    rep.rows.reserve(svals.size());
    rep.min_raw_margin = std::numeric_limits<double>::infinity();
    rep.min_rel_margin = std::numeric_limits<double>::infinity();
    rep.argmin_s = 0;
    rep.all_nonnegative = true;
    for (double s : svals) {
        if (!(s > 0 && s <= 0.5))
            throw std::invalid_argument("check_iso_inequality: s must lie in (0, 1/2]");
        double ell = -std::log(s);
        double s_over_i2 = std::exp(-ell - 2.0 * g.log_iso_ell(ell));
        double rhs = std::exp(ell) / (2.0 * ell);
        double raw = s_over_i2 - rhs;
        double rel = 2.0 * std::exp(-ell) * ell * s_over_i2 - 1.0;
        rep.rows.push_back({s, ell, raw, rel});
        if (rel < rep.min_rel_margin) {
            rep.min_rel_margin = rel;
            rep.argmin_s = s;
        }
        rep.min_raw_margin = std::min(rep.min_raw_margin, raw);
        if (raw < -g.params().precision_target) rep.all_nonnegative = false;
    }
    return rep;
}

// --- weight_theta ---

double weight_theta::theta_direct(double ell_lo, double ell_hi) const {
    auto J = [&](double x) { return std::exp(-x - 2.0 * g_->log_iso_ell(x)); };
    double rel = 0.1 * g_->params().precision_target;
    quad_result r = integrate(J, ell_lo, ell_hi, rel);
    if (!r.converged)
        throw numeric_error("theta: quadrature did not converge, error estimate " +
                            std::to_string(r.error));
    cache_err_ += r.error;
    return r.value;
}

double weight_theta::theta_direct_log(double ell_lo, double ell_hi) const {
    // factor out the integrand value at ell_hi, where J ~ e^ell/(2 ell) peaks
    double g_hi = -ell_hi - 2.0 * g_->log_iso_ell(ell_hi);
    auto J = [&](double x) { return std::exp(-x - 2.0 * g_->log_iso_ell(x) - g_hi); };
    double rel = 0.1 * g_->params().precision_target;
    quad_result r = integrate(J, ell_lo, ell_hi, rel);
    if (!r.converged)
        throw numeric_error("theta: quadrature did not converge, error estimate " +
                            std::to_string(r.error));
    return g_hi + std::log(r.value);
}

double weight_theta::lambda_direct(double ell_lo, double ell_hi) const {
    // Lambda(s) = int_s^{1/2} r/I(r)^2 dr by parts; integrand ~ 1/(2 ell), never large
    auto K = [&](double x) { return std::exp(-2.0 * x - 2.0 * g_->log_iso_ell(x)); };
    double rel = 0.1 * g_->params().precision_target;
    quad_result r = integrate(K, ell_lo, ell_hi, rel);
    if (!r.converged)
        throw numeric_error("lambda: quadrature did not converge, error estimate " +
                            std::to_string(r.error));
    cache_err_ += r.error;
    return r.value;
}

void weight_theta::ensure_built() const {
    if (log_theta_) return;

    // graded ell grid: spacing proportional to (ell - log 2), refined near s = 1/2
    std::vector<double> ells;
    double ell = log_two + 1e-8;
    ells.push_back(ell);
    while (ell < ell_max_) {
        double gap = ell - log_two;
        double step = (ell < 1.0 ? 0.02 : 0.01) * gap;
        ell = std::min(ell + step, ell_max_);
        ells.push_back(ell);
    }

    size_t n = ells.size();
    std::vector<double> th(n), logth(n), dlogth(n);
    th[0] = theta_direct(log_two, ells[0]);
    for (size_t k = 1; k < n; ++k)
        th[k] = th[k - 1] + theta_direct(ells[k - 1], ells[k]);
    for (size_t k = 0; k < n; ++k) {
        logth[k] = std::log(th[k]);
        dlogth[k] = std::exp(-ells[k] - 2.0 * g_->log_iso_ell(ells[k])) / th[k];
    }
    log_theta_.emplace(ells, logth, dlogth);
    node_ell_ = ells;

    // Jacobian cache: log I(Theta^{-1}(tau))^2 against log tau, nodes shared
    std::vector<double> logtau(n), logj(n), dlogj(n);
    for (size_t k = 0; k < n; ++k) {
        double li = g_->log_iso_ell(ells[k]);
        double t = g_->phi_inv_ell(ells[k]);
        logtau[k] = logth[k];
        logj[k] = 2.0 * li;
        // d log J / d log tau = -2 I(s) t Theta(s)
        dlogj[k] = -2.0 * std::exp(li) * t * th[k];
    }
    log_iso2_.emplace(logtau, logj, dlogj);
    tau_lo_ = th[0];
    tau_hi_ = th[n - 1];

    // cumulative Lambda over the same grid
    std::vector<double> lam(n), dlam(n);
    lam[0] = lambda_direct(log_two, ells[0]);
    for (size_t k = 1; k < n; ++k)
        lam[k] = lam[k - 1] + lambda_direct(ells[k - 1], ells[k]);
    for (size_t k = 0; k < n; ++k)
        dlam[k] = std::exp(-2.0 * ells[k] - 2.0 * g_->log_iso_ell(ells[k]));
    lambda_cum_.emplace(ells, lam, dlam);
}

double weight_theta::theta_ell(double ell) const {
    if (std::fabs(ell - log_two) <= 1e-12) return 0.0;
    if (ell < log_two)
        throw std::invalid_argument("theta: s must lie in (0, 1/2]");
    ensure_built();
    if (ell <= node_ell_.front()) return theta_direct(log_two, ell);
    if (ell <= ell_max_) return std::exp((*log_theta_)(ell));
    double lt = log_theta_ell(ell);
    if (lt > 709.0)
        throw numeric_error("theta: value overflows double range, use log_theta_ell");
    return std::exp(lt);
}

double weight_theta::log_theta_ell(double ell) const {
    if (ell <= log_two)
        throw std::invalid_argument("log_theta: s must lie in (0, 1/2)");
    ensure_built();
    if (ell <= node_ell_.front()) return std::log(theta_direct(log_two, ell));
    if (ell <= ell_max_) return (*log_theta_)(ell);
    // log(Theta(ell_max) + tail) assembled in log space
    double a = (*log_theta_)(ell_max_);
    double b = theta_direct_log(node_ell_.back(), ell);
    double hi = std::max(a, b), lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

double weight_theta::theta(double s) const {
    if (s == 0.5) return 0.0;
    if (!(s > 0 && s < 0.5))
        throw std::invalid_argument("theta: s must lie in (0, 1/2]");
    return theta_ell(-std::log(s));
}

double weight_theta::theta_inv_ell(double t) const {
    if (t < 0) throw std::invalid_argument("theta_inv: t must be >= 0");
    if (t == 0) return log_two;
    ensure_built();
    if (t <= tau_lo_) {
        auto f = [&](double ell) { return theta_direct(log_two, ell) - t; };
        return bisect(f, log_two + 1e-300, node_ell_.front(), 1e-14).x;
    }
    return theta_inv_ell_log(std::log(t));
}

double weight_theta::theta_inv_ell_log(double log_tau) const {
    ensure_built();
    double log_lo = (*log_theta_)(node_ell_.front());
    if (log_tau <= log_lo) return theta_inv_ell(std::exp(log_tau));
    if (log_tau <= (*log_theta_)(ell_max_)) {
        auto f = [&](double ell) { return (*log_theta_)(ell) - log_tau; };
        return bisect(f, node_ell_.front(), ell_max_, 1e-14).x;
    }
    // log Theta(ell) ~ ell - log(2 ell), so bracket around log_tau + log(2 log_tau)
    auto f = [&](double ell) { return log_theta_ell(ell) - log_tau; };
    double hi = log_tau + std::log(2.0 * std::max(log_tau, 2.0)) + 2.0;
    while (f(hi) < 0) hi += std::max(2.0, 0.1 * hi);
    return bisect(f, ell_max_, hi, 1e-14).x;
}

double weight_theta::iso2_theta_inv(double tau) const {
    ensure_built();
    // below the cache the inverse sits within O(1e-8) of s = 1/2 where I^2 = 1/(2 pi)
    if (tau <= tau_lo_) return 1.0 / (2.0 * M_PI);
    if (tau <= tau_hi_) return std::exp((*log_iso2_)(std::log(tau)));
    double ell = theta_inv_ell(tau);
    return std::exp(2.0 * g_->log_iso_ell(ell));
}

double weight_theta::log_iso2_theta_inv(double log_tau) const {
    ensure_built();
    if (log_tau <= std::log(tau_lo_)) return -std::log(2.0 * M_PI);
    if (log_tau <= std::log(tau_hi_)) return (*log_iso2_)(log_tau);
    double ell = theta_inv_ell_log(log_tau);
    return 2.0 * g_->log_iso_ell(ell);
}

double weight_theta::theta_integral_ell(double ell) const {
    if (ell <= log_two) return 0.0;
    // int_s^{1/2} Theta dr = Lambda - s Theta(s); mild cancellation only near s = 1/2
    return std::max(0.0, lambda_ell(ell) - std::exp(log_theta_ell(ell) - ell));
}

double weight_theta::lambda_ell(double ell) const {
    if (std::fabs(ell - log_two) <= 1e-12) return 0.0;
    if (ell < log_two)
        throw std::invalid_argument("lambda: s must lie in (0, 1/2]");
    ensure_built();
    if (ell <= node_ell_.front()) return lambda_direct(log_two, ell);
    if (ell <= ell_max_) return (*lambda_cum_)(ell);
    return (*lambda_cum_)(ell_max_) + lambda_direct(node_ell_.back(), ell);
}

double weight_theta::lambda(double s) const {
    if (s == 0.5) return 0.0;
    if (!(s > 0 && s < 0.5))
        throw std::invalid_argument("lambda: s must lie in (0, 1/2]");
    return lambda_ell(-std::log(s));
}

}  // namespace ou
