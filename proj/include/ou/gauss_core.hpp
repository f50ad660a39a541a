#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "ou/interp.hpp"
#include "ou/quad.hpp"

namespace ou {

inline constexpr double inv_sqrt_2pi = 0.3989422804014326779399461;
inline constexpr double sqrt_2pi = 2.5066282746310005024157653;
inline constexpr double log_sqrt_2pi = 0.9189385332046727417803297;
inline constexpr double log_two = 0.6931471805599453094172321;

// Evaluation point for s near 0 carried as ell = log(1/s).
struct log_point {
    double ell;
    static log_point from_s(double s) { return {-std::log(s)}; }
    double s() const { return std::exp(-ell); }
};

struct gauss_params {
    double precision_target = 1e-10;
    double tail_switch = 8.0;
};

// Upper-tail probability of the standard normal and its inverse, with an
// asymptotic-series branch beyond tail_switch so that log-domain arguments
// (ell = log(1/s) large) stay accurate.
class gauss_tail {
  public:
    explicit gauss_tail(gauss_params p = {}) : p_(p) {}
    const gauss_params& params() const { return p_; }

    double density(double t) const { return inv_sqrt_2pi * std::exp(-0.5 * t * t); }
    double log_density(double t) const { return -0.5 * t * t - log_sqrt_2pi; }

    double phi(double t) const;
    double log_phi(double t) const;
    double phi_inv(double s) const;
    // t with phi(t) = e^{-ell}; accepts any ell > 0 (t < 0 when ell < log 2)
    double phi_inv_ell(double ell) const;

    // I(s) = density(phi_inv(s)); symmetric, I(0) = I(1) = 0
    double iso_profile(double s) const;
    double iso_profile_ell(double ell) const { return std::exp(log_iso_ell(ell)); }
    double log_iso_ell(double ell) const {
        double t = phi_inv_ell(ell);
        return log_density(t);
    }

  private:
    gauss_params p_;
    double tail_series(double t) const;
};

struct iso_margin_row {
    double s;
    double ell;
    double raw_margin;  // s/I(s)^2 - 1/(2 s log(1/s))
    double rel_margin;  // 2 s^2 log(1/s)/I(s)^2 - 1
};

struct iso_report {
    std::vector<iso_margin_row> rows;
    double min_raw_margin;
    double min_rel_margin;
    double argmin_s;
    bool all_nonnegative;
};

// Theta(s) = int_s^{1/2} dr/I(r)^2 and Lambda(s) = int_s^{1/2} Theta + s Theta(s),
// evaluated by adaptive panels in the ell = log(1/r) domain with lazily built
// monotone-cubic caches over ell.  Lambda is computed through the by-parts
// identity Lambda(s) = int_s^{1/2} r/I(r)^2 dr, whose integrand stays O(1/ell).
class weight_theta {
  public:
    explicit weight_theta(const gauss_tail& g, double ell_cache_max = 62.0)
        : g_(&g), ell_max_(ell_cache_max) {}

    const gauss_tail& gauss() const { return *g_; }

    double theta(double s) const;
    double theta_ell(double ell) const;
    // log Theta; stays finite far past the ell ~ 712 double-overflow point
    double log_theta_ell(double ell) const;
    double theta_inv(double t) const { return std::exp(-theta_inv_ell(t)); }
    double theta_inv_ell(double t) const;
    // inverse taking log(tau) so callers can pass tau beyond double range
    double theta_inv_ell_log(double log_tau) const;

    double lambda(double s) const;
    double lambda_ell(double ell) const;
    // int_s^{1/2} Theta(r) dr alone (the first addend of Lambda)
    double theta_integral_ell(double ell) const;

    // I(theta_inv(tau))^2, the Jacobian of the change of variables tau = Theta(r)
    double iso2_theta_inv(double tau) const;
    double log_iso2_theta_inv(double log_tau) const;

    // derivative of Theta in the ell domain: e^{-ell}/I(e^{-ell})^2
    double dtheta_dell(double ell) const { return std::exp(log_dtheta_dell(ell)); }
    double log_dtheta_dell(double ell) const {
        return -ell - 2.0 * g_->log_iso_ell(ell);
    }

    double cache_max_ell() const { return ell_max_; }
    // quadrature error estimate accumulated while building the Theta cache
    double cache_error_estimate() const { ensure_built(); return cache_err_; }

  private:
    const gauss_tail* g_;
    double ell_max_;
    mutable std::optional<monotone_cubic> log_theta_;      // log Theta vs ell
    mutable std::optional<monotone_cubic> log_iso2_;       // log I(Theta^{-1})^2 vs log tau
    mutable std::optional<monotone_cubic> lambda_cum_;     // Lambda vs ell
    mutable std::vector<double> node_ell_;
    mutable double cache_err_ = 0;
    mutable double tau_lo_ = 0, tau_hi_ = 0;               // validity range of log_iso2_

    void ensure_built() const;
    double theta_direct(double ell_lo, double ell_hi) const;  // int over [ell_lo, ell_hi]
    // log of the same integral, scaled so the integrand never overflows
    double theta_direct_log(double ell_lo, double ell_hi) const;
    double lambda_direct(double ell_lo, double ell_hi) const;
};

iso_report check_iso_inequality(const gauss_tail& g, const std::vector<double>& svals);

}  // namespace ou
