#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ou/quad.hpp"

namespace ou {

// Young function: convex, B(0) = 0, with left-continuous derivative b,
// its left-continuous generalized inverse b^{-1}, and the right-continuous
// generalized inverse of B itself.  Conjugation rides on the Young equality
// Btilde(T) = T b^{-1}(T) - B(b^{-1}(T)), which holds for every T >= 0
// because b(t-) <= T <= b(t+) at t = b^{-1}(T).
class young_function {
  public:
    virtual ~young_function() = default;

    virtual double value(double t) const = 0;
    // left-continuous derivative
    virtual double deriv(double t) const = 0;
    // b^{-1}(T) = sup{t : b(t) < T}, left-continuous
    virtual double deriv_inv(double T) const = 0;
    // B^{-1}(y) = sup{t : B(t) <= y}, right-continuous
    virtual double value_inv(double y) const = 0;

    // log-domain entry points so callers can pass arguments beyond double range;
    // the defaults just exponentiate, families with exponential growth override
    virtual double log_value(double t) const { return std::log(value(t)); }
    virtual double deriv_inv_log(double log_T) const { return deriv_inv(std::exp(log_T)); }
    // log of B(b^{-1}(T)) given log T
    virtual double log_value_of_deriv_inv(double log_T) const {
        return std::log(value(deriv_inv_log(log_T)));
    }
    // B(b^{-1}(T)); families with exponential growth override with a closed form
    virtual double value_of_deriv_inv(double T) const {
        return T > 0 ? value(deriv_inv(T)) : 0.0;
    }
    // B^{-1}(y) given log y
    virtual double value_inv_log(double log_y) const { return value_inv(std::exp(log_y)); }
    // levels T where b^{-1} jumps or kinks, handed to solvers as split points
    virtual std::vector<double> deriv_inv_breaks() const { return {}; }

    double conj_value(double T) const {
        if (T <= 0) return 0.0;
        double t = deriv_inv(T);
        return T * t - value(t);
    }
    // right-continuous inverse of the conjugate, needed by the char-norm formula
    double conj_inv(double y) const;
};

// B(t) = coef * t^p with p > 1; closed forms throughout, used mostly as an oracle
class power_young : public young_function {
  public:
    power_young(double p, double coef = 1.0) : p_(p), c_(coef) {
        if (!(p > 1.0) || !(coef > 0.0))
            throw std::invalid_argument("power_young: need p > 1, coef > 0");
    }
    double value(double t) const override { return c_ * std::pow(t, p_); }
    double deriv(double t) const override { return c_ * p_ * std::pow(t, p_ - 1.0); }
    double deriv_inv(double T) const override {
        if (T <= 0) return 0.0;
        return std::pow(T / (c_ * p_), 1.0 / (p_ - 1.0));
    }
    double value_inv(double y) const override {
        if (y <= 0) return 0.0;
        return std::pow(y / c_, 1.0 / p_);
    }

  private:
    double p_, c_;
};

// B(t) = 0 for t <= 1, +inf beyond: the Young function whose Orlicz space is
// L^infty; its conjugate is the identity t
class indicator_young : public young_function {
  public:
    double value(double t) const override {
        return t <= 1.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    double deriv(double t) const override {
        return t <= 1.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    double deriv_inv(double T) const override { return T > 0 ? 1.0 : 0.0; }
    double value_inv(double) const override { return 1.0; }
};

enum class exp_patch { convex_envelope, linear_cap, tangent_truncation };

// B(tau) = N e^{tau^beta} above tau0, patched below so that the whole function
// is convex and vanishes at 0.  Three patches:
//   convex_envelope     line through 0 tangent from (0, N); tau0 is the tangency
//                       point (input tau0 ignored); carries the constant -N above
//                       so the function vanishes at 0 (largest convex minorant of
//                       N e^{tau^beta} shifted by its value at 0)
//   linear_cap          chord tau * B(tau0)/tau0 on [0, tau0]
//   tangent_truncation  0 up to tau0' = tau0 - tau0^{1-beta}/beta, then the
//                       tangent at tau0
// The last two require tau0^beta >= 1/beta, otherwise the patch is not convex.
class exp_beta_family : public young_function {
  public:
    exp_beta_family(double beta, double n_coef, double tau0, exp_patch patch);

    double beta() const { return beta_; }
    double n_coef() const { return n_; }
    double tau0() const { return tau0_; }
    exp_patch patch() const { return patch_; }
    // additive constant above tau0: B = N e^{tau^beta} + shift (0 except envelope)
    double shift() const { return c0_; }
    // start of the tangent piece (tangent_truncation), else 0
    double tau0_prime() const { return tau0p_; }
    // raw envelope value N e^{t*^beta}-secant form without the -N shift
    double raw_envelope(double t) const;

    double value(double t) const override;
    double deriv(double t) const override;
    double deriv_inv(double T) const override;
    double value_inv(double y) const override;

    double log_value(double t) const override;
    double deriv_inv_log(double log_T) const override;
    double log_value_of_deriv_inv(double log_T) const override;
    // B(b^{-1}(T)) = (T/beta) [b^{-1}(T)]^{1-beta} + shift above the patch,
    // evaluated without forming e^{tau^beta}
    double value_of_deriv_inv(double T) const override;
    double value_inv_log(double log_y) const override;
    std::vector<double> deriv_inv_breaks() const override;

  private:
    double beta_, n_;
    double tau0_;        // patch boundary (tangency point for the envelope)
    exp_patch patch_;
    double c0_ = 0.0;    // additive constant above tau0_
    double slope_ = 0.0; // linear patch slope (envelope, linear_cap)
    double tau0p_ = 0.0; // tangent_truncation knee
    double b_at_tau0_ = 0.0;

    double exp_deriv(double t) const;  // N beta t^{beta-1} e^{t^beta}
    double log_exp_deriv(double t) const;
};

// the tangency point t* of the secant from (0, 1) to e^{t^beta}, beta in (0,1)
double envelope_tangency(double beta);

// conjugate as a first-class Young function; derivative pair swaps with the base
class conjugate_young : public young_function {
  public:
    explicit conjugate_young(const young_function& base) : base_(&base) {}
    double value(double t) const override { return base_->conj_value(t); }
    double deriv(double t) const override { return base_->deriv_inv(t); }
    double deriv_inv(double T) const override { return base_->deriv(T); }
    double value_inv(double y) const override { return base_->conj_inv(y); }

  private:
    const young_function* base_;
};

struct interval {
    double a, b;
};

using profile_fn = std::function<double(double)>;

// int_a^b B(|u(r)|) dr with overflow treated as +inf
double modular(const young_function& B, const profile_fn& u, interval iv,
               double rel_tol = 1e-11);

// Luxemburg norm inf{lam : int B(|u|/lam) <= 1}
double luxemburg_norm(const young_function& B, const profile_fn& u, interval iv,
                      double rel_tol = 1e-11);

// Orlicz norm via the Amemiya form inf_k (1/k)(1 + int B(k|u|)); the infimum
// sits where int Btilde(b(k|u|)) crosses 1, so we bisect that monotone
// constraint and evaluate the Amemiya expression there
double orlicz_norm_amemiya(const young_function& B, const profile_fn& u, interval iv,
                           double rel_tol = 1e-10);

// |||1|||_{L^B(E)} = m Btilde^{-1}(1/m) for a set of measure m
double char_norm(double m, const young_function& B);

struct holder_report {
    double lhs;        // int u v
    double norm_lux;   // ||u||_B
    double norm_orl;   // |||v|||_Btilde
    double slack;      // norm_lux * norm_orl - lhs
};

holder_report holder_check(const young_function& B, const profile_fn& u,
                           const profile_fn& v, interval iv);

struct binv_expansion_row {
    double t;
    double ratio1;   // (b^{-1} - E1)/E2
    double ratio2;   // (b^{-1} - E1 - E2)/E3
};

struct binv_expansion_report {
    std::vector<binv_expansion_row> rows;
    bool second_term_degenerate;  // beta = 1 makes E2 vanish identically
};

// residual ratios of b^{-1}(t) against (log t)^{1/beta}
//   + ((1-beta)/beta^2) (log t)^{1/beta-1} loglog t
//   - (log N beta)/beta (log t)^{1/beta-1}
binv_expansion_report b_inverse_expansion_check(const exp_beta_family& B,
                                                const std::vector<double>& points);

}  // namespace ou
