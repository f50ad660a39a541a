#pragma once

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "ou/gauss_core.hpp"
#include "ou/norm_engine.hpp"
#include "ou/orlicz.hpp"
#include "ou/rearrange.hpp"

namespace ou {

// C2 piecewise-quintic truncation built on the kernel 6t^3 - 8t^4 + 3t^5:
//   ramp   0 below 0, kernel on [0,1], identity above 1
//   cap    identity below 1, t - kernel(t-1) on [1,2], constant 1 above 2
// The cap keeps psi >= 1 on [1,2] and |psi'| <= 1 everywhere; both shapes share
// sup |psi''|, attained inside the kernel interval at t = (16 - sqrt 76)/30.
class truncation_psi {
  public:
    enum class shape { ramp, cap };
    explicit truncation_psi(shape k) : kind_(k) {}

    shape kind() const { return kind_; }
    double value(double t) const;
    double deriv(double t) const;
    double deriv2(double t) const;
    // exact kernel-derivative extrema: 945/625 for the ramp slope, 1 for the cap
    double sup_deriv() const;
    double sup_deriv2() const;
    // end points of the quintic piece
    std::pair<double, double> knots() const;

  private:
    shape kind_;
};

// Cumulative solution pair of the one-dimensional equation L f = -f0(s/s0):
//   F(s)      = int_0^s f0(r/s0) dr, f0 extended by zero above 1
//   f1(sigma) = int_{sigma s0}^{s0} F(r)/I(r)^2 dr, via integration by parts
//   h0(s)     = F(s)/I(s), the gradient magnitude of f1 along the line
// The source is supplied in the log argument x = log(1/sigma) so deep
// evaluations never underflow.  Caches hold exact cumulative panel integrals
// on an ell = log(1/s) grid (log-sum-exp for F, direct for the Theta moment);
// point values attach one sub-panel quadrature, so accuracy is set by the
// quadrature tolerance alone, not by interpolation error.
class solution_pair {
  public:
    // source_log(x) = f0(e^{-x}) for x >= 0; extra_breaks are ell values where
    // the source kinks or jumps, inserted as panel boundaries
    solution_pair(std::function<double(double)> source_log, double s0,
                  const gauss_tail& g, const weight_theta& W,
                  double ell_max = 760.0, std::vector<double> extra_breaks = {});

    double s0() const { return s0_; }
    double ell0() const { return ell0_; }
    double ell_max() const { return ell_max_; }
    const gauss_tail& gauss() const { return *g_; }
    const weight_theta& weight() const { return *W_; }

    double source_at(double sigma) const;  // f0(sigma), zero above 1
    double source_log_arg(double x) const; // f0(e^{-x})

    double cumulative(double s) const;     // F(s)
    double log_cumulative_ell(double ell) const;

    double f1(double sigma) const;         // signed head branch above sigma = 1
    double f1_ell(double ell) const;       // f1 at sigma = e^{-ell}/s0, ell >= ell0
    double h0(double s) const;
    double h0_ell(double ell) const;
    // df1/dell = s F(s)/I(s)^2 at s = e^{-ell}
    double df1_dell(double ell) const;

    // Theta extended across s = 1/2 by odd reflection, for the head branch
    double theta_extended(double s) const;

  private:
    std::function<double(double)> src_;
    double s0_, ell0_, ell_max_;
    const gauss_tail* g_;
    const weight_theta* W_;
    bool zero_source_ = false;
    std::vector<double> ells_;       // panel grid, ascending
    std::vector<double> log_f_;      // log F at the grid nodes
    std::vector<double> theta_cum_;  // int_{ell0}^{ell} Theta f0 e^{-u} du at nodes

    double log_panel(double lo, double hi) const;   // log int_lo^hi f0 e^{-u} du
    double theta_panel(double lo, double hi) const; // int_lo^hi Theta f0 e^{-u} du
    double theta_moment(double ell) const;          // cumulative Theta panel value
};

// truncated composition u = scale * psi(f1/scale) together with its exact
// Ornstein-Uhlenbeck image m = -psi'(f1/scale) f0 + psi''(f1/scale) h0^2/scale
class trial_function {
  public:
    trial_function(std::shared_ptr<const solution_pair> pair, truncation_psi psi,
                   double scale = 1.0);

    const solution_pair& pair() const { return *pair_; }
    const truncation_psi& psi() const { return psi_; }
    double scale() const { return scale_; }
    // ell where f1/scale reaches the upper knot (plateau or identity tail)
    double ell_upper() const { return ell_upper_; }

    double u_ell(double ell) const;
    double u_at_s(double s) const;
    double m_ell(double ell) const;
    double m_at_s(double s) const;

    // odd step profiles of u and L u down to s = e^{-ell_deep} per half line
    profile u_profile(double ell_deep = 30.0, int cells = 1600) const;
    profile lu_profile(double ell_deep = 30.0, int cells = 1600) const;

  private:
    std::shared_ptr<const solution_pair> pair_;
    truncation_psi psi_;
    double scale_;
    double ell_upper_;
};

// s1 with f1(s1/s0) = epsilon, bisected in the ell domain
double solve_s1(const solution_pair& pair, double epsilon);
// t1 with f1(Phi(t1)/s0) = epsilon on a pair anchored at s0 = Phi(t0)
double solve_t1(const solution_pair& pair, double epsilon = 1.0);
// separation bound [2 eps' (1/beta + 1) log(1/s0)]^{beta/(1+beta)} on log(s0/s1)
double s1_separation_bound(double beta, double eps_prime, double s0);
// d/dell of (theta f1)^beta, the log-integrand slope of the divergence side
double divergence_slope(const solution_pair& pair, double beta, double theta,
                        double ell);

// slacks of the rearrangement checks every witness must pass
struct check_summary {
    double pointwise_slack = 0;
    double medmv_slack = 0;
    double norm_slack = 0;  // only when a Young function is supplied
    double med = 0, mv = 0;
    double grad_lhs = 0, grad_rhs = 0;  // int |grad u|^2 vs its weight bound
    bool ok = false;
};

// pointwise, median-mean, gradient, and (if norm_b is given) norm-estimate
// checks; grad_lhs is the analytic gradient square of the witness
check_summary run_witness_checks(const weight_theta& W, const profile& u,
                                 const profile& lu, double grad_lhs,
                                 const young_function* norm_b = nullptr,
                                 center_kind mu = center_kind::median);

// odd witness for the supercritical regime lambda (theta/theta_beta)^beta > 1:
// source f0 = (lambda log 1/sigma)^{1/beta}, ramp truncation, u supported on
// |x_1| > t0.  The image satisfies the budget pair exp_modular <= M and
// b_modular <= 1 once t0 is large enough.
struct supercritical_report {
    double beta = 0, theta = 0, lambda = 0, m_budget = 0;
    double t0 = 0, s0 = 0;
    double exp_modular = 0;  // integral of Exp^beta(|L u|) over the whole space
    double b_modular = 0;    // modular under the convex-envelope Young function
    bool feasible = false;
    double slope_target = 0;     // lambda (theta/theta_beta)^beta
    double divergence_margin = 0;
    double probe_lo = 0, probe_hi = 0;
    double slope_lo = 0, slope_hi = 0;  // finite-depth slope estimates
    double grad_sq = 0;
    int doublings = 0;
    std::shared_ptr<const solution_pair> pair;
    profile u_prof, lu_prof;
    check_summary checks;
};

supercritical_report make_supercritical(double beta, double theta, double lambda,
                                        double m_budget, double t0,
                                        const gauss_tail& g, const weight_theta& W);
// doubles t0 from 2 until both budgets hold; gives up once Phi(t0) < 1e-280
supercritical_report supercritical_witness(double beta, double theta, double lambda,
                                           double m_budget, const gauss_tail& g,
                                           const weight_theta& W);

// critical-regime family at theta = theta_beta (beta > 1): source
// f0(2r) = abar^{-1}(Theta(r)) from the tangent-truncated family at tau0,
// plateau tau0' below Theta = a(tau0), s0 = 1/2
struct critical_family {
    double beta = 0, tau0 = 0;
    double tau0_prime = 0;
    double log_a_tau0 = 0;           // log of the derivative a(tau0), N = 1
    double ell_star = 0, s_star = 0; // Theta(s_star) = a(tau0)
    double theta_integral_star = 0;  // int_{s_star}^{1/2} Theta
    double m_tau0 = 0;               // int_0^{s_star} A(a^{-1}(Theta)) ds
    double lambda_tau0 = 0;          // divergence-rate constant, positive when tuned
    double sufficient_n1 = 0;        // 2 (1 + e^{4 sup psi''}) m_tau0 at N = 1
    std::shared_ptr<const solution_pair> pair;
    std::shared_ptr<const exp_beta_family> b_unit;  // tangent truncation, N = 1
    const gauss_tail* g = nullptr;
    const weight_theta* W = nullptr;
};

critical_family make_critical_family(double beta, double tau0, const gauss_tail& g,
                                     const weight_theta& W);

// one member u_k of the critical sequence: cap truncation at scale c = f1(2 Phi(k))
struct critical_report {
    double beta = 0, tau0 = 0, n_coef = 0, k = 0;
    double c_k = 0;
    double t_k = 0;           // f1(2 Phi(t_k)) = 2 c_k
    double tk_residual = 0;
    double b_modular = 0;     // modular of |L u_k| under the N-scaled family
    double deep_term = 0;     // int_0^{Phi(t_k)} A(a^{-1} Theta) ds, bound diagnostic
    double lb_direct = 0;     // Phi(k) exp^beta(theta_beta c_k)
    double lb2 = 0;           // Phi(k) Theta(Phi(k)) e^{2 lambda [log Theta]^{1-1/beta}}
    double regime_margin = 0; // log(s_star/Phi(k)); positive once k > x_star
    profile u_prof, lu_prof;
    check_summary checks;
};

critical_report critical_witness(const critical_family& fam, double n_coef, double k);
// largest N with modular <= 0.99 across the listed k (the modular is linear in N)
double critical_tune_n(const critical_family& fam, const std::vector<double>& ks);

// Young-function side of the positive-constant bound: B = N AA with the linear
// cap at tau0, tuned until nu(tau0) clears -lambda_target - C_J, which pushes
// G(s) below (beta/2) (log 1/s)^{1/beta} - lambda_target near zero
struct positive_report {
    double beta = 0, n_coef = 0, lambda_target = 0;
    double tau0 = 0;        // tuned
    double nu = 0;          // at the measured multiplier
    double lambda_b = 0;    // multiplier of B at the log t probe
    double c_j = 0;         // J(e^t) - (1/2) log t at the probe
    double tune_margin = 0; // -lambda_target - c_j - nu
    int doublings = 0;
    struct g_row {
        double ell = 0, g_value = 0, majorant = 0, margin = 0;
    };
    std::vector<g_row> rows;
    double finite_bound = 0, finite_head = 0, finite_tail = 0;
    bool ok = false;
};

// nu(tau0) = -(beta/2) [log T2]^{1/beta} + tau0 (J(T2) - J(T1)) with
// T1 = (N/2lambda) A(tau0)/tau0, T2 = (N/2lambda) a(tau0), J through Theta
double nu_value(double beta, double n_coef, double tau0, double lambda,
                const weight_theta& W);
double j_offset(const weight_theta& W, double log_t);  // J(e^t) - (1/2) log t

positive_report positive_young_function(double beta, double n_coef,
                                        double lambda_target, const gauss_tail& g,
                                        const weight_theta& W);

// witness with L u = -sgn(x_1): u has profile Lambda, image of sup norm one;
// the growth constant C = lim [Lambda(s) - (1/2) log log 1/s] drives the
// double-exponential divergence at eta = 2 with exponent e^{2C} - 1
struct linfty_report {
    double c_value = 0;       // line integral with closed-form tail
    double exp_2c = 0;
    double c_probe_lo = 0, c_probe_hi = 0;  // finite-depth estimates at ell 20, 40
    double lu_sup = 0;
    double cross_check = 0;   // max |f1(2s) - Lambda(s)| over the probes
    double divergence_exponent = 0;  // e^{2C} - 1
    bool divergent = false;
    profile u_prof, lu_prof;
    check_summary checks;
};

linfty_report linfty_witness(const gauss_tail& g, const weight_theta& W);

}  // namespace ou
