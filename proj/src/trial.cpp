#include "ou/trial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ou/quad.hpp"
#include "ou/roots.hpp"

namespace ou {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();
constexpr double pos_inf = std::numeric_limits<double>::infinity();

// quintic kernel 6t^3 - 8t^4 + 3t^5 with derivatives, Horner form
double kernel(double t) { return ((3.0 * t - 8.0) * t + 6.0) * t * t * t; }
double kernel_d1(double t) { return ((15.0 * t - 32.0) * t + 18.0) * t * t; }
double kernel_d2(double t) { return ((60.0 * t - 96.0) * t + 36.0) * t; }

double log_add(double a, double b) {
    if (a == neg_inf) return b;
    if (b == neg_inf) return a;
    double hi = std::max(a, b);
    return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

// log Theta at any depth: the weight cache below ell = 60, the exact identity
// Theta(Phi(t)) = sqrt(2 pi) e^{t^2/2} S(t)/t with S = 1 + 1/t^2 + 3/t^4 + ...
// above it (the cumulative cache overflows near ell = 710, the series does not)
double log_theta_any(const weight_theta& W, const gauss_tail& g, double ell) {
    if (ell <= 60.0) return W.log_theta_ell(ell);
    double t = g.phi_inv_ell(ell);
    double t2 = t * t, term = 1.0, s = 1.0;
    for (int k = 1; k <= 60; ++k) {
        term *= (2.0 * k - 1.0) / t2;
        s += term;
        if (term < 1e-17) break;
    }
    return log_sqrt_2pi + 0.5 * t2 - std::log(t) + std::log(s);
}

}  // namespace

// --- truncation_psi ---

double truncation_psi::value(double t) const {
    if (kind_ == shape::ramp) {
        if (t <= 0.0) return 0.0;
        if (t >= 1.0) return t;
        return kernel(t);
    }
    if (t <= 1.0) return t;
    if (t >= 2.0) return 1.0;
    return t - kernel(t - 1.0);
}

double truncation_psi::deriv(double t) const {
    if (kind_ == shape::ramp) {
        if (t <= 0.0) return 0.0;
        if (t >= 1.0) return 1.0;
        return kernel_d1(t);
    }
    if (t <= 1.0) return 1.0;
    if (t >= 2.0) return 0.0;
    return 1.0 - kernel_d1(t - 1.0);
}

double truncation_psi::deriv2(double t) const {
    if (kind_ == shape::ramp) {
        if (t <= 0.0 || t >= 1.0) return 0.0;
        return kernel_d2(t);
    }
    if (t <= 1.0 || t >= 2.0) return 0.0;
    return -kernel_d2(t - 1.0);
}

double truncation_psi::sup_deriv() const {
    // kernel' peaks at t = 3/5 with value 945/625; the cap slope never exceeds 1
    return kind_ == shape::ramp ? 945.0 / 625.0 : 1.0;
}

double truncation_psi::sup_deriv2() const {
    // stationary point of kernel'' inside (0,1), shared by both shapes
    return kernel_d2((16.0 - std::sqrt(76.0)) / 30.0);
}

std::pair<double, double> truncation_psi::knots() const {
    return kind_ == shape::ramp ? std::pair<double, double>{0.0, 1.0}
                                : std::pair<double, double>{1.0, 2.0};
}

// --- solution_pair ---

solution_pair::solution_pair(std::function<double(double)> source_log, double s0,
                             const gauss_tail& g, const weight_theta& W,
                             double ell_max, std::vector<double> extra_breaks)
    : src_(std::move(source_log)), s0_(s0), ell0_(-std::log(s0)), ell_max_(ell_max),
      g_(&g), W_(&W) {
    if (!(s0 > 0.0) || s0 > 0.5)
        throw std::invalid_argument("solution_pair: s0 must lie in (0, 1/2]");
    if (!(ell_max_ > ell0_ + 1.0))
        throw std::invalid_argument("solution_pair: ell_max too close to ell0");
    if (!src_) throw std::invalid_argument("solution_pair: empty source");

    std::vector<double> grid;
    for (double v = ell0_; v < ell_max_; v += 0.5) grid.push_back(v);
    grid.push_back(ell_max_);
    for (double b : extra_breaks)
        if (b > ell0_ && b < ell_max_) grid.push_back(b);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end(),
                           [](double a, double b) { return b - a < 1e-9; }),
               grid.end());
    ells_ = std::move(grid);

    // log F cumulated from the deep end (log-sum-exp keeps denormal depths exact);
    // the seed panel covers 40 extra e-folds, a relative tail error below e^{-40}
    const int n = static_cast<int>(ells_.size());
    log_f_.assign(n, neg_inf);
    theta_cum_.assign(n, 0.0);
    log_f_[n - 1] = log_panel(ells_[n - 1], ells_[n - 1] + 40.0);
    for (int i = n - 2; i >= 0; --i)
        log_f_[i] = log_add(log_f_[i + 1], log_panel(ells_[i], ells_[i + 1]));
    for (int i = 1; i < n; ++i)
        theta_cum_[i] = theta_cum_[i - 1] + theta_panel(ells_[i - 1], ells_[i]);
    zero_source_ = !(log_f_[0] > neg_inf);
}

double solution_pair::log_panel(double lo, double hi) const {
    // int_lo^hi f0 e^{-u} du, scaled by e^{lo} so the quadrature stays O(1)
    double len = hi - lo;
    auto f = [&](double v) {
        return std::max(0.0, src_(lo + v - ell0_)) * std::exp(-v);
    };
    quad_result r = integrate(f, 0.0, len, 1e-12);
    if (!r.converged) throw numeric_error("solution_pair: source panel did not converge");
    if (!(r.value > 0.0)) return neg_inf;
    return -lo + std::log(r.value);
}

double solution_pair::theta_panel(double lo, double hi) const {
    // Theta e^{-u} = e^{log Theta - u} stays bounded at any depth
    auto f = [&](double u) {
        double s = std::max(0.0, src_(u - ell0_));
        if (s == 0.0) return 0.0;
        return std::exp(log_theta_any(*W_, *g_, u) - u) * s;
    };
    return integrate_checked(f, lo, hi, 1e-11);
}

double solution_pair::theta_moment(double ell) const {
    if (ell <= ells_.front()) return 0.0;
    if (ell >= ells_.back()) {
        double extra = ell > ells_.back() ? theta_panel(ells_.back(), ell) : 0.0;
        return theta_cum_.back() + extra;
    }
    size_t i = std::upper_bound(ells_.begin(), ells_.end(), ell) - ells_.begin() - 1;
    return theta_cum_[i] + theta_panel(ells_[i], ell);
}

double solution_pair::log_cumulative_ell(double ell) const {
    if (zero_source_) return neg_inf;
    if (ell <= ells_.front()) return log_f_.front();
    if (ell >= ells_.back()) return log_panel(ell, ell + 40.0);
    size_t i = std::upper_bound(ells_.begin(), ells_.end(), ell) - ells_.begin() - 1;
    return log_add(log_f_[i + 1], log_panel(ell, ells_[i + 1]));
}

double solution_pair::cumulative(double s) const {
    if (!(s > 0.0)) throw std::invalid_argument("cumulative: s must be positive");
    return std::exp(log_cumulative_ell(-std::log(s)));
}

double solution_pair::source_at(double sigma) const {
    if (!(sigma > 0.0)) throw std::invalid_argument("source_at: sigma must be positive");
    if (sigma > 1.0) return 0.0;
    return std::max(0.0, src_(-std::log(sigma)));
}

double solution_pair::source_log_arg(double x) const {
    if (x < 0.0) return 0.0;
    return std::max(0.0, src_(x));
}

double solution_pair::theta_extended(double s) const {
    if (!(s > 0.0 && s < 1.0))
        throw std::invalid_argument("theta_extended: s must lie in (0,1)");
    return s <= 0.5 ? W_->theta(s) : -W_->theta(1.0 - s);
}

double solution_pair::f1_ell(double ell) const {
    if (ell < ell0_ - 1e-12)
        throw std::invalid_argument("f1_ell: ell below the anchor ell0");
    if (zero_source_) return 0.0;
    ell = std::max(ell, ell0_);
    // by parts: Theta(s) F(s) - Theta(s0) F(s0) + int_{s}^{s0} Theta f0 d rho,
    // each product formed in logs; Theta vanishes at s = 1/2
    double term = 0.0;
    if (ell > log_two + 1e-7)
        term = std::exp(log_theta_any(*W_, *g_, ell) + log_cumulative_ell(ell));
    double base = 0.0;
    if (ell0_ > log_two + 1e-7)
        base = std::exp(log_theta_any(*W_, *g_, ell0_) + log_f_.front());
    return term - base + theta_moment(ell);
}

double solution_pair::f1(double sigma) const {
    if (!(sigma > 0.0)) throw std::invalid_argument("f1: sigma must be positive");
    if (sigma <= 1.0) return f1_ell(ell0_ - std::log(sigma));
    if (zero_source_) return 0.0;
    // head branch: the source vanishes, so f1 = F(s0) (Theta_ext(sigma s0) - Theta_ext(s0))
    return std::exp(log_f_.front()) *
           (theta_extended(sigma * s0_) - theta_extended(s0_));
}

double solution_pair::h0_ell(double ell) const {
    return std::exp(log_cumulative_ell(ell) - g_->log_iso_ell(ell));
}

double solution_pair::h0(double s) const {
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("h0: s must lie in (0,1)");
    double ell = -std::log(s);
    if (ell >= log_two) return h0_ell(ell);
    return std::exp(log_f_.front()) / g_->iso_profile(s);
}

double solution_pair::df1_dell(double ell) const {
    return std::exp(-ell + log_cumulative_ell(ell) - 2.0 * g_->log_iso_ell(ell));
}

// --- trial_function ---

trial_function::trial_function(std::shared_ptr<const solution_pair> pair,
                               truncation_psi psi, double scale)
    : pair_(std::move(pair)), psi_(psi), scale_(scale) {
    if (!pair_) throw std::invalid_argument("trial_function: null solution pair");
    if (!(scale_ > 0.0))
        throw std::invalid_argument("trial_function: scale must be positive");
    double target = scale_ * psi_.knots().second;
    double lo = pair_->ell0(), hi = pair_->ell_max();
    if (pair_->f1_ell(hi) < target) {
        ell_upper_ = pos_inf;
    } else {
        ell_upper_ = bisect([&](double e) { return pair_->f1_ell(e) - target; },
                            lo, hi).x;
    }
}

double trial_function::u_ell(double ell) const {
    if (ell >= ell_upper_) {
        if (psi_.kind() == truncation_psi::shape::cap) return scale_;
        return pair_->f1_ell(ell);  // identity branch of the ramp
    }
    return scale_ * psi_.value(pair_->f1_ell(ell) / scale_);
}

double trial_function::u_at_s(double s) const {
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("u_at_s: s must lie in (0,1)");
    double ell = -std::log(s);
    if (ell >= pair_->ell0()) return u_ell(ell);
    return scale_ * psi_.value(pair_->f1(s / pair_->s0()) / scale_);
}

double trial_function::m_ell(double ell) const {
    if (ell >= ell_upper_) {
        if (psi_.kind() == truncation_psi::shape::cap) return 0.0;
        return -pair_->source_log_arg(ell - pair_->ell0());
    }
    double t = pair_->f1_ell(ell) / scale_;
    double h = pair_->h0_ell(ell);
    return -psi_.deriv(t) * pair_->source_log_arg(ell - pair_->ell0()) +
           psi_.deriv2(t) * h * h / scale_;
}

double trial_function::m_at_s(double s) const {
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("m_at_s: s must lie in (0,1)");
    double ell = -std::log(s);
    if (ell >= pair_->ell0()) return m_ell(ell);
    double sigma = s / pair_->s0();
    double t = pair_->f1(sigma) / scale_;
    double h = pair_->h0(s);
    return -psi_.deriv(t) * pair_->source_at(sigma) + psi_.deriv2(t) * h * h / scale_;
}

namespace {

profile odd_step_profile(const std::function<double(double)>& value_at_ell,
                         double ell_deep, int cells) {
    if (cells < 2) throw std::invalid_argument("odd_step_profile: too few cells");
    if (!(ell_deep > log_two + 0.1))
        throw std::invalid_argument("odd_step_profile: ell_deep too shallow");
    double h = (ell_deep - log_two) / cells;
    std::vector<double> bnd(cells + 1);
    bnd[0] = 0.5;
    for (int j = 1; j <= cells; ++j) bnd[j] = std::exp(-(log_two + j * h));
    std::vector<step> half(cells + 1);
    for (int j = 0; j < cells; ++j)
        half[j] = {value_at_ell(log_two + (j + 0.5) * h), bnd[j] - bnd[j + 1]};
    // deepest cell carries the residual mass e^{-ell_deep} at one extra half step
    half[cells] = {value_at_ell(ell_deep + 0.5 * h), bnd[cells]};
    std::vector<step> full;
    full.reserve(2 * half.size());
    for (auto it = half.rbegin(); it != half.rend(); ++it) full.push_back(*it);
    for (const step& st : half) full.push_back({-st.value, st.measure});
    return profile::from_steps(std::move(full));
}

// |Lu|* pieces sorted by size with cumulative measure and cumulative integral,
// making int_0^s |Lu|* an exact piecewise-linear function of s
struct abs_cumulative {
    std::vector<double> bnd, cum, val;

    explicit abs_cumulative(const std::vector<step>& pieces) {
        std::vector<step> a(pieces);
        for (auto& p : a) p.value = std::fabs(p.value);
        std::stable_sort(a.begin(), a.end(),
                         [](const step& x, const step& y) { return x.value > y.value; });
        double b = 0.0, c = 0.0;
        bnd.reserve(a.size());
        cum.reserve(a.size());
        val.reserve(a.size());
        for (const step& p : a) {
            b += p.measure;
            c += p.value * p.measure;
            bnd.push_back(b);
            cum.push_back(c);
            val.push_back(p.value);
        }
    }

    double integral_to(double s) const {
        size_t i = std::lower_bound(bnd.begin(), bnd.end(), s) - bnd.begin();
        if (i >= bnd.size()) return cum.back();
        double b0 = i == 0 ? 0.0 : bnd[i - 1];
        double c0 = i == 0 ? 0.0 : cum[i - 1];
        return c0 + val[i] * (s - b0);
    }
};

// Luxemburg norm of a step profile by exact modular sums
double step_luxemburg(const young_function& B, const std::vector<step>& pieces) {
    double vmax = 0.0;
    for (const step& p : pieces) vmax = std::max(vmax, std::fabs(p.value));
    if (vmax == 0.0) return 0.0;
    auto rho = [&](double lam) {
        double acc = 0.0;
        for (const step& p : pieces) {
            double v = B.value(std::fabs(p.value) / lam);
            if (!(v < 1e290)) return pos_inf;
            acc += v * p.measure;
        }
        return acc;
    };
    double hi = vmax;
    int guard = 0;
    while (!(rho(hi) <= 1.0)) {
        hi *= 2.0;
        if (++guard > 2100)
            throw numeric_error("step_luxemburg: modular stays above 1");
    }
    double lo = hi;
    guard = 0;
    while (rho(lo / 2.0) <= 1.0) {
        lo /= 2.0;
        hi = lo;
        if (lo < 1e-280) return 0.0;
        if (++guard > 2100) return 0.0;
    }
    lo /= 2.0;
    root_result r = bisect([&](double l) { return rho(l) <= 1.0 ? 1.0 : -1.0; },
                           hi, lo, 1e-13);
    return rho(r.x) <= 1.0 ? r.x : std::max(r.lo, r.hi);
}

}  // namespace

profile trial_function::u_profile(double ell_deep, int cells) const {
    return odd_step_profile([&](double e) { return u_at_s(std::exp(-e)); },
                            ell_deep, cells);
}

profile trial_function::lu_profile(double ell_deep, int cells) const {
    return odd_step_profile([&](double e) { return m_at_s(std::exp(-e)); },
                            ell_deep, cells);
}

// --- level solvers ---

double solve_s1(const solution_pair& pair, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("solve_s1: epsilon must be positive");
    double lo = pair.ell0(), hi = pair.ell_max();
    if (pair.f1_ell(hi) < epsilon)
        throw numeric_error("solve_s1: level not reached within the cached depth");
    double ell = bisect([&](double e) { return pair.f1_ell(e) - epsilon; }, lo, hi).x;
    return std::exp(-ell);
}

double solve_t1(const solution_pair& pair, double epsilon) {
    return pair.gauss().phi_inv_ell(-std::log(solve_s1(pair, epsilon)));
}

double s1_separation_bound(double beta, double eps_prime, double s0) {
    if (!(beta > 0.0) || !(eps_prime > 0.0) || !(s0 > 0.0 && s0 < 1.0))
        throw std::invalid_argument("s1_separation_bound: bad arguments");
    double base = 2.0 * eps_prime * (1.0 / beta + 1.0) * std::log(1.0 / s0);
    return std::pow(base, beta / (1.0 + beta));
}

double divergence_slope(const solution_pair& pair, double beta, double theta,
                        double ell) {
    double f1v = pair.f1_ell(ell);
    if (!(f1v > 0.0)) return 0.0;
    return beta * std::pow(theta * f1v, beta - 1.0) * theta * pair.df1_dell(ell);
}

// --- witness checks ---

check_summary run_witness_checks(const weight_theta& W, const profile& u,
                                 const profile& lu, double grad_lhs,
                                 const young_function* norm_b, center_kind mu) {
    check_summary cs;
    cs.grad_lhs = grad_lhs;
    bound_report pw = pointwise_bound_check(W, u, lu, log_grid(1e-10, 0.49, 40));
    cs.pointwise_slack = pw.slack;
    bound_report mm = med_mv_check(W, u, lu);
    cs.medmv_slack = mm.slack;
    median_mean center = median_and_mean(u);
    cs.med = center.median;
    cs.mv = center.mean;

    // 2 int_0^{1/2} ( int_0^s |Lu|^* / I(s) )^2 ds on a graded trapezoid grid
    {
        const gauss_tail g;
        const int n = 1400;
        const double hi = 34.0;
        double prev_s = 0.0, prev_val = 0.0, cum = 0.0, acc = 0.0;
        for (int i = 0; i < n; ++i) {
            double ell = hi - (hi - log_two) * i / (n - 1.0);
            double s = std::exp(-ell);
            cum += integrate_checked([&](double r) { return lu.abs_star(r); },
                                     prev_s, s, 1e-8);
            double ratio = cum / g.iso_profile(s);
            double val = ratio * ratio;
            if (i > 0) acc += 0.5 * (val + prev_val) * (s - prev_s);
            prev_s = s;
            prev_val = val;
        }
        cs.grad_rhs = 2.0 * acc;
    }

    bool norm_ok = true;
    if (norm_b) {
        bound_report ne = norm_estimate_check(*norm_b, W, u, lu, mu,
                                              log_grid(1e-8, 0.4, 8));
        cs.norm_slack = ne.slack;
        norm_ok = ne.verdict;
    }
    cs.ok = pw.verdict && mm.verdict && norm_ok &&
            grad_lhs <= cs.grad_rhs + 1e-8;
    return cs;
}

// --- supercritical witness ---

supercritical_report make_supercritical(double beta, double theta, double lambda,
                                        double m_budget, double t0,
                                        const gauss_tail& g, const weight_theta& W) {
    if (!(beta > 0.0) || !(theta > 0.0))
        throw std::invalid_argument("make_supercritical: need positive beta, theta");
    if (!(lambda > 0.0 && lambda < 1.0))
        throw std::invalid_argument("make_supercritical: need lambda in (0,1)");
    if (!(m_budget > 1.0))
        throw std::invalid_argument("make_supercritical: modular budget must exceed 1");
    if (!(t0 > 0.0)) throw std::invalid_argument("make_supercritical: need t0 > 0");

    supercritical_report rep;
    rep.beta = beta;
    rep.theta = theta;
    rep.lambda = lambda;
    rep.m_budget = m_budget;
    rep.t0 = t0;
    rep.s0 = g.phi(t0);
    double ell0 = -std::log(rep.s0);
    double ell_max = ell0 + 260.0;
    if (W.cache_max_ell() < ell_max)
        throw numeric_error("make_supercritical: weight cache shallower than ell0 + 260");

    double q = 1.0 / beta;
    auto src = [lambda, q](double x) {
        return x <= 0.0 ? 0.0 : std::pow(lambda * x, q);
    };
    rep.pair = std::make_shared<solution_pair>(src, rep.s0, g, W, ell_max);
    trial_function fn(rep.pair, truncation_psi(truncation_psi::shape::ramp), 1.0);
    double eu = fn.ell_upper();

    // modular under the convex envelope of Exp^beta; the integrand decays like
    // e^{(lambda - 1) ell}, so the cut keeps the dropped tail below e^{-52}
    exp_beta_family env(beta, 1.0, 1.0, exp_patch::convex_envelope);
    double cut = std::min(ell_max, std::max(ell0 + 40.0,
                                            (52.0 - lambda * ell0) / (1.0 - lambda)));
    std::vector<double> pts{ell0};
    for (double c : {eu, eu + 20.0, 100.0})
        if (c > ell0 && c < cut) pts.push_back(c);
    pts.push_back(cut);
    std::sort(pts.begin(), pts.end());
    double b = 0.0;
    for (size_t i = 0; i + 1 < pts.size(); ++i)
        b += integrate_checked([&](double u) {
            double e = env.log_value(std::fabs(fn.m_ell(u))) - u;
            return e < -745.0 ? 0.0 : std::exp(e);
        }, pts[i], pts[i + 1], 1e-10);
    rep.b_modular = 2.0 * b;
    rep.exp_modular = 1.0 + rep.b_modular;
    rep.feasible = rep.exp_modular <= m_budget && rep.b_modular <= 1.0;

    rep.slope_target = lambda * std::pow(theta * beta / 2.0, beta);
    rep.divergence_margin = rep.slope_target - 1.0;
    rep.probe_lo = std::max(20.0, ell0 + 8.0);
    rep.probe_hi = rep.probe_lo + 20.0;
    rep.slope_lo = divergence_slope(*rep.pair, beta, theta, rep.probe_lo);
    rep.slope_hi = divergence_slope(*rep.pair, beta, theta, rep.probe_hi);

    double gcut = ell0 + 90.0;
    std::vector<double> gpts{ell0};
    for (double c : {eu, eu + 10.0}) if (c > ell0 && c < gcut) gpts.push_back(c);
    gpts.push_back(gcut);
    std::sort(gpts.begin(), gpts.end());
    double grad = 0.0;
    for (size_t i = 0; i + 1 < gpts.size(); ++i)
        grad += integrate_checked([&](double u) {
            double d = fn.psi().deriv(rep.pair->f1_ell(u));
            if (d == 0.0) return 0.0;
            double h = rep.pair->h0_ell(u);
            return d * d * h * h * std::exp(-u);
        }, gpts[i], gpts[i + 1], 1e-10);
    rep.grad_sq = 2.0 * grad;

    rep.u_prof = fn.u_profile();
    rep.lu_prof = fn.lu_profile();
    rep.checks = run_witness_checks(W, rep.u_prof, rep.lu_prof, rep.grad_sq, &env,
                                    center_kind::median);
    return rep;
}

supercritical_report supercritical_witness(double beta, double theta, double lambda,
                                           double m_budget, const gauss_tail& g,
                                           const weight_theta& W) {
    int doublings = 0;
    for (double t0 = 2.0;; t0 *= 2.0, ++doublings) {
        if (g.phi(t0) < 1e-280)
            throw numeric_error("supercritical_witness: budgets never met");
        supercritical_report rep = make_supercritical(beta, theta, lambda, m_budget,
                                                      t0, g, W);
        rep.doublings = doublings;
        if (rep.feasible) return rep;
    }
}

// --- critical family ---

namespace {

// int_{ell_from}^{ell_end} Theta / (beta tau^{beta-1}) e^{-ell} d ell with
// tau = a^{-1}(Theta), cut where the line variable reaches 632, plus the
// closed-form continuation ell^{1/beta - 1} / (2 (beta - 1))
double m_type_integral(const critical_family& fam, double ell_from) {
    double ell_end = -fam.g->log_phi(632.0);
    double tail = std::pow(ell_end, 1.0 / fam.beta - 1.0) / (2.0 * (fam.beta - 1.0));
    if (ell_from >= ell_end) return tail;
    std::vector<double> pts{ell_from};
    for (double c : {ell_from + 10.0, 455.0, 5010.0, 45010.0})
        if (c > ell_from && c < ell_end) pts.push_back(c);
    pts.push_back(ell_end);
    std::sort(pts.begin(), pts.end());
    double total = 0.0;
    for (size_t i = 0; i + 1 < pts.size(); ++i)
        total += integrate_checked([&](double u) {
            double log_T = fam.W->log_theta_ell(u);
            double tau = fam.b_unit->deriv_inv_log(log_T);
            return std::exp(log_T - std::log(fam.beta) -
                            (fam.beta - 1.0) * std::log(tau) - u);
        }, pts[i], pts[i + 1], 1e-9);
    return total + tail;
}

}  // namespace

critical_family make_critical_family(double beta, double tau0, const gauss_tail& g,
                                     const weight_theta& W) {
    if (!(beta > 1.0))
        throw std::invalid_argument("make_critical_family: need beta > 1");
    if (!(tau0 > 1.0))
        throw std::invalid_argument("make_critical_family: need tau0 > 1");
    if (W.cache_max_ell() < -g.log_phi(632.0) + 1.0)
        throw numeric_error("make_critical_family: weight cache too shallow for the"
                            " deep moment integral");

    critical_family fam;
    fam.beta = beta;
    fam.tau0 = tau0;
    fam.g = &g;
    fam.W = &W;
    fam.tau0_prime = tau0 - std::pow(tau0, 1.0 - beta) / beta;
    double log_A = std::pow(tau0, beta);
    fam.log_a_tau0 = std::log(beta) + (beta - 1.0) * std::log(tau0) + log_A;
    fam.b_unit = std::make_shared<exp_beta_family>(beta, 1.0, tau0,
                                                   exp_patch::tangent_truncation);
    fam.ell_star = W.theta_inv_ell_log(fam.log_a_tau0);
    fam.s_star = std::exp(-fam.ell_star);
    fam.theta_integral_star = W.theta_integral_ell(fam.ell_star);

    // plateau tau0' until Theta reaches a(tau0), then the derivative inverse
    auto bu = fam.b_unit;
    const weight_theta* Wp = &W;
    auto src = [bu, Wp](double x) {
        if (x < 0.0) return 0.0;
        return bu->deriv_inv_log(Wp->log_theta_ell(x + log_two));
    };
    fam.pair = std::make_shared<solution_pair>(src, 0.5, g, W, 1000.0,
                                               std::vector<double>{fam.ell_star});

    fam.m_tau0 = m_type_integral(fam, fam.ell_star);
    truncation_psi cap(truncation_psi::shape::cap);
    fam.sufficient_n1 = 2.0 * (1.0 + std::exp(4.0 * cap.sup_deriv2())) * fam.m_tau0;

    // divergence-rate constant: tau0' int_{s*}^{1/2} Theta minus the closed
    // upper bound for the plateau defect, with margin coefficient 1.5
    double y0 = fam.log_a_tau0;
    double sg = 1.0 / beta - 1.0;
    double tail = std::pow(y0, sg) * (1.0 / (sg * sg) - std::log(y0) / sg);
    fam.lambda_tau0 = fam.tau0_prime * fam.theta_integral_star -
                      (beta / 2.0) * std::pow(y0, 1.0 / beta) - 1.5 * tail;
    return fam;
}

critical_report critical_witness(const critical_family& fam, double n_coef, double k) {
    if (!(n_coef > 0.0) || !(k > 0.0))
        throw std::invalid_argument("critical_witness: need positive N and k");
    critical_report rep;
    rep.beta = fam.beta;
    rep.tau0 = fam.tau0;
    rep.n_coef = n_coef;
    rep.k = k;
    const gauss_tail& g = *fam.g;
    double ell_k = -g.log_phi(k);
    rep.c_k = fam.pair->f1_ell(ell_k);
    trial_function fn(fam.pair, truncation_psi(truncation_psi::shape::cap), rep.c_k);
    double eu = fn.ell_upper();
    rep.t_k = g.phi_inv_ell(eu);
    rep.tk_residual = fam.pair->f1_ell(eu) / rep.c_k - 2.0;
    rep.regime_margin = ell_k - fam.ell_star;

    // modular of |L u_k|: zero on the plateau (B vanishes below tau0') and
    // zero beyond the cap, so only the window around ell_k contributes
    exp_beta_family bn(fam.beta, n_coef, fam.tau0, exp_patch::tangent_truncation);
    std::vector<double> pts{fam.pair->ell0()};
    for (double c : {ell_k - 1.0, ell_k, ell_k + 1.0, ell_k + 4.0, fam.ell_star})
        if (c > fam.pair->ell0() && c < eu) pts.push_back(c);
    pts.push_back(eu);
    std::sort(pts.begin(), pts.end());
    double b = 0.0;
    for (size_t i = 0; i + 1 < pts.size(); ++i)
        b += integrate_checked([&](double u) {
            double e = bn.log_value(std::fabs(fn.m_ell(u))) - u;
            return e < -745.0 ? 0.0 : std::exp(e);
        }, pts[i], pts[i + 1], 1e-9);
    rep.b_modular = 2.0 * b;
    rep.deep_term = m_type_integral(fam, eu);

    double log_lb = g.log_phi(k) + std::pow((2.0 / fam.beta) * rep.c_k, fam.beta);
    rep.lb_direct = std::exp(log_lb);
    double log_T = fam.W->log_theta_ell(ell_k);
    rep.lb2 = std::exp(g.log_phi(k) + log_T +
                       2.0 * fam.lambda_tau0 * std::pow(log_T, 1.0 - 1.0 / fam.beta));

    double gcut = std::min(eu, 120.0);
    std::vector<double> gpts{fam.pair->ell0()};
    for (double c : {10.0, 30.0}) if (c > fam.pair->ell0() && c < gcut) gpts.push_back(c);
    gpts.push_back(gcut);
    double grad = 0.0;
    for (size_t i = 0; i + 1 < gpts.size(); ++i)
        grad += integrate_checked([&](double u) {
            double d = fn.psi().deriv(fam.pair->f1_ell(u) / rep.c_k);
            if (d == 0.0) return 0.0;
            double h = fam.pair->h0_ell(u);
            return d * d * h * h * std::exp(-u);
        }, gpts[i], gpts[i + 1], 1e-9);

    rep.u_prof = fn.u_profile();
    rep.lu_prof = fn.lu_profile();
    rep.checks = run_witness_checks(*fam.W, rep.u_prof, rep.lu_prof, 2.0 * grad, &bn,
                                    center_kind::median);
    return rep;
}

double critical_tune_n(const critical_family& fam, const std::vector<double>& ks) {
    if (ks.empty()) throw std::invalid_argument("critical_tune_n: no levels given");
    double worst = 0.0;
    for (double k : ks) {
        critical_report rep = critical_witness(fam, 1.0, k);
        worst = std::max(worst, rep.b_modular);
    }
    if (!(worst > 0.0)) throw numeric_error("critical_tune_n: vanishing modular");
    return 0.99 / worst;  // the modular is linear in N
}

// --- positive-constant side ---

double j_offset(const weight_theta& W, double log_t) {
    if (!(log_t > 1.0)) throw std::invalid_argument("j_offset: need log t > 1");
    double ell = W.theta_inv_ell_log(log_t);
    return W.theta_integral_ell(ell) - 0.5 * std::log(log_t);
}

double nu_value(double beta, double n_coef, double tau0, double lambda,
                const weight_theta& W) {
    if (!(beta > 1.0) || !(tau0 > 1.0) || !(n_coef > 0.0) || !(lambda > 0.0))
        throw std::invalid_argument("nu_value: bad arguments");
    double log_A = std::pow(tau0, beta);
    double log_a = std::log(beta) + (beta - 1.0) * std::log(tau0) + log_A;
    double log_pref = std::log(n_coef / (2.0 * lambda));
    double log_t1 = log_pref + log_A - std::log(tau0);
    double log_t2 = log_pref + log_a;
    double j1 = W.theta_integral_ell(W.theta_inv_ell_log(log_t1));
    double j2 = W.theta_integral_ell(W.theta_inv_ell_log(log_t2));
    return -(beta / 2.0) * std::pow(log_t2, 1.0 / beta) + tau0 * (j2 - j1);
}

positive_report positive_young_function(double beta, double n_coef,
                                        double lambda_target, const gauss_tail& g,
                                        const weight_theta& W) {
    if (!(beta > 1.0))
        throw std::invalid_argument("positive_young_function: need beta > 1");
    if (!(n_coef > 0.0) || !(lambda_target > 0.0))
        throw std::invalid_argument("positive_young_function: need positive N, lambda");

    positive_report rep;
    rep.beta = beta;
    rep.n_coef = n_coef;
    rep.lambda_target = lambda_target;
    rep.c_j = j_offset(W, 50.0);

    // double tau0 until nu clears -lambda - C_J with margin; the family
    // constructor exponentiates tau0^beta, so stop before that overflows
    double tau0 = 4.0;
    for (int doublings = 0;; tau0 *= 2.0, ++doublings) {
        if (std::pow(tau0, beta) > 690.0)
            throw numeric_error("positive_young_function: margin never met");
        exp_beta_family bt(beta, n_coef, tau0, exp_patch::linear_cap);
        double lam = solve_lambda_t(bt, W, 30.0).value;
        double nu = nu_value(beta, n_coef, tau0, lam, W);
        double margin = (-lambda_target - rep.c_j) - nu;
        if (margin >= 0.05) {
            rep.tau0 = tau0;
            rep.lambda_b = lam;
            rep.nu = nu;
            rep.tune_margin = margin;
            rep.doublings = doublings;
            break;
        }
    }

    exp_beta_family bt(beta, n_coef, rep.tau0, exp_patch::linear_cap);
    g_function gf(bt, W, center_kind::median);
    bool rows_ok = true;
    for (double ell : {20.0, 30.0}) {
        double gv = gf.eval_ell(ell).total;
        double maj = (beta / 2.0) * std::pow(ell, 1.0 / beta) - lambda_target;
        rep.rows.push_back({ell, gv, maj, maj - gv});
        rows_ok = rows_ok && maj - gv > 0.0;
    }

    // exponential budget 2 int exp((theta_beta G)^beta - ell): sampled G on the
    // head, the certified majorant (beta/2) ell^{1/beta} - lambda on the tail
    double tb = 2.0 / beta;
    {
        std::vector<double> xs, ys;
        double nodes[] = {log_two, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0, 11.0,
                          15.0, 20.0, 26.0, 33.0, 41.0, 50.0, 60.0};
        for (double e : nodes) {
            xs.push_back(e);
            ys.push_back(gf.eval_ell(e).total);
        }
        monotone_cubic gs(xs, ys);
        rep.finite_head = integrate_checked([&](double e) {
            return std::exp(std::pow(std::max(0.0, tb * gs(e)), beta) - e);
        }, log_two, 60.0, 1e-8);
    }
    double c = tb * lambda_target;
    double ell_end = std::pow(50.0 / (beta * c) + std::pow(60.0, 1.0 - 1.0 / beta),
                              beta / (beta - 1.0));
    rep.finite_tail = integrate_checked([&](double e) {
        double base = std::max(0.0, std::pow(e, 1.0 / beta) - c);
        return std::exp(std::pow(base, beta) - e);
    }, 60.0, ell_end, 1e-8);
    rep.finite_bound = 2.0 * (rep.finite_head + rep.finite_tail);
    rep.ok = rows_ok && rep.tune_margin >= 0.05 && std::isfinite(rep.finite_bound);
    return rep;
}

// --- sup-norm witness ---

linfty_report linfty_witness(const gauss_tail& g, const weight_theta& W) {
    linfty_report rep;

    // C = -(1/2) log log 2 + int_0^X [Phi/phi - phi/(2 Phi log(1/Phi))] dy,
    // closed tail log(X)/X^2 + (log 2 pi - 1)/(2 X^2)
    auto integrand = [&](double y) {
        double lp = g.log_phi(y);
        double ld = g.log_density(y);
        return std::exp(lp - ld) - std::exp(ld - lp) / (-2.0 * lp);
    };
    const double X = 1e6;
    const double cuts[] = {0.0, 2.0, 6.0, 20.0, 100.0, 1e3, 1e4, 1e5, X};
    double acc = 0.0;
    for (size_t i = 0; i + 1 < sizeof(cuts) / sizeof(cuts[0]); ++i)
        acc += integrate_checked(integrand, cuts[i], cuts[i + 1], 1e-9);
    acc += std::log(X) / (X * X) + (2.0 * log_sqrt_2pi - 1.0) / (2.0 * X * X);
    rep.c_value = -0.5 * std::log(std::log(2.0)) + acc;
    rep.exp_2c = std::exp(2.0 * rep.c_value);
    rep.divergence_exponent = rep.exp_2c - 1.0;
    rep.divergent = rep.c_value > 0.19;
    rep.c_probe_lo = W.lambda_ell(20.0) - 0.5 * std::log(20.0);
    rep.c_probe_hi = W.lambda_ell(40.0) - 0.5 * std::log(40.0);

    // profile with L u = -sgn(x_1): u has the log-log growth profile
    rep.u_prof = profile::analytic([&W](double s) {
        return s <= 0.5 ? W.lambda(s) : -W.lambda(1.0 - s);
    });
    rep.lu_prof = profile::from_steps({{-1.0, 0.5}, {1.0, 0.5}});
    rep.lu_sup = rep.lu_prof.abs_star(1e-13);

    // the unit-source solution pair reproduces the profile exactly
    auto one = [](double x) { return x < 0.0 ? 0.0 : 1.0; };
    solution_pair pr(one, 0.5, g, W, 80.0);
    double cc = 0.0;
    for (double ell : {5.0, 10.0, 20.0, 30.0})
        cc = std::max(cc, std::fabs(pr.f1_ell(ell) - W.lambda_ell(ell)));
    rep.cross_check = cc;

    double grad = 2.0 * integrate_checked([&](double e) {
        return std::exp(-3.0 * e - 2.0 * g.log_iso_ell(e));
    }, log_two, 45.0, 1e-10);
    indicator_young ind;
    rep.checks = run_witness_checks(W, rep.u_prof, rep.lu_prof, grad, &ind,
                                    center_kind::median);
    return rep;
}

}  // namespace ou
