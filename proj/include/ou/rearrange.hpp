#pragma once

#include <algorithm>
#include <vector>

#include "ou/gauss_core.hpp"
#include "ou/interp.hpp"
#include "ou/norm_engine.hpp"
#include "ou/orlicz.hpp"

namespace ou {

// one flat piece of a step profile: takes `value` on a set of size `measure`
struct step {
    double value;
    double measure;
};

// Signed decreasing rearrangement u°(s) on (0,1) with accessors for the
// rearrangements of the positive part, the negative part, and |u|.
class profile {
  public:
    enum class kind_t { analytic, tabulated, steps };

    // f must already be the signed decreasing rearrangement
    static profile analytic(profile_fn f);
    // pieces in any order; measures must fill (0,1)
    static profile from_steps(std::vector<step> pieces);
    // sampled u°(s_i), s ascending, values non-increasing
    static profile tabulated(std::vector<double> s, std::vector<double> v);

    kind_t kind() const { return kind_; }
    double eval(double s) const;
    double operator()(double s) const { return eval(s); }
    // (u_+)*(s) = max(u°(s), 0) and (u_-)*(s) = max(-u°(1-s), 0)
    double pos_part(double s) const { return std::max(eval(s), 0.0); }
    double neg_part(double s) const { return std::max(-eval(1.0 - s), 0.0); }
    // |u|*: exact sort for step profiles, distribution inversion otherwise
    double abs_star(double s) const;
    const std::vector<step>& steps() const;

  private:
    kind_t kind_ = kind_t::analytic;
    profile_fn f_;
    std::vector<step> steps_;      // sorted by value, descending
    std::vector<step> abs_steps_;  // sorted by |value|, descending
    std::vector<double> cum_, abs_cum_;
    monotone_cubic interp_;
    double s_lo_ = 0, s_hi_ = 1;
};

// exact sort-based signed decreasing rearrangement
profile decreasing_rearrangement(std::vector<step> pieces);

struct median_mean {
    double median;
    double mean;
};

// median read at s = 1/2, mean as the integral of u° over (0,1)
median_mean median_and_mean(const profile& u);

struct bound_row {
    double s;
    double lhs, rhs, slack;
};

struct bound_report {
    double lhs = 0, rhs = 0;  // sides at the minimum-slack grid point
    double slack = 0;         // min over the grid of rhs - lhs
    double arg_min = 0;
    bool verdict = false;     // slack >= -slack_tolerance
    std::vector<bound_row> rows;
};

inline constexpr double slack_tolerance = 1e-8;

// n points geometrically spaced over [lo, hi]
std::vector<double> log_grid(double lo, double hi, int n);

// u°(s) - u°(1/2) <= Theta(s) int_0^s (Lu)*_+ + int_s^{1/2} (Lu)*_+ Theta and
// the mirrored bound for u°(1/2) - u°(1-s) against (Lu)*_-, on the grid
bound_report pointwise_bound_check(const weight_theta& W, const profile& u,
                                   const profile& lu,
                                   const std::vector<double>& sgrid);

// int_0^{1/2} (Lu)*(r) Lambda(r) dr
double med_mv_bound(const weight_theta& W, const profile& lu);

// |med(u) - mv(u)| <= med_mv_bound(lu), as a one-row report
bound_report med_mv_check(const weight_theta& W, const profile& u,
                          const profile& lu);

// |u°(s)| <= G(s) ||Lu||_{L^B} and |u°(1-s)| <= G(s) ||Lu||_{L^B} on the grid
bound_report norm_estimate_check(const young_function& B, const weight_theta& W,
                                 const profile& u, const profile& lu,
                                 center_kind mu, const std::vector<double>& sgrid);

}  // namespace ou
