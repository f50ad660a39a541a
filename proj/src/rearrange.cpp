#include "ou/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ou/quad.hpp"

namespace ou {

namespace {

// right-continuous lookup: value on [cum_{i-1}, cum_i) is pieces[i].value
double step_eval(const std::vector<step>& pieces, const std::vector<double>& cum,
                 double s) {
    size_t i = std::upper_bound(cum.begin(), cum.end(), s) - cum.begin();
    if (i >= pieces.size()) i = pieces.size() - 1;
    return pieces[i].value;
}

std::vector<double> cumulative(const std::vector<step>& pieces) {
    std::vector<double> cum(pieces.size());
    double acc = 0;
    for (size_t i = 0; i < pieces.size(); ++i) {
        acc += pieces[i].measure;
        cum[i] = acc;
    }
    return cum;
}

}  // namespace

profile profile::analytic(profile_fn f) {
    profile p;
    p.kind_ = kind_t::analytic;
    p.f_ = std::move(f);
    return p;
}

profile profile::from_steps(std::vector<step> pieces) {
    if (pieces.empty()) throw numeric_error("profile: no steps");
    double total = 0;
    for (const auto& p : pieces) {
        if (!(p.measure > 0)) throw numeric_error("profile: step measure must be positive");
        total += p.measure;
    }
    if (std::fabs(total - 1.0) > 1e-9)
        throw numeric_error("profile: step measures must fill (0,1)");

    profile out;
    out.kind_ = kind_t::steps;
    out.steps_ = std::move(pieces);
    std::stable_sort(out.steps_.begin(), out.steps_.end(),
                     [](const step& a, const step& b) { return a.value > b.value; });
    out.cum_ = cumulative(out.steps_);
    out.abs_steps_ = out.steps_;
    for (auto& p : out.abs_steps_) p.value = std::fabs(p.value);
    std::stable_sort(out.abs_steps_.begin(), out.abs_steps_.end(),
                     [](const step& a, const step& b) { return a.value > b.value; });
    out.abs_cum_ = cumulative(out.abs_steps_);
    return out;
}

profile profile::tabulated(std::vector<double> s, std::vector<double> v) {
    if (s.size() < 2 || s.size() != v.size())
        throw numeric_error("profile: tabulated needs >= 2 matching samples");
    for (size_t i = 0; i + 1 < v.size(); ++i)
        if (v[i] < v[i + 1])
            throw numeric_error("profile: tabulated values must be non-increasing");
    profile out;
    out.kind_ = kind_t::tabulated;
    out.s_lo_ = s.front();
    out.s_hi_ = s.back();
    out.interp_ = monotone_cubic(std::move(s), std::move(v));
    return out;
}

double profile::eval(double s) const {
    switch (kind_) {
        case kind_t::analytic:
            return f_(s);
        case kind_t::steps:
            return step_eval(steps_, cum_, s);
        case kind_t::tabulated:
            return interp_(std::clamp(s, s_lo_, s_hi_));
    }
    return 0;
}

const std::vector<step>& profile::steps() const {
    if (kind_ != kind_t::steps) throw numeric_error("profile: steps() on a non-step profile");
    return steps_;
}

double profile::abs_star(double s) const {
    if (kind_ == kind_t::steps) return step_eval(abs_steps_, abs_cum_, std::fabs(s));

    // distribution inversion: |u|*(s) = inf{t >= 0 : mu(u > t) + mu(u < -t) <= s}.
    // Both sets are intervals because eval is non-increasing, so each measure
    // comes from one bisection for the boundary point.
    const double lo_s = 1e-300, hi_s = 1.0 - 1e-16;
    auto boundary = [&](auto pred) {
        // pred is true near 0 and false near 1; return the crossing point
        if (!pred(lo_s)) return 0.0;
        if (pred(hi_s)) return 1.0;
        double a = lo_s, b = hi_s;
        for (int i = 0; i < 70; ++i) {
            double m = 0.5 * (a + b);
            (pred(m) ? a : b) = m;
        }
        return 0.5 * (a + b);
    };
    auto dist = [&](double t) {
        double above = boundary([&](double r) { return eval(r) > t; });
        double not_below = boundary([&](double r) { return eval(r) >= -t; });
        return above + (1.0 - not_below);
    };

    if (dist(0.0) <= s) return 0.0;
    double hi = std::max({std::fabs(eval(1e-13)), std::fabs(eval(1.0 - 1e-13)), 1.0});
    int grow = 0;
    while (dist(hi) > s) {
        hi *= 4;
        if (++grow > 600) throw numeric_error("abs_star: level search diverged");
    }
    double lo = 0;
    for (int i = 0; i < 90; ++i) {
        double m = 0.5 * (lo + hi);
        (dist(m) <= s ? hi : lo) = m;
    }
    return 0.5 * (lo + hi);
}

profile decreasing_rearrangement(std::vector<step> pieces) {
    return profile::from_steps(std::move(pieces));
}

median_mean median_and_mean(const profile& u) {
    median_mean out;
    out.median = u.eval(0.5);
    if (u.kind() == profile::kind_t::steps) {
        double acc = 0;
        for (const auto& p : u.steps()) acc += p.value * p.measure;
        out.mean = acc;
    } else {
        out.mean = integrate([&](double r) { return u.eval(r); }, 0.0, 1.0,
                             1e-10, 1e-12).value;
    }
    return out;
}

std::vector<double> log_grid(double lo, double hi, int n) {
    if (!(0 < lo && lo < hi) || n < 2) throw numeric_error("log_grid: bad range");
    std::vector<double> out(n);
    double ratio = std::log(hi / lo) / (n - 1);
    for (int i = 0; i < n; ++i) out[i] = lo * std::exp(ratio * i);
    out.back() = hi;
    return out;
}

namespace {

void push_row(bound_report& rep, double s, double lhs, double rhs) {
    bound_row row{s, lhs, rhs, rhs - lhs};
    if (rep.rows.empty() || row.slack < rep.slack) {
        rep.lhs = lhs;
        rep.rhs = rhs;
        rep.slack = row.slack;
        rep.arg_min = s;
    }
    rep.rows.push_back(row);
}

}  // namespace

bound_report pointwise_bound_check(const weight_theta& W, const profile& u,
                                   const profile& lu,
                                   const std::vector<double>& sgrid) {
    bound_report rep;
    double mid = u.eval(0.5);
    for (double s : sgrid) {
        if (!(s > 0 && s <= 0.5)) throw numeric_error("pointwise_bound_check: s outside (0, 1/2]");
        double th = W.theta(s);
        double head_pos = integrate([&](double r) { return lu.pos_part(r); },
                                    0.0, s, 1e-10, 1e-13).value;
        double tail_pos = integrate([&](double r) { return lu.pos_part(r) * W.theta(r); },
                                    s, 0.5, 1e-10, 1e-13).value;
        push_row(rep, s, u.eval(s) - mid, th * head_pos + tail_pos);

        double head_neg = integrate([&](double r) { return lu.neg_part(r); },
                                    0.0, s, 1e-10, 1e-13).value;
        double tail_neg = integrate([&](double r) { return lu.neg_part(r) * W.theta(r); },
                                    s, 0.5, 1e-10, 1e-13).value;
        push_row(rep, s, mid - u.eval(1.0 - s), th * head_neg + tail_neg);
    }
    rep.verdict = rep.slack >= -slack_tolerance;
    return rep;
}

double med_mv_bound(const weight_theta& W, const profile& lu) {
    auto f = [&](double r) {
        return lu.abs_star(r) * W.lambda(std::max(r, 1e-300));
    };
    return integrate(f, 0.0, 0.5, 1e-9, 1e-12).value;
}

bound_report med_mv_check(const weight_theta& W, const profile& u,
                          const profile& lu) {
    bound_report rep;
    median_mean mm = median_and_mean(u);
    push_row(rep, 0.5, std::fabs(mm.median - mm.mean), med_mv_bound(W, lu));
    rep.verdict = rep.slack >= -slack_tolerance;
    return rep;
}

bound_report norm_estimate_check(const young_function& B, const weight_theta& W,
                                 const profile& u, const profile& lu,
                                 center_kind mu, const std::vector<double>& sgrid) {
    double ess_sup = lu.abs_star(1e-13);
    double norm_lu;
    if (ess_sup == 0.0) {
        norm_lu = 0.0;
    } else if (dynamic_cast<const indicator_young*>(&B)) {
        // Luxemburg norm degenerates to the essential supremum
        norm_lu = ess_sup;
    } else {
        auto h = [&](double r) { return lu.abs_star(std::clamp(r, 1e-300, 1.0)); };
        norm_lu = luxemburg_norm(B, h, {0.0, 1.0});
    }

    g_function G(B, W, mu);
    bound_report rep;
    for (double s : sgrid) {
        if (!(s > 0 && s <= 0.5)) throw numeric_error("norm_estimate_check: s outside (0, 1/2]");
        double rhs = G.eval_ell(std::log(1.0 / s)).total * norm_lu;
        push_row(rep, s, std::fabs(u.eval(s)), rhs);
        push_row(rep, s, std::fabs(u.eval(1.0 - s)), rhs);
    }
    rep.verdict = rep.slack >= -slack_tolerance;
    return rep;
}

}  // namespace ou
