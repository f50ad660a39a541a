#pragma once

#include <vector>

#include "ou/gauss_core.hpp"
#include "ou/orlicz.hpp"

namespace ou {

// One implicit-multiplier solve: the root together with its diagnostics.
struct multiplier_solve {
    double value = 0;
    double residual = 0;    // constraint integral minus 1 at the root
    int iterations = 0;
    double lo = 0, hi = 0;  // final bisection bracket
};

// xi with int_s^{1/2} B(b^{-1}(xi h)) dr = 1 for h >= 0, not a.e. zero.
multiplier_solve solve_xi(const young_function& B, const profile_fn& h, double s,
                          double rel_tol = 1e-12);

// Orlicz norm |||h|||_{L^{Btilde}(s,1/2)} = int_s^{1/2} b^{-1}(xi_s h) h dr;
// pass a precomputed solve to skip the root find.
double orlicz_norm_weighted(const young_function& B, const profile_fn& h, double s,
                            const multiplier_solve* pre = nullptr);

// lambda with int_0^t B(b^{-1}(lambda tau)) I(Theta^{-1}(tau))^2 dtau = 1.
// t enters as log t; the integral runs in log tau above 1, so t may exceed
// the double range as long as the weight cache covers it.
multiplier_solve solve_lambda_t(const young_function& B, const weight_theta& W,
                                double log_t, double rel_tol = 1e-12);

struct weighted_norm {
    double norm = 0;
    multiplier_solve mult;
};

// |||Theta|||_{L^{Btilde}(s,1/2)} at s = e^{-ell} through the substitution
// tau = Theta(r): int_0^t b^{-1}(lambda_t tau) tau I(Theta^{-1}(tau))^2 dtau
// with t = Theta(s).
weighted_norm theta_orlicz_norm(const young_function& B, const weight_theta& W,
                                double ell);

enum class center_kind { median, mean };

// Additive constant of G: zero when centering at the median, the Orlicz norm
// of Lambda over (0, 1/2) under the conjugate Young function for the mean.
double c_constant(const young_function& B, const weight_theta& W, center_kind mu);

struct g_point {
    double ell = 0;
    double norm_part = 0;   // |||Theta|||_{(s,1/2)}
    double tail_part = 0;   // Theta(s) s B^{-1}(1/s)
    double c_part = 0;
    double total = 0;
    multiplier_solve mult;  // the lambda solve behind norm_part
};

// G(s) = |||Theta|||_{(s,1/2)} + Theta(s) s B^{-1}(1/s) + C at s = e^{-ell}.
class g_function {
  public:
    g_function(const young_function& B, const weight_theta& W, center_kind mu);

    double c_const() const { return c_; }
    g_point eval_ell(double ell) const;

  private:
    const young_function* B_;
    const weight_theta* W_;
    double c_;
};

}  // namespace ou
