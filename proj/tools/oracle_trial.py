#!/usr/bin/env python3
# High-precision anchors for the trial-function tests (mpmath).
# Identities used to avoid nested quadrature where possible:
#   Theta(Phi(x)) = pi * erfi(x / sqrt(2))          d/dx [Theta(Phi(x))] = 1/phi(x)
#   Lambda(Phi(x)) = int_0^x Phi(y)/phi(y) dy
#   int_s^{1/2} Theta(r) dr = pi * int_0^{x_s} erfi(y/sqrt2) phi(y) dy
#   F(rho) = int_0^rho f0(r/s0) dr = lam^{1/beta} s0 Gamma(1/beta+1, log(s0/rho))
#                                                   (upper incomplete gamma)
# Run: python3 tools/oracle_trial.py
from mpmath import mp, mpf, exp, log, sqrt, pi, erfc, erfi, quad, inf, gammainc

mp.dps = 30

SQ2 = sqrt(2)


def phi_pdf(x):
    return exp(-x * x / 2) / sqrt(2 * pi)


def phi_tail(x):
    return erfc(x / SQ2) / 2


def log_phi_tail(x):
    return log(erfc(x / SQ2)) - log(2)


def phi_inv_ell(ell):
    # solve log Phi(x) = -ell by bisection (ell >= log 2)
    lo, hi = mpf(0), max(mpf(60), sqrt(2 * mpf(ell)) + 6)
    for _ in range(220):
        mid = (lo + hi) / 2
        if log_phi_tail(mid) + ell >= 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def phi_inv(s):
    return phi_inv_ell(-log(s))


def theta_x(x):
    return pi * erfi(x / SQ2)


def theta(s):
    return theta_x(phi_inv(s))


def theta_inv_x(T):
    # solve pi*erfi(x/sqrt2) = T for x
    lo, hi = mpf(1e-8), mpf(60)
    for _ in range(220):
        mid = (lo + hi) / 2
        if theta_x(mid) <= T:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def theta_integral_x(x):
    # int_{Phi(x)}^{1/2} Theta(r) dr
    return quad(lambda y: theta_x(y) * phi_pdf(y), [0, min(x, 8), x] if x > 8 else [0, x])


def nstr(v):
    return mp.nstr(v, 17)


def show(name, v):
    print(f"{name} = {nstr(v)}")


print("== quintic truncation ==")
# ramp 6t^3-8t^4+3t^5; psi'' = 36t-96t^2+60t^3, extremum at root of 180t^2-192t+36
show("sup_ramp_d1", mpf(945) / 625)
t_ext = (16 - sqrt(76)) / 30
show("ramp_d2_argmax", t_ext)
show("sup_ramp_d2", 36 * t_ext - 96 * t_ext**2 + 60 * t_ext**3)


def psi_ramp(t):
    if t <= 0:
        return mpf(0)
    if t >= 1:
        return mpf(1)
    return 6 * t**3 - 8 * t**4 + 3 * t**5


def psi_ramp_d1(t):
    if t <= 0 or t >= 1:
        return mpf(0)
    return 18 * t**2 - 32 * t**3 + 15 * t**4


def psi_ramp_d2(t):
    if t <= 0 or t >= 1:
        return mpf(0)
    return 36 * t - 96 * t**2 + 60 * t**3


def psi_sup(t):  # supercritical: 0 below 0, ramp, identity above 1
    if t <= 0:
        return mpf(0)
    if t >= 1:
        return mpf(t)
    return psi_ramp(t)


def psi_sup_d1(t):
    if t <= 0:
        return mpf(0)
    if t >= 1:
        return mpf(1)
    return psi_ramp_d1(t)


def psi_sup_d2(t):
    return psi_ramp_d2(t) if 0 < t < 1 else mpf(0)


def psi_cap(t):  # critical: identity below 1, 1 + (t-1) - ramp(t-1) on [1,2], 1 beyond
    if t <= 1:
        return mpf(t)
    if t >= 2:
        return mpf(1)
    return t - psi_ramp(t - 1)


def psi_cap_d1(t):
    if t <= 1:
        return mpf(1)
    if t >= 2:
        return mpf(0)
    return 1 - psi_ramp_d1(t - 1)


def psi_cap_d2(t):
    return -psi_ramp_d2(t - 1) if 1 < t < 2 else mpf(0)


print()
print("== L-infty constant ==")
# C = -(1/2) log log 2 + int_0^{1/2} ( r/I(r)^2 - 1/(2 r log(1/r)) ) dr
# x-line form: integrand Phi/phi - phi/(2 Phi log(1/Phi)), tail ~ (2 log y + log 2pi - 2)/y^3
def linf_integrand(y):
    P = phi_tail(y)
    return P / phi_pdf(y) - phi_pdf(y) / (2 * P * (-log(P)))


mp.dps = 40
X_CUT = mpf('1e6')
c_int = quad(linf_integrand, [0, 2, 6, 20, 100, 1000, mpf('1e4'), mpf('1e5'), X_CUT])
c_int += log(X_CUT) / X_CUT**2 + (log(2 * pi) - 1) / (2 * X_CUT**2)
mp.dps = 30
show("linf_integral", c_int)
c_total = -log(log(2)) / 2 + c_int
show("linf_C", c_total)
show("linf_exp2C", exp(2 * c_total))


def lambda_x(x):
    # Lambda(Phi(x)) = int_0^x Phi(y)/phi(y) dy
    return quad(lambda y: phi_tail(y) / phi_pdf(y), [0, min(x, 8), x] if x > 8 else [0, x])


for ellv in (20, 40):
    show(f"linf_probe{ellv}", lambda_x(phi_inv_ell(ellv)) - log(mpf(ellv)) / 2)
show("linf_grad", 2 * quad(lambda y: phi_tail(y) ** 2 / phi_pdf(y), [0, 8, 40]))


def F_cum(rho, s0, lam, beta):
    # int_0^rho f0(r/s0) dr for f0(x) = (lam log 1/x)^{1/beta}, extended by 0 above 1
    rho = min(rho, s0)
    q = 1 / mpf(beta)
    return lam**q * s0 * gammainc(q + 1, a=log(s0 / rho))


def supercritical(tag, beta, theta_p, lam, t0, ells, m_sigmas, slope_ells, y_max):
    print()
    print(f"== supercritical {tag} (beta={beta}, theta={theta_p}, lambda={lam}, t0={t0}) ==")
    s0 = phi_tail(t0)
    show(f"{tag}_s0", s0)
    x0 = mpf(t0)

    def f1_at_x(x):
        # f1(sigma) with sigma*s0 = Phi(x), for x >= x0
        return quad(lambda y: F_cum(phi_tail(y), s0, lam, beta) / phi_pdf(y),
                    [x0, min(x0 + 3, x), x] if x > x0 + 3 else [x0, x])

    def h0_at_x(x):
        return F_cum(phi_tail(x), s0, lam, beta) / phi_pdf(x)

    for ell in ells:
        x = phi_inv_ell(ell)
        show(f"{tag}_f1_ell{ell}", f1_at_x(x))
        show(f"{tag}_h0_ell{ell}", h0_at_x(x))
    # head region sigma = 1.5: closed form F(s0) * (Theta(1.5 s0) - Theta(s0))
    show(f"{tag}_f1_sigma1p5",
         F_cum(s0, s0, lam, beta) * (theta(mpf(1.5) * s0) - theta_x(x0)))

    # t1: f1 = 1
    lo, hi = x0, mpf(40)
    for _ in range(200):
        mid = (lo + hi) / 2
        if f1_at_x(mid) <= 1:
            lo = mid
        else:
            hi = mid
    t1 = (lo + hi) / 2
    show(f"{tag}_t1", t1)
    show(f"{tag}_s1", phi_tail(t1))

    def f0_of_sigma(sig):
        if sig >= 1:
            return mpf(0)
        return (lam * log(1 / sig)) ** (1 / mpf(beta))

    def m_at_x(y):
        sig = phi_tail(y) / s0
        f1v = f1_at_x(y)
        return -psi_sup_d1(f1v) * f0_of_sigma(sig) + psi_sup_d2(f1v) * h0_at_x(y) ** 2

    for sig in m_sigmas:
        y = phi_inv(sig * s0)
        show(f"{tag}_m_sigma{str(sig).replace('.', 'p')}", m_at_x(y))

    # modulars: region |x1| > t0 mirrored, central part has Lu = 0
    if beta == 1:
        def env(t):  # Exp^1 = e^t
            return exp(t)
    else:
        # convex envelope of e^{t^beta}: line 1 + slope*t on [0,tau_c], tangency e^u(1-beta*u)=1
        lo_u, hi_u = mpf('1e-9'), 1 / mpf(beta)
        for _ in range(200):
            mid = (lo_u + hi_u) / 2
            if exp(mid) * (1 - beta * mid) - 1 >= 0:
                lo_u = mid
            else:
                hi_u = mid
        u_c = (lo_u + hi_u) / 2
        tau_c = u_c ** (1 / mpf(beta))
        slope = beta * tau_c ** (beta - 1) * exp(u_c)
        show(f"{tag}_env_tau_c", tau_c)
        show(f"{tag}_env_slope", slope)

        def env(t):
            if t <= tau_c:
                return 1 + slope * t
            return exp(t ** mpf(beta))

    exp_mod = (1 - 2 * s0) + 2 * quad(lambda y: env(abs(m_at_x(y))) * phi_pdf(y),
                                      [x0, t1, t1 + 4, y_max])
    show(f"{tag}_exp_modular", exp_mod)
    b_mod = 2 * quad(lambda y: (env(abs(m_at_x(y))) - 1) * phi_pdf(y),
                     [x0, t1, t1 + 4, y_max])
    show(f"{tag}_b_modular", b_mod)

    # log-integrand slope d/dell [ (theta * psi(f1))^beta ] (analytic, deep region psi = id)
    for ell in slope_ells:
        x = phi_inv_ell(ell)
        s = exp(-mpf(ell))
        df1 = s * F_cum(s, s0, lam, beta) / phi_pdf(x) ** 2
        f1v = f1_at_x(x)
        p = beta * (theta_p * f1v) ** (beta - 1) * theta_p * df1
        show(f"{tag}_slope_ell{ell}", p)
    show(f"{tag}_slope_target", lam * (theta_p * beta / mpf(2)) ** mpf(beta))

    # gradient-square of the witness: 2 int ( psi'(f1) h0 )^2 ds over (0, s0)
    grad = 2 * quad(lambda y: (psi_sup_d1(f1_at_x(y)) * h0_at_x(y)) ** 2 * phi_pdf(y),
                    [x0, t1, t1 + 4, y_max])
    show(f"{tag}_grad_sq", grad)


supercritical("sc1", 1, mpf('2.5'), mpf('0.9'), 3,
              ells=[10, 20, 40], m_sigmas=[mpf('0.9'), mpf('0.5'), mpf('0.05')],
              slope_ells=[20, 40], y_max=mpf(38))
supercritical("sch", mpf('0.5'), mpf(5), mpf('0.96'), 3,
              ells=[20, 40], m_sigmas=[mpf('0.9'), mpf('0.5')],
              slope_ells=[20, 40], y_max=mpf(58))

print()
print("== s1 scaling (beta=1/2, lambda=1, s0=1e-10, eps=1) ==")
s0 = mpf('1e-10')
x0 = phi_inv(s0)
show("s1case_x0", x0)


def f1_tail(x):
    return quad(lambda y: F_cum(phi_tail(y), s0, 1, mpf('0.5')) / phi_pdf(y), [x0, x])


lo, hi = x0, mpf(40)
for _ in range(200):
    mid = (lo + hi) / 2
    if f1_tail(mid) <= 1:
        lo = mid
    else:
        hi = mid
x1 = (lo + hi) / 2
s1v = phi_tail(x1)
show("s1case_s1", s1v)
show("s1case_log_ratio", log(s0 / s1v))
show("s1case_bound", (2 * mpf('1.05') * 3 * log(1 / s0)) ** (mpf(1) / 3))

print()
print("== critical family (beta=2, tau0=5.5, N free) ==")
beta = mpf(2)
tau0 = mpf('5.5')
A0 = exp(tau0 ** 2)
a0 = 2 * tau0 * A0
tau0p = tau0 - A0 / a0
show("cr_tau0_prime", tau0p)
show("cr_log_a_tau0", log(a0))
x_star = theta_inv_x(a0)
s_star = phi_tail(x_star)
show("cr_x_star", x_star)
show("cr_s_star", s_star)


def a_inv(T):
    # solve 2 tau e^{tau^2} = T, T >= a(tau0)
    lt = log(T)
    tau = sqrt(lt - log(2 * sqrt(lt)) if lt > 4 else lt)
    for _ in range(40):
        g = log(2 * tau) + tau * tau - lt
        tau -= g / (1 / tau + 2 * tau)
        if abs(g) < mpf('1e-35'):
            break
    return tau


def f0_2r_x(y):
    # f0(2 Phi(y)) as a function of the line variable y
    T = theta_x(y)
    if T <= a0:
        return tau0p
    return a_inv(T)


show("cr_f0_at_r1em20", a_inv(theta(mpf('1e-20'))))


def F_crit_x(x):
    # F(Phi(x)) = int_0^{Phi(x)} f0(2r) dr
    hi = max(x, x_star) + 30
    return quad(lambda y: f0_2r_x(y) * phi_pdf(y),
                [x, x + 4, max(x + 10, x_star + 6), hi])


def f1_crit_x(x):
    # f1(2 Phi(x)) = Theta F + int Theta f0, s0 = 1/2
    head = quad(lambda y: theta_x(y) * f0_2r_x(y) * phi_pdf(y),
                [0, min(x, 8), x] if x > 8 else [0, x])
    return theta_x(x) * F_crit_x(x) + head


F4 = F_crit_x(mpf(4))
show("cr_F_Phi4", F4)
show("cr_h0_Phi4", F4 / phi_pdf(4))
x30 = phi_inv_ell(30)
show("cr_h0_ell30", F_crit_x(x30) / phi_pdf(x30))
c4 = f1_crit_x(mpf(4))
c6 = f1_crit_x(mpf(6))
c8 = f1_crit_x(mpf(8))
show("cr_c_k4", c4)
show("cr_c_k6", c6)
show("cr_c_k8", c8)

lo, hi = mpf(8), mpf(40)
for _ in range(80):
    mid = (lo + hi) / 2
    if f1_crit_x(mid) <= 2 * c4:
        lo = mid
    else:
        hi = mid
t_4 = (lo + hi) / 2
show("cr_t_k4", t_4)

# M(tau0) integrand Theta/(2 a^{-1}(Theta)) phi decays like 1/(sqrt2 y^2):
# integrate far out, then attach the s-domain tail (1/2) ell^{-1/2} (1 + O(loglog/ell))
def m_type_integral(x_from):
    X_END = mpf(632)
    val = quad(lambda y: theta_x(y) / (2 * a_inv(theta_x(y))) * phi_pdf(y),
               [x_from, x_from + 6, 30, 100, 300, X_END])
    ell_end = -log_phi_tail(X_END)
    return val + ell_end ** mpf('-0.5') / 2


M_val = m_type_integral(x_star)
show("cr_M_tau0", M_val)
show("cr_deep_modular_k4", m_type_integral(t_4))

Tint_star = theta_integral_x(x_star)
show("cr_theta_integral_s_star", Tint_star)

Y0 = log(a0)
tail = Y0 ** mpf('-0.5') * (4 + 2 * log(Y0))
show("cr_tail_closed", tail)
c_beta = mpf('1.5')
lam_tau0 = tau0p * Tint_star - sqrt(Y0) - c_beta * tail
show("cr_lambda_tau0", lam_tau0)

for k in (4, 6, 8, 10):
    Pk = phi_tail(k)
    Tk = theta_x(mpf(k))
    show(f"cr_PhiTheta_k{k}", Pk * Tk)
    show(f"cr_logTheta_k{k}", log(Tk))
c_map = {4: c4, 6: c6, 8: c8}
for k in (4, 6, 8):
    Pk = phi_tail(k)
    Tk = theta_x(mpf(k))
    show(f"cr_lb2_k{k}", Pk * Tk * exp(2 * lam_tau0 * sqrt(log(Tk))))
    show(f"cr_lb_direct_k{k}", Pk * exp(c_map[k] ** 2))

# m_k anchors at fixed points (k = 4 witness)
for yv in (mpf('4.1'), mpf(5), mpf(7), mpf(12)):
    f1v = f1_crit_x(yv)
    h0v = F_crit_x(yv) / phi_pdf(yv)
    t = f1v / c4
    mk = -psi_cap_d1(t) * f0_2r_x(yv) + psi_cap_d2(t) * h0v ** 2 / c4
    show(f"cr_mk4_y{str(yv).replace('.', 'p')}", mk)
    show(f"cr_f1_ratio_y{str(yv).replace('.', 'p')}", t)

print()
print("== misc f1 anchors ==")
# beta=1, lambda=1, s0=1/2: ratio f1(sigma)/((beta/2) log(1/sigma)) at ell = 30
s0h = mpf('0.5')


def f1_half(x, lam, beta):
    return quad(lambda y: F_cum(phi_tail(y), s0h, lam, beta) / phi_pdf(y), [0, 6, x])


x30 = phi_inv_ell(30)
v = f1_half(x30, 1, 1)
show("misc_f1_b1_ell30", v)
show("misc_f1_b1_ratio", v / (mpf(30) / 2))
x40m = phi_inv_ell(40)
v40 = f1_half(x40m, 1, 1)
show("misc_f1_b1_ell40", v40)
show("misc_f1_b1_ratio40", v40 / mpf(20))

# t1 monotonicity pair: beta=1/2, lambda=0.9*sqrt(0.8), t0 in {3, 6}
lam_t1 = mpf('0.9') * sqrt(mpf('0.8'))
for t0v in (3, 6):
    s0v = phi_tail(t0v)

    def f1v(x):
        return quad(lambda y: F_cum(phi_tail(y), s0v, lam_t1, mpf('0.5')) / phi_pdf(y),
                    [t0v, x])

    lo, hi = mpf(t0v), mpf(40)
    for _ in range(200):
        mid = (lo + hi) / 2
        if f1v(mid) <= 1:
            lo = mid
        else:
            hi = mid
    t1v = (lo + hi) / 2
    show(f"misc_t1_t0{t0v}", t1v)
    show(f"misc_ratio_t0{t0v}", phi_tail(t1v) / s0v)

print()
print("== positive young function (beta=2, N=1, lambda fixed 0.5, tau0=5) ==")
tau0 = mpf(5)
lam_fix = mpf('0.5')
Np = mpf(1)
A5 = exp(tau0 ** 2)
a5 = 2 * tau0 * A5
T1 = Np / (2 * lam_fix) * A5 / tau0
T2 = Np / (2 * lam_fix) * a5
s_T1 = phi_tail(theta_inv_x(T1))
s_T2 = phi_tail(theta_inv_x(T2))
Jdiff = theta_integral_x(theta_inv_x(T2)) - theta_integral_x(theta_inv_x(T1))
show("pos_J_T1_T2", Jdiff)
nu = -sqrt(log(T2)) + tau0 * Jdiff
show("pos_nu_tau0_5", nu)
J50 = theta_integral_x(theta_inv_x(exp(mpf(50))))
show("pos_CJ", J50 - log(mpf(50)) / 2)
