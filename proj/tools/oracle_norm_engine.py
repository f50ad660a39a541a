# frozen-anchor generator for the norm-engine tests: multipliers xi_s and
# lambda_t, weighted Orlicz norms of Theta, and the mean-centering constant,
# all recomputed from scratch with mpmath (no shared code with the library)
from mpmath import mp, mpf, erfinv, exp, log, sqrt, pi, quad, findroot, cos, mpmathify

mp.dps = 32

def phi_inv(r):
    return sqrt(2) * erfinv(1 - 2 * r)

def iso(r):
    t = phi_inv(r)
    return exp(-t * t / 2) / sqrt(2 * pi)

def w_theta(r):
    v = iso(r)
    return 1 / (v * v)

def w_lambda(r):
    v = iso(r)
    return r / (v * v)

# Chebyshev-Lobatto table of Theta and Lambda in x = log r, cumulative segments
rmin = mpf('0.0004')
a, b = log(rmin), log(mpf('0.5'))
M = 240
xs = [(a + b) / 2 + (b - a) / 2 * cos(pi * mpf(k) / (M - 1)) for k in range(M)]
theta_tab = [mpf(0)]
lambda_tab = [mpf(0)]
for k in range(1, M):
    r_hi, r_lo = exp(xs[k - 1]), exp(xs[k])
    theta_tab.append(theta_tab[-1] + quad(w_theta, [r_lo, r_hi]))
    lambda_tab.append(lambda_tab[-1] + quad(w_lambda, [r_lo, r_hi]))

def cheb_eval(tab, r):
    x = log(r)
    num, den = mpf(0), mpf(0)
    for k in range(M):
        d = x - xs[k]
        if abs(d) < mpf('1e-28'):
            return tab[k]
        w = mpf(-1) ** k
        if k == 0 or k == M - 1:
            w /= 2
        num += w / d * tab[k]
        den += w / d
    return num / den

def Theta(r):
    return cheb_eval(theta_tab, r)

lam_memo = {}
def Lambda(r):
    if r >= rmin:
        return cheb_eval(lambda_tab, r)
    key = str(r)
    if key not in lam_memo:
        lam_memo[key] = cheb_eval(lambda_tab, rmin) + quad(w_lambda, [r, rmin])
    return lam_memo[key]

def theta_inv(t, seed):
    if isinstance(seed, tuple):
        return findroot(lambda r: Theta(r) - t, seed, solver='anderson')
    return findroot(lambda r: Theta(r) - t, seed)

print("sanity Theta(0.05) direct vs cheb:",
      mp.nstr(quad(w_theta, [mpf('0.05'), mpf('0.5')]), 20),
      mp.nstr(Theta(mpf('0.05')), 20))

# ---- beta = 1, N = 1 (envelope): B = e^t - 1, b^{-1}(T) = max(log T, 0),
#      B(b^{-1}(T)) = max(T - 1, 0)
def xi_case_beta1(s):
    s = mpf(s)
    def constraint(xi):
        rstar = theta_inv(1 / xi, seed=(s + mpf('0.5')) / 2) if 1 / xi < Theta(s) else s
        if rstar <= s:
            return quad(lambda r: xi * Theta(r) - 1, [s, mpf('0.5')])
        return quad(lambda r: xi * Theta(r) - 1, [s, rstar])
    xi = findroot(lambda x: constraint(x) - 1, mpf(2))
    rstar = theta_inv(1 / xi, seed=(s + mpf('0.5')) / 2)
    norm = quad(lambda r: log(xi * Theta(r)) * Theta(r), [s, rstar])
    return Theta(s), xi, norm

for s in ['0.05', '0.005']:
    t, xi, norm = xi_case_beta1(s)
    print(f"beta1 s={s}: Theta(s)={mp.nstr(t, 17)} xi={mp.nstr(xi, 17)} norm={mp.nstr(norm, 17)}")

# ---- beta = 1/2, N = 1 envelope, h(r) = r^{-1/4} on (0.05, 1/2)
ustar = findroot(lambda u: exp(u) * (u / 2 - 1) + 1, mpf('1.6'))
tstar = ustar ** 2
kstar = (exp(ustar) - 1) / tstar
print("tangency beta=1/2: tstar =", mp.nstr(tstar, 17), "slope =", mp.nstr(kstar, 17))

def binv_half(T):
    if T <= kstar:
        return mpf(0)
    x = findroot(lambda x: exp(x) / (2 * x) - T, max(ustar + mpf('1e-6'), log(2 * T) + log(log(2 * T) + 2)))
    return x * x

def bbinv_half(T):
    if T <= kstar:
        return mpf(0)
    x = sqrt(binv_half(T))
    return 2 * T * x - 1

def xi_case_half_pow(s):
    s = mpf(s)
    h = lambda r: r ** mpf('-0.25')
    def constraint(xi):
        r_kink = (xi / kstar) ** 4
        hi = min(r_kink, mpf('0.5'))
        if hi <= s:
            return mpf(0)
        return quad(lambda r: bbinv_half(xi * h(r)), [s, hi])
    xi = findroot(lambda x: constraint(x) - 1, mpf('0.8'))
    r_kink = min((xi / kstar) ** 4, mpf('0.5'))
    norm = quad(lambda r: binv_half(xi * h(r)) * h(r), [s, r_kink])
    return xi, norm

xi, norm = xi_case_half_pow('0.05')
print(f"half pow s=0.05: xi={mp.nstr(xi, 17)} norm={mp.nstr(norm, 17)}")

# ---- beta = 2, N = 1: B = e^{t^2} - 1, b = 2 t e^{t^2}; lambda at t = 100
def binv_two(T):
    if T <= 0:
        return mpf(0)
    seed = sqrt(log(1 + T / 2)) + mpf('0.1')
    return findroot(lambda t: 2 * t * exp(t * t) - T, seed)

def bbinv_two(T):
    if T <= 0:
        return mpf(0)
    t = binv_two(T)
    return T / (2 * t) - 1

s100 = theta_inv(mpf(100), (mpf('4.2e-4'), mpf('2e-3')))
print("Theta^{-1}(100) =", mp.nstr(s100, 17))
def lam_constraint_two(lam):
    return quad(lambda r: bbinv_two(lam * Theta(r)), [s100, mpf('0.5')])
lam2 = findroot(lambda x: lam_constraint_two(x) - 1, mpf('0.5'))
norm2 = quad(lambda r: binv_two(lam2 * Theta(r)) * Theta(r), [s100, mpf('0.5')])
print(f"beta2 t=100: lambda={mp.nstr(lam2, 17)} norm={mp.nstr(norm2, 17)}")

# ---- mean-centering constant for beta = 1, N = 1:
#      Btilde(T) = (T log T - T + 1)+, solve int_0^{1/2} (k Lambda - 1)+ = 1,
#      C = (1/k)(1 + int Btilde(k Lambda))
def lambda_inv(v, seed):
    return findroot(lambda r: Lambda(r) - v, seed)

print("Lambda(0.05) =", mp.nstr(Lambda(mpf('0.05')), 17))
print("Lambda(1e-6) =", mp.nstr(Lambda(mpf('1e-6')), 17))

def k_constraint(k):
    rk = lambda_inv(1 / k, mpf('0.05'))
    return quad(lambda r: k * Lambda(r) - 1, [mpf(0), rk])

kroot = findroot(lambda k: k_constraint(k) - 1, mpf(3))
rk = lambda_inv(1 / kroot, mpf('0.05'))
def btilde(T):
    return T * log(T) - T + 1 if T > 1 else mpf(0)
cmean = (1 + quad(lambda r: btilde(kroot * Lambda(r)), [mpf(0), rk])) / kroot
print(f"C mean beta1: k={mp.nstr(kroot, 17)} rk={mp.nstr(rk, 17)} C={mp.nstr(cmean, 17)}")
