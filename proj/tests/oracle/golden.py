"""Reference values frozen into the unit tests (mpmath, 40 digits).

Run: python3 tests/oracle/golden.py
"""
from mpmath import mp, mpf, mpc, atanh, sqrt, loggamma, pi, atan, tan, tanh, log, floor, findroot, diff, im
import numpy as np
from scipy.linalg import eigh_tridiagonal

mp.dps = 40

DEBYE = mpf("0.393430")


def reduced(debye):
    return mpf(debye) * DEBYE / sqrt(3)


def sigma_lambdas(dt):
    s = sqrt(1 + 4 * dt**2)
    lp = (-1 + sqrt(5 + 4 * s)) / 2
    dm = 5 - 4 * s
    ls = mpc((-1 + sqrt(dm)) / 2, 0) if dm >= 0 else mpc(-0.5, sqrt(-dm) / 2)
    up = (1 + s) / 2
    return ls, lp, 1 - s, 1 + s, up**2 / (up**2 + dt**2)


def unwrap_atan(x, t):
    m = floor((x + pi / 2) / pi)
    return m * pi + atan(t * tan(x - m * pi))


def beta(eps, lam):
    nu = 1 / sqrt(-2 * mpf(eps))
    if im(lam) == 0:
        return pi * (nu - lam.real)
    a = im(lam)
    y = im(loggamma(2 * lam + 2)) + (im(loggamma(nu - lam)) - im(loggamma(lam + 1 + nu))) / 2
    return pi * (nu - lam.real) + unwrap_atan(y - a * log(2 / nu), tanh(pi * a))


def bound(lam, mu, n):
    f = lambda nu: beta(-1 / (2 * nu**2), lam) + pi * mu - (n + 1) * pi
    lo, hi = mpf("0.6"), mpf(n + 3)
    for _ in range(200):
        mid = (lo + hi) / 2
        if f(mid) > 0:
            hi = mid
        else:
            lo = mid
    nu = findroot(f, (lo + hi) / 2)
    return -1 / (2 * nu**2)


def regeneralize(mu_off, n, lam):
    nu = n - mpf(mu_off)
    e = -1 / (2 * nu**2)
    mu = (n + 1) - beta(e, lam) / pi
    mu = mu - floor(mu)
    d = mu - mu_off
    d = d - floor(d + mpf("0.5"))
    if d <= -mpf("0.5"):
        d += 1
    return mu_off + d


def bend_levels(omega, ts, quartic, m, n_keep, h):
    # finite volume on cell centres, -(1/q)(q g')' + m^2/q^2 g, symmetrized
    qmax = 14.0
    n = int(round(qmax / h))
    q = (np.arange(n) + 0.5) * h
    qf = np.arange(1, n + 1) * h  # faces i+1/2
    diag = np.zeros(n)
    off = np.zeros(n - 1)
    diag += qf / h**2
    diag[1:] += qf[:-1] / h**2
    off[:] = -qf[:-1] / h**2
    diag /= q
    off /= np.sqrt(q[:-1] * q[1:])
    pot = (m * m / q**2 + q**2) + 2.0 * quartic * ts**4 * q**4 / omega
    w, _ = eigh_tridiagonal(0.5 * omega * (diag + pot), 0.5 * omega * off, select="i",
                            select_range=(0, n_keep - 1))
    return w


def bend_levels_extrapolated(omega, ts, quartic, m, n_keep):
    h = 0.004
    a = bend_levels(omega, ts, quartic, m, n_keep, h)
    b = bend_levels(omega, ts, quartic, m, n_keep, h / 2)
    c = bend_levels(omega, ts, quartic, m, n_keep, h / 4)
    r1 = (4 * b - a) / 3
    r2 = (4 * c - b) / 3
    return (16 * r2 - r1) / 15


def main():
    dt = reduced("3.9")
    ls, lp, cs, cp, mix = sigma_lambdas(dt)
    print("reduced dipole", dt)
    print("lambda_p", lp)
    print("lambda_s", ls)
    print("centrifugal s, p", cs, cp)
    print("mixing p", mix)
    print()
    for z in [mpc(1, 1), mpc("0.3", "-2.5"), mpc("5.5", 10), mpc("0.5", "0.8857052642170372"), mpc(30, "0.1")]:
        print("loggamma", z, loggamma(z))
    print()
    for e in ["-0.5", "-0.125", "-0.05", "-0.02", "-0.005"]:
        b = beta(mpf(e), ls)
        d = diff(lambda x: beta(x, ls), mpf(e)) / pi
        nu = 1 / sqrt(-2 * mpf(e))
        print("beta_s", e, b, "K", -tan(b), "density/nu^3", d / nu**3)
    print()
    for n in range(3, 8):
        print("bound_s mu=0.2 n=%d" % n, bound(ls, mpf("0.2"), n))
    print("bound_p mu=0 n=0", bound(mpc(lp, 0), 0, 0))
    print()
    print("regeneralize p 0.85 n=3", regeneralize(mpf("0.85"), 3, mpc(lp, 0)))
    print("regeneralize s 0.35 n=4", regeneralize(mpf("0.35"), 4, ls))
    print()
    # two-channel model: lambda = 1 closed channel at t, K = [[0,k],[k,0]].
    # K_phys = -k^2 cot(beta); S has its pole where tan(beta) = -i k^2, i.e.
    # nu = 10 - i atanh(k^2)/pi near the nu = 10 level.
    t = mpf("0.01")
    for k in ["0.1", "0.2", "0.3"]:
        k = mpf(k)
        nu = 10 - 1j * atanh(k**2) / pi
        e = t - 1 / (2 * nu**2)
        print("two-channel k=%s pole position" % k, e.real, "width", -2 * e.imag,
              "leading order", 2 * k**2 / (pi * 1000))
    print()
    omega, ts, quartic = 3.8e-3, 0.12, 0.05
    for m in [0, 1, 2]:
        lv = bend_levels_extrapolated(omega, ts, quartic, m, 4)
        print("bend m=%d" % m, " ".join("%.15e" % x for x in lv))


if __name__ == "__main__":
    main()
