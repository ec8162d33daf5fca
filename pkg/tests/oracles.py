"""Independent reference computations used only by the tests.

Nothing here calls into the package's elliptic kernel or root finders.
"""

import numpy as np
from scipy.integrate import quad, solve_ivp
from scipy.special import ellipj


def K_quad(k):
    """K(k) by adaptive quadrature after t = sin(theta)."""
    val, _ = quad(lambda th: 1.0 / np.sqrt(1.0 - (k * np.sin(th)) ** 2), 0.0, np.pi / 2,
                  epsabs=0, epsrel=1e-13, limit=500)
    return val


def jacobi_ode(z, k):
    """(sn, cn, dn)(z; k) by integrating sn' = cn dn, cn' = -sn dn, dn' = -k^2 sn cn."""
    z = np.atleast_1d(np.asarray(z, dtype=float))
    order = np.argsort(z)

    def rhs(_, y):
        s, c, d = y
        return [c * d, -s * d, -k * k * s * c]

    zs = z[order]
    sol = solve_ivp(rhs, (0.0, max(zs[-1], 1e-12)), [0.0, 1.0, 1.0], method="DOP853",
                    t_eval=zs, rtol=1e-13, atol=1e-14)
    out = np.empty((3, z.size))
    out[:, order] = sol.y
    return out


def bisect(f, lo, hi, tol=1e-15, maxit=200):
    flo = f(lo)
    for _ in range(maxit):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
        if hi - lo <= tol * max(1.0, abs(mid)):
            break
    return 0.5 * (lo + hi)


def all_roots(f, grid):
    vals = np.array([f(t) for t in grid])
    idx = np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)
    return [bisect(f, grid[i], grid[i + 1]) for i in idx]


def kn_oracle(L, omega, n):
    """k_n from 2L = n T_cn(k), T_cn = 4 sqrt((1-2k^2)/omega) K(k), by plain bisection."""
    def f(k):
        return n * 4.0 * np.sqrt((1 - 2 * k * k) / omega) * K_quad(k) - 2 * L
    if omega > 0:
        return bisect(f, 1e-9, np.sqrt(0.5) - 1e-12)
    return bisect(f, np.sqrt(0.5) + 1e-12, 1 - 1e-12)


def an_oracle(omega, k):
    """Smallest a > 0 with sqrt(k^2/(2k^2-1)) cn(sqrt(|w|/(2k^2-1)) a; k) = 1."""
    gap = 2 * k * k - 1
    beta = np.sqrt(-omega / gap)
    c = np.sqrt(k * k / gap)
    return bisect(lambda a: c * ellipj(beta * a, k * k)[1] - 1.0, 0.0, K_quad(k) / beta)


def dn_vertex_mismatch(L, omega, kappa, shifted):
    """Flux balance squared after eliminating the tail shift.

    For a head u_dn (optionally shifted by half its period) and tail
    sqrt(2|w|) sech(sqrt|w|(y - b)), continuity fixes sech^2 and flux balance
    then reads 4 u'(L)^2 = |w| u(L)^2 (1 - u(L)^2 / (2|w|)).
    """
    w = -omega
    m = kappa * kappa
    beta = np.sqrt(w / (2 - m))
    amp = np.sqrt(2.0) * beta
    x = L - (K_quad(kappa) / beta if shifted else 0.0)
    sn, cn, dn, _ = ellipj(beta * x, m)
    u = amp * dn
    du = -amp * beta * m * sn * cn
    return 4 * du * du - w * u * u * (1 - u * u / (2 * w))
