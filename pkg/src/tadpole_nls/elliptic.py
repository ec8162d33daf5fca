"""Elliptic kernel: complete integral K, Jacobi sn/cn/dn and the stationary profiles.

Every function accepts an optional complementary modulus ``kc = sqrt(1 - k**2)``.
Near ``k -> 1`` the modulus itself no longer carries enough digits (``1 - k`` is
quantized at ~1e-16), while ``kc`` can be passed exactly; all internal
reductions use ``kc`` directly.
"""

from typing import NamedTuple

import numpy as np

from .errors import DomainError

LANDEN_TOL = 1e-15
_MAX_AGM_STEPS = 64
INV_SQRT2 = 1.0 / np.sqrt(2.0)


class JacobiTriple(NamedTuple):
    sn: np.ndarray
    cn: np.ndarray
    dn: np.ndarray


def _out(x, scalar):
    return float(x) if scalar else x


def _complement(k, kc):
    k = np.asarray(k, dtype=float)
    if kc is None:
        if np.any(k < 0) or np.any(k > 1) or np.any(~np.isfinite(k)):
            raise DomainError(f"elliptic modulus must lie in [0, 1], got {k}")
        kc = np.sqrt((1.0 - k) * (1.0 + k))
    else:
        kc = np.asarray(kc, dtype=float)
        if np.any(kc < 0) or np.any(kc > 1):
            raise DomainError(f"complementary modulus must lie in [0, 1], got {kc}")
    return k, kc


def agm(a, b):
    """Arithmetic-geometric mean, elementwise."""
    a = np.asarray(a, dtype=float).copy()
    b = np.asarray(b, dtype=float).copy()
    for _ in range(_MAX_AGM_STEPS):
        if np.all(np.abs(a - b) <= LANDEN_TOL * np.abs(a)):
            break
        a, b = 0.5 * (a + b), np.sqrt(a * b)
    return 0.5 * (a + b)


def complete_K(k, kc=None):
    """Complete elliptic integral of the first kind, K(k) = int_0^1 dt / sqrt((1-t^2)(1-k^2 t^2)).

    Evaluated as ``pi / (2 agm(1, kc))``.

    Parameters
    ----------
    k : float or array_like
        Modulus, ``0 <= k < 1``.
    kc : float or array_like, optional
        Complementary modulus ``sqrt(1 - k^2)``; supply it to keep full
        precision when ``k`` is within a few ulps of 1.

    Raises
    ------
    DomainError
        If ``k`` is outside ``[0, 1)`` (or ``kc`` is not in ``(0, 1]``).
    """
    scalar = np.ndim(k) == 0 and (kc is None or np.ndim(kc) == 0)
    k, kc = _complement(k, kc)
    if np.any(kc <= 0):
        raise DomainError("K(k) diverges at k = 1")
    return _out(np.pi / (2.0 * agm(np.ones_like(kc), kc)), scalar)


def _landen_phase(t, k, kc):
    # Descending Gauss/Landen transformation; t is reduced to [0, K/2].
    a = np.ones_like(kc)
    b = kc.copy()
    a_seq = [a]
    c_seq = [k.copy()]
    for _ in range(_MAX_AGM_STEPS):
        c = 0.5 * (a - b)
        a, b = 0.5 * (a + b), np.sqrt(a * b)
        a_seq.append(a)
        c_seq.append(c)
        if np.all(np.abs(c) <= LANDEN_TOL * a):
            break
    n = len(a_seq) - 1
    phi = (2.0 ** n) * a_seq[n] * t
    phi_prev = phi
    for j in range(n, 0, -1):
        phi_prev = phi
        phi = 0.5 * (phi + np.arcsin(c_seq[j] / a_seq[j] * np.sin(phi)))
    sn = np.sin(phi)
    cn = np.cos(phi)
    dn = cn / np.cos(phi_prev - phi) if n > 0 else np.ones_like(t)
    return sn, cn, dn


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _split(a):
    c = 134217729.0 * a  # 2^27 + 1
    hi = c - (c - a)
    return hi, a - hi


def _two_prod(a, b):
    # error-free product (Dekker); numpy exposes no fma
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def scaled_argument(x, shift, scale):
    """``scale * (x - shift)`` as an unevaluated sum ``hi + lo``.

    Keeping the low part makes the reduced Jacobi argument accurate to an ulp
    of the reduced value rather than of the (larger) unreduced one.
    """
    d, d_lo = _two_sum(np.asarray(x, dtype=float), -np.asarray(shift, dtype=float))
    hi, lo = _two_prod(d, np.asarray(scale, dtype=float))
    return hi, lo + scale * d_lo


def _jacobi_generic(z, k, kc, z_lo):
    K = np.pi / (2.0 * agm(np.ones_like(kc), kc))
    neg = z < 0
    sign = np.where(neg, -1.0, 1.0)
    u, u_lo = np.abs(z), np.where(neg, -z_lo, z_lo)
    m = np.floor(u / K)
    p, p_err = _two_prod(m, K)
    t = ((u - p) - p_err) + u_lo
    q = np.mod(m, 4)

    # Fold [K/2, K] onto [0, K/2] so cn keeps relative accuracy near its zero.
    flip = t > 0.5 * K
    s0, c0, d0 = _landen_phase(np.where(flip, K - t, t), k, kc)
    s1 = np.where(flip, c0 / d0, s0)
    c1 = np.where(flip, kc * s0 / d0, c0)
    d1 = np.where(flip, kc / d0, d0)

    sn = np.select([q == 0, q == 1, q == 2], [s1, c1 / d1, -s1], -c1 / d1)
    cn = np.select([q == 0, q == 1, q == 2], [c1, -kc * s1 / d1, -c1], kc * s1 / d1)
    dn = np.select([q == 0, q == 1, q == 2], [d1, kc / d1, d1], kc / d1)
    return sign * sn, cn, dn


def jacobi(z, k, kc=None, z_lo=None):
    """Jacobi elliptic functions ``(sn, cn, dn)(z; k)`` for real ``z`` and ``0 <= k <= 1``.

    The argument is reduced modulo the quarter period ``K`` and folded into
    the first half quarter-period, where the descending Landen transformation
    is applied. ``k = 0`` and ``k = 1`` use the circular and hyperbolic closed
    forms. ``z_lo`` is an optional low-order part of the argument (see
    :func:`scaled_argument`).
    """
    scalar = np.ndim(z) == 0 and np.ndim(k) == 0 and (kc is None or np.ndim(kc) == 0)
    z = np.asarray(z, dtype=float)
    if not np.all(np.isfinite(z)):
        raise DomainError("jacobi requires a finite argument")
    k, kc = _complement(k, kc)
    z_lo = np.zeros_like(z) if z_lo is None else np.asarray(z_lo, dtype=float)
    z, k, kc, z_lo = np.broadcast_arrays(z, k, kc, z_lo)
    sn = np.empty(z.shape)
    cn = np.empty(z.shape)
    dn = np.empty(z.shape)

    circ = kc >= 1.0
    hyper = kc <= 0.0
    gen = ~(circ | hyper)
    if np.any(circ):
        zc = z[circ] + z_lo[circ]
        sn[circ] = np.sin(zc)
        cn[circ] = np.cos(zc)
        dn[circ] = 1.0
    if np.any(hyper):
        zh = z[hyper]
        zh = zh + z_lo[hyper]
        sn[hyper] = np.tanh(zh)
        cn[hyper] = dn[hyper] = sech(zh)
    if np.any(gen):
        sn[gen], cn[gen], dn[gen] = _jacobi_generic(z[gen], k[gen], kc[gen], z_lo[gen])
    if scalar:
        return JacobiTriple(float(sn), float(cn), float(dn))
    return JacobiTriple(sn, cn, dn)


def sech(x):
    """Overflow-free hyperbolic secant."""
    e = np.exp(-np.abs(np.asarray(x, dtype=float)))
    return 2.0 * e / (1.0 + e * e)


def _jacobi_at(x, shift, beta, k, kc):
    hi, lo = scaled_argument(x, shift, beta)
    return jacobi(hi, k, kc, z_lo=lo)


# --- cnoidal profiles -------------------------------------------------------

def _cn_scales(omega, k, kc):
    k, kc = _complement(k, kc)
    # 1 - 2k^2 = kc^2 - k^2, exact when kc is supplied
    gap = (kc - k) * (kc + k)
    with np.errstate(divide="ignore", invalid="ignore"):
        rate = np.asarray(omega, dtype=float) / gap
    if np.any(~(rate > 0)) or np.any(~np.isfinite(rate)):
        raise DomainError(
            "u_cn requires omega / (1 - 2 k^2) > 0: k in (0, 1/sqrt2) for omega > 0, "
            "k in (1/sqrt2, 1) for omega < 0"
        )
    beta = np.sqrt(rate)
    return k, kc, np.sqrt(2.0 * k * k) * beta, beta


def u_cn(x, omega, k, kc=None, shift=0.0):
    """Cnoidal profile ``sqrt(2 w k^2/(1-2k^2)) cn(sqrt(w/(1-2k^2)) (x - shift); k)``."""
    k, kc, amp, beta = _cn_scales(omega, k, kc)
    return amp * _jacobi_at(x, shift, beta, k, kc).cn


def u_cn_prime(x, omega, k, kc=None, shift=0.0):
    """x-derivative of :func:`u_cn`."""
    k, kc, amp, beta = _cn_scales(omega, k, kc)
    sn, _, dn = _jacobi_at(x, shift, beta, k, kc)
    return -amp * beta * sn * dn


def period_T_cn(omega, k, kc=None):
    """Real period ``4 sqrt((1-2k^2)/omega) K(k)`` of :func:`u_cn`."""
    k, kc, _, beta = _cn_scales(omega, k, kc)
    return 4.0 * complete_K(k, kc) / beta


def cn0_rate(L, n):
    """Spatial rate ``2 n K(1/sqrt2) / L`` of the zero-frequency cnoidal profile."""
    return 2.0 * n * complete_K(INV_SQRT2, INV_SQRT2) / L


def u_cn0(x, L, n, shift=0.0):
    """Zero-frequency cnoidal profile ``g cn(g x; 1/sqrt2)`` with ``g = 2nK(1/sqrt2)/L``.

    This is the ``omega -> 0`` limit of :func:`u_cn` along ``2L = n T_cn``; it solves
    ``-u'' - u^3 = 0`` and has period ``2L/n``.
    """
    g = cn0_rate(L, n)
    return g * _jacobi_at(x, shift, g, INV_SQRT2, INV_SQRT2).cn


def u_cn0_prime(x, L, n, shift=0.0):
    g = cn0_rate(L, n)
    sn, _, dn = _jacobi_at(x, shift, g, INV_SQRT2, INV_SQRT2)
    return -g * g * sn * dn


# --- dnoidal profiles -------------------------------------------------------

def _dn_scales(omega, kappa, kc):
    omega = np.asarray(omega, dtype=float)
    if np.any(omega >= 0):
        raise DomainError("u_dn exists only for omega < 0")
    kappa, kc = _complement(kappa, kc)
    # 2 - kappa^2 = 1 + kc^2
    beta = np.sqrt(-omega / (1.0 + kc * kc))
    return kappa, kc, np.sqrt(2.0) * beta, beta


def u_dn(x, omega, kappa, kc=None, shift=0.0):
    """Dnoidal profile ``sqrt(2|w|/(2-kappa^2)) dn(sqrt(|w|/(2-kappa^2)) (x - shift); kappa)``, ``w < 0``."""
    kappa, kc, amp, beta = _dn_scales(omega, kappa, kc)
    return amp * _jacobi_at(x, shift, beta, kappa, kc).dn


def u_dn_prime(x, omega, kappa, kc=None, shift=0.0):
    kappa, kc, amp, beta = _dn_scales(omega, kappa, kc)
    sn, cn, _ = _jacobi_at(x, shift, beta, kappa, kc)
    return -amp * beta * kappa * kappa * sn * cn


def period_T_dn(omega, kappa, kc=None):
    """Real period ``2 sqrt((2-kappa^2)/|w|) K(kappa)`` of :func:`u_dn`; infinite at kappa = 1."""
    kappa, kc, _, beta = _dn_scales(omega, kappa, kc)
    if np.any(kc <= 0):
        raise DomainError("T_dn is infinite at kappa = 1")
    return 2.0 * complete_K(kappa, kc) / beta


# --- tail soliton -----------------------------------------------------------

def _tail_rate(omega):
    omega = np.asarray(omega, dtype=float)
    if np.any(omega >= 0):
        raise DomainError("the decaying tail soliton exists only for omega < 0")
    return np.sqrt(-omega)


def phi_sech(y, omega, shift=0.0):
    """Half-line soliton ``sqrt(2|w|) sech(sqrt|w| (y - shift))``, ``w < 0``."""
    s = _tail_rate(omega)
    return np.sqrt(2.0) * s * sech(np.add(*scaled_argument(y, shift, s)))


def phi_sech_prime(y, omega, shift=0.0):
    s = _tail_rate(omega)
    arg = np.add(*scaled_argument(y, shift, s))
    return -np.sqrt(2.0) * s * s * sech(arg) * np.tanh(arg)
