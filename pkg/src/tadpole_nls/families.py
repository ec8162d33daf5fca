"""Matching equations and construction of every standing-wave family on the tadpole.

Families (all heads are Jacobi profiles, tails are shifted sech solitons):

* ``CnVanishingTail`` -- ``((-1)^n u_cn(x - L/2n; k_n), 0)``, any real omega below ``lambda_n``.
* ``CnPlus`` / ``CnMinus`` -- ``((-1)^n u_cn(x -+ a_n; k_n), phi(y))``, omega < 0.
* ``Dn0`` -- ``(u_dn(x; kappa), phi(y - b))``, omega < 0.
* ``Dn1`` -- ``(u_dn(x - T_dn/2; kappa), phi(y - b))``, omega < 0.

The dn matching equations depend on ``(L, omega)`` only through
``z = L sqrt|omega|``; the root finders below work in that variable and in
``u = log(1 - kappa^2)``, which resolves moduli within 1e-12 of one.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .elliptic import (
    INV_SQRT2, complete_K, jacobi, period_T_cn, phi_sech, phi_sech_prime,
    u_cn, u_cn0, u_cn0_prime, u_cn_prime, u_dn, u_dn_prime,
)
from .errors import DomainError, NoSolution
from .graph import Family, FamilyDescriptor, TadpoleState

log = logging.getLogger(__name__)

SCAN_SAMPLES = 10_000
PIECE_SAMPLES = 64
KAPPA_CLAMP = 1e-12
# No dn root has kappa^2 < 0.536 (see _dn_floor_bound); scans start safely below.
KAPPA_FLOOR = 0.7
_XTOL = 1e-15


@dataclass(frozen=True)
class MatchingRoot:
    """Root of a matching equation.

    ``value`` is the modulus (k or kappa); ``m1 = 1 - value**2`` is kept at full
    precision because ``value`` alone cannot resolve moduli near one.
    ``bracket`` is the scan cell in which the sign change was detected.
    """

    value: float
    bracket: tuple
    residual: float
    index: int
    m1: float

    @property
    def kc(self):
        return float(np.sqrt(self.m1))


def _polish(f, x, lo, hi):
    # one secant-Newton step, kept only if it improves the residual
    fx = f(x)
    h = 1e-7 * max(abs(x), 1.0)
    d = (f(x + h) - f(x - h)) / (2 * h)
    if d == 0 or not np.isfinite(d):
        return x
    x1 = x - fx / d
    if lo <= x1 <= hi and abs(f(x1)) < abs(fx):
        return x1
    return x


def _refine(f, lo, hi):
    x = brentq(f, lo, hi, xtol=_XTOL, rtol=4 * np.finfo(float).eps, maxiter=500)
    return _polish(f, x, lo, hi)


# --- cn family ---------------------------------------------------------------

def _kn_equation(L, omega, n):
    def from_k(k):
        return 2 * L - n * period_T_cn(omega, k)

    def from_logm1(v):
        m1 = np.exp(v)
        k, kc = np.sqrt(1 - m1), np.sqrt(m1)
        # T_cn -> 0 as k -> 1/sqrt2; rounding can flip the sign of 1 - 2k^2 there
        ok = (k - kc) * (k + kc) > 0
        safe_k = np.where(ok, k, 1.0)
        safe_kc = np.where(ok, kc, 0.5)
        return np.where(ok, 2 * L - n * period_T_cn(omega, safe_k, safe_kc), 2 * L)

    return from_k, from_logm1


def solve_kn(graph, omega, n):
    """Modulus ``k_n`` solving ``2L = n T_cn(k)``.

    For omega > 0 a root exists iff ``omega < lambda_n = (n pi/L)^2``, with
    ``k_n^2 in (0, 1/2)``; for omega < 0 always, with ``k_n^2 in (1/2, 1)``;
    at omega = 0 the root is exactly ``1/sqrt2``.

    Raises
    ------
    NoSolution
        If ``omega >= lambda_n``.
    """
    if int(n) != n or n < 1:
        raise DomainError(f"mode number must be a positive integer, got {n}")
    L = graph.L
    if omega == 0:
        return MatchingRoot(INV_SQRT2, (INV_SQRT2, INV_SQRT2), 0.0, n, 0.5)
    lam = graph.eigenvalue(n)
    from_k, from_logm1 = _kn_equation(L, omega, n)
    if omega > 0:
        if omega >= lam:
            raise NoSolution(
                f"2L = n T_cn(k) has no root: omega = {omega} >= lambda_{n} = {lam}; "
                f"cn states with vanishing tail need omega < lambda_n",
                condition="omega >= lambda_n",
            )
        # T_cn decreases from 2 pi/sqrt(omega) at k = 0 to 0 at k = 1/sqrt2
        grid = np.concatenate([[1e-300], np.linspace(0.0, INV_SQRT2, SCAN_SAMPLES + 1)[1:-1]])
        vals = from_k(grid)
        i = int(np.argmax(vals > 0))
        lo, hi = (grid[i - 1], grid[i]) if vals[i] > 0 else (grid[-1], INV_SQRT2)
        k = _refine(from_k, lo, hi)
        res = abs(from_k(k))
        return MatchingRoot(float(k), (float(lo), float(hi)), float(res), n,
                            float((1 - k) * (1 + k)))
    # omega < 0: T_cn rises from 0 at k = 1/sqrt2 to infinity at k = 1
    v = np.linspace(np.log(1e-300), np.log(0.5), SCAN_SAMPLES)
    vals = np.append(from_logm1(v[:-1]), 2 * L)
    i = int(np.argmax(vals > 0))
    if i == 0:
        raise NoSolution(f"k_n lies closer to 1 than double precision resolves (omega = {omega})",
                         condition="1 - k_n^2 < 1e-300")
    lo, hi = v[i - 1], v[i]
    vr = _refine(from_logm1, lo, hi)
    m1 = float(np.exp(vr))
    k = float(np.sqrt(1 - m1))
    bracket = (float(np.sqrt(1 - np.exp(hi))), float(np.sqrt(1 - np.exp(lo))))
    return MatchingRoot(k, bracket, float(abs(from_logm1(vr))), n, m1)


def _cn_head(omega, root, shift, parity):
    k, kc = root.value, root.kc

    def head(x):
        return parity * u_cn(x, omega, k, kc, shift)

    def head_prime(x):
        return parity * u_cn_prime(x, omega, k, kc, shift)

    return head, head_prime


def _zero(y):
    return np.zeros_like(np.asarray(y, dtype=float))


def _cn_vanishing_state(graph, omega, n, root):
    L = graph.L
    parity = (-1) ** n
    shift = L / (2 * n)
    if omega == 0:
        def head(x):
            return parity * u_cn0(x, L, n, shift)

        def head_prime(x):
            return parity * u_cn0_prime(x, L, n, shift)
    else:
        head, head_prime = _cn_head(omega, root, shift, parity)
    desc = FamilyDescriptor(Family.CN_VANISHING_TAIL, float(omega), n,
                            k=root.value, m1=root.m1)
    return TadpoleState(graph, head, _zero, head_prime, _zero, descriptor=desc)


def build_cn_state(graph, omega, n):
    """``Phi_{omega,n}``: cn head with a node at the vertex and vanishing tail.

    The head is odd about ``x = 0`` and has ``2n`` nodes on the ring.
    """
    return _cn_vanishing_state(graph, omega, n, solve_kn(graph, omega, n))


def _an_equation(omega, root):
    k, kc = root.value, root.kc
    gap = (k - kc) * (k + kc)  # 2k^2 - 1
    beta = np.sqrt(-omega / gap)
    c = np.sqrt(k * k / gap)

    def g(a):
        return c * jacobi(beta * a, k, kc).cn - 1.0

    return g, beta


def solve_an(graph, omega, n, kn=None):
    """Smallest positive ``a`` with ``sqrt(k^2/(2k^2-1)) cn(sqrt(|w|/(2k^2-1)) a; k) = 1``.

    On ``(0, K/beta)`` the left side falls monotonically from ``sqrt(k^2/(2k^2-1)) > 1``
    to 0, so the root there is unique and is the smallest positive one.
    """
    if not omega < 0:
        raise DomainError("a_n is defined only for omega < 0")
    root = solve_kn(graph, omega, n) if kn is None else kn
    g, beta = _an_equation(omega, root)
    hi = complete_K(root.value, root.kc) / beta
    a = _refine(g, 0.0, hi)
    if not 0 < a < hi:
        raise NoSolution("no root of the a_n equation in (0, K/beta)")
    return MatchingRoot(float(a), (0.0, float(hi)), float(abs(g(a))), n, float("nan"))


def _tail_soliton(omega, b=0.0):
    def tail(y):
        return phi_sech(y, omega, b)

    def tail_prime(y):
        return phi_sech_prime(y, omega, b)

    return tail, tail_prime


def build_cn_pm_state(graph, omega, n, sign):
    """``Phi^+-_{omega,n} = ((-1)^n u_cn(x -+ a_n; k_n), phi(y))`` for omega < 0.

    ``sign=+1`` shifts the head by ``+a_n`` (``Phi^+``), ``sign=-1`` by ``-a_n``.
    """
    if not omega < 0:
        raise DomainError("Phi^+- exist only for omega < 0 (no decaying tail soliton otherwise)")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    kn = solve_kn(graph, omega, n)
    an = solve_an(graph, omega, n, kn)
    return _cn_pm_from_params(graph, omega, n, sign, kn, an.value)


def _cn_pm_from_params(graph, omega, n, sign, kn, a):
    head, head_prime = _cn_head(omega, kn, sign * a, (-1) ** n)
    tail, tail_prime = _tail_soliton(omega)
    fam = Family.CN_PLUS if sign > 0 else Family.CN_MINUS
    desc = FamilyDescriptor(fam, float(omega), n, k=kn.value, m1=kn.m1, a=float(a), b=0.0,
                            sign=sign)
    return TadpoleState(graph, head, tail, head_prime, tail_prime, descriptor=desc,
                        tail_scale=1 / np.sqrt(-omega))


# --- dn families -------------------------------------------------------------

def _dn_floor_bound():
    """Largest kappa^2 below which neither dn matching equation can vanish.

    sn^2 cn^2 <= 1/4 gives ``3 kappa^4/4 < 1 - kappa^2`` (first family) and
    ``3 kappa^4/4 < (1 - kappa^2)^2 <= dn^4`` (second family).
    """
    return min((-1 + 2) / 1.5, 1 / (1 + np.sqrt(3) / 2))


def _dn_parts(z, logm1):
    m1 = np.exp(logm1)
    kappa = np.sqrt(1 - m1)
    kc = np.sqrt(m1)
    w = z / np.sqrt(1 + m1)
    sn, cn, dn = jacobi(w, kappa, kc)
    return m1, kappa, kc, w, sn, cn, dn


def dn_matching(z, logm1, family):
    """Cleared matching function for the dn families (no poles in kappa).

    First family: ``3 kappa^4 sn^2 cn^2 - (1 - kappa^2)``.
    Second family: ``3 kappa^4 sn^2 cn^2 - dn^4``.
    Arguments of sn, cn, dn are ``z / sqrt(2 - kappa^2)``; ``1 - cn^2`` is written
    as ``sn^2``, which is exact and keeps relative precision for small ``z``.
    """
    m1, kappa, _, _, sn, cn, dn = _dn_parts(z, logm1)
    core = 3 * kappa ** 4 * (sn * cn) ** 2
    return core - (m1 if family is Family.DN0 else dn ** 4)


def dn_residual(z, m1, family):
    """Residual of the dn matching equation in its stated form ``lhs - 1``."""
    _, kappa, _, _, sn, cn, dn = _dn_parts(z, np.log(m1))
    core = 3 * kappa ** 4 * (sn * cn) ** 2
    denom = m1 if family is Family.DN0 else dn ** 4
    return float(np.abs(core / denom - 1.0))


def _quarter_phase(z, logm1):
    m1 = np.exp(logm1)
    return z / (np.sqrt(1 + m1) * complete_K(np.sqrt(1 - m1), np.sqrt(m1)))


def _scan_nodes(z, lo, hi, samples, per_piece):
    # monotone in logm1: breakpoints where sn*cn vanishes at the vertex
    th_lo, th_hi = _quarter_phase(z, lo), _quarter_phase(z, hi)
    breaks = []
    for j in range(int(np.floor(th_lo)) + 1, int(np.ceil(th_hi))):
        breaks.append(brentq(lambda v: _quarter_phase(z, v) - j, lo, hi, xtol=_XTOL))
    edges = np.array([lo, *breaks, hi])
    kappa_grid = np.linspace(KAPPA_FLOOR, 1 - KAPPA_CLAMP, samples)
    nodes = [
        np.log((1 - kappa_grid) * (1 + kappa_grid)),
        np.linspace(lo, hi, samples),
        edges,
    ]
    for a, b in zip(edges[:-1], edges[1:]):
        nodes.append(np.linspace(a, b, per_piece))
    nodes = np.unique(np.clip(np.concatenate(nodes), lo, hi))
    return nodes, edges


def dn_roots_z(z, family, samples=SCAN_SAMPLES, per_piece=PIECE_SAMPLES, clamp=KAPPA_CLAMP):
    """All roots of a dn matching equation at ``z = L sqrt|omega|``, kappa decreasing.

    Returns a list of ``(m1, (u_lo, u_hi))`` with ``u = log m1``. The search
    covers ``kappa in [KAPPA_FLOOR, 1 - clamp]``; below the floor there are no
    roots. The interval is split where ``sn cn`` vanishes at the vertex (the
    cleared function is strictly negative there), each piece is sampled, and the
    maximum of every piece is refined so that a root pair about to merge is
    not missed.
    """
    if family not in (Family.DN0, Family.DN1):
        raise ValueError(f"not a dn family: {family}")
    if not z > 0:
        raise DomainError("z = L sqrt|omega| must be positive")
    lo = float(np.log(clamp * (2 - clamp)))
    hi = float(np.log((1 - KAPPA_FLOOR) * (1 + KAPPA_FLOOR)))
    nodes, edges = _scan_nodes(z, lo, hi, samples, per_piece)
    vals = dn_matching(z, nodes, family)

    def f(v):
        return float(dn_matching(z, v, family))

    extra_u, extra_f = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        sel = np.flatnonzero((nodes >= a) & (nodes <= b))
        if sel.size < 3:
            continue
        j = sel[np.argmax(vals[sel])]
        if vals[j] > 0:
            continue
        left = nodes[max(j - 1, sel[0])]
        right = nodes[min(j + 1, sel[-1])]
        if right <= left:
            continue
        opt = minimize_scalar(lambda v: -f(v), bounds=(left, right), method="bounded",
                              options={"xatol": 1e-14})
        if -opt.fun > 0:
            extra_u.append(float(opt.x))
            extra_f.append(-float(opt.fun))
    if extra_u:
        nodes = np.concatenate([nodes, extra_u])
        vals = np.concatenate([vals, extra_f])
        order = np.argsort(nodes)
        nodes, vals = nodes[order], vals[order]

    roots = []
    sgn = np.sign(vals)
    for i in np.flatnonzero(sgn[:-1] * sgn[1:] < 0):
        a, b = float(nodes[i]), float(nodes[i + 1])
        v = _refine(f, a, b)
        roots.append((float(np.exp(v)), (a, b)))
    for i in np.flatnonzero(vals == 0):
        roots.append((float(np.exp(nodes[i])), (float(nodes[i]), float(nodes[i]))))
    roots.sort(key=lambda r: r[0])  # m1 increasing == kappa decreasing
    return roots


def dn_root_labels(z, raw):
    """Branch labels ``(piece, rank)`` for roots returned by :func:`dn_roots_z`.

    ``piece`` is ``floor(z / (sqrt(2 - kappa^2) K(kappa)))``; the matching
    functions are strictly negative where this quantity is an integer, so a
    root never changes piece as ``z`` varies. ``rank`` orders roots within a
    piece by kappa (decreasing). Labels change only when two roots of a piece
    annihilate.
    """
    labels, seen = [], {}
    for m1, (a, b) in raw:
        mid = 0.5 * (a + b) if b > a else np.log(m1)
        piece = int(np.floor(_quarter_phase(z, mid)))
        rank = seen.get(piece, 0)
        seen[piece] = rank + 1
        labels.append((piece, rank))
    return labels


def _root_records(z, family, raw):
    out = []
    for idx, (m1, (a, b)) in enumerate(raw, start=1):
        kappa = float(np.sqrt(1 - m1))
        bracket = (float(np.sqrt(1 - np.exp(b))), float(np.sqrt(1 - np.exp(a))))
        out.append(MatchingRoot(kappa, bracket, dn_residual(z, m1, family), idx, m1))
    return out


def _z(graph, omega):
    if not omega < 0:
        raise DomainError("dn states exist only for omega < 0")
    return graph.L * np.sqrt(-omega)


def solve_kappa0_roots(graph, omega, **scan):
    """Roots ``kappa_{0,n}`` of the first dn matching equation, in decreasing order.

    There is always at least one root (the edge-soliton modulus near 1).
    """
    z = _z(graph, omega)
    roots = _root_records(z, Family.DN0, dn_roots_z(z, Family.DN0, **scan))
    if not roots:
        raise NoSolution(f"internal inconsistency: no kappa_0 root at L sqrt|omega| = {z}")
    return roots


def solve_kappa1_roots(graph, omega, **scan):
    """Roots ``kappa_{1,n}`` of the second dn matching equation, in decreasing order.

    Empty for small ``L sqrt|omega|``.
    """
    z = _z(graph, omega)
    return _root_records(z, Family.DN1, dn_roots_z(z, Family.DN1, **scan))


def shift_from_rhs(rhs, omega):
    """``|b|`` with ``cosh^-2(sqrt|omega| b) = rhs``, for ``rhs in (0, 1]``."""
    if not 0 < rhs <= 1:
        raise DomainError(f"cosh^-2 = {rhs} has no real solution")
    return float(np.arctanh(np.sqrt(1 - rhs)) / np.sqrt(-omega))


def _b_from_parts(omega, root, family, z):
    m1, kappa = root.m1, root.value
    _, _, _, _, sn, cn, dn = _dn_parts(z, np.log(m1))
    if family is Family.DN0:
        # 1 - u_dn(L)^2 / 2|w| = (m1 + kappa^2 sn^2) / (1 + m1)
        gap = (m1 + kappa ** 2 * sn ** 2) / (1 + m1)
        slope_sign = np.sign(-sn * cn)
    else:
        # u_dn(L - T/2) = amp * kc / dn(w): gap = (dn^2 - m1 kappa^2 sn^2) / (dn^2 (1 + m1))
        gap = (dn ** 2 - m1 * kappa ** 2 * sn ** 2) / (dn ** 2 * (1 + m1))
        slope_sign = np.sign(sn * cn)
    t = np.arctanh(np.sqrt(gap))
    return float(slope_sign * t / np.sqrt(-omega)), int(slope_sign if slope_sign else 1)


def solve_b0(graph, omega, kappa_root):
    """Tail shift ``b_{0,n}`` and its sign.

    ``|b|`` solves ``cosh^-2(sqrt|w| b) = u_dn(L)^2 / 2|w|``; the sign is that of
    ``u_dn'(L)``, which is what the flux balance at the vertex requires.
    """
    return _b_from_parts(omega, kappa_root, Family.DN0, _z(graph, omega))


def solve_b1(graph, omega, kappa_root):
    """Tail shift ``b_{1,n}`` and its sign; as :func:`solve_b0` at ``x = L - T_dn/2``."""
    return _b_from_parts(omega, kappa_root, Family.DN1, _z(graph, omega))


def _dn_state(graph, omega, family, index, root, b):
    kappa, kc = root.value, root.kc
    beta = np.sqrt(-omega / (1 + root.m1))
    a = 0.0 if family is Family.DN0 else float(complete_K(kappa, kc) / beta)

    def head(x):
        return u_dn(x, omega, kappa, kc, a)

    def head_prime(x):
        return u_dn_prime(x, omega, kappa, kc, a)

    tail, tail_prime = _tail_soliton(omega, b)
    desc = FamilyDescriptor(family, float(omega), index, kappa=kappa, m1=root.m1, a=a,
                            b=float(b), sign=int(np.sign(b)) if b else 1)
    return TadpoleState(graph, head, tail, head_prime, tail_prime, descriptor=desc,
                        tail_scale=1 / np.sqrt(-omega), tail_center=float(b))


def _pick(roots, index, what):
    if not 1 <= index <= len(roots):
        raise NoSolution(
            f"{what} has {len(roots)} root(s); index {index} out of range",
            condition="index > number of roots",
        )
    return roots[index - 1]


def build_xi0_state(graph, omega, index, roots=None):
    """``Xi_{omega,0,n} = (u_dn(x; kappa_{0,n}), phi(y - b_{0,n}))``."""
    roots = solve_kappa0_roots(graph, omega) if roots is None else roots
    root = _pick(roots, index, "the first dn matching equation")
    b, _ = solve_b0(graph, omega, root)
    return _dn_state(graph, omega, Family.DN0, index, root, b)


def build_xi1_state(graph, omega, index, roots=None):
    """``Xi_{omega,1,n} = (u_dn(x - T_dn/2; kappa_{1,n}), phi(y - b_{1,n}))``."""
    roots = solve_kappa1_roots(graph, omega) if roots is None else roots
    root = _pick(roots, index, "the second dn matching equation")
    b, _ = solve_b1(graph, omega, root)
    return _dn_state(graph, omega, Family.DN1, index, root, b)


# --- dispatch ----------------------------------------------------------------

def build_state(graph, family, omega, n, **kw):
    """Solve and construct the state of ``family`` with mode/index ``n``."""
    family = Family(family)
    if family is Family.CN_VANISHING_TAIL:
        return build_cn_state(graph, omega, n)
    if family is Family.CN_PLUS:
        return build_cn_pm_state(graph, omega, n, +1)
    if family is Family.CN_MINUS:
        return build_cn_pm_state(graph, omega, n, -1)
    if family is Family.DN0:
        return build_xi0_state(graph, omega, n, **kw)
    if family is Family.DN1:
        return build_xi1_state(graph, omega, n, **kw)
    raise ValueError(f"no builder for family {family}")


def state_from_descriptor(graph, desc):
    """Rebuild a state from stored parameters without re-solving any equation."""
    fam, omega, n = desc.family, desc.omega, desc.n
    m1 = desc.m1
    if m1 is None:
        mod = desc.k_or_kappa
        m1 = (1 - mod) * (1 + mod)
    root = MatchingRoot(desc.k_or_kappa, (np.nan, np.nan), np.nan, n, m1)
    if fam is Family.CN_VANISHING_TAIL:
        return _cn_vanishing_state(graph, omega, n, root)
    if fam in (Family.CN_PLUS, Family.CN_MINUS):
        sign = 1 if fam is Family.CN_PLUS else -1
        return _cn_pm_from_params(graph, omega, n, sign, root, desc.a)
    if fam in (Family.DN0, Family.DN1):
        return _dn_state(graph, omega, fam, n, root, desc.b)
    raise ValueError(f"cannot rebuild family {fam}")


def head_asymmetry(state, samples=4001):
    """``max |u(x) + u(-x)|`` over the head: zero for an odd head."""
    x = np.linspace(0, state.graph.L, samples)
    return float(np.max(np.abs(state.head(x) + state.head(-x))))
