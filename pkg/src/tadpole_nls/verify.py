"""Independent verification: pointwise stationary residuals, vertex checks, linearizations.

Second derivatives are always taken by fourth-order central differences of
the closed-form callables, never from the analytic derivatives used during
construction.
"""

from dataclasses import asdict, dataclass, field, replace
from enum import Enum

import numpy as np

from .elliptic import INV_SQRT2, cn0_rate, u_cn0, u_cn0_prime
from .graph import TadpoleState, bc_residual, fd_second
from .families import build_cn_state

TOL_ODE = 1e-8
TOL_BC = 1e-9
FD_H = 1e-3


@dataclass
class ResidualReport:
    """Maxima of the edge equations and vertex residuals; ``pass_`` is serialized as ``pass``."""

    max_ode_residual_head: float
    max_ode_residual_tail: float
    continuity_residual: float
    flux_residual: float
    grid_step: float
    pass_: bool
    tol_ode: float = TOL_ODE
    tol_bc: float = TOL_BC
    extras: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.pass_

    def to_dict(self):
        d = asdict(self)
        d["pass"] = d.pop("pass_")
        return d


def _interior(grid, h, lo, hi):
    return grid[(grid >= lo + 2 * h) & (grid <= hi - 2 * h)]


def _edge_grids(state, h):
    x = _interior(state.graph.head_grid(h), h, -state.graph.L, state.graph.L)
    y_full = state.tail_grid(h)
    y = y_full[y_full >= 2 * h]
    return x, y


def _operator_values(f, pts, omega, potential, h):
    # (-d^2 - omega - potential) f at pts
    return -fd_second(f, pts, h) - omega * f(pts) - potential * f(pts)


def _max_abs(v):
    return float(np.max(np.abs(v))) if np.size(v) else 0.0


def stationary_residual(graph, state, omega, h=FD_H, tol_ode=TOL_ODE, tol_bc=TOL_BC,
                        nonlinear=True):
    """Check ``-u'' - |u|^2 u = omega u`` on both edges plus the vertex conditions.

    With ``nonlinear=False`` the cubic term is dropped (linear eigenvalue check).
    """
    state = state if state.graph == graph else replace(state, graph=graph)
    x, y = _edge_grids(state, h)
    c = 1.0 if nonlinear else 0.0
    res_head = _operator_values(state.head, x, omega, c * np.abs(state.head(x)) ** 2, h)
    res_tail = _operator_values(state.tail, y, omega, c * np.abs(state.tail(y)) ** 2, h)
    cont, flux = bc_residual(graph, state, "analytic")
    cont_fd, flux_fd = bc_residual(graph, state, "fd")
    rh, rt = _max_abs(res_head), _max_abs(res_tail)
    ok = rh < tol_ode and rt < tol_ode and cont < tol_bc and flux < tol_bc
    return ResidualReport(rh, rt, cont, flux, h, bool(ok), tol_ode, tol_bc,
                          extras={"continuity_fd": cont_fd, "flux_fd": flux_fd})


class OperatorKind(str, Enum):
    L1 = "L1"
    L2 = "L2"


@dataclass(frozen=True)
class LinearizationOperator:
    """``L1 = H - omega - 3|Sigma|^2`` or ``L2 = H - omega - |Sigma|^2``, acting per edge."""

    kind: OperatorKind
    omega: float
    background: TadpoleState

    @property
    def coupling(self):
        return 3.0 if OperatorKind(self.kind) is OperatorKind.L1 else 1.0


def apply_linearization(op, direction, h=FD_H):
    """Sample ``op(direction)`` on the interior edge grids.

    The result is a spline-backed state; the raw samples are in
    ``meta["samples"]`` as ``(x, head_values, y, tail_values)``. Vertex
    conditions on ``direction`` are not part of this and are checked separately.
    """
    bg = op.background
    x, y = _edge_grids(direction, h)
    head = _operator_values(direction.head, x, op.omega,
                            op.coupling * np.abs(bg.head(x)) ** 2, h)
    tail = _operator_values(direction.tail, y, op.omega,
                            op.coupling * np.abs(bg.tail(y)) ** 2, h)
    if np.iscomplexobj(head) or np.iscomplexobj(tail):
        out = TadpoleState(direction.graph, _interp(x, head), _interp(y, tail))
    else:
        out = TadpoleState.from_samples(direction.graph, x, head, y, tail)
    return replace(out, meta={"samples": (x, head, y, tail)})


def _interp(grid, vals):
    def f(t):
        t = np.asarray(t, dtype=float)
        return np.interp(t, grid, vals.real) + 1j * np.interp(t, grid, vals.imag)
    return f


def linearization_residual(op, direction, h=FD_H):
    """``max |op(direction)|`` over the interior sample points of both edges."""
    _, head, _, tail = apply_linearization(op, direction, h).meta["samples"]
    return max(_max_abs(head), _max_abs(tail))


def resonance_tail_constant(graph, n):
    """Vertex value of the head of ``X_n^res``: ``gamma^2 / sqrt2`` with ``gamma = 2nK(1/sqrt2)/L``."""
    return cn0_rate(graph.L, n) ** 2 * INV_SQRT2


def pitchfork_resonance_state(graph, n):
    """``X_n^res = ((-1)^n u_cn0'(x - L/2n), c)`` with the tail constant ``c`` fixed by continuity."""
    L = graph.L
    parity = (-1) ** n
    shift = L / (2 * n)
    g = cn0_rate(L, n)
    c = resonance_tail_constant(graph, n)

    def head(x):
        return parity * u_cn0_prime(x, L, n, shift)

    def head_prime(x):
        # u_cn0'' = -u_cn0^3 at zero frequency
        return -parity * u_cn0(x, L, n, shift) ** 3

    def tail(y):
        return np.full_like(np.asarray(y, dtype=float), c)

    def tail_prime(y):
        return np.zeros_like(np.asarray(y, dtype=float))

    return TadpoleState(graph, head, tail, head_prime, tail_prime,
                        square_integrable=False, meta={"gamma": g})


def check_pitchfork_resonance(graph, n, h=FD_H, tol_ode=1e-7, tol_bc=TOL_BC):
    """Verify ``L_{1,0}(Phi_{0,n}) X_n^res = 0`` and the vertex conditions of ``X_n^res``.

    ``extras`` records the tail constant used, the continuity defect the value
    ``gamma^2`` would leave, and the flag that the resonance is not square
    integrable.
    """
    phi0 = build_cn_state(graph, 0.0, n)
    X = pitchfork_resonance_state(graph, n)
    op = LinearizationOperator(OperatorKind.L1, 0.0, phi0)
    _, head, _, tail = apply_linearization(op, X, h).meta["samples"]
    cont, flux = bc_residual(graph, X, "analytic")
    cont_fd, flux_fd = bc_residual(graph, X, "fd")
    rh, rt = _max_abs(head), _max_abs(tail)
    ok = rh < tol_ode and rt < tol_ode and cont < tol_bc and flux < tol_bc
    g = X.meta["gamma"]
    extras = {
        "n": n,
        "tail_constant": resonance_tail_constant(graph, n),
        "gamma_squared": g * g,
        "continuity_with_gamma_squared": abs(X.head(np.array([graph.L]))[0] - g * g),
        "square_integrable": False,
        "continuity_fd": cont_fd,
        "flux_fd": flux_fd,
    }
    return ResidualReport(rh, rt, cont, flux, h, bool(ok), tol_ode, tol_bc, extras)


def closed_form_mismatch(state, x, u, y, eta):
    """Largest deviation of stored samples from the closed form on the same points."""
    du = np.abs(state.head(np.asarray(x, dtype=float)) - np.asarray(u))
    de = np.abs(state.tail(np.asarray(y, dtype=float)) - np.asarray(eta))
    return max(_max_abs(du), _max_abs(de))
