"""Tadpole graph, states on it, vertex conditions and the mass/energy functionals.

Coordinates: ``x in [-L, L]`` on the ring (head), endpoints glued at the vertex;
``y in [0, inf)`` on the half-line (tail), ``y = 0`` at the vertex.
"""

import json
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Optional

import numpy as np
from scipy.integrate import simpson
from scipy.interpolate import CubicSpline

from .errors import NonNormalizable, TadpoleError

SCHEMA_VERSION = 1
FD_STEP = 1e-3
# Tail sampled out to TAIL_DECAY_LENGTHS / sqrt|omega| past the soliton centre.
TAIL_DECAY_LENGTHS = 40.0


@dataclass(frozen=True)
class TadpoleGraph:
    """Ring of half-length ``L`` with a half-line attached at ``x = +-L``.

    ``delta_strength`` is the coefficient ``alpha`` of the vertex condition
    ``-u'(L) + u'(-L) + eta'(0) = alpha u(L)``; zero gives Kirchhoff coupling.
    ``tail_grid_cutoff`` overrides the automatic truncation of the tail grid.
    """

    L: float
    delta_strength: float = 0.0
    tail_grid_cutoff: Optional[float] = None
    grid_step: float = 1e-3

    def __post_init__(self):
        if not self.L > 0:
            raise ValueError(f"L must be positive, got {self.L}")
        if not self.grid_step > 0:
            raise ValueError("grid_step must be positive")

    @property
    def alpha(self):
        return self.delta_strength

    def eigenvalue(self, n):
        return (n * np.pi / self.L) ** 2

    def head_grid(self, step=None):
        step = self.grid_step if step is None else step
        # odd point count keeps composite Simpson at full order
        m = int(np.ceil(2 * self.L / step / 2)) * 2 + 1
        return np.linspace(-self.L, self.L, m)

    def with_step(self, step):
        return replace(self, grid_step=step)


class Family(str, Enum):
    CN_VANISHING_TAIL = "CnVanishingTail"
    CN_PLUS = "CnPlus"
    CN_MINUS = "CnMinus"
    DN0 = "Dn0"
    DN1 = "Dn1"
    # linear objects, not standing waves of the cubic problem
    EIGENSTATE = "Eigenstate"
    RESONANCE = "Resonance"


@dataclass(frozen=True)
class FamilyDescriptor:
    """Symbolic identity of a state: family tag, frequency, label and solved parameters.

    ``n`` is the mode number for cn families and the position in the
    decreasing-kappa root list for dn families. ``m1`` stores ``1 - k^2`` (or
    ``1 - kappa^2``) at full precision.
    """

    family: Family
    omega: float
    n: int
    k: Optional[float] = None
    kappa: Optional[float] = None
    m1: Optional[float] = None
    a: Optional[float] = None
    b: Optional[float] = None
    sign: int = 1

    @property
    def k_or_kappa(self):
        return self.k if self.k is not None else self.kappa

    def params(self):
        return {"k": self.k, "kappa": self.kappa, "a": self.a, "b": self.b,
                "sign": self.sign, "m1": self.m1}


def _zero(x):
    return np.zeros_like(np.asarray(x, dtype=float))


def _one(x):
    return np.ones_like(np.asarray(x, dtype=float))


@dataclass(frozen=True, eq=False)
class TadpoleState:
    """A function ``(u, eta)`` on the tadpole, held as closed-form callables.

    ``head``/``tail`` map coordinate arrays to (possibly complex) values;
    ``head_prime``/``tail_prime`` are analytic derivatives when known.
    Samples are always regenerated from the callables, never cached.

    ``tail_scale`` is the decay length of the tail (``None`` for an identically
    zero or non-decaying tail) and ``tail_center`` the position of its maximum.
    """

    graph: TadpoleGraph
    head: Callable
    tail: Callable
    head_prime: Optional[Callable] = None
    tail_prime: Optional[Callable] = None
    descriptor: Optional[FamilyDescriptor] = None
    square_integrable: bool = True
    tail_scale: Optional[float] = None
    tail_center: float = 0.0
    meta: dict = field(default_factory=dict)

    @property
    def omega(self):
        return None if self.descriptor is None else self.descriptor.omega

    @property
    def is_complex(self):
        return bool(np.iscomplexobj(self.head(np.zeros(1))) or
                    np.iscomplexobj(self.tail(np.zeros(1))))

    def tail_cutoff(self):
        if self.graph.tail_grid_cutoff is not None:
            return self.graph.tail_grid_cutoff
        if self.tail_scale is None:
            return 1.0
        return max(self.tail_center, 0.0) + TAIL_DECAY_LENGTHS * self.tail_scale

    def tail_grid(self, step=None):
        step = self.graph.grid_step if step is None else step
        if self.tail_scale is not None:
            step = step * self.tail_scale
        y_max = self.tail_cutoff()
        m = int(np.ceil(y_max / step / 2)) * 2 + 1
        return np.linspace(0.0, y_max, max(m, 3))

    def sample(self, step=None):
        """Return ``(x, u, y, eta)`` on the graph grid."""
        x = self.graph.head_grid(step)
        y = self.tail_grid(step)
        return x, self.head(x), y, self.tail(y)

    def head_derivative(self, x):
        if self.head_prime is not None:
            return self.head_prime(x)
        return _fd_first(self.head, np.asarray(x, dtype=float))

    def tail_derivative(self, y):
        if self.tail_prime is not None:
            return self.tail_prime(y)
        return _fd_first(self.tail, np.asarray(y, dtype=float))

    # --- transformations ---------------------------------------------------

    def scaled(self, head=1.0, tail=1.0):
        """Multiply the head and tail components by constants."""
        h, t, hp, tp = self.head, self.tail, self.head_prime, self.tail_prime
        return replace(
            self,
            head=lambda x: head * h(x),
            tail=lambda y: tail * t(y),
            head_prime=None if hp is None else (lambda x: head * hp(x)),
            tail_prime=None if tp is None else (lambda y: tail * tp(y)),
            meta={**self.meta, "scaled": (head, tail)},
        )

    def with_phase(self, theta):
        """Global phase rotation ``exp(i theta) * state``."""
        c = np.exp(1j * theta)
        return self.scaled(c, c)

    # --- serialization -----------------------------------------------------

    def to_dict(self, step=None):
        d = self.descriptor
        if d is None:
            raise TadpoleError("only states with a family descriptor can be serialized")
        x, u, y, eta = self.sample(step)
        if np.iscomplexobj(u) or np.iscomplexobj(eta):
            raise TadpoleError("state serialization covers real-valued states only")
        p = d.params()
        return {
            "schema_version": SCHEMA_VERSION,
            "family": d.family.value,
            "omega": d.omega,
            "n": d.n,
            "params": {key: p[key] for key in ("k", "kappa", "a", "b", "sign", "m1")},
            "graph": {"L": self.graph.L, "alpha": self.graph.delta_strength,
                      "grid_step": self.graph.grid_step},
            "grid": {"x": x.tolist(), "u": u.tolist(), "y": y.tolist(), "eta": eta.tolist()},
        }

    def to_json(self, step=None):
        return json.dumps(self.to_dict(step), sort_keys=True)

    @classmethod
    def from_samples(cls, graph, x, u, y, eta, **kwargs):
        """State backed by cubic-spline interpolation of sampled arrays."""
        hs = CubicSpline(x, u)
        ts = CubicSpline(y, eta)
        return cls(graph, hs, ts, hs.derivative(), ts.derivative(), **kwargs)


def descriptor_from_dict(data):
    """Inverse of the descriptor part of :meth:`TadpoleState.to_dict`."""
    if data.get("schema_version") != SCHEMA_VERSION:
        raise TadpoleError(f"unsupported schema_version {data.get('schema_version')!r}")
    for key in ("family", "omega", "n", "params", "graph"):
        if key not in data:
            raise TadpoleError(f"state file is missing field {key!r}")
    p = data["params"]
    try:
        family = Family(data["family"])
    except ValueError:
        raise TadpoleError(f"unknown family {data['family']!r}") from None
    desc = FamilyDescriptor(
        family=family, omega=float(data["omega"]), n=int(data["n"]),
        k=p.get("k"), kappa=p.get("kappa"), m1=p.get("m1"),
        a=p.get("a"), b=p.get("b"), sign=int(p.get("sign", 1)),
    )
    g = data["graph"]
    graph = TadpoleGraph(L=float(g["L"]), delta_strength=float(g.get("alpha", 0.0)),
                         grid_step=float(g.get("grid_step", 1e-3)))
    return graph, desc


# --- finite differences -------------------------------------------------------

def _fd_first(f, x, h=FD_STEP):
    return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h)


_OFFSETS = np.arange(-2, 3)
_W2 = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0
_W1 = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0


def fd_second(f, x, h=FD_STEP):
    """Fourth-order central second difference.

    The nodes ``x + j h`` are rounded to doubles; each sample is corrected to
    first order for its rounding offset, which otherwise dominates the error
    (an ulp in ``x`` times ``f'`` amplified by ``1/h^2``).
    """
    x = np.asarray(x, dtype=float)
    pts = x[..., None] + _OFFSETS * h
    vals = f(pts)
    delta = (pts - x[..., None]) - _OFFSETS * h
    slope = vals @ _W1 / h
    vals = vals - slope[..., None] * delta
    return vals @ _W2 / (h * h)


_ONE_SIDED = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / 12.0


def fd_one_sided(f, x0, direction, h=FD_STEP):
    """Fourth-order one-sided first derivative at ``x0`` using points ``x0 + j*direction*h``."""
    pts = x0 + direction * h * np.arange(5)
    return direction * np.dot(_ONE_SIDED, f(pts)) / h


# --- linear spectrum ----------------------------------------------------------

@dataclass(frozen=True)
class LinearEigenpair:
    n: int
    lambda_n: float
    eigenstate: TadpoleState


def linear_eigenpair(graph, n):
    """Embedded eigenvalue ``(n pi / L)^2`` with eigenfunction ``(sin(n pi x/L), 0)``."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    q = n * np.pi / graph.L
    state = TadpoleState(
        graph,
        head=lambda x: np.sin(q * np.asarray(x, dtype=float)),
        tail=_zero,
        head_prime=lambda x: q * np.cos(q * np.asarray(x, dtype=float)),
        tail_prime=_zero,
        descriptor=FamilyDescriptor(Family.EIGENSTATE, q * q, n),
    )
    return LinearEigenpair(n, q * q, state)


def resonance_state(graph):
    """The threshold resonance ``(1, 1)``: bounded, annihilated by H, not in L^2."""
    return TadpoleState(
        graph, head=_one, tail=_one, head_prime=_zero, tail_prime=_zero,
        descriptor=FamilyDescriptor(Family.RESONANCE, 0.0, 0),
        square_integrable=False,
    )


def zero_state(graph):
    return TadpoleState(graph, _zero, _zero, _zero, _zero)


# --- vertex conditions -------------------------------------------------------

def vertex_values(state, method="analytic"):
    """``(u(L), u(-L), eta(0), u'(L), u'(-L), eta'(0))`` at the vertex.

    ``method="fd"`` uses one-sided fourth-order differences from inside each edge,
    independent of any analytic derivative.
    """
    L = state.graph.L
    uL = state.head(np.array([L]))[0]
    umL = state.head(np.array([-L]))[0]
    eta0 = state.tail(np.array([0.0]))[0]
    if method == "analytic":
        duL = state.head_derivative(np.array([L]))[0]
        dumL = state.head_derivative(np.array([-L]))[0]
        deta0 = state.tail_derivative(np.array([0.0]))[0]
    elif method == "fd":
        duL = fd_one_sided(state.head, L, -1)
        dumL = fd_one_sided(state.head, -L, +1)
        deta0 = fd_one_sided(state.tail, 0.0, +1)
    else:
        raise ValueError(f"unknown method {method!r}")
    return uL, umL, eta0, duL, dumL, deta0


def bc_residual(graph, state, method="analytic"):
    """Residuals of continuity and flux balance at the vertex.

    Returns ``(max(|u(L)-u(-L)|, |u(L)-eta(0)|), |-u'(L) + u'(-L) + eta'(0) - alpha u(L)|)``
    with ``alpha`` taken from ``graph``.
    """
    state = state if state.graph == graph else replace(state, graph=graph)
    uL, umL, eta0, duL, dumL, deta0 = vertex_values(state, method)
    continuity = max(abs(uL - umL), abs(uL - eta0))
    flux = abs(-duL + dumL + deta0 - graph.delta_strength * uL)
    return float(continuity), float(flux)


# --- functionals -------------------------------------------------------------

def _require_l2(state):
    if not state.square_integrable:
        raise NonNormalizable("state is not square integrable (e.g. a threshold resonance)")


def _integrate(values, grid):
    return float(simpson(values, x=grid))


def inner(a, b, step=None):
    """Graph inner product ``(u_a, u_b)_{L^2(-L,L)} + (eta_a, eta_b)_{L^2(R+)}``."""
    _require_l2(a)
    _require_l2(b)
    x = a.graph.head_grid(step)
    ya, yb = a.tail_grid(step), b.tail_grid(step)
    y = ya if ya[-1] >= yb[-1] else yb
    head = simpson(np.conj(a.head(x)) * b.head(x), x=x)
    tail = simpson(np.conj(a.tail(y)) * b.tail(y), x=y)
    return head + tail


def distance(a, b, step=None):
    """L^2 distance between two states on the same graph."""
    x = a.graph.head_grid(step)
    ya, yb = a.tail_grid(step), b.tail_grid(step)
    y = ya if ya[-1] >= yb[-1] else yb
    head = _integrate(np.abs(a.head(x) - b.head(x)) ** 2, x)
    tail = _integrate(np.abs(a.tail(y) - b.tail(y)) ** 2, y)
    return float(np.sqrt(head + tail))


def mass(state, step=None):
    """``M = int |u|^2 dx + int |eta|^2 dy`` by composite Simpson quadrature.

    The tail is truncated where the sech envelope is below ~exp(-40).

    Raises
    ------
    NonNormalizable
        For states flagged as not square integrable.
    """
    _require_l2(state)
    x, u, y, eta = state.sample(step)
    return _integrate(np.abs(u) ** 2, x) + _integrate(np.abs(eta) ** 2, y)


def energy(state, step=None):
    """``E = 1/2 int|u'|^2 - 1/4 int|u|^4 + 1/2 int|eta'|^2 - 1/4 int|eta|^4``."""
    _require_l2(state)
    x, u, y, eta = state.sample(step)
    du = state.head_derivative(x)
    deta = state.tail_derivative(y)
    head = _integrate(0.5 * np.abs(du) ** 2 - 0.25 * np.abs(u) ** 4, x)
    tail = _integrate(0.5 * np.abs(deta) ** 2 - 0.25 * np.abs(eta) ** 4, y)
    return head + tail


def count_nodes(state, samples=20000):
    """Sign changes of the (real) head around the ring."""
    L = state.graph.L
    # irrational offset keeps exact zeros (e.g. x = 0, +-L) off the grid
    x = -L + (np.arange(samples) + 0.3819660112501051) * (2 * L / samples)
    u = np.real(state.head(x))
    s = np.sign(u)
    return int(np.count_nonzero(s != np.roll(s, 1)))
