"""Frequency sweeps, branch tracking and the bifurcation diagram.

Branch labels follow the usual legend of the diagram:

* ``a`` -- cn states with vanishing tail (embedded solitons), born at ``lambda_n``;
* ``b`` -- the symmetry-breaking pair ``Phi^+-`` born at ``omega = 0``;
* ``c`` -- the edge soliton, first dn state of the first family, born at ``omega = 0``;
* ``d`` -- the remaining dn states, created in pairs at thresholds of ``L sqrt|omega|``.
"""

import csv
import io
import json
import logging
from dataclasses import asdict, dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Optional

import numpy as np

from .errors import DomainError, NoSolution
from .families import (
    _root_records, build_cn_pm_state, build_cn_state, build_xi0_state, build_xi1_state,
    dn_root_labels, dn_roots_z,
)
from .graph import Family, TadpoleGraph, distance, energy, mass

log = logging.getLogger(__name__)

CSV_COLUMNS = ("family", "n", "omega", "mass", "energy", "k_or_kappa", "a", "b")
THRESHOLD_TOL = 1e-8
DN_FAMILIES = (Family.DN0, Family.DN1)


@dataclass(frozen=True)
class BranchPoint:
    family: object  # FamilyDescriptor
    omega: float
    mass: float
    energy: float
    root_params: dict

    def row(self):
        d = self.family
        return {
            "family": d.family.value, "n": d.n, "omega": self.omega, "mass": self.mass,
            "energy": self.energy, "k_or_kappa": d.k_or_kappa, "a": d.a, "b": d.b,
        }


@dataclass
class Branch:
    family: Family
    n: int
    label: str
    points: list = field(default_factory=list)
    skipped: list = field(default_factory=list)  # (omega, reason)


class ThresholdKind(str, Enum):
    EMBEDDED_EIGENVALUE = "EmbeddedEigenvalue"
    PITCHFORK = "Pitchfork"
    EDGE_RESONANCE = "EdgeResonance"
    DN_PAIR_ALPHA = "DnPairAlpha"
    DN_PAIR_BETA = "DnPairBeta"


@dataclass(frozen=True)
class ThresholdRecord:
    """A bifurcation point. ``location`` is ``omega``, except for dn pair
    thresholds where it is ``L sqrt|omega|``."""

    kind: ThresholdKind
    location: float
    pair_indices: Optional[tuple] = None
    extras: dict = field(default_factory=dict)

    def to_dict(self):
        d = asdict(self)
        d["kind"] = self.kind.value
        d["pair_indices"] = None if self.pair_indices is None else list(self.pair_indices)
        return d


def branch_label(family, n):
    family = Family(family)
    if family is Family.CN_VANISHING_TAIL:
        return "a"
    if family in (Family.CN_PLUS, Family.CN_MINUS):
        return "b"
    if family is Family.DN0 and n == 1:
        return "c"
    return "d"


def _point(state, omega, extra=None):
    d = state.descriptor
    params = {"k_or_kappa": d.k_or_kappa, "m1": d.m1, "a": d.a, "b": d.b, "sign": d.sign}
    params.update(extra or {})
    return BranchPoint(d, float(omega), mass(state), energy(state), params)


def _cn_state(graph, family, omega, n):
    if family is Family.CN_VANISHING_TAIL:
        return build_cn_state(graph, omega, n)
    return build_cn_pm_state(graph, omega, n, 1 if family is Family.CN_PLUS else -1)


@lru_cache(maxsize=8192)
def _raw_roots(family, z):
    return tuple(dn_roots_z(z, family))


def sweep_family(graph, family, n, omega_grid):
    """Follow one branch over ``omega_grid`` (sorted).

    Cn branches are labelled by mode number and solved independently at each
    frequency. A dn branch starts at the ``n``-th root (decreasing kappa) at
    the first frequency where that many roots exist, and keeps the label
    ``(piece, rank)`` of :func:`dn_root_labels` from there on; it ends where its
    root annihilates with its partner at a pair threshold. Points where no
    state exists are recorded in ``skipped`` with the reason.
    """
    family = Family(family)
    grid = np.asarray(omega_grid, dtype=float)
    if np.any(np.diff(grid) < 0):
        raise ValueError("omega_grid must be sorted")
    branch = Branch(family, n, branch_label(family, n))
    label = None
    for omega in grid:
        omega = float(omega)
        try:
            if family not in DN_FAMILIES:
                branch.points.append(_point(_cn_state(graph, family, omega, n), omega))
                continue
            if not omega < 0:
                raise DomainError("dn states exist only for omega < 0")
            z = graph.L * np.sqrt(-omega)
            raw = _raw_roots(family, z)
            labels = dn_root_labels(z, raw)
            if label is None:
                if len(raw) < n:
                    raise NoSolution(f"{len(raw)} root(s) at L sqrt|omega| = {z:.6g}; "
                                     f"index {n} does not exist here")
                label = labels[n - 1]
            if label not in labels:
                raise NoSolution(f"root (piece {label[0]}, rank {label[1]}) absent at "
                                 f"L sqrt|omega| = {z:.6g}: the branch has ended")
            idx = labels.index(label)
            roots = _root_records(z, family, raw)
            build = build_xi0_state if family is Family.DN0 else build_xi1_state
            state = build(graph, omega, idx + 1, roots)
            branch.points.append(_point(state, omega, {"index_at_omega": idx + 1,
                                                        "piece": label[0], "rank": label[1]}))
        except (NoSolution, DomainError) as exc:
            branch.skipped.append((omega, str(exc)))
            log.info("skip %s n=%s omega=%g: %s", family.value, n, omega, exc)
    return branch


# --- dn pair thresholds ----------------------------------------------------------

def root_count(family, z):
    return len(_raw_roots(Family(family), float(z)))


def _new_pair(lo_roots, hi_roots):
    lo = np.log([m for m, _ in lo_roots]) if lo_roots else np.array([])
    hi = np.log([m for m, _ in hi_roots])
    gaps = np.array([np.min(np.abs(lo - v)) if lo.size else np.inf for v in hi])
    pair = sorted(int(i) + 1 for i in np.argsort(-gaps, kind="stable")[:2])
    return tuple(pair)


def detect_dn_pair_thresholds(graph, family_kind, z_range, dz=0.05, tol=THRESHOLD_TOL):
    """Values of ``L sqrt|omega|`` where the dn root count jumps by two.

    The count is scanned on a grid of spacing ``dz`` over ``z_range`` and each
    jump is bracketed by bisection on the count to width ``tol``. Records carry
    the indices (in the decreasing-kappa list just above the threshold) of the
    newly created pair and the corresponding ``omega`` for ``graph``. A lone
    first root entering from ``kappa = 1`` is reported with ``pair_indices=(1,)``;
    other irregular jumps are logged and reported with ``pair_indices=None``.
    """
    family = Family(family_kind)
    if family not in DN_FAMILIES:
        raise ValueError("pair thresholds exist for the dn families only")
    kind = ThresholdKind.DN_PAIR_ALPHA if family is Family.DN0 else ThresholdKind.DN_PAIR_BETA
    z0, z1 = map(float, z_range)
    zs = np.linspace(z0, z1, max(int(np.ceil((z1 - z0) / dz)), 1) + 1)
    counts = [root_count(family, z) for z in zs]
    out = []
    for i in np.flatnonzero(np.diff(counts)):
        lo, hi = zs[i], zs[i + 1]
        c_lo, c_hi = counts[i], counts[i + 1]
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if root_count(family, mid) == c_lo:
                lo = mid
            else:
                hi = mid
        c_hi = root_count(family, hi)
        z_star = 0.5 * (lo + hi)
        extras = {"omega": -(z_star / graph.L) ** 2, "count_below": c_lo, "count_above": c_hi,
                  "bracket": [lo, hi]}
        if c_hi - c_lo == 2:
            pair = _new_pair(dn_roots_z(lo, family), dn_roots_z(hi, family))
            out.append(ThresholdRecord(kind, z_star, pair, extras))
        elif c_hi - c_lo == 1 and c_lo == 0:
            # a lone root entering through kappa -> 1 (sech limit of the matching equation)
            out.append(ThresholdRecord(kind, z_star, (1,), {**extras, "from_kappa_one": True}))
        else:
            log.warning("%s root count jumps %d -> %d near z = %.8g", family.value, c_lo, c_hi,
                        z_star)
            out.append(ThresholdRecord(kind, z_star, None, {**extras, "irregular": True}))
    return out


def merging_pair_witness(graph, record, deltas=(1e-1, 1e-2, 1e-3)):
    """Distance between the two states of a new pair just above its threshold.

    Returns one dict per ``delta`` with ``z = threshold + delta``, the L^2
    distance of the pair and their masses.
    """
    family = Family.DN0 if record.kind is ThresholdKind.DN_PAIR_ALPHA else Family.DN1
    build = build_xi0_state if family is Family.DN0 else build_xi1_state
    i, j = record.pair_indices
    rows = []
    for delta in deltas:
        z = record.location + delta
        omega = -(z / graph.L) ** 2
        roots = _root_records(z, family, _raw_roots(family, z))
        si = build(graph, omega, i, roots)
        sj = build(graph, omega, j, roots)
        rows.append({"delta": delta, "z": z, "omega": omega, "distance": distance(si, sj),
                     "mass_i": mass(si), "mass_j": mass(sj)})
    return rows


# --- diagram -----------------------------------------------------------------------

@dataclass
class DiagramConfig:
    """Branches to trace and the frequency grids used for them."""

    L: float = float(np.pi)
    alpha: float = 0.0
    cn_modes: tuple = (1, 2, 3)
    dn0_indices: tuple = (1, 2, 3)
    dn1_indices: tuple = (1, 2)
    families: tuple = ("CnVanishingTail", "CnPlus", "CnMinus", "Dn0", "Dn1")
    omega_min: float = -10.0
    omega_max_negative: float = -1e-4
    negative_points: int = 40
    positive_points: int = 20
    eigen_offsets: tuple = (1e-2, 1e-3, 1e-4)
    threshold_range: tuple = (0.05, 12.0)
    threshold_dz: float = 0.05

    def negative_grid(self):
        return -np.geomspace(-self.omega_min, -self.omega_max_negative, self.negative_points)

    def positive_grid(self, lam):
        linear = np.linspace(0.0, lam, self.positive_points + 1)[:-1]
        return np.union1d(linear, lam - np.asarray(self.eigen_offsets, dtype=float))


@dataclass
class Diagram:
    branches: list
    thresholds: list

    @property
    def points(self):
        return [p for b in self.branches for p in b.points]

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for p in self.points:
            w.writerow(_fmt(p.row()[c]) for c in CSV_COLUMNS)
        return buf.getvalue()

    def to_json(self):
        data = {
            "branches": [
                {"family": b.family.value, "n": b.n, "label": b.label,
                 "points": [{**p.row(), "root_params": p.root_params} for p in b.points],
                 "skipped": [{"omega": o, "reason": r} for o, r in b.skipped]}
                for b in self.branches
            ],
            "thresholds": [t.to_dict() for t in self.thresholds],
        }
        return json.dumps(_jsonable(data), sort_keys=True, indent=1)

    def thresholds_json(self):
        return json.dumps(_jsonable([t.to_dict() for t in self.thresholds]), sort_keys=True,
                          indent=1)


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return "%.17g" % v
    return str(v)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if np.isfinite(v) else repr(v)
    return obj


def assemble_diagram(graph, config):
    """Trace every configured branch and collect the bifurcation thresholds."""
    neg = config.negative_grid()
    branches = []
    fams = [Family(f) for f in config.families]
    for fam in fams:
        if fam is Family.CN_VANISHING_TAIL:
            for n in config.cn_modes:
                grid = np.union1d(neg, config.positive_grid(graph.eigenvalue(n)))
                branches.append(sweep_family(graph, fam, n, grid))
        elif fam in (Family.CN_PLUS, Family.CN_MINUS):
            for n in config.cn_modes:
                branches.append(sweep_family(graph, fam, n, neg))
        else:
            idx = config.dn0_indices if fam is Family.DN0 else config.dn1_indices
            for n in idx:
                branches.append(sweep_family(graph, fam, n, neg))

    thresholds = []
    for b in branches:
        if not b.points:
            continue
        last = b.points[-1]
        if b.label == "a":
            thresholds.append(ThresholdRecord(
                ThresholdKind.EMBEDDED_EIGENVALUE, graph.eigenvalue(b.n), None,
                {"n": b.n, "last_omega": last.omega, "last_mass": last.mass}))
        elif b.family is Family.CN_PLUS:
            thresholds.append(ThresholdRecord(
                ThresholdKind.PITCHFORK, 0.0, None,
                {"n": b.n, "last_omega": last.omega, "last_mass": last.mass}))
        elif b.label == "c":
            thresholds.append(ThresholdRecord(
                ThresholdKind.EDGE_RESONANCE, 0.0, None,
                {"last_omega": last.omega, "last_mass": last.mass}))
    for fam in (f for f in fams if f in DN_FAMILIES):
        thresholds.extend(detect_dn_pair_thresholds(graph, fam, config.threshold_range,
                                                    config.threshold_dz))
    return Diagram(branches, thresholds)


def graph_from_config(config):
    return TadpoleGraph(config.L, delta_strength=config.alpha)
