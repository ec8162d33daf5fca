"""Command-line interface: ``tadpole-nls {family,scan,verify,magnetic,thresholds}``.

Exit codes: 0 success and verification passed, 1 verification failed,
2 no solution exists or the input is invalid. Errors name the violated
condition. Lengths and fluxes accept ``pi`` literals such as ``pi``, ``2pi``
or ``pi/2``.
"""

import argparse
import json
import math
import os
import re
import sys
import tempfile
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .errors import DomainError, NoSolution, PhaseUndefined, TadpoleError
from .families import build_state, state_from_descriptor
from .graph import Family, TadpoleGraph, descriptor_from_dict
from .magnetic import (
    FluxConfig, gauge_transform, magnetic_bc_residual, magnetic_ode_residual,
    phase_quantization_report,
)
from .scan import DiagramConfig, assemble_diagram, detect_dn_pair_thresholds, merging_pair_witness
from .verify import FD_H, TOL_BC, TOL_ODE, closed_form_mismatch, stationary_residual

EXIT_OK, EXIT_FAIL, EXIT_INVALID = 0, 1, 2
SAMPLE_TOL = 1e-12

KIND_ALIASES = {
    "cn": Family.CN_VANISHING_TAIL, "cn0": Family.CN_VANISHING_TAIL,
    "cn+": Family.CN_PLUS, "cnplus": Family.CN_PLUS,
    "cn-": Family.CN_MINUS, "cnminus": Family.CN_MINUS,
    "dn0": Family.DN0, "dn1": Family.DN1,
}

_PI_RE = re.compile(r"^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*\*?\s*pi\s*(?:/\s*(\d+\.?\d*))?\s*$")


def parse_real(text):
    """Float or a multiple of pi: ``"pi"``, ``"2pi"``, ``"-0.5*pi"``, ``"pi/3"``."""
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        return float(text)
    s = str(text).strip().lower()
    m = _PI_RE.match(s)
    if m:
        coef = float(m.group(1)) if m.group(1) not in (None, "+", "-") else (
            -1.0 if m.group(1) == "-" else 1.0)
        div = float(m.group(2)) if m.group(2) else 1.0
        return coef * math.pi / div
    try:
        return float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a real number or multiple of pi: {text!r}") from None


def family_kind(text):
    key = str(text).strip()
    if key.lower() in KIND_ALIASES:
        return KIND_ALIASES[key.lower()]
    try:
        return Family(key)
    except ValueError:
        names = ", ".join(sorted(KIND_ALIASES))
        raise argparse.ArgumentTypeError(f"unknown family {text!r}; use one of {names}") from None


class UsageError(TadpoleError):
    """Invalid input; maps to exit code 2."""


def write_atomic(path, text):
    path = os.path.abspath(path)
    d = os.path.dirname(path)
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(text, out):
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _dumps(obj):
    return json.dumps(_plain(obj), sort_keys=True, indent=1) + "\n"


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else repr(v)
    return obj


# --- run configuration ------------------------------------------------------------

@dataclass
class RunConfig:
    """Scan configuration, stored as JSON.

    Keys (all optional): ``L`` (number or pi literal), ``alpha``, ``families``
    (non-empty list of family names), ``cn_modes``, ``dn0_indices``,
    ``dn1_indices``, ``omega_grid`` {``min``, ``max_negative``,
    ``negative_points``, ``positive_points``, ``eigen_offsets``},
    ``thresholds`` {``range``, ``dz``}, ``tolerances`` {``ode``, ``bc``, ``h``},
    ``output`` {``dir``, ``format``: csv | json | both}.
    """

    L: float = math.pi
    alpha: float = 0.0
    families: list = field(default_factory=lambda: [
        "CnVanishingTail", "CnPlus", "CnMinus", "Dn0", "Dn1"])
    cn_modes: list = field(default_factory=lambda: [1, 2, 3])
    dn0_indices: list = field(default_factory=lambda: [1, 2, 3])
    dn1_indices: list = field(default_factory=lambda: [1, 2])
    omega_grid: dict = field(default_factory=lambda: {
        "min": -10.0, "max_negative": -1e-4, "negative_points": 40,
        "positive_points": 20, "eigen_offsets": [1e-2, 1e-3, 1e-4]})
    thresholds: dict = field(default_factory=lambda: {"range": [0.05, 12.0], "dz": 0.05})
    tolerances: dict = field(default_factory=lambda: {"ode": TOL_ODE, "bc": TOL_BC, "h": FD_H})
    output: dict = field(default_factory=lambda: {"dir": ".", "format": "both"})

    def to_dict(self):
        return asdict(self)

    def dumps(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=1) + "\n"

    def diagram_config(self):
        g, t = self.omega_grid, self.thresholds
        return DiagramConfig(
            L=self.L, alpha=self.alpha, cn_modes=tuple(self.cn_modes),
            dn0_indices=tuple(self.dn0_indices), dn1_indices=tuple(self.dn1_indices),
            families=tuple(Family(f).value for f in self.families),
            omega_min=g["min"], omega_max_negative=g["max_negative"],
            negative_points=g["negative_points"], positive_points=g["positive_points"],
            eigen_offsets=tuple(g["eigen_offsets"]), threshold_range=tuple(t["range"]),
            threshold_dz=t["dz"],
        )


def _line_of(text, key):
    m = re.search(r'"%s"\s*:' % re.escape(key), text)
    return text.count("\n", 0, m.start()) + 1 if m else 1


def parse_config(text):
    """Parse and validate a JSON run configuration.

    Raises
    ------
    UsageError
        With the offending line number for syntax errors and invalid values.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"config line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise UsageError("config line 1: top level must be a JSON object")
    default = RunConfig()
    known = {f.name for f in fields(RunConfig)}
    for key in data:
        if key not in known:
            raise UsageError(f"config line {_line_of(text, key)}: unknown key {key!r}")

    def fail(key, msg):
        raise UsageError(f"config line {_line_of(text, key)}: {key}: {msg}")

    values = {}
    for key in known:
        if key not in data:
            continue
        v = data[key]
        if key in ("L", "alpha"):
            try:
                v = parse_real(v)
            except argparse.ArgumentTypeError as exc:
                fail(key, str(exc))
            if key == "L" and not v > 0:
                fail(key, f"ring half-length must be positive, got {v}")
        elif key == "families":
            if not isinstance(v, list) or not v:
                fail(key, "must list at least one family")
            try:
                v = [family_kind(f).value for f in v]
            except argparse.ArgumentTypeError as exc:
                fail(key, str(exc))
            if any(Family(f) in (Family.EIGENSTATE, Family.RESONANCE) for f in v):
                fail(key, "only standing-wave families can be scanned")
        elif key in ("cn_modes", "dn0_indices", "dn1_indices"):
            if not isinstance(v, list) or not all(isinstance(i, int) and i >= 1 for i in v):
                fail(key, "must be a list of positive integers")
        else:
            base = getattr(default, key)
            if not isinstance(v, dict):
                fail(key, "must be an object")
            extra = set(v) - set(base)
            if extra:
                fail(key, f"unknown field(s) {sorted(extra)}")
            v = {**base, **v}
        values[key] = v
    cfg = RunConfig(**values)
    g = cfg.omega_grid
    if not (g["min"] < g["max_negative"] < 0):
        fail("omega_grid", "need min < max_negative < 0")
    if int(g["negative_points"]) < 1 or int(g["positive_points"]) < 1:
        fail("omega_grid", "point counts must be positive")
    lo, hi = cfg.thresholds["range"]
    if not 0 < lo < hi or not cfg.thresholds["dz"] > 0:
        fail("thresholds", "need 0 < range[0] < range[1] and dz > 0")
    if cfg.output["format"] not in ("csv", "json", "both"):
        fail("output", "format must be csv, json or both")
    return cfg


# --- commands ------------------------------------------------------------------------

def _tolerances(args):
    return dict(h=args.h, tol_ode=args.tol_ode, tol_bc=args.tol_bc)


def cmd_family(args):
    graph = TadpoleGraph(args.L)
    family = args.kind
    label = args.index if family in (Family.DN0, Family.DN1) else args.n
    if label is None:
        raise UsageError("dn families need --index, cn families need --n")
    state = build_state(graph, family, args.omega, label)
    report = stationary_residual(graph, state, args.omega, **_tolerances(args))
    stem = os.path.join(args.out_dir, f"{family.value}_{label}")
    write_atomic(stem + "_state.json", state.to_json() + "\n")
    text = _dumps(report.to_dict())
    write_atomic(stem + "_report.json", text)
    sys.stdout.write(text)
    return EXIT_OK if report.passed else EXIT_FAIL


def _load_state_file(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read state file: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"state file line {exc.lineno}: {exc.msg}") from None
    try:
        graph, desc = descriptor_from_dict(data)
    except (TadpoleError, KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"state file violates the schema: {exc}") from None
    grid = data.get("grid")
    if not isinstance(grid, dict) or any(k not in grid for k in ("x", "u", "y", "eta")):
        raise UsageError("state file violates the schema: grid needs x, u, y, eta")
    if len(grid["x"]) != len(grid["u"]) or len(grid["y"]) != len(grid["eta"]):
        raise UsageError("state file violates the schema: grid arrays differ in length")
    try:
        state = state_from_descriptor(graph, desc)
    except (TadpoleError, TypeError, ValueError) as exc:
        raise UsageError(f"state file parameters do not define a state: {exc}") from None
    return graph, desc, state, grid


def cmd_verify(args):
    graph, desc, state, grid = _load_state_file(args.state)
    report = stationary_residual(graph, state, desc.omega, **_tolerances(args))
    mismatch = closed_form_mismatch(state, grid["x"], grid["u"], grid["y"], grid["eta"])
    scale = max(1.0, float(np.max(np.abs(grid["u"]))) if grid["u"] else 1.0)
    samples_ok = mismatch <= SAMPLE_TOL * scale
    out = report.to_dict()
    out["samples_match_closed_form"] = bool(samples_ok)
    out["sample_mismatch"] = mismatch
    out["family"] = desc.family.value
    out["pass"] = bool(report.passed and samples_ok)
    _emit(_dumps(out), args.out)
    return EXIT_OK if out["pass"] else EXIT_FAIL


def cmd_magnetic(args):
    graph, desc, state, _ = _load_state_file(args.state)
    flux = FluxConfig.for_graph(graph, args.phi)
    n = args.n if args.n is not None else flux.quantum_number()[0]
    v = gauge_transform(graph, state, flux, n)
    (cont, bal), check = magnetic_bc_residual(graph, v, flux, with_cross_check=True)
    ode = magnetic_ode_residual(v, desc.omega, flux, args.h)
    x = graph.head_grid()
    modulus = float(np.max(np.abs(np.abs(v.head(x)) - np.abs(state.head(x)))))
    try:
        phase = phase_quantization_report(v, flux)
    except PhaseUndefined as exc:
        phase = {"undefined": str(exc)}
    violated = v.meta["quantization_violation"]
    ok = (not violated) and cont < args.tol_bc and bal < args.tol_bc and ode < args.tol_ode
    out = {
        "family": desc.family.value, "omega": desc.omega, "phi": flux.phi_flux, "A": flux.A,
        "n": n, "quantization_violation": violated,
        "continuity_residual": cont, "flux_residual": bal, "cross_check": check,
        "max_ode_residual_head": ode, "modulus_deviation": modulus, "phase": phase,
        "pass": bool(ok),
    }
    if violated:
        out["condition"] = f"flux phi = {flux.phi_flux} is not 2 n pi for n = {n}"
    _emit(_dumps(out), args.out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_scan(args):
    if args.config:
        try:
            with open(args.config) as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}") from None
        cfg = parse_config(text)
    else:
        cfg = RunConfig()
    out_dir = args.out_dir or cfg.output["dir"]
    fmt = args.format or cfg.output["format"]
    dc = cfg.diagram_config()
    graph = TadpoleGraph(dc.L, delta_strength=dc.alpha)
    if graph.delta_strength != 0:
        raise UsageError("families are constructed only for alpha = 0 (Kirchhoff vertex)")
    diagram = assemble_diagram(graph, dc)
    if fmt in ("csv", "both"):
        write_atomic(os.path.join(out_dir, "diagram.csv"), diagram.to_csv())
    if fmt in ("json", "both"):
        write_atomic(os.path.join(out_dir, "diagram.json"), diagram.to_json() + "\n")
    write_atomic(os.path.join(out_dir, "thresholds.json"), diagram.thresholds_json() + "\n")
    sys.stdout.write(f"{len(diagram.points)} branch points, {len(diagram.thresholds)} "
                     f"thresholds written to {out_dir}\n")
    return EXIT_OK


def cmd_thresholds(args):
    graph = TadpoleGraph(args.L)
    kinds = [Family.DN0, Family.DN1] if args.kind == "both" else [family_kind(args.kind)]
    if any(k not in (Family.DN0, Family.DN1) for k in kinds):
        raise UsageError("pair thresholds exist for dn0 and dn1 only")
    records = []
    for k in kinds:
        for rec in detect_dn_pair_thresholds(graph, k, (args.zmin, args.zmax), args.dz):
            d = rec.to_dict()
            if args.witness and rec.pair_indices and len(rec.pair_indices) == 2:
                d["witness"] = merging_pair_witness(graph, rec)
            records.append(d)
    _emit(_dumps(records), args.out)
    return EXIT_OK


# --- parser ----------------------------------------------------------------------------

def _add_tolerances(p):
    p.add_argument("--h", type=float, default=FD_H, help="finite-difference step (default 1e-3)")
    p.add_argument("--tol-ode", type=float, default=TOL_ODE,
                   help="pointwise edge-equation tolerance (default 1e-8)")
    p.add_argument("--tol-bc", type=float, default=TOL_BC,
                   help="vertex-condition tolerance (default 1e-9)")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="tadpole-nls",
        description="Standing waves of the cubic focusing NLS on the tadpole graph.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("family", help="construct one standing wave, verify it, write JSON")
    p.add_argument("--kind", type=family_kind, required=True,
                   help="cn | cn+ | cn- | dn0 | dn1 (or a full family name)")
    p.add_argument("--L", type=parse_real, required=True, help="ring half-length (accepts 'pi')")
    p.add_argument("--omega", type=parse_real, required=True, help="frequency")
    p.add_argument("--n", type=int, help="mode number for cn families")
    p.add_argument("--index", type=int, help="root index (decreasing kappa) for dn families")
    p.add_argument("--out-dir", default=".", help="directory for <Family>_<n>_state.json and "
                   "<Family>_<n>_report.json (default: current directory)")
    _add_tolerances(p)
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("scan", help="trace the bifurcation diagram")
    p.add_argument("--config", help="JSON run configuration (default settings if omitted)")
    p.add_argument("--out-dir", help="output directory (overrides the config)")
    p.add_argument("--format", choices=("csv", "json", "both"), help="diagram format")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("verify", help="re-derive a stored state and check its residuals")
    p.add_argument("--state", required=True, help="state JSON file")
    p.add_argument("--out", help="report path (default: stdout)")
    _add_tolerances(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("magnetic", help="gauge a stored state into a magnetic field and check it")
    p.add_argument("--state", required=True, help="state JSON file")
    p.add_argument("--phi", type=parse_real, required=True, help="flux (accepts '2pi')")
    p.add_argument("--n", type=int, help="gauge quantum number (default: nearest phi/2pi)")
    p.add_argument("--out", help="report path (default: stdout)")
    _add_tolerances(p)
    p.set_defaults(func=cmd_magnetic)

    p = sub.add_parser("thresholds", help="locate dn pair-creation thresholds in L sqrt|omega|")
    p.add_argument("--kind", default="both", help="dn0 | dn1 | both")
    p.add_argument("--L", type=parse_real, default=math.pi, help="ring half-length (default pi)")
    p.add_argument("--zmin", type=float, default=0.05)
    p.add_argument("--zmax", type=float, default=12.0)
    p.add_argument("--dz", type=float, default=0.05, help="scan spacing before bisection")
    p.add_argument("--witness", action="store_true",
                   help="add pair distances and masses just above each threshold")
    p.add_argument("--out", help="output path (default: stdout)")
    p.set_defaults(func=cmd_thresholds)
    usages = "\n".join("  " + sp.format_usage().strip().replace("usage: ", "")
                        for sp in sub.choices.values())
    ap.epilog = ("subcommand flags:\n" + usages + "\n\nExit codes: 0 success, "
                 "1 verification failed, 2 no solution or invalid input.")
    return ap


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NoSolution as exc:
        cond = f" [{exc.condition}]" if exc.condition else ""
        sys.stderr.write(f"tadpole-nls: no solution{cond}: {exc}\n")
        return EXIT_INVALID
    except (UsageError, DomainError, argparse.ArgumentTypeError) as exc:
        sys.stderr.write(f"tadpole-nls: {exc}\n")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
