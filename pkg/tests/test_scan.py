import csv
import io
import json

import numpy as np
import pytest

from tadpole_nls import (
    DiagramConfig, Family, ThresholdKind, assemble_diagram, detect_dn_pair_thresholds,
    sweep_family,
)
from tadpole_nls.scan import branch_label, root_count

ALPHA = [3.27141847, 5.32087337, 8.13642615, 10.12183476]
BETA = [2.85641485, 5.72758328, 7.73302908, 10.52346599]


def test_branch_labels():
    assert branch_label(Family.CN_VANISHING_TAIL, 2) == "a"
    assert {branch_label(f, 1) for f in Family if f not in
            (Family.EIGENSTATE, Family.RESONANCE)} <= set("abcd")


@pytest.mark.parametrize("family,ref", [(Family.DN0, ALPHA), (Family.DN1, BETA)])
def test_pair_thresholds(graph, family, ref):
    recs = detect_dn_pair_thresholds(graph, family, (0.05, 11.0))
    pairs = [r for r in recs if r.pair_indices and len(r.pair_indices) == 2]
    assert np.allclose([r.location for r in pairs], ref, atol=1e-7)
    assert pairs[0].pair_indices == (2, 3)
    kind = ThresholdKind.DN_PAIR_ALPHA if family is Family.DN0 else ThresholdKind.DN_PAIR_BETA
    assert all(r.kind is kind for r in recs)


def test_dn1_first_root_enters_alone(graph):
    recs = detect_dn_pair_thresholds(graph, Family.DN1, (0.05, 1.0))
    assert len(recs) == 1 and recs[0].pair_indices == (1,)
    assert recs[0].location == pytest.approx(np.arctanh(0.5), abs=1e-7)


@pytest.mark.parametrize("family", [Family.DN0, Family.DN1])
def test_root_counts_nondecreasing(family):
    counts = [root_count(family, z) for z in np.arange(0.1, 12.0, 0.1)]
    assert all(b >= a for a, b in zip(counts, counts[1:]))


def test_sweep_cn_branch(graph):
    grid = np.linspace(-2.0, 0.9, 12)
    br = sweep_family(graph, Family.CN_VANISHING_TAIL, 1, grid)
    assert len(br.points) == 12 and not br.skipped
    masses = [p.mass for p in br.points]
    assert masses == sorted(masses, reverse=True)


def test_sweep_dn_branch_ends(graph):
    # Dn0 index 2 exists only above alpha*_1; sweeping toward omega = 0 it ends
    z = np.linspace(4.0, 2.5, 16)
    br = sweep_family(graph, Family.DN0, 2, -(z / graph.L) ** 2)
    assert 0 < len(br.points) < 16 and br.skipped


def test_small_diagram(graph):
    cfg = DiagramConfig(cn_modes=(1,), dn0_indices=(1,), dn1_indices=(1,),
                        negative_points=4, positive_points=3, threshold_range=(0.3, 4.0),
                        threshold_dz=0.1)
    d = assemble_diagram(graph, cfg)
    rows = list(csv.DictReader(io.StringIO(d.to_csv())))
    assert rows and list(rows[0]) == ["family", "n", "omega", "mass", "energy",
                                       "k_or_kappa", "a", "b"]
    # 17 significant digits: every value round-trips
    for p, r in zip(d.points, rows):
        assert float(r["mass"]) == p.mass and float(r["omega"]) == p.omega
    data = json.loads(d.to_json())
    assert {b["family"] for b in data["branches"]} == set(cfg.families)
    kinds = {t["kind"] for t in json.loads(d.thresholds_json())}
    assert ThresholdKind.DN_PAIR_ALPHA.value in kinds
