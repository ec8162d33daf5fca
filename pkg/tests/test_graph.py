import json

import numpy as np
import pytest

from tadpole_nls import (
    Family, NonNormalizable, TadpoleGraph, TadpoleState, bc_residual, energy, inner,
    linear_eigenpair, mass, resonance_state,
)
from tadpole_nls.elliptic import phi_sech, phi_sech_prime
from tadpole_nls.graph import count_nodes, descriptor_from_dict, distance, fd_second, zero_state


def _zero(x):
    return np.zeros_like(np.asarray(x, dtype=float))


def tail_only(graph, omega):
    return TadpoleState(graph, _zero, lambda y: phi_sech(y, omega),
                        _zero, lambda y: phi_sech_prime(y, omega),
                        tail_scale=1 / np.sqrt(-omega))


def test_graph_validation():
    with pytest.raises(ValueError):
        TadpoleGraph(0.0)
    g = TadpoleGraph(2.0)
    assert g.eigenvalue(3) == pytest.approx((3 * np.pi / 2) ** 2)
    assert len(g.head_grid()) % 2 == 1


@pytest.mark.parametrize("omega", [-1.0, -4.0, -0.25])
def test_half_soliton_mass_and_energy(graph, omega):
    # int_0^inf 2|w| sech^2 = 2 sqrt|w|;  E = -(1/3) |w|^{3/2}
    s = tail_only(graph, omega)
    assert mass(s) == pytest.approx(2 * np.sqrt(-omega), rel=1e-10)
    assert energy(s) == pytest.approx(-(-omega) ** 1.5 / 3, rel=1e-9)


def test_eigenstate_mass_and_vertex(graph):
    for n in (1, 2, 3):
        pair = linear_eigenpair(graph, n)
        assert pair.lambda_n == pytest.approx(n * n)
        assert mass(pair.eigenstate) == pytest.approx(graph.L, rel=1e-12)
        assert max(bc_residual(graph, pair.eigenstate)) < 1e-14
        assert max(bc_residual(graph, pair.eigenstate, "fd")) < 1e-9


def test_eigenstates_orthogonal(graph):
    a, b = linear_eigenpair(graph, 1).eigenstate, linear_eigenpair(graph, 2).eigenstate
    assert abs(inner(a, b)) < 1e-12
    assert distance(a, a) == 0


def test_resonance_not_normalizable(graph):
    r = resonance_state(graph)
    assert max(bc_residual(graph, r)) == 0
    with pytest.raises(NonNormalizable):
        mass(r)


def test_fd_second_fourth_order():
    x = np.linspace(-1, 1, 11)
    errs = [np.max(np.abs(fd_second(np.sin, x, h) + np.sin(x))) for h in (0.04, 0.02)]
    assert errs[0] / errs[1] > 14


def test_count_nodes(graph):
    for n in (1, 2, 3):
        assert count_nodes(linear_eigenpair(graph, n).eigenstate) == 2 * n


def test_json_schema(graph):
    s = linear_eigenpair(graph, 2).eigenstate
    d = json.loads(s.to_json())
    assert d["schema_version"] == 1
    assert d["family"] == Family.EIGENSTATE.value
    assert set(d["grid"]) == {"x", "u", "y", "eta"}
    g2, desc = descriptor_from_dict(d)
    assert g2.L == graph.L and desc.n == 2


def test_schema_rejects_missing_fields(graph):
    d = json.loads(linear_eigenpair(graph, 1).eigenstate.to_json())
    del d["family"]
    with pytest.raises(Exception):
        descriptor_from_dict(d)


def test_scaled_and_phase(graph):
    s = tail_only(graph, -1.0)
    assert mass(s.scaled(tail=2.0)) == pytest.approx(4 * mass(s))
    z = s.with_phase(0.7)
    assert z.is_complex and mass(z) == pytest.approx(mass(s))


def test_zero_state(graph):
    assert mass(zero_state(graph)) == 0
