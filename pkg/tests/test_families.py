import numpy as np
import pytest

from tadpole_nls import (
    DomainError, Family, NoSolution, build_state, solve_an, solve_b0, solve_b1,
    solve_kappa0_roots, solve_kappa1_roots, solve_kn, state_from_descriptor,
)
from tadpole_nls.families import dn_residual, dn_roots_z, shift_from_rhs
from tadpole_nls.graph import bc_residual, distance

from oracles import all_roots, an_oracle, dn_vertex_mismatch, kn_oracle


@pytest.mark.parametrize("omega,n", [(0.5, 1), (3.0, 2), (-1.0, 1), (-4.0, 3), (-0.1, 2)])
def test_kn_against_bisection(graph, omega, n):
    assert solve_kn(graph, omega, n).value == pytest.approx(kn_oracle(graph.L, omega, n),
                                                            abs=1e-11)


@pytest.mark.parametrize("omega,n", [(-1.0, 1), (-4.0, 2), (-0.1, 3)])
def test_an_against_bisection(graph, omega, n):
    k = solve_kn(graph, omega, n)
    assert solve_an(graph, omega, n).value == pytest.approx(an_oracle(omega, k.value), abs=1e-10)


def test_kn_rejects_bad_mode(graph):
    with pytest.raises(DomainError):
        solve_kn(graph, -1.0, 0)


def test_no_solution_names_condition(graph):
    with pytest.raises(NoSolution) as exc:
        solve_kn(graph, 1.0, 1)
    assert exc.value.condition == "omega >= lambda_n"


@pytest.mark.parametrize("family,shifted", [(Family.DN0, False), (Family.DN1, True)])
@pytest.mark.parametrize("omega", [-1.0, -2.5, -6.0])
def test_dn_roots_against_vertex_oracle(graph, family, shifted, omega):
    solver = solve_kappa0_roots if family is Family.DN0 else solve_kappa1_roots
    roots = [r.value for r in solver(graph, omega)]
    # oracle: sign changes of the flux mismatch on a kappa grid, away from kappa = 1
    grid = 1 - np.geomspace(0.25, 1e-5, 6001)
    ref = all_roots(lambda k: dn_vertex_mismatch(graph.L, omega, k, shifted), grid)
    ours = [k for k in roots if grid[0] < k < grid[-1]]
    assert len(ref) >= 1 and len(ours) == len(ref)
    assert np.allclose(sorted(ours), sorted(ref), atol=1e-9)


def test_dn_roots_descending_and_small(graph):
    roots = solve_kappa0_roots(graph, -4.0)
    vals = [r.value for r in roots]
    assert vals == sorted(vals, reverse=True)
    for r in roots:
        assert dn_residual(graph.L * 2.0, r.m1, Family.DN0) < 1e-8


def test_dn1_lone_root_born_at_artanh_half():
    z0 = np.arctanh(0.5)
    assert dn_roots_z(z0 - 1e-3, Family.DN1) == []
    assert len(dn_roots_z(z0 + 1e-3, Family.DN1)) == 1


def test_tail_shift_signs(graph):
    omega = -1.0
    r0 = solve_kappa0_roots(graph, omega)
    signs = [solve_b0(graph, omega, r)[1] for r in r0]
    assert signs[0] == -1
    for r in solve_kappa1_roots(graph, omega):
        b, sgn = solve_b1(graph, omega, r)
        assert np.sign(b) == sgn


def test_shift_from_rhs():
    assert shift_from_rhs(1.0, -1.0) == 0.0
    b = shift_from_rhs(0.25, -4.0)
    assert 1 / np.cosh(2 * b) ** 2 == pytest.approx(0.25)
    with pytest.raises(DomainError):
        shift_from_rhs(1.5, -1.0)


@pytest.mark.parametrize("family,n", [
    (Family.CN_VANISHING_TAIL, 2), (Family.CN_PLUS, 1), (Family.CN_MINUS, 3),
    (Family.DN0, 1), (Family.DN1, 1),
])
def test_state_from_descriptor_reproduces(graph, family, n):
    s = build_state(graph, family, -1.0, n)
    again = state_from_descriptor(graph, s.descriptor)
    assert distance(s, again) == 0.0
    assert max(bc_residual(graph, s)) < 1e-9


def test_cn_vanishing_tail_positive_frequency(graph):
    s = build_state(graph, Family.CN_VANISHING_TAIL, 2.0, 2)
    assert np.all(s.tail(np.linspace(0, 5, 11)) == 0)
    assert max(bc_residual(graph, s)) < 1e-12


def test_index_out_of_range(graph):
    n = len(solve_kappa0_roots(graph, -1.0))
    with pytest.raises(NoSolution):
        build_state(graph, Family.DN0, -1.0, n + 1)
