"""Every standing-wave family on the tadpole with L = pi, at one frequency.

Each state is built from its matching equations, then checked independently:
finite-difference residuals of -u'' - |u|^2 u = omega u on both edges and the
Kirchhoff conditions at the vertex.
"""

import numpy as np

from tadpole_nls import (
    Family, TadpoleGraph, build_state, energy, mass, solve_kappa0_roots, solve_kappa1_roots,
    stationary_residual,
)

graph = TadpoleGraph(np.pi)
omega = -1.0

members = [(Family.CN_VANISHING_TAIL, n) for n in (1, 2, 3)]
members += [(f, n) for f in (Family.CN_PLUS, Family.CN_MINUS) for n in (1, 2)]
members += [(Family.DN0, i) for i in range(1, len(solve_kappa0_roots(graph, omega)) + 1)]
members += [(Family.DN1, i) for i in range(1, len(solve_kappa1_roots(graph, omega)) + 1)]

print(f"L = pi, omega = {omega}, L sqrt|omega| = {graph.L * np.sqrt(-omega):.6f}\n")
print(f"{'family':16s} {'n':>2s} {'k/kappa':>18s} {'mass':>10s} {'energy':>10s} "
      f"{'ode res':>9s} {'bc res':>9s}  ok")
for family, n in members:
    s = build_state(graph, family, omega, n)
    rep = stationary_residual(graph, s, omega)
    d = s.descriptor
    ode = max(rep.max_ode_residual_head, rep.max_ode_residual_tail)
    bc = max(rep.continuity_residual, rep.flux_residual)
    print(f"{family.value:16s} {n:2d} {d.k_or_kappa:18.15f} {mass(s):10.5f} {energy(s):10.5f} "
          f"{ode:9.2e} {bc:9.2e}  {rep.passed}")

# Positive frequencies: only the cn branch with a vanishing tail survives,
# and only below the embedded eigenvalue lambda_n = n^2.
print("\nomega > 0, CnVanishingTail:")
for n in (1, 2):
    for w in (0.5 * n * n, 0.99 * n * n):
        s = build_state(graph, Family.CN_VANISHING_TAIL, w, n)
        print(f"  n={n} omega={w:5.2f} k={s.descriptor.k:.6f} mass={mass(s):.6f}")
