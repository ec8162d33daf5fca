"""What happens near omega = 0 and near the embedded eigenvalues.

* The cn branch with vanishing tail leaves zero at each lambda_n = n^2 with
  mass proportional to lambda_n - omega.
* At omega = 0 the asymmetric branches Phi^+- split off from it (pitchfork);
  the kernel direction of the linearization there is a resonance, not an
  eigenfunction.
* The edge soliton Xi_{omega,0,1} bifurcates from zero along the threshold
  resonance (1, 1).
"""

import numpy as np

from tadpole_nls import (
    Family, TadpoleGraph, build_cn_pm_state, build_cn_state, build_xi0_state,
    check_pitchfork_resonance, mass, solve_b0, solve_kappa0_roots, solve_kn,
)
from tadpole_nls.graph import distance

graph = TadpoleGraph(np.pi)

print("Mass of Phi_{omega,1} as omega -> lambda_1 = 1:")
for eps in (1e-1, 1e-2, 1e-3, 1e-4):
    s = build_cn_state(graph, 1 - eps, 1)
    k = solve_kn(graph, 1 - eps, 1).value
    print(f"  eps={eps:.0e}  mass={mass(s):.6e}  mass/eps={mass(s) / eps:.5f}  "
          f"k/sqrt(2 eps/3)={k / np.sqrt(2 * eps / 3):.6f}")

print("\nPhi^+-_{omega,1} approach +-Phi_{0,1} as omega -> 0^-:")
phi0 = build_cn_state(graph, 0.0, 1)
for w in (-1e-1, -1e-2, -1e-3, -1e-4):
    dp = distance(build_cn_pm_state(graph, w, 1, +1), phi0)
    dm = distance(build_cn_pm_state(graph, w, 1, -1), phi0.scaled(-1, -1))
    print(f"  omega={w:.0e}  |Phi+ - Phi0|={dp:.5f}  |Phi- + Phi0|={dm:.5f}")

print("\nPitchfork resonance L_{1,0}(Phi_{0,n}) X_n = 0:")
for n in (1, 2, 3):
    rep = check_pitchfork_resonance(graph, n)
    print(f"  n={n} residual={rep.max_ode_residual_head:.2e} "
          f"tail constant={rep.extras['tail_constant']:.6f} "
          f"(gamma^2 = {rep.extras['gamma_squared']:.6f} would break continuity)")

print("\nEdge soliton Xi_{omega,0,1} near omega = 0:")
for w in (-1e-1, -1e-2, -1e-3, -1e-4, -1e-5):
    r = solve_kappa0_roots(graph, w)[0]
    b, _ = solve_b0(graph, w, r)
    s = build_xi0_state(graph, w, 1)
    u0 = s.head(np.array([0.0]))[0] / np.sqrt(-2 * w)
    print(f"  omega={w:.0e}  (1-kappa)/|omega|={(1 - r.value) / -w:8.4f}  "
          f"b/L={b / graph.L:+.5f}  u(0)/sqrt(2|omega|)={u0:.6f}")
print("  b tends to -2L: the tail soliton sits behind the vertex at distance 2L.")
