"""A magnetic field through the ring.

With flux phi = 2 n pi, multiplying the ring profile by (-1)^n exp(-i A x),
A = phi / 2L, maps every field-free standing wave to a magnetic one. For
other fluxes the map still runs but the vertex conditions break.
"""

import numpy as np

from tadpole_nls import (
    Family, FluxConfig, PhaseUndefined, TadpoleGraph, build_state, energy, gauge_transform,
    magnetic_bc_residual, magnetic_energy, mass, phase_quantization_report,
)
from tadpole_nls.magnetic import magnetic_ode_residual

graph = TadpoleGraph(np.pi)
omega = -1.0

for phi, n in ((2 * np.pi, 1), (4 * np.pi, 2), (np.pi, 0)):
    flux = FluxConfig.for_graph(graph, phi)
    print(f"phi = {phi / np.pi:g} pi, A = {flux.A:g}, gauge number n = {n}")
    for family, idx in ((Family.CN_PLUS, 1), (Family.DN0, 1), (Family.DN1, 1)):
        s = build_state(graph, family, omega, idx)
        v = gauge_transform(graph, s, flux, n)
        cont, bal = magnetic_bc_residual(graph, v, flux)
        ode = magnetic_ode_residual(v, omega, flux)
        dm = abs(mass(v) - mass(s))
        de = abs(magnetic_energy(v, flux) - energy(s))
        try:
            jump = f"{phase_quantization_report(v, flux)['S_jump'] / np.pi:+.9f} pi"
        except PhaseUndefined:
            jump = "undefined (nodes)"
        flag = " VIOLATION" if v.meta["quantization_violation"] else ""
        print(f"  {family.value:8s} bc=({cont:.1e}, {bal:.1e}) ode={ode:.1e} "
              f"dmass={dm:.0e} denergy={de:.0e} S(L)-S(-L)={jump}{flag}")
    print()
