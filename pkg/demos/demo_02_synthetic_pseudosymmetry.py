"""
Z-pseudosymmetry away from the Einstein case
============================================

On a para-Sasakian 3-manifold the curvature is determined by the scalar
curvature ``r``.  Building ``R`` and ``S`` from that formula lets us sweep
``r`` and watch what happens to ``R.Z`` and ``Q(g, Z)`` at a single point.
"""

import numpy as np

from epsverify import synthetic_point_model
from epsverify import zsymmetry as zs

eps = 1
print(f"{'r':>6} {'psi':>5} {'|R.Z|':>10} {'L_Z':>10} {'fit residual':>14}  branch")
for r in (-10.0, -6.0, 0.0, 5.0, 9.0):
    for psi in (0.0, 0.7):
        ctx = synthetic_point_model(r, psi, eps)
        z = ctx.ricci + psi * ctx.g
        rz = zs.derivation_tensor(z, ctx.riemann)
        verdict = zs.check_z_pseudosymmetric(ctx)
        L = verdict.aux.get("L", float("nan"))
        fit = verdict.aux.get("fit_residual", float("nan"))
        print(f"{r:6.1f} {psi:5.1f} {np.max(np.abs(rz)):10.3e} {L:10.4f} {fit:14.2e}  {verdict.aux['branch']}")

# Whenever R.Z is non-zero it is exactly -eps Q(g, Z): the fitted function is
# the constant -eps.  At r = -6 eps the context is Einstein and both sides
# vanish, which is the degenerate branch.

# The projective tensor tells a similar story.  Its xi-contracted form reduces
# to (psi - 2 eps)[S + 2 eps g], so psi = 2 eps makes the statement vacuous.
for psi in (0.0, 2.0 * eps):
    ctx = synthetic_point_model(5.0, psi, eps)
    v = zs.check_projectively_z_semisymmetric(ctx)
    print(f"psi = {psi:3.1f}: P.Z residual {v.residual:.3f}, factor |psi - 2 eps| = {v.aux['factor']:.1f}")
