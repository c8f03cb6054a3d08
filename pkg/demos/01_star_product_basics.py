"""Star products on a phase-space grid.

Walks through the basic objects: a grid, a couple of Gaussian states, the
noncommutative product between them, and the deformed bracket that replaces
the Poisson bracket.  Everything here is numerical; the symbolic layer gets
its own demo.
"""

import numpy as np

from psq import (ObservableSpec, OrderingSpec, PhaseField, bopp_apply,
                 integrate, l2_norm, make_grid, moyal_bracket, star_sigma)

# a 64x64 lattice on [-8, 8)^2 with hbar = 1; sizes are powers of two so the
# hbar-scaled transforms reduce to FFTs
grid = make_grid(64, 64, -8.0, 8.0, -8.0, 8.0, 1.0)
X, P = grid.meshes()
hbar = grid.hbar

print("grid: %dx%d, dx=%.3f, conjugate spacing dxi=%.4f"
      % (grid.nx, grid.np, grid.dx, grid.dxi))

# the Moyal ground distribution of the unit oscillator
rho0 = PhaseField(grid, np.exp(-(X ** 2 + P ** 2) / hbar) / (np.pi * hbar))
print("\nground distribution: total mass = %.12f" % integrate(rho0).real)

# pure states are star-idempotent: rho0 * rho0 = rho0 / (2 pi hbar)
prod = star_sigma(rho0, rho0, 0.5)
resid = l2_norm(prod - rho0 * (1 / (2 * np.pi * hbar))) / l2_norm(rho0)
print("idempotence residual: %.2e" % resid)

# the product is noncommutative: displaced Gaussians fail to commute
f = PhaseField(grid, np.exp(-((X - 1) ** 2 + P ** 2)))
g = PhaseField(grid, np.exp(-(X ** 2 + (P - 1) ** 2)))
comm = star_sigma(f, g, 0.5) - star_sigma(g, f, 0.5)
print("commutator norm for displaced Gaussians: %.4f" % l2_norm(comm))

# but it is associative, for any ordering parameter
h = PhaseField(grid, np.exp(-((X + 1) ** 2 + (P + 1) ** 2)))
for sigma in (0.0, 0.3, 0.5, 1.0):
    lhs = star_sigma(star_sigma(f, g, sigma), h, sigma)
    rhs = star_sigma(f, star_sigma(g, h, sigma), sigma)
    print("associativity defect at sigma=%.1f: %.2e"
          % (sigma, l2_norm(lhs - rhs) / l2_norm(lhs)))

# the canonical pair acts like [x, p] = i hbar on any localized state;
# polynomial symbols go through the Bopp route, which is exact for them
psi = PhaseField(grid, np.exp(-((X - 0.5) ** 2 + (P + 0.5) ** 2)))
spec = OrderingSpec(0.3)
xo, po = ObservableSpec.position(), ObservableSpec.momentum()
com = bopp_apply(xo, bopp_apply(po, psi, "left", spec), "left", spec) \
    - bopp_apply(po, bopp_apply(xo, psi, "left", spec), "left", spec)
print("\n[x, p] acting on a state, deviation from i hbar: %.2e"
      % (l2_norm(com - psi * (1j * hbar)) / l2_norm(psi)))

# the deformed bracket tends to the Poisson bracket as hbar -> 0
print("\nbracket vs Poisson bracket, decreasing hbar:")
for hb in (0.2, 0.1, 0.05):
    gh = make_grid(64, 64, -6, 6, -6, 6, hb)
    Xh, Ph = gh.meshes()
    env = np.exp(-(Xh ** 2 + Ph ** 2) / 2)
    a = PhaseField(gh, Xh ** 3 * env)
    b = PhaseField(gh, Ph ** 2 * env)
    mb = moyal_bracket(a, b, OrderingSpec(0.5))
    # Poisson bracket of the same fields, analytic derivatives
    ax = (3 * Xh ** 2 - Xh ** 4) * env
    ap = -Xh ** 3 * Ph * env
    bx = -Ph ** 2 * Xh * env
    bp = (2 * Ph - Ph ** 3) * env
    pb = PhaseField(gh, ax * bp - ap * bx)
    print("  hbar=%.3f   ||bracket - poisson|| = %.3e" % (hb, l2_norm(mb - pb)))
