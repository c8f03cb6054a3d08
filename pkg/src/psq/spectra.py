"""Expectations, uncertainties, star-genvalue residuals and the eigensolver.

The eigensolver never discretizes the star-genvalue equation directly: the
ordered operator A_{sigma,S}(qhat, phat) with qhat = x, phat = -i hbar d_x is
assembled as a dense matrix on the x axis (spectral differentiation for
momentum powers, pointwise multiplication for potentials, the exact ordered
word for cross terms), the Hermitian eigenproblem is solved there, and
phase-space eigenfields are re-assembled with the twisted tensor product.
The bridge identity

    A (star) (phi tensor psi) = phi tensor (A_matrix psi)

is the master cross-check between this module and the Bopp route.
"""

from dataclasses import dataclass
from math import pi, sqrt

import numpy as np

from .errors import NumericalPreconditionError, PSQError
from .grids import WaveFunction, integrate, l2_norm
from .ordering import OrderingSpec
from .polyalg import nf_adjoint, sigma_S_order
from .starprod import ObservableSpec, bopp_apply
from .states import MixedState, twisted_tensor

HERMITICITY_TOL = 1e-10
DEGENERACY_WINDOW = 1e-9


# ---------------------------------------------------------------------------
# expectation values and uncertainties
# ---------------------------------------------------------------------------

def expectation(A, state):
    """<A> = iint (A star rho) dx dp for a pure or mixed state."""
    if isinstance(state, MixedState):
        return complex(sum(w * expectation(A, s) for w, s in state.components))
    rho = state.rho_field()
    acted = bopp_apply(A, rho, "left", state.spec)
    return integrate(acted)


def uncertainty(state, which):
    """sqrt(<A^2> - <A>^2) for A = x or p."""
    if which == "x":
        a1 = ObservableSpec.position()
        a2 = ObservableSpec.from_poly(a1.as_poly() * a1.as_poly(), "x^2")
    elif which == "p":
        a1 = ObservableSpec.momentum()
        a2 = ObservableSpec.from_poly(a1.as_poly() * a1.as_poly(), "p^2")
    else:
        raise PSQError("which must be 'x' or 'p'")
    mean = expectation(a1, state).real
    second = expectation(a2, state).real
    var = second - mean * mean
    if var < -1e-10:
        raise NumericalPreconditionError(
            "negative variance %.3g; state and quadrature are inconsistent" % var)
    return sqrt(max(var, 0.0))


def stargen_residual(H, state, energy):
    """Relative residuals of the two-sided star-genvalue equations.

    (|H*Psi - E Psi| / |Psi|, |Psi*H - E Psi| / |Psi|).
    """
    psi = state.psi_field
    nrm = l2_norm(psi)
    left = l2_norm(bopp_apply(H, psi, "left", state.spec) - psi * energy) / nrm
    right = l2_norm(bopp_apply(H, psi, "right", state.spec) - psi * energy) / nrm
    return left, right


# ---------------------------------------------------------------------------
# the ordered operator as a dense matrix on the x axis
# ---------------------------------------------------------------------------

def _axis_dft_matrix(grid):
    """Unitary matrix of the forward x-axis transform (rows: conjugate lattice)."""
    phase = np.exp(-1j * np.outer(grid.xi, grid.x) / grid.hbar)
    return phase / sqrt(grid.nx)


def operator_matrix(A, spec, grid):
    """Dense matrix of A_{sigma,S}(qhat, phat) on the grid's x axis."""
    nx = grid.nx
    x = grid.x
    u = grid.xi
    W = _axis_dft_matrix(grid)
    Wh = W.conj().T
    M = np.zeros((nx, nx), dtype=complex)
    pieces = []
    for kind, payload in A.fn_terms():
        if kind == "x":
            term = np.diag(np.asarray(payload(x), dtype=complex))
            pieces.append(("x-function", term))
        else:
            term = Wh @ np.diag(np.asarray(payload(u), dtype=complex)) @ W
            pieces.append(("p-function", term))
    poly = A.poly_part()
    if poly.terms:
        word = sigma_S_order(poly, spec.sigma, spec.smoother.to_word())
        by_m = {}
        for (n, m, k), c in word.terms.items():
            by_m.setdefault(m, {})[n] = by_m.get(m, {}).get(n, 0.0) + c * grid.hbar ** k
        for m, qc in sorted(by_m.items()):
            nmax = max(qc)
            profile = np.full(nx, qc.get(nmax, 0.0), dtype=complex)
            for n in range(nmax - 1, -1, -1):
                profile = profile * x + qc.get(n, 0.0)
            if m == 0:
                term = np.diag(profile)
            else:
                pm = Wh @ np.diag(u.astype(complex) ** m) @ W
                term = np.diag(profile) @ pm
            pieces.append(("q^n p^%d" % m, term))
    for _label, term in pieces:
        M += term
    return M


def apply_operator_matrix(M, wavefunction):
    return WaveFunction(wavefunction.grid, M @ wavefunction.values)


def adjoint_operator_matrix(A, spec, grid):
    """Matrix of the adjoint word; discretely the conjugate transpose."""
    return operator_matrix(A, spec, grid).conj().T


def hermiticity_defect(A, spec, grid):
    """Self-adjointness defect of the ordered operator, checked symbolically.

    The discrete matrix of a symbolically Hermitian word can carry a spurious
    band-edge defect (the lattice [x, p] commutator fails on the highest
    mode), so the check must not use the matrix itself.  Returns the largest
    violating coefficient magnitude plus the largest imaginary part of
    function terms on the lattice.
    """
    defect = 0.0
    poly = A.poly_part()
    if poly.terms:
        word = sigma_S_order(poly, spec.sigma, spec.smoother.to_word())
        diff = word - nf_adjoint(word)
        defect = max((abs(c) for c in diff.terms.values()), default=0.0)
    for kind, payload in A.fn_terms():
        coords = grid.x if kind == "x" else grid.xi
        vals = np.asarray(payload(coords), dtype=complex)
        defect = max(defect, float(np.abs(vals.imag).max()))
    return defect


@dataclass
class SpectralResult:
    energies: np.ndarray
    wavefunctions: list
    ordering: OrderingSpec
    residuals: list           # per level (left, right) star-genvalue residuals

    def eigenfield(self, m, n, spec=None):
        """Phase-space star-genfield  phi_m* tensor phi_n."""
        spec = spec or self.ordering
        return twisted_tensor(self.wavefunctions[m], self.wavefunctions[n], spec)


def _reorthonormalize_windows(energies, vectors, dx):
    """Gram-Schmidt inside near-degenerate energy windows."""
    start = 0
    n = len(energies)
    while start < n:
        stop = start + 1
        while stop < n and abs(energies[stop] - energies[start]) < DEGENERACY_WINDOW:
            stop += 1
        if stop - start > 1:
            block = vectors[:, start:stop]
            q, _ = np.linalg.qr(block)
            vectors[:, start:stop] = q
        start = stop
    vectors /= np.sqrt(dx)
    return vectors


def spectrum_via_schrodinger(H, spec, n_levels, grid, residual_fields=True):
    """Lowest levels of the (sigma, S)-ordered operator of the symbol H.

    The ordered matrix must be Hermitian; eigenfunctions are returned
    orthonormal with respect to the dx-weighted inner product, and the
    two-sided star-genvalue residuals of the diagonal eigenfields are
    recorded unless residual_fields is disabled.
    """
    if isinstance(H, ObservableSpec):
        obs = H
    else:
        obs = ObservableSpec.from_poly(H)
    nx = grid.nx
    if n_levels > nx // 4:
        raise NumericalPreconditionError(
            "n_levels=%d exceeds the reliable resolution bound nx/4=%d"
            % (n_levels, nx // 4))
    defect = hermiticity_defect(obs, spec, grid)
    M = operator_matrix(obs, spec, grid)
    scale = np.abs(M).max()
    if defect > HERMITICITY_TOL * max(scale, 1.0):
        offender = _name_non_hermitian_term(obs, spec, grid)
        raise PSQError(
            "ordered operator is not Hermitian (defect %.3g); offending term: %s"
            % (defect, offender))
    # symmetrize away the band-edge discretization defect of Hermitian words
    energies, vectors = np.linalg.eigh(0.5 * (M + M.conj().T))
    vectors = _reorthonormalize_windows(energies, vectors, grid.dx)
    kept_e = energies[:n_levels]
    waves = [WaveFunction(grid, vectors[:, n]) for n in range(n_levels)]
    # boundary-resolution sanity: levels must decay inside the span
    for n, w in enumerate(waves):
        edge = max(abs(w.values[0]), abs(w.values[-1]))
        if edge > 1e-6 * np.abs(w.values).max():
            raise NumericalPreconditionError(
                "level %d is not resolved on this span (edge amplitude %.3g); "
                "resolution supports only the lowest %d levels" % (n, edge, n))
    residuals = []
    if residual_fields:
        for n, w in enumerate(waves):
            state = twisted_tensor(w, w, spec)
            residuals.append(stargen_residual(obs, state, kept_e[n]))
    return SpectralResult(kept_e, waves, spec, residuals)


def _name_non_hermitian_term(obs, spec, grid):
    """Identify which symbol term breaks Hermiticity, for the error message."""
    worst, name = 0.0, "unknown"
    for kind, payload in obs.terms:
        single = ObservableSpec(((kind, payload),))
        try:
            defect = hermiticity_defect(single, spec, grid)
        except Exception:
            continue
        if defect > worst:
            worst = defect
            if kind == "poly":
                name = "polynomial part %s" % payload.render()
            else:
                name = "%s-function term" % kind
    return name


def gauge_spectrum_check(H, sigma_list, smoother_list, n_levels, grid):
    """Spectra across orderings; natural Hamiltonians must agree pairwise.

    Returns {'energies': {label: array}, 'max_deviation': float}.
    """
    runs = {}
    for sigma in sigma_list:
        for smoother in smoother_list:
            spec = OrderingSpec(sigma, smoother)
            label = "sigma=%g,%s" % (sigma, smoother.kind)
            result = spectrum_via_schrodinger(H, spec, n_levels, grid,
                                              residual_fields=False)
            runs[label] = result.energies
    labels = list(runs)
    dev = 0.0
    for i in range(len(labels)):
        for j in range(i + 1, len(labels)):
            dev = max(dev, float(np.abs(runs[labels[i]] - runs[labels[j]]).max()))
    return {"energies": runs, "max_deviation": dev}
