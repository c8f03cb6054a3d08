"""Numerical star products on sampled fields.

Two computational routes, cross-checked in the test suite:

* ``star_sigma`` - the exact-on-lattice twisted convolution in the conjugate
  domain (the reference path, cost O((nx np)^2), meant for grids <= 128^2);
* ``bopp_apply`` - the fast route for observable-on-state action, realizing
  left/right multiplication through shift operators in mixed representations
  (one partial transform per factor group).

Smoothers, gauge maps between sigma values, star commutators and the
involution are Fourier multipliers on the conjugate lattice.

All operations require their operands to share one grid and (for the
convolution route) to be effectively supported inside it; the tail-mass
precondition is checked and flagged, not silently ignored.  Coordinate-like
fields that fill the whole lattice violate that precondition - polynomial
observables belong in an ObservableSpec, which the Bopp route handles
exactly.
"""

import warnings

import numpy as np
import scipy.fft as sp_fft

from .errors import (IllPosedSmoothingError, PSQError,
                     UnsupportedObservableError)
from .grids import (PhaseField, SpectralField, _check_same_grid, _workers,
                    boundary_tail_mass, fourier_full, fourier_full_inverse,
                    fourier_partial)
from .ordering import GaussianSmoother, OrderingSpec
from .polyalg import PolyH, sigma_order, sigma_order_right

TAIL_MASS_THRESHOLD = 1e-10
AMPLIFICATION_CUTOFF = 1e6
CLAMPED_MASS_TOLERANCE = 1e-12


# ---------------------------------------------------------------------------
# observables
# ---------------------------------------------------------------------------

class ObservableSpec:
    """Symbolic sum of terms: x-only functions, p-only functions, polynomials.

    The split matters because the first two admit exact multiplicative
    realizations in mixed representations for arbitrary smooth profiles,
    while cross terms are handled exactly only for polynomials.
    """

    def __init__(self, terms, label="A"):
        self.terms = tuple(terms)
        self.label = label
        for kind, _payload in self.terms:
            if kind not in ("x", "p", "poly"):
                raise UnsupportedObservableError("unknown term kind %r" % kind)

    # -- constructors --------------------------------------------------------
    @classmethod
    def from_poly(cls, poly, label="A"):
        return cls((("poly", poly),), label)

    @classmethod
    def position(cls):
        return cls.from_poly(PolyH.x(), "x")

    @classmethod
    def momentum(cls):
        return cls.from_poly(PolyH.p(), "p")

    @classmethod
    def x_function(cls, fn, label="V(x)"):
        return cls((("x", fn),), label)

    @classmethod
    def p_function(cls, fn, label="T(p)"):
        return cls((("p", fn),), label)

    @classmethod
    def natural(cls, v_poly, mass=1.0, label="H"):
        """1/(2 mass) p^2 + V(x) with polynomial V."""
        return cls.from_poly(PolyH.monomial(0, 2, c=0.5 / mass) + v_poly, label)

    @classmethod
    def harmonic(cls, omega=1.0):
        h = PolyH.monomial(0, 2, c=0.5) + PolyH.monomial(2, 0, c=0.5 * omega ** 2)
        return cls.from_poly(h, "H_osc")

    def __add__(self, other):
        return ObservableSpec(self.terms + other.terms,
                              "%s+%s" % (self.label, other.label))

    def poly_part(self):
        total = PolyH.zero()
        for kind, payload in self.terms:
            if kind == "poly":
                total = total + payload
        return total

    def fn_terms(self):
        return [(kind, payload) for kind, payload in self.terms if kind != "poly"]

    def as_poly(self):
        if self.fn_terms():
            raise UnsupportedObservableError(
                "observable %s has non-polynomial terms" % self.label)
        return self.poly_part()

    def is_polynomial(self):
        return not self.fn_terms()

    def sample(self, grid):
        """Evaluate the symbol A(x, p) on the grid (numeric hbar)."""
        X, P = grid.meshes()
        out = np.zeros((grid.nx, grid.np), dtype=complex)
        for kind, payload in self.terms:
            if kind == "x":
                out += np.broadcast_to(np.asarray(payload(grid.x), dtype=complex)[:, None],
                                       out.shape)
            elif kind == "p":
                out += np.broadcast_to(np.asarray(payload(grid.p), dtype=complex)[None, :],
                                       out.shape)
            else:
                out += payload.evaluate(X, P, grid.hbar)
        return PhaseField(grid, out)


# ---------------------------------------------------------------------------
# Fourier multipliers with the deconvolution guard
# ---------------------------------------------------------------------------

def _apply_multiplier(field, mult):
    """Apply a conjugate-lattice multiplier, clamping unstable amplification.

    Lattice points where |mult| exceeds the cutoff are zeroed; if the field
    carries more than a sliver of relative spectral mass there, the operation
    is refused as ill-posed.  When clamping happens the result is flagged in
    its metadata so consumers can widen their tolerances accordingly.
    """
    F = fourier_full(field)
    mvals = np.asarray(mult, dtype=complex)
    bad = np.abs(mvals) > AMPLIFICATION_CUTOFF
    clamped_fraction = 0.0
    if np.any(bad):
        total = np.sum(np.abs(F.values) ** 2)
        clamped = np.sum(np.abs(F.values[bad]) ** 2)
        if total > 0 and clamped / total > CLAMPED_MASS_TOLERANCE:
            raise IllPosedSmoothingError("deconvolution ill-posed for this field")
        clamped_fraction = float(clamped / total) if total > 0 else 0.0
        mvals = mvals.copy()
        mvals[bad] = 0.0
    F.values *= mvals
    out = fourier_full_inverse(F)
    if np.any(bad):
        out.meta["deconvolution_clamped"] = clamped_fraction
    return out.assert_finite()


def apply_smoother(spec_or_smoother, field, direction="forward"):
    """Apply the smoother S (or S^-1) of an ordering spec to a field."""
    smoother = getattr(spec_or_smoother, "smoother", spec_or_smoother)
    if smoother.is_identity():
        return field.copy()
    g = field.grid
    XI, ETA = g.conj_meshes()
    mult = np.asarray(smoother.multiplier(XI, ETA, g.hbar), dtype=complex)
    if direction == "inverse":
        mult = 1.0 / mult
    elif direction != "forward":
        raise PSQError("direction must be 'forward' or 'inverse'")
    return _apply_multiplier(field, mult)


def gauge_transform(field, sigma_from, sigma_to):
    """Multiplier exp(i (sigma_to - sigma_from) xi eta / hbar).

    Intertwines the products: S(f *_sigma g) = Sf *_sigma' Sg.
    """
    delta = sigma_to - sigma_from
    if delta == 0:
        return field.copy()
    g = field.grid
    XI, ETA = g.conj_meshes()
    return _apply_multiplier(field, np.exp(1j * delta * XI * ETA / g.hbar))


# ---------------------------------------------------------------------------
# the twisted-convolution reference product
# ---------------------------------------------------------------------------

def _twisted_convolution(Ff, Fg, xi, eta, sigma, hbar):
    """F(f*g) on the centered lattice via the exact on-lattice phase sum.

    F(f*g)(xi_m, eta_l) = (dxi deta / 2 pi hbar) *
        sum_{m', l'} Ff[m', l'] Fg[m-m'+nx/2, l-l'+np/2]
            exp(i/hbar [sigma xi' (eta-eta') - sigmabar (xi-xi') eta'])

    Out-of-lattice differences contribute zero (no folding); accuracy is
    governed by the operands' spectral tails, not by aliasing.
    """
    nx, npn = Ff.shape
    sb = 1.0 - sigma
    dxi = xi[1] - xi[0]
    deta = eta[1] - eta[0]
    # rows padded so that the xi-shifted block lookup never leaves bounds,
    # eta-padded so the linear convolution index stays in range
    rows = np.zeros((3 * nx, 2 * npn), dtype=complex)
    rows[nx:2 * nx, npn // 2: npn // 2 + npn] = Fg
    B = np.exp(-1j * sb * np.outer(xi, eta) / hbar)          # (m, l')
    out = np.zeros((nx, npn), dtype=complex)
    L = sp_fft.next_fast_len(3 * npn - 1)
    w = _workers()
    for mp in range(nx):
        A = Ff[mp, :] * np.exp(1j * (sb - sigma) * xi[mp] * eta / hbar)
        D = A[None, :] * B                                    # (m, l')
        blk = rows[nx + nx // 2 - mp: 2 * nx + nx // 2 - mp]  # (m, 2 npn)
        conv = sp_fft.ifft(sp_fft.fft(D, L, axis=1, workers=w)
                           * sp_fft.fft(blk, L, axis=1, workers=w),
                           axis=1, workers=w)[:, npn:2 * npn]
        out += np.exp(1j * sigma * xi[mp] * eta / hbar)[None, :] * conv
    out *= dxi * deta / (2.0 * np.pi * hbar)
    return out


def _check_tail_mass(field, meta):
    tail = boundary_tail_mass(field)
    if tail > TAIL_MASS_THRESHOLD:
        warnings.warn("star product operand has boundary tail mass %.3g > %.1g; "
                      "result accuracy is degraded" % (tail, TAIL_MASS_THRESHOLD),
                      stacklevel=3)
        meta["tail_mass_warning"] = max(meta.get("tail_mass_warning", 0.0), tail)


def star_sigma(f, g_field, sigma, zero_pad=False):
    """Discrete f *_sigma g through the Fourier-domain twisted convolution."""
    _check_same_grid(f, g_field)
    grid = f.grid
    meta = {}
    _check_tail_mass(f, meta)
    _check_tail_mass(g_field, meta)
    Ff = fourier_full(f).values
    Fg = fourier_full(g_field).values
    xi, eta = grid.xi, grid.eta
    if zero_pad:
        nx, npn = grid.nx, grid.np
        xi = (np.arange(2 * nx) - nx) * grid.dxi
        eta = (np.arange(2 * npn) - npn) * grid.deta
        Ff2 = np.zeros((2 * nx, 2 * npn), dtype=complex)
        Fg2 = np.zeros((2 * nx, 2 * npn), dtype=complex)
        Ff2[nx // 2: nx // 2 + nx, npn // 2: npn // 2 + npn] = Ff
        Fg2[nx // 2: nx // 2 + nx, npn // 2: npn // 2 + npn] = Fg
        full = _twisted_convolution(Ff2, Fg2, xi, eta, sigma, grid.hbar)
        spect = full[nx // 2: nx // 2 + nx, npn // 2: npn // 2 + npn]
    else:
        spect = _twisted_convolution(Ff, Fg, xi, eta, sigma, grid.hbar)
    out = fourier_full_inverse(SpectralField(grid, spect))
    out.meta.update(meta)
    return out.assert_finite()


def star_sigma_S(f, g_field, spec, zero_pad=False):
    """f *_{sigma,S} g = S(S^-1 f *_sigma S^-1 g); identity smoother reduces
    bit-for-bit to star_sigma."""
    if spec.is_plain_sigma():
        return star_sigma(f, g_field, spec.sigma, zero_pad=zero_pad)
    fi = apply_smoother(spec, f, "inverse")
    gi = apply_smoother(spec, g_field, "inverse")
    prod = star_sigma(fi, gi, spec.sigma, zero_pad=zero_pad)
    out = apply_smoother(spec, prod, "forward")
    out.meta.update(prod.meta)
    return out


# ---------------------------------------------------------------------------
# Bopp-shift route: observable acting on a state
# ---------------------------------------------------------------------------

def _multiply_in_y_rep(field, profile):
    """profile is a (nx, np) array over the (x, y) mixed lattice."""
    chi = fourier_partial(field, "p", "inverse")
    chi.values *= profile
    return fourier_partial(chi, "p", "forward")


def _multiply_in_u_rep(field, profile):
    """profile is a (nx, np) array over the (u, p) mixed lattice."""
    ups = fourier_partial(field, "x", "forward")
    ups.values *= profile
    return fourier_partial(ups, "x", "inverse")


def _word_action(word_nf, field, side, sigma, hbar):
    """Realize a standard-ordered operator word on a field.

    Left action factors: q = multiply by (x + sigma y) in the (x, y)
    representation, p = multiply by (p + sigmabar u) in the (u, p)
    representation.  Right action mirrors with (x - sigmabar y) and
    (p - sigma u).  Standard order means p-powers act first.
    """
    g = field.grid
    sb = 1.0 - sigma
    if side == "left":
        xq = g.x[:, None] + sigma * g.eta[None, :]
        pq = g.p[None, :] + sb * g.xi[:, None]
    else:
        xq = g.x[:, None] - sb * g.eta[None, :]
        pq = g.p[None, :] - sigma * g.xi[:, None]
    # group by p-power: result = sum_m (sum_n c_nm q^n) p^m Psi
    by_m = {}
    for (n, m, k), c in word_nf.terms.items():
        by_m.setdefault(m, {})[n] = by_m.get(m, {}).get(n, 0.0) + c * hbar ** k
    out = None
    for m, qcoeffs in sorted(by_m.items()):
        work = field
        if m:
            work = _multiply_in_u_rep(work, pq ** m)
        nmax = max(qcoeffs)
        if nmax == 0:
            contrib = work * qcoeffs[0]
        else:
            # Horner in the sheared coordinate profile
            acc = np.full((g.nx, g.np), qcoeffs.get(nmax, 0.0), dtype=complex)
            for n in range(nmax - 1, -1, -1):
                acc = acc * xq + qcoeffs.get(n, 0.0)
            contrib = _multiply_in_y_rep(work, acc)
        out = contrib if out is None else out + contrib
    if out is None:
        out = PhaseField(g, np.zeros((g.nx, g.np), dtype=complex))
    return out


class _SpectralDerivatives:
    """Lazy cache of d_x^r d_p^s field, computed spectrally on demand."""

    def __init__(self, field):
        self.grid = field.grid
        self.values = field.values
        self.spectrum = fourier_full(field).values
        XI, ETA = field.grid.conj_meshes()
        self.mx = 1j * XI / field.grid.hbar
        self.mp = -1j * ETA / field.grid.hbar
        self.cache = {(0, 0): field.values}

    def __getitem__(self, key):
        if key not in self.cache:
            r, s = key
            spect = self.spectrum * (self.mx ** r) * (self.mp ** s)
            self.cache[key] = fourier_full_inverse(
                SpectralField(self.grid, spect)).values
        return self.cache[key]


def _gaussian_direct_product(poly, field, side, sigma, alpha, beta, hbar):
    """Polynomial symbol times field under the Gaussian-smoothed product.

    The smoothed product of a polynomial with anything is the finite
    bidirectional series

        A * g = sum (i hbar s)^a (-i hbar sb)^b (hbar alpha)^c (hbar beta)^d
                / (a! b! c! d!)
                (dx^{a+c} dp^{b+d} A) (dx^{b+c} dp^{a+d} g),

    with the symbol derivatives exact and the field derivatives spectral;
    no deconvolution appears, unlike the pull-back/push-forward sandwich.
    The right action swaps which factor the arrows hit.
    """
    from math import factorial
    g = field.grid
    X, P = g.meshes()
    degx = max((n for (n, _m, _k) in poly.terms), default=0)
    degp = max((m for (_n, m, _k) in poly.terms), default=0)
    table = _SpectralDerivatives(field)
    out = np.zeros((g.nx, g.np), dtype=complex)
    # coefficient factors: left multiplication carries (+i hbar sigma) on the
    # (symbol d_x, field d_p) pairing; the right action is the mirror image
    ca = 1j * hbar * sigma if side == "left" else -1j * hbar * (1.0 - sigma)
    cb = -1j * hbar * (1.0 - sigma) if side == "left" else 1j * hbar * sigma
    for a in range(degx + 1):
        for c in range(degx + 1 - a):
            d_sym_x = poly.diff_x(a + c)
            if d_sym_x.is_zero():
                continue
            for b in range(degp + 1):
                for d in range(degp + 1 - b):
                    d_sym = d_sym_x.diff_p(b + d)
                    if d_sym.is_zero():
                        continue
                    coeff = (ca ** a) * (cb ** b) \
                        * ((hbar * alpha) ** c) * ((hbar * beta) ** d) \
                        / (factorial(a) * factorial(b)
                           * factorial(c) * factorial(d))
                    if coeff == 0:
                        continue
                    out += coeff * d_sym.evaluate(X, P, hbar) \
                        * table[(b + c, a + d)]
    return PhaseField(g, out)


def bopp_apply(A, psi, side="left", spec=None):
    """A *_{sigma,S} psi (side='left') or psi *_{sigma,S} A (side='right').

    x-only and p-only function terms become exact multiplications in mixed
    representations; polynomial cross terms go through the ordered operator
    word.  Gaussian smoothers use the finite bidirectional series directly
    (no deconvolution); other non-identity smoothers pull the state back by
    S^-1, apply the pulled-back symbol, and push forward by S.
    """
    if spec is None:
        spec = OrderingSpec(0.5)
    if side not in ("left", "right"):
        raise PSQError("side must be 'left' or 'right'")
    g = psi.grid
    sigma, sb = spec.sigma, spec.sigma_bar
    plain = spec.is_plain_sigma()
    if not plain and A.fn_terms():
        raise UnsupportedObservableError(
            "x-only/p-only function terms support only the identity smoother; "
            "use polynomial terms for smoothed orderings")
    poly = A.poly_part()
    gaussian_route = not plain and isinstance(spec.smoother, GaussianSmoother)
    if gaussian_route and poly.terms:
        # the whole smoothed product of a polynomial is a finite series
        out = _gaussian_direct_product(poly, psi, side, sigma,
                                       spec.smoother.alpha,
                                       spec.smoother.beta, g.hbar)
        return out.assert_finite()
    work = psi if plain else apply_smoother(spec, psi, "inverse")
    out = None
    for kind, payload in A.fn_terms():
        if kind == "x":
            scale = sigma if side == "left" else -sb
            profile = np.asarray(payload(g.x[:, None] + scale * g.eta[None, :]),
                                 dtype=complex)
            contrib = _multiply_in_y_rep(work, profile)
        else:
            scale = sb if side == "left" else -sigma
            profile = np.asarray(payload(g.p[None, :] + scale * g.xi[:, None]),
                                 dtype=complex)
            contrib = _multiply_in_u_rep(work, profile)
        out = contrib if out is None else out + contrib
    if poly.terms:
        if plain:
            pulled = poly
        else:
            pulled = spec.smoother.to_word().apply(poly, "inverse")
        if side == "left":
            word = sigma_order(pulled, sigma)
        else:
            word = sigma_order_right(pulled, sigma)
        contrib = _word_action(word, work, side, sigma, g.hbar)
        out = contrib if out is None else out + contrib
    if out is None:
        out = PhaseField(g, np.zeros((g.nx, g.np), dtype=complex))
    if not plain:
        out = apply_smoother(spec, out, "forward")
    return out.assert_finite()


# ---------------------------------------------------------------------------
# brackets and involution
# ---------------------------------------------------------------------------

def star_commutator(f, g_field, spec):
    """[f, g] = f * g - g * f under the spec's product."""
    return star_sigma_S(f, g_field, spec) - star_sigma_S(g_field, f, spec)


def moyal_bracket(f, g_field, spec):
    """Deformed Poisson bracket (f * g - g * f) / (i hbar)."""
    com = star_commutator(f, g_field, spec)
    return com * (1.0 / (1j * f.grid.hbar))


def involution_dagger(field, spec):
    """A^dagger = S S_{sigma - sigmabar} Sbar^-1 conj(A).

    All three factors are conjugate-lattice multipliers, fused into a single
    spectral pass so intermediate amplification cannot overflow the guard.
    For sigma = 1/2 with the identity smoother this is plain conjugation.
    """
    g = field.grid
    delta = spec.sigma - spec.sigma_bar
    conj_field = field.conj()
    if spec.is_plain_sigma():
        if delta == 0:
            return conj_field
        return gauge_transform(conj_field, 0.0, delta)
    XI, ETA = g.conj_meshes()
    m_s = np.asarray(spec.smoother.multiplier(XI, ETA, g.hbar), dtype=complex)
    m_sbar = np.asarray(spec.smoother.conjugated().multiplier(XI, ETA, g.hbar),
                        dtype=complex)
    mult = m_s * np.exp(1j * delta * XI * ETA / g.hbar) / m_sbar
    return _apply_multiplier(conj_field, mult)
