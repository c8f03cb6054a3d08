"""Time evolution in both pictures.

* split-step / matrix-exponential propagation of the configuration-space
  wavefunction (the cheap, spectrally accurate default), with phase-space
  snapshots re-assembled through the twisted tensor product;
* method-of-lines RK4 directly on the phase-space evolution equation
  d rho/dt = (H star rho - rho star H)/(i hbar), kept because the
  equivalence of the two pictures is something this package tests, not
  assumes;
* guarded truncations of the star exponential and of Heisenberg-picture
  observables.

The RK4 path enforces a stability bound estimated by power iteration on the
actual discrete generator; violations raise with a suggested dt.
"""

from dataclasses import dataclass
from math import pi, sqrt

import numpy as np

from .errors import PSQError, StabilityBoundError, TruncationError, UnsupportedObservableError
from .grids import (PhaseField, SpectralField, WaveFunction, fourier_full,
                    fourier_full_inverse, half_dft, integrate, l2_norm)
from .polyalg import PolyH, pstar
from .spectra import expectation, operator_matrix
from .starprod import ObservableSpec, bopp_apply
from .states import QuasiDistribution, twisted_tensor

RK4_STABILITY_LIMIT = 2.6          # conservative |lambda dt| cap (imaginary axis)
STAR_EXP_TAIL_BOUND = 1e-8


@dataclass(frozen=True)
class EvolutionConfig:
    dt: float
    steps: int
    method: str = "split_step_schrodinger"
    snapshot_every: int = 0        # 0: record only initial and final

    def __post_init__(self):
        if not (self.dt > 0 and self.steps > 0):
            raise PSQError("dt and steps must be positive")
        if self.method not in ("split_step_schrodinger", "phase_space_rk4",
                               "matrix_exponential"):
            raise PSQError("unknown method %r" % self.method)

    def snapshot_steps(self):
        every = self.snapshot_every if self.snapshot_every > 0 else self.steps
        marks = set(range(0, self.steps + 1, every))
        marks.add(self.steps)
        return sorted(marks)


@dataclass
class EvolutionResult:
    times: np.ndarray
    snapshots: list                 # PhaseField or WaveFunction per snapshot
    expectations: dict              # name -> complex array over snapshot times
    norms: np.ndarray

def default_observables(omega=1.0):
    x = PolyH.x()
    p = PolyH.p()
    return {
        "x": ObservableSpec.from_poly(x, "x"),
        "p": ObservableSpec.from_poly(p, "p"),
        "x2": ObservableSpec.from_poly(x * x, "x2"),
        "p2": ObservableSpec.from_poly(p * p, "p2"),
        "H": ObservableSpec.harmonic(omega),
    }


# ---------------------------------------------------------------------------
# configuration-space propagation
# ---------------------------------------------------------------------------

def _separable_parts(H, spec, grid):
    """Ordered operator of a natural symbol as (T(u) profile, V(x) profile).

    Returns None when the pulled-back symbol has cross terms, in which case
    split-stepping does not apply.
    """
    if H.fn_terms() and not spec.is_plain_sigma():
        return None
    t_prof = np.zeros(grid.nx, dtype=complex)
    v_prof = np.zeros(grid.nx, dtype=complex)
    for kind, payload in H.fn_terms():
        if kind == "x":
            v_prof = v_prof + np.asarray(payload(grid.x), dtype=complex)
        else:
            t_prof = t_prof + np.asarray(payload(grid.xi), dtype=complex)
    extra = H.poly_part()
    if extra.terms:
        pulled = spec.smoother.to_word().apply(extra, "inverse")
        # sigma-ordering correction exp(-i hbar sigma d_x d_p) kills separable terms
        for (n, m, k), c in pulled.terms.items():
            if n > 0 and m > 0:
                return None
            cc = c * grid.hbar ** k
            if m == 0:
                v_prof = v_prof + cc * grid.x.astype(complex) ** n
            else:
                t_prof = t_prof + cc * grid.xi.astype(complex) ** m
    return t_prof, v_prof

def _spectral_rt(grid, values, forward):
    """x axis <-> its conjugate lattice, unitary scaling."""
    if forward:
        return half_dft(values, 0, grid.x[0], grid.dx, grid.xi[0], grid.dxi,
                        -1, grid.hbar) / grid.nx
    return half_dft(values, 0, grid.xi[0], grid.dxi, grid.x[0], grid.dx,
                    +1, grid.hbar)

def evolve_schrodinger(phi0, H, spec, cfg, observables=None,
                       phase_space_snapshots=True):
    """Propagate a wavefunction under the ordered Hamiltonian operator.

    Natural symbols split into kinetic and potential factors (second-order
    Strang splitting, spectrally exact factors); anything else goes through
    the exact eigendecomposition propagator of the dense ordered matrix.
    Snapshots are phase-space fields obtained by re-tensoring unless
    disabled.
    """
    grid = phi0.grid
    observables = observables if observables is not None else {}
    marks = cfg.snapshot_steps()
    parts = _separable_parts(H, spec, grid) \
        if cfg.method == "split_step_schrodinger" else None
    if cfg.method == "split_step_schrodinger" and parts is None:
        raise UnsupportedObservableError(
            "split-step requires a natural (kinetic + potential) symbol; "
            "use method='matrix_exponential'")
    if parts is not None:
        t_prof, v_prof = parts
        half_v = np.exp(-0.5j * cfg.dt * v_prof / grid.hbar)
        full_t = np.exp(-1j * cfg.dt * t_prof / grid.hbar)
        def step(values):
            values = values * half_v
            values = _spectral_rt(grid, values[:, None], True)[:, 0] * full_t
            values = _spectral_rt(grid, values[:, None], False)[:, 0]
            return values * half_v
    else:
        from .spectra import hermiticity_defect
        M = operator_matrix(H, spec, grid)
        if hermiticity_defect(H, spec, grid) > 1e-10 * max(np.abs(M).max(), 1.0):
            raise PSQError("ordered operator is not Hermitian; cannot propagate")
        # band-edge discretization defect removed by symmetrization
        evals, vecs = np.linalg.eigh(0.5 * (M + M.conj().T))
        phase = np.exp(-1j * cfg.dt * evals / grid.hbar)
        def step(values):
            return vecs @ (phase * (vecs.conj().T @ values))
    times, snapshots, norms = [], [], []
    exps = {name: [] for name in observables}
    values = phi0.values.copy()

    def record(step_idx):
        wf = WaveFunction(grid, values.copy())
        times.append(step_idx * cfg.dt)
        norms.append(wf.norm())
        if phase_space_snapshots or observables:
            state = twisted_tensor(wf, wf, spec)
            snapshots.append(state.psi_field if phase_space_snapshots else wf)
            for name, obs in observables.items():
                exps[name].append(expectation(obs, state))
        else:
            snapshots.append(wf)

    record(0)
    for k in range(1, cfg.steps + 1):
        values = step(values)
        if k in marks:
            record(k)
    return EvolutionResult(np.array(times), snapshots,
                           {n: np.array(v) for n, v in exps.items()},
                           np.array(norms))


# ---------------------------------------------------------------------------
# phase-space propagation
# ---------------------------------------------------------------------------

def _quantum_rhs(H, spec, hbar):
    def rhs(field):
        com = bopp_apply(H, field, "left", spec) - bopp_apply(H, field, "right", spec)
        return com * (1.0 / (1j * hbar))
    return rhs

def _classical_rhs(H, grid):
    """Liouville generator {H, rho} with exact symbol derivatives."""
    poly = H.as_poly()
    X, P = grid.meshes()
    hx = poly.diff_x().evaluate(X, P, grid.hbar)
    hp = poly.diff_p().evaluate(X, P, grid.hbar)
    XI, ETA = grid.conj_meshes()

    def rhs(field):
        F = fourier_full(field)
        dx_vals = fourier_full_inverse(
            SpectralField(grid, F.values * (1j * XI / grid.hbar))).values
        dp_vals = fourier_full_inverse(
            SpectralField(grid, F.values * (-1j * ETA / grid.hbar))).values
        return PhaseField(grid, hx * dp_vals - hp * dx_vals)
    return rhs

def _estimate_spectral_radius(rhs, grid, iterations=8, seed=7):
    rng = np.random.default_rng(seed)
    X, P = grid.meshes()
    envelope = np.exp(-(X ** 2 / (2 * (0.4 * grid.x_max) ** 2)
                        + P ** 2 / (2 * (0.4 * grid.p_max) ** 2)))
    vec = PhaseField(grid, envelope * (rng.normal(size=(grid.nx, grid.np))
                                       + 1j * rng.normal(size=(grid.nx, grid.np))))
    vec = vec * (1.0 / l2_norm(vec))
    est = 0.0
    for _ in range(iterations):
        nxt = rhs(vec)
        nrm = l2_norm(nxt)
        if nrm == 0.0:
            return 0.0
        est = nrm
        vec = nxt * (1.0 / nrm)
    return est

def evolve_phase_space(rho0, H, spec, cfg, observables=None, classical=False):
    """Method-of-lines RK4 on the phase-space evolution equation.

    With classical=True the same integrator solves the Liouville equation
    instead (the hbar-deformation terms are dropped); for quadratic symbols
    the two flows agree on Gaussians, which the tests exploit.
    """
    if isinstance(rho0, QuasiDistribution):
        field = rho0.rho_field()
    else:
        field = rho0
    grid = field.grid
    observables = observables if observables is not None else {}
    rhs = _classical_rhs(H, grid) if classical else _quantum_rhs(H, spec, grid.hbar)
    radius = _estimate_spectral_radius(rhs, grid)
    if radius * cfg.dt > RK4_STABILITY_LIMIT:
        raise StabilityBoundError(
            "dt=%.3g violates the RK4 stability bound for this generator "
            "(spectral radius ~ %.3g); suggested dt <= %.3g"
            % (cfg.dt, radius, 0.8 * RK4_STABILITY_LIMIT / radius))
    marks = cfg.snapshot_steps()
    times, snapshots, norms = [], [], []
    exps = {name: [] for name in observables}

    def record(step_idx, fld):
        times.append(step_idx * cfg.dt)
        snapshots.append(fld.copy())
        norms.append(abs(integrate(fld)))
        state = QuasiDistribution(fld * sqrt(2.0 * pi * grid.hbar), spec)
        for name, obs in observables.items():
            exps[name].append(expectation(obs, state))

    record(0, field)
    cur = field
    for k in range(1, cfg.steps + 1):
        k1 = rhs(cur)
        k2 = rhs(cur + k1 * (0.5 * cfg.dt))
        k3 = rhs(cur + k2 * (0.5 * cfg.dt))
        k4 = rhs(cur + k3 * cfg.dt)
        cur = cur + (k1 + (k2 + k3) * 2.0 + k4) * (cfg.dt / 6.0)
        if k in marks:
            record(k, cur)
    return EvolutionResult(np.array(times), snapshots,
                           {n: np.array(v) for n, v in exps.items()},
                           np.array(norms))


# ---------------------------------------------------------------------------
# star exponential and Heisenberg picture
# ---------------------------------------------------------------------------

def _fold_numeric_hbar(poly, hbar):
    out = {}
    for (n, m, k), c in poly.terms.items():
        key = (n, m, 0)
        out[key] = out.get(key, 0.0) + c * hbar ** k
    return PolyH(out)


def star_exponential_poly(H_poly, t, K, spec, hbar):
    """Taylor polynomial of the star exponential, exact star powers.

    Star powers of a polynomial symbol are themselves polynomials and are
    computed exactly in the symbolic layer (sampling unbounded symbols and
    star-multiplying the samples would compound spectral-truncation error
    instead).  Numeric hbar is folded in so the 1/hbar^k prefactors close.
    Returns the list of partial-term polynomials [c_k H^(star k)].
    """
    word = spec.smoother.to_word()
    base = _fold_numeric_hbar(word.apply(H_poly, "inverse"), hbar)
    terms = [PolyH.const(1.0)]
    power = PolyH.const(1.0)
    coeff = 1.0
    for k in range(1, K + 1):
        power = _fold_numeric_hbar(pstar(base, power, spec.sigma), hbar)
        coeff = coeff * (-1j * t / hbar) / k
        terms.append(power.scale(coeff))
    # push the sum forward through the smoother (term-wise, exact)
    return [_fold_numeric_hbar(word.apply(term, "forward"), hbar) for term in terms]

def star_exponential(H, t, K, spec, grid):
    """U(t) = sum_k (1/k!) (-i t/hbar)^k H^(star k), truncated at order K.

    The symbol must be polynomial; the star powers are exact and the last
    sampled term must fall below the tail bound relative to the partial sum,
    otherwise the truncation is refused and the achieved ratio reported.
    """
    if K > 20:
        raise PSQError("truncation order capped at 20")
    total = PhaseField.constant(grid, 1.0)
    if t == 0:
        return total
    terms = star_exponential_poly(H.as_poly(), t, K, spec, grid.hbar)
    X, P = grid.meshes()
    vals = np.zeros((grid.nx, grid.np), dtype=complex)
    for term in terms:
        vals += term.evaluate(X, P, grid.hbar)
    total = PhaseField(grid, vals)
    last = PhaseField(grid, terms[-1].evaluate(X, P, grid.hbar))
    ratio = l2_norm(last) / max(l2_norm(total), 1e-300)
    if ratio > STAR_EXP_TAIL_BOUND:
        raise TruncationError(
            "star-exponential tail bound not met at order %d: last-term ratio "
            "%.3g > %.1g; shrink t or raise K" % (K, ratio, STAR_EXP_TAIL_BOUND))
    return total

def formal_star_bracket(A_poly, H_poly, spec):
    """Deformed bracket of two polynomial symbols under the spec, exactly.

    (A *_{sigma,S} H - H *_{sigma,S} A)/(i hbar) computed in the symbolic
    layer: pull back by S, take the sigma bracket, push forward, shift the
    formal hbar grading down by one.
    """
    word = spec.smoother.to_word()
    a = word.apply(A_poly, "inverse")
    h = word.apply(H_poly, "inverse")
    com = pstar(a, h, spec.sigma) - pstar(h, a, spec.sigma)
    com = word.apply(com, "forward")
    shifted = {}
    for (n, m, k), c in com.terms.items():
        if k == 0:
            if abs(c) > 1e-12:
                raise PSQError("bracket has an hbar^0 remainder; inconsistent")
            continue
        shifted[(n, m, k - 1)] = c / 1j
    return PolyH(shifted)

def heisenberg_observable(A_poly, H_poly, spec, t, order=18, tail=1e-12):
    """A(t) as a polynomial: truncated exponential of the bracket derivation.

    A(t) = sum_k t^k/k! ad^k A with ad X = [[X, H]]; exact for each term,
    guarded truncation overall.  For a quadratic Hamiltonian the iterated
    brackets stay in a fixed-degree space, so the series is entire and the
    bound is easily met for moderate t.
    """
    total = A_poly
    term = A_poly
    for k in range(1, order + 1):
        term = formal_star_bracket(term, H_poly, spec).scale(t / k)
        total = total + term
        if term.max_abs_coeff() <= tail * max(total.max_abs_coeff(), 1e-300):
            return total
    raise TruncationError(
        "Heisenberg series tail %.3g above %.1g at order %d"
        % (term.max_abs_coeff(), tail, order))

def heisenberg_trajectory(A, state0, H, spec, cfg, check_tol=1e-5):
    """Expectation trajectory of A with the equation-of-motion residual.

    Evolves the state in the Schrodinger picture, records <A>(t), and checks
    d/dt <A> = <[[A, H]]> at interior snapshot times by centered differences.
    Returns (times, values, residual_max).
    """
    if state0.provenance is None:
        raise PSQError("heisenberg_trajectory needs a pure state with provenance")
    phi = state0.provenance[1]
    bracket = ObservableSpec.from_poly(
        formal_star_bracket(A.as_poly(), H.as_poly(), spec), "[[A,H]]")
    result = evolve_schrodinger(phi, H, spec, cfg,
                                observables={"A": A, "B": bracket},
                                phase_space_snapshots=False)
    times = result.times
    vals = result.expectations["A"]
    brak = result.expectations["B"]
    resid = 0.0
    for i in range(1, len(times) - 1):
        dt2 = times[i + 1] - times[i - 1]
        deriv = (vals[i + 1] - vals[i - 1]) / dt2
        resid = max(resid, abs(deriv - brak[i]))
    if resid > check_tol:
        raise PSQError(
            "equation-of-motion residual %.3g exceeds %.1g" % (resid, check_tol))
    return times, vals, resid
