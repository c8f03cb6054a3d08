"""Phase-space grids, hbar-scaled Fourier transforms and quadrature.

Conventions (fixed once here, everything downstream inherits them):

* full transform      F f(xi, eta)  = (1/2 pi hbar) iint f(x, p) e^{-i(xi x - eta p)/hbar} dx dp
* inverse             F^-1 g(x, p)  = (1/2 pi hbar) iint g(xi, eta) e^{+i(xi x - eta p)/hbar} dxi deta
* partial, x axis     (x -> xi)     kernel e^{-i x xi / hbar},  prefactor 1/sqrt(2 pi hbar)
* partial, p axis     (p -> y)      kernel e^{+i y p / hbar} for the inverse direction, so that
                                    the full transform factors as (forward x) o (inverse p).

Consequences used as test oracles elsewhere: the self-dual Gaussian
e^{-(x^2+p^2)/2 hbar} is a fixed point of F, the map is unitary
(<f|g> = <Ff|Fg> with no extra constant), and derivatives map to the
multipliers (i xi/hbar)^n (-i eta/hbar)^m.

Fields are immutable values: every operation returns a new field.  Two
fields interoperate only if their grids compare equal; there is never an
implicit resample.
"""

import io
import os
import struct
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.fft as sp_fft

from .errors import GridMismatchError, PSQError

_MAGIC = b"PSQF"
_VERSION = 1


def _workers():
    """Worker-thread cap for batched FFTs (PSQ_THREADS, default 1)."""
    try:
        return max(1, int(os.environ.get("PSQ_THREADS", "1")))
    except ValueError:
        return 1


def _is_pow2(n):
    return n > 0 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class PhaseGrid:
    """Uniform rectangular (x, p) lattice with its conjugate lattice.

    The conjugate lattice spacings are dxi = 2 pi hbar/(nx dx) and
    deta = 2 pi hbar/(np dp); the conjugate lattices are stored centered
    (monotonically increasing, containing 0 at index n//2).
    """

    nx: int
    np: int
    x_min: float
    x_max: float
    p_min: float
    p_max: float
    hbar: float

    def __post_init__(self):
        if not _is_pow2(self.nx) or not _is_pow2(self.np):
            raise PSQError("size not a power of two: nx=%r np=%r" % (self.nx, self.np))
        if not self.hbar > 0:
            raise PSQError("hbar must be positive")
        if not (self.x_max > self.x_min and self.p_max > self.p_min):
            raise PSQError("empty span: require x_max > x_min and p_max > p_min")

    @property
    def dx(self):
        return (self.x_max - self.x_min) / self.nx

    @property
    def dp(self):
        return (self.p_max - self.p_min) / self.np

    @property
    def dxi(self):
        return 2.0 * np.pi * self.hbar / (self.nx * self.dx)

    @property
    def deta(self):
        return 2.0 * np.pi * self.hbar / (self.np * self.dp)

    @cached_property
    def x(self):
        return self.x_min + self.dx * np.arange(self.nx)

    @cached_property
    def p(self):
        return self.p_min + self.dp * np.arange(self.np)

    @cached_property
    def xi(self):
        return (np.arange(self.nx) - self.nx // 2) * self.dxi

    @cached_property
    def eta(self):
        return (np.arange(self.np) - self.np // 2) * self.deta

    def meshes(self):
        """(X, P) coordinate matrices, shape (nx, np), x-major."""
        return np.meshgrid(self.x, self.p, indexing="ij")

    def conj_meshes(self):
        """(XI, ETA) conjugate-lattice matrices, shape (nx, np)."""
        return np.meshgrid(self.xi, self.eta, indexing="ij")


def make_grid(nx, np_, x_min, x_max, p_min, p_max, hbar):
    """Build a PhaseGrid; sizes must be powers of two and hbar > 0."""
    return PhaseGrid(int(nx), int(np_), float(x_min), float(x_max),
                     float(p_min), float(p_max), float(hbar))


def _check_same_grid(a, b):
    if a.grid != b.grid:
        raise GridMismatchError("fields live on different grids")


def _as_complex_2d(grid, values):
    arr = np.asarray(values, dtype=complex)
    if arr.shape == (grid.nx * grid.np,):
        arr = arr.reshape(grid.nx, grid.np)
    if arr.shape != (grid.nx, grid.np):
        raise PSQError("field shape %r does not match grid (%d, %d)"
                       % (arr.shape, grid.nx, grid.np))
    return arr


class PhaseField:
    """Complex samples on a PhaseGrid, x-major: values[j, k] = f(x_j, p_k)."""

    __slots__ = ("grid", "values", "meta")

    def __init__(self, grid, values, meta=None):
        self.grid = grid
        self.values = _as_complex_2d(grid, values)
        self.meta = dict(meta) if meta else {}

    @classmethod
    def from_function(cls, grid, fn):
        X, P = grid.meshes()
        return cls(grid, np.asarray(fn(X, P), dtype=complex))

    @classmethod
    def constant(cls, grid, value=1.0):
        return cls(grid, np.full((grid.nx, grid.np), value, dtype=complex))

    def copy(self):
        return PhaseField(self.grid, self.values.copy(), self.meta)

    def conj(self):
        return PhaseField(self.grid, np.conj(self.values))

    def __add__(self, other):
        _check_same_grid(self, other)
        return PhaseField(self.grid, self.values + other.values)

    def __sub__(self, other):
        _check_same_grid(self, other)
        return PhaseField(self.grid, self.values - other.values)

    def __mul__(self, scalar):
        return PhaseField(self.grid, self.values * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return PhaseField(self.grid, self.values / scalar)

    def __neg__(self):
        return PhaseField(self.grid, -self.values)

    def assert_finite(self):
        if not np.all(np.isfinite(self.values.view(float))):
            raise PSQError("field contains non-finite samples")
        return self


class SpectralField:
    """Complex samples on the centered conjugate lattice (xi_k, eta_l)."""

    __slots__ = ("grid", "values")

    def __init__(self, grid, values):
        self.grid = grid
        self.values = _as_complex_2d(grid, values)


class WaveFunction:
    """Complex samples on the x axis of a PhaseGrid."""

    __slots__ = ("grid", "values")

    def __init__(self, grid, values):
        arr = np.asarray(values, dtype=complex)
        if arr.shape != (grid.nx,):
            raise PSQError("wavefunction length %r does not match nx=%d"
                           % (arr.shape, grid.nx))
        self.grid = grid
        self.values = arr

    @classmethod
    def from_function(cls, grid, fn):
        return cls(grid, np.asarray(fn(grid.x), dtype=complex))

    def norm(self):
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.grid.dx))

    def normalized(self):
        return WaveFunction(self.grid, self.values / self.norm())

    def inner(self, other):
        _check_same_grid(self, other)
        return complex(np.sum(np.conj(self.values) * other.values) * self.grid.dx)

    def conj(self):
        return WaveFunction(self.grid, np.conj(self.values))


# ---------------------------------------------------------------------------
# hbar-scaled discrete transforms
# ---------------------------------------------------------------------------

def half_dft(values, axis, in0, din, out0, dout, sign, hbar):
    """sum_j f_j exp(sign * i * out_m * in_j / hbar) along one axis.

    in_j = in0 + j*din and out_m = out0 + m*dout with n*din*dout = 2 pi hbar,
    which reduces the kernel to a plain FFT between pre/post phase factors.
    No quadrature weight is applied here.
    """
    values = np.asarray(values, dtype=complex)
    n = values.shape[axis]
    idx = np.arange(n)
    pre = np.exp(sign * 1j * out0 * (in0 + din * idx) / hbar)
    post = np.exp(sign * 1j * idx * dout * in0 / hbar)
    shape = [1] * values.ndim
    shape[axis] = n
    a = values * pre.reshape(shape)
    if sign < 0:
        A = sp_fft.fft(a, axis=axis, workers=_workers())
    else:
        A = sp_fft.ifft(a, axis=axis, workers=_workers()) * n
    return A * post.reshape(shape)


def _fwd_x(grid, values):
    """x -> xi with kernel e^{-i x xi/hbar}; no weight."""
    return half_dft(values, 0, grid.x[0], grid.dx, grid.xi[0], grid.dxi, -1, grid.hbar)


def _inv_x(grid, values):
    """xi -> x with kernel e^{+i x xi/hbar}; no weight."""
    return half_dft(values, 0, grid.xi[0], grid.dxi, grid.x[0], grid.dx, +1, grid.hbar)


def _p_to_eta(grid, values):
    """p -> eta with kernel e^{+i eta p/hbar}; no weight."""
    return half_dft(values, 1, grid.p[0], grid.dp, grid.eta[0], grid.deta, +1, grid.hbar)


def _eta_to_p(grid, values):
    """eta -> p with kernel e^{-i eta p/hbar}; no weight."""
    return half_dft(values, 1, grid.eta[0], grid.deta, grid.p[0], grid.dp, -1, grid.hbar)


def fourier_full(field):
    """Full transform PhaseField -> SpectralField on the centered lattice."""
    g = field.grid
    out = _fwd_x(g, field.values)
    out = _p_to_eta(g, out)
    out *= g.dx * g.dp / (2.0 * np.pi * g.hbar)
    return SpectralField(g, out)


def fourier_full_inverse(sfield):
    """Inverse of :func:`fourier_full`."""
    g = sfield.grid
    out = _inv_x(g, sfield.values)
    out = _eta_to_p(g, out)
    out *= g.dxi * g.deta / (2.0 * np.pi * g.hbar)
    return PhaseField(g, out)


def fourier_partial(field, axis, direction):
    """Single-axis hbar-scaled transform (mixed representations).

    axis='x': forward maps x to its conjugate variable, inverse maps back.
    axis='p': 'inverse' maps p to the shift variable y (kernel e^{+i y p/hbar}),
    'forward' maps y back to p, so that full = (x forward) o (p inverse).
    Returned values live on the mixed-representation lattice but are carried
    in a PhaseField of the same shape.
    """
    g = field.grid
    v = field.values
    if axis == "x":
        if direction == "forward":
            out = _fwd_x(g, v) * (g.dx / np.sqrt(2.0 * np.pi * g.hbar))
        elif direction == "inverse":
            out = _inv_x(g, v) * (g.dxi / np.sqrt(2.0 * np.pi * g.hbar))
        else:
            raise PSQError("direction must be 'forward' or 'inverse'")
    elif axis == "p":
        if direction == "forward":
            out = _eta_to_p(g, v) * (g.deta / np.sqrt(2.0 * np.pi * g.hbar))
        elif direction == "inverse":
            out = _p_to_eta(g, v) * (g.dp / np.sqrt(2.0 * np.pi * g.hbar))
        else:
            raise PSQError("direction must be 'forward' or 'inverse'")
    else:
        raise PSQError("axis must be 'x' or 'p'")
    return PhaseField(g, out)


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------

def integrate(field):
    """Rectangle-rule iint f dx dp."""
    g = field.grid
    return complex(field.values.sum() * g.dx * g.dp)


def l2_inner(f, g_field):
    """<f|g> = iint conj(f) g dx dp (conjugate-linear in the first slot)."""
    _check_same_grid(f, g_field)
    g = f.grid
    return complex(np.sum(np.conj(f.values) * g_field.values) * g.dx * g.dp)


def l2_norm(field):
    g = field.grid
    return float(np.sqrt(np.sum(np.abs(field.values) ** 2) * g.dx * g.dp))


def boundary_tail_mass(field, margin=2):
    """Fraction of |f|^2 mass in the outer `margin` cells of the lattice."""
    v = np.abs(field.values) ** 2
    total = v.sum()
    if total == 0.0:
        return 0.0
    inner = v[margin:-margin, margin:-margin].sum()
    return float((total - inner) / total)


def spectral_tail_mass(field, margin=2):
    """Fraction of spectral mass in the outer `margin` conjugate cells."""
    F = fourier_full(field)
    return boundary_tail_mass(PhaseField(field.grid, F.values), margin=margin)


# ---------------------------------------------------------------------------
# serialization: flat binary container and CSV export
# ---------------------------------------------------------------------------

def write_field(field, path):
    """Write the PSQF flat binary container.

    Layout: 32-byte header (magic 'PSQF', version u32, nx u32, np u32,
    16 reserved zero bytes), then 6 little-endian f64
    (x_min, x_max, p_min, p_max, hbar, reserved), then nx*np complex
    samples as interleaved f64 pairs, x-major.
    """
    g = field.grid
    header = _MAGIC + struct.pack("<III", _VERSION, g.nx, g.np) + b"\x00" * 16
    doubles = struct.pack("<6d", g.x_min, g.x_max, g.p_min, g.p_max, g.hbar, 0.0)
    data = np.ascontiguousarray(field.values, dtype=np.complex128)
    if not np.little_endian:  # pragma: no cover
        data = data.byteswap()
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(doubles)
        fh.write(data.tobytes(order="C"))


def read_field(path):
    """Read a PSQF container written by :func:`write_field`."""
    with open(path, "rb") as fh:
        header = fh.read(32)
        if len(header) != 32 or header[:4] != _MAGIC:
            raise PSQError("not a PSQF file: %s" % path)
        version, nx, npn = struct.unpack("<III", header[4:16])
        if version != _VERSION:
            raise PSQError("unsupported PSQF version %d" % version)
        x_min, x_max, p_min, p_max, hbar, _ = struct.unpack("<6d", fh.read(48))
        raw = fh.read(16 * nx * npn)
    if len(raw) != 16 * nx * npn:
        raise PSQError("truncated PSQF payload in %s" % path)
    grid = make_grid(nx, npn, x_min, x_max, p_min, p_max, hbar)
    vals = np.frombuffer(raw, dtype="<c16").astype(complex).reshape(nx, npn)
    return PhaseField(grid, vals)


def write_field_csv(field, path):
    """CSV export: columns x,p,re,im with a comment header."""
    g = field.grid
    buf = io.StringIO()
    buf.write("# hbar=%.17g nx=%d np=%d\n" % (g.hbar, g.nx, g.np))
    buf.write("x,p,re,im\n")
    v = field.values
    for j in range(g.nx):
        xj = g.x[j]
        for k in range(g.np):
            buf.write("%.17g,%.17g,%.17g,%.17g\n"
                      % (xj, g.p[k], v[j, k].real, v[j, k].imag))
    with open(path, "w") as fh:
        fh.write(buf.getvalue())
