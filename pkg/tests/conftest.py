import numpy as np
import pytest
from scipy.special import erf

from psq import PhaseField, make_grid


@pytest.fixture
def grid64():
    return make_grid(64, 64, -8.0, 8.0, -8.0, 8.0, 1.0)


@pytest.fixture
def grid128():
    return make_grid(128, 128, -8.0, 8.0, -8.0, 8.0, 1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


def gaussian_mixture(grid, rng, n_terms=3, width_range=(0.6, 1.0), center=2.0):
    """Random smooth, grid-supported field: a sum of displaced complex Gaussians.

    Widths and centers keep the boundary amplitude below ~1e-8 of the peak so
    the fields sit inside the star product's tail-mass contract.
    """
    X, P = grid.meshes()
    vals = np.zeros((grid.nx, grid.np), dtype=complex)
    for _ in range(n_terms):
        x0, p0 = rng.uniform(-center, center, 2)
        wx, wp = rng.uniform(*width_range, 2)
        amp = rng.normal() + 1j * rng.normal()
        phase = rng.uniform(-1.0, 1.0)
        vals += amp * np.exp(-((X - x0) ** 2 / (2 * wx ** 2)
                               + (P - p0) ** 2 / (2 * wp ** 2))
                             + 1j * phase * (X + P))
    return PhaseField(grid, vals)


def plateau_window(grid, edge=6.0, width=0.5):
    """Flat-top window ~1 inside |x|,|p| < edge - 3*width, ~0 at the boundary."""
    wx = 0.5 * (erf((grid.x + edge) / width) - erf((grid.x - edge) / width))
    wp = 0.5 * (erf((grid.p + edge) / width) - erf((grid.p - edge) / width))
    return np.outer(wx, wp)


def dense_star_oracle(f_fourier_fn, g_fn, points, sigma, hbar,
                      xi_max, eta_max, n_quad):
    """Brute-force quadrature of the star product's integral form.

    Evaluates (1/2 pi hbar) iint Ff(xi, eta) g(x - sigmabar eta, p - sigma xi)
    e^{i(xi x - eta p)/hbar} dxi deta at the given (x, p) points, with the
    analytic Fourier transform Ff supplied by the caller.  Fully independent
    of the FFT code path.
    """
    sb = 1.0 - sigma
    xi = np.linspace(-xi_max, xi_max, n_quad, endpoint=False)
    eta = np.linspace(-eta_max, eta_max, n_quad, endpoint=False)
    dxi = xi[1] - xi[0]
    deta = eta[1] - eta[0]
    XI, ETA = np.meshgrid(xi, eta, indexing="ij")
    Ff = f_fourier_fn(XI, ETA)
    out = []
    for (x, p) in points:
        integrand = Ff * g_fn(x - sb * ETA, p - sigma * XI) \
            * np.exp(1j * (XI * x - ETA * p) / hbar)
        out.append(integrand.sum() * dxi * deta / (2 * np.pi * hbar))
    return np.array(out)
