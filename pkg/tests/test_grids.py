import numpy as np
import pytest

from psq import (GridMismatchError, PhaseField, PSQError, SpectralField,
                 WaveFunction, fourier_full, fourier_full_inverse,
                 fourier_partial, integrate, l2_inner, l2_norm, make_grid,
                 read_field, write_field, write_field_csv)
from psq.ordering import OrderingSpec
from psq.states import hermite_function, twisted_tensor

from conftest import gaussian_mixture


class TestMakeGrid:
    def test_spacings(self):
        g = make_grid(64, 64, -8, 8, -8, 8, 1.0)
        assert g.dx == 0.25
        assert g.dp == 0.25
        assert np.isclose(g.dxi, 2 * np.pi / 16)
        assert np.isclose(g.deta, 2 * np.pi / 16)

    def test_conjugate_lattice_centered(self):
        g = make_grid(64, 32, -8, 8, -4, 4, 0.5)
        assert g.xi[32] == 0.0
        assert g.eta[16] == 0.0
        assert np.all(np.diff(g.xi) > 0)

    def test_rejects_nonpositive_hbar(self):
        with pytest.raises(PSQError, match="hbar must be positive"):
            make_grid(64, 64, -8, 8, -8, 8, 0.0)

    def test_rejects_non_power_of_two(self):
        with pytest.raises(PSQError, match="power of two"):
            make_grid(60, 64, -8, 8, -8, 8, 1.0)

    def test_rejects_empty_span(self):
        with pytest.raises(PSQError, match="empty span"):
            make_grid(64, 64, 8, -8, -8, 8, 1.0)


class TestFourierFull:
    def test_self_dual_gaussian(self, grid64):
        # 1D Gaussian integral: each axis maps e^{-u^2/2hbar} to itself
        X, P = grid64.meshes()
        f = PhaseField(grid64, np.exp(-(X ** 2 + P ** 2) / (2 * grid64.hbar)))
        F = fourier_full(f)
        XI, ETA = grid64.conj_meshes()
        exact = np.exp(-(XI ** 2 + ETA ** 2) / (2 * grid64.hbar))
        assert np.abs(F.values - exact).max() < 1e-10

    def test_roundtrip(self, grid64, rng):
        f = gaussian_mixture(grid64, rng)
        back = fourier_full_inverse(fourier_full(f))
        assert l2_norm(back - f) / l2_norm(f) < 1e-12

    @staticmethod
    def _spectral_inner(a, b):
        g = a.grid
        return np.sum(np.conj(a.values) * b.values) * g.dxi * g.deta

    def test_unitarity_constant_on_gaussian_pair(self, grid64):
        # fix the convention factor on an analytic pair: it is exactly 1
        X, P = grid64.meshes()
        f = PhaseField(grid64, np.exp(-(X ** 2 + P ** 2) / 2))
        g2 = PhaseField(grid64, np.exp(-((X - 1) ** 2 + P ** 2) / 2))
        num = self._spectral_inner(fourier_full(f), fourier_full(g2))
        den = l2_inner(f, g2)
        assert abs(num / den - 1.0) < 1e-12

    def test_unitarity_constant_across_random_fields(self, grid64, rng):
        for _ in range(5):
            f = gaussian_mixture(grid64, rng)
            g2 = gaussian_mixture(grid64, rng)
            num = self._spectral_inner(fourier_full(f), fourier_full(g2))
            den = l2_inner(f, g2)
            assert abs(num / den - 1.0) < 1e-10


class TestFourierPartial:
    def test_x_roundtrip(self, grid64, rng):
        f = gaussian_mixture(grid64, rng)
        back = fourier_partial(fourier_partial(f, "x", "forward"), "x", "inverse")
        assert l2_norm(back - f) / l2_norm(f) < 1e-12

    def test_p_roundtrip(self, grid64, rng):
        f = gaussian_mixture(grid64, rng)
        back = fourier_partial(fourier_partial(f, "p", "inverse"), "p", "forward")
        assert l2_norm(back - f) / l2_norm(f) < 1e-12

    def test_factorization_identity(self, grid64, rng):
        # full = (x forward) o (p inverse)
        f = gaussian_mixture(grid64, rng)
        two_step = fourier_partial(fourier_partial(f, "p", "inverse"), "x", "forward")
        full = fourier_full(f)
        assert np.abs(two_step.values - full.values).max() \
            < 1e-12 * np.abs(full.values).max()

    def test_gaussian_in_shift_slot(self, grid64):
        # mixed (x, y) data e^{-y^2/2hbar} maps to e^{-p^2/2hbar} on the p axis
        hbar = grid64.hbar
        xprof = np.exp(-grid64.x ** 2 / 4.0)
        vals = np.outer(xprof, np.exp(-grid64.eta ** 2 / (2 * hbar)))
        out = fourier_partial(PhaseField(grid64, vals), "p", "forward")
        exact = np.outer(xprof, np.exp(-grid64.p ** 2 / (2 * hbar)))
        assert np.abs(out.values - exact).max() < 1e-10


class TestDerivativeRule:
    @pytest.mark.parametrize("n,m", [(1, 0), (0, 1), (2, 0), (1, 1), (2, 2)])
    def test_multiplier(self, grid64, n, m):
        hbar = grid64.hbar
        X, P = grid64.meshes()
        w = 1.0
        f = np.exp(-(X ** 2 + P ** 2) / (2 * w))
        # closed-form d_x^n d_p^m of the Gaussian
        hx = {0: 1.0, 1: -X / w, 2: (X ** 2 / w ** 2 - 1 / w)}[n]
        hp = {0: 1.0, 1: -P / w, 2: (P ** 2 / w ** 2 - 1 / w)}[m]
        exact = hx * hp * f
        F = fourier_full(PhaseField(grid64, f))
        XI, ETA = grid64.conj_meshes()
        mult = (1j * XI / hbar) ** n * (-1j * ETA / hbar) ** m
        approx = fourier_full_inverse(SpectralField(grid64, F.values * mult))
        assert np.abs(approx.values - exact).max() < 1e-10


class TestQuadrature:
    def test_integrate_gaussian_closed_form(self, grid64):
        X, P = grid64.meshes()
        a, b = 1.2, 0.7
        f = PhaseField(grid64, np.exp(-(a * X ** 2 + b * P ** 2) / 2))
        exact = 2 * np.pi / np.sqrt(a * b)
        assert abs(integrate(f) - exact) / exact < 1e-8

    def test_integrate_normalized_ground_state(self, grid64):
        state = twisted_tensor(hermite_function(grid64, 0),
                               hermite_function(grid64, 0), OrderingSpec(0.5))
        norm = integrate(state.psi_field) / np.sqrt(2 * np.pi * grid64.hbar)
        assert abs(norm - 1.0) < 1e-8

    def test_inner_positive(self, grid64, rng):
        f = gaussian_mixture(grid64, rng)
        val = l2_inner(f, f)
        assert val.real >= 0
        assert abs(val - l2_norm(f) ** 2) < 1e-10 * val.real

    def test_hermite_tensor_orthonormality(self, grid64):
        spec = OrderingSpec(0.5)
        cases = [(0, 0, 0, 0, 1.0), (0, 1, 0, 1, 1.0), (1, 2, 1, 2, 1.0),
                 (0, 1, 1, 0, 0.0), (2, 3, 0, 1, 0.0)]
        for i, j, k, l, expect in cases:
            a = twisted_tensor(hermite_function(grid64, i),
                               hermite_function(grid64, j), spec)
            b = twisted_tensor(hermite_function(grid64, k),
                               hermite_function(grid64, l), spec)
            assert abs(l2_inner(a.psi_field, b.psi_field) - expect) < 1e-8

    def test_grid_mismatch(self, grid64):
        other = make_grid(64, 64, -8, 8, -8, 8, 0.5)
        f = PhaseField.constant(grid64)
        g2 = PhaseField.constant(other)
        with pytest.raises(GridMismatchError):
            l2_inner(f, g2)


class TestSerialization:
    def test_binary_roundtrip(self, grid64, rng, tmp_path):
        f = gaussian_mixture(grid64, rng)
        path = tmp_path / "field.psqf"
        write_field(f, path)
        back = read_field(path)
        assert back.grid == grid64
        assert np.array_equal(back.values, f.values)

    def test_binary_header_layout(self, grid64, tmp_path):
        f = PhaseField.constant(grid64)
        path = tmp_path / "field.psqf"
        write_field(f, path)
        raw = path.read_bytes()
        assert raw[:4] == b"PSQF"
        assert len(raw) == 32 + 48 + 16 * grid64.nx * grid64.np
        nx = int.from_bytes(raw[8:12], "little")
        assert nx == grid64.nx

    def test_csv_header(self, grid64, tmp_path):
        small = make_grid(4, 4, -1, 1, -1, 1, 2.0)
        f = PhaseField.constant(small, 1 + 2j)
        path = tmp_path / "field.csv"
        write_field_csv(f, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "# hbar=2 nx=4 np=4"
        assert lines[1] == "x,p,re,im"
        assert len(lines) == 2 + 16

    def test_rejects_bad_magic(self, tmp_path):
        path = tmp_path / "junk.psqf"
        path.write_bytes(b"NOPE" + b"\x00" * 60)
        with pytest.raises(PSQError, match="not a PSQF file"):
            read_field(path)


class TestWaveFunction:
    def test_norm_and_inner(self, grid64):
        phi = hermite_function(grid64, 0)
        psi = hermite_function(grid64, 3)
        assert abs(phi.norm() - 1.0) < 1e-12
        assert abs(phi.inner(psi)) < 1e-12
        assert abs(psi.inner(psi) - 1.0) < 1e-12

    def test_shape_validation(self, grid64):
        with pytest.raises(PSQError):
            WaveFunction(grid64, np.zeros(5))
