import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nlslab import spectral as sp
from nlslab.errors import InvalidArgumentError

from conftest import banded_random_field


def _rand(grid, seed, profile="flat"):
    return sp.random_field(grid, np.random.default_rng(seed), profile)


class TestProjection:
    def test_keeps_low_modes(self, grid16):
        c = np.zeros(grid16.n_coeff, dtype=complex)
        for k in (0, 1, -1, 3, -3):
            c[grid16.n + k] = 1.0
        u = sp.Field(grid16, c)
        p = sp.project_low(u, 1)
        nz = set(int(k) for k in grid16.k[np.abs(p.coeff) > 0])
        assert nz == {-1, 0, 1}

    def test_identity_at_full_cutoff(self, grid16, rng):
        u = sp.random_field(grid16, rng)
        assert np.array_equal(sp.project_low(u, grid16.n).coeff, u.coeff)

    def test_idempotent(self, grid16, rng):
        u = sp.random_field(grid16, rng)
        once = sp.project_low(u, 2)
        assert np.array_equal(sp.project_low(once, 2).coeff, once.coeff)

    def test_cutoff_above_n_rejected(self, grid16, rng):
        with pytest.raises(InvalidArgumentError):
            sp.project_low(sp.random_field(grid16, rng), grid16.n + 1)

    @given(seed=st.integers(0, 10 ** 6), m=st.integers(0, 8))
    @settings(max_examples=25, deadline=None)
    def test_orthogonality(self, seed, m):
        g = sp.SpectralGrid(2.0 * np.pi, 8)
        u = _rand(g, seed)
        total = sp.l2_norm_sq(u)
        split = sp.l2_norm_sq(sp.project_low(u, m)) + sp.l2_norm_sq(sp.project_high(u, m))
        assert split == pytest.approx(total, rel=1e-12)


class TestDerivative:
    def test_second_derivative_of_first_mode(self):
        g = sp.SpectralGrid(2.0 * np.pi, 8)
        u = sp.single_mode(g, 1)
        assert np.allclose(sp.derivative(u, 2).coeff, -u.coeff, atol=1e-15)

    def test_constant_derivative_vanishes(self, grid8):
        u = sp.constant_field(grid8, 3.0 - 1.0j)
        for order in (1, 2):
            assert sp.norm(sp.derivative(u, order), "l2") == 0.0

    def test_composition(self, grid8, rng):
        u = sp.random_field(grid8, rng)
        twice = sp.derivative(sp.derivative(u, 1), 1)
        assert np.allclose(twice.coeff, sp.derivative(u, 2).coeff, rtol=1e-13, atol=1e-16)

    def test_order_restricted(self, grid8, rng):
        with pytest.raises(InvalidArgumentError):
            sp.derivative(sp.random_field(grid8, rng), 3)


class TestNorms:
    def test_constant_l2(self):
        g = sp.SpectralGrid(2.0 * np.pi, 8)
        assert sp.norm(sp.constant_field(g, 1.0), "L2") == pytest.approx(np.sqrt(2 * np.pi))

    def test_first_mode_h2(self):
        g = sp.SpectralGrid(2.0 * np.pi, 8)
        assert sp.norm(sp.single_mode(g, 1), "H2") == pytest.approx(np.sqrt(4 * np.pi))

    @given(seed=st.integers(0, 10 ** 6))
    @settings(max_examples=25, deadline=None)
    def test_h1_definition(self, seed):
        g = sp.SpectralGrid(2.0 * np.pi, 8)
        u = _rand(g, seed)
        want = sp.norm(u, "l2") ** 2 + sp.norm(sp.derivative(u, 1), "l2") ** 2
        assert sp.norm(u, "h1") ** 2 == pytest.approx(want, rel=1e-12)

    @given(seed=st.integers(0, 10 ** 6))
    @settings(max_examples=20, deadline=None)
    def test_parseval_quadrature(self, seed):
        g = sp.SpectralGrid(2.0 * np.pi, 8)
        u = _rand(g, seed)
        quad = float(np.real(sp.grid_quadrature(g, np.abs(sp.to_physical(u)) ** 2)))
        assert quad == pytest.approx(sp.l2_norm_sq(u), rel=1e-10)

    @given(seed=st.integers(0, 10 ** 6), m=st.integers(0, 7))
    @settings(max_examples=25, deadline=None)
    def test_generalized_poincare(self, seed, m):
        g = sp.SpectralGrid(2.0 * np.pi, 8)
        u = _rand(g, seed)
        q = sp.norm(sp.project_high(u, m), "l2")
        bound = g.L / (2.0 * np.pi * (m + 1)) * sp.norm(sp.derivative(u, 1), "l2")
        assert q <= bound * (1 + 1e-10) + 1e-14


class TestCubic:
    def test_constant(self, grid8):
        a = 2.0 + 1.0j
        out = sp.cubic(sp.constant_field(grid8, a))
        assert out.coeff[grid8.n] == pytest.approx(abs(a) ** 2 * a)
        assert np.all(np.abs(np.delete(out.coeff, grid8.n)) < 1e-14)

    def test_unimodular_plane_wave(self, grid8):
        u = sp.single_mode(grid8, 3)
        assert np.allclose(sp.cubic(u).coeff, u.coeff, atol=1e-14)

    def test_matches_convolution_oracle(self):
        g = sp.SpectralGrid(2.0 * np.pi, 6)
        rng = np.random.default_rng(7)
        for _ in range(4):
            u = sp.random_field(g, rng, "flat")
            got = sp.cubic(u).coeff
            want = _triple_convolution(u)
            assert np.max(np.abs(got - want)) <= 1e-10 * np.max(np.abs(want))

    def test_two_mode_case(self):
        g = sp.SpectralGrid(2.0 * np.pi, 8)
        c = np.zeros(g.n_coeff, dtype=complex)
        c[g.n + 1] = 1.0 - 0.5j
        c[g.n - 2] = 0.25j
        u = sp.Field(g, c)
        assert np.allclose(sp.cubic(u).coeff, _triple_convolution(u), atol=1e-13)


def _triple_convolution(u):
    n = u.grid.n
    c = u.coeff
    out = np.zeros(2 * n + 1, dtype=complex)
    for k1 in range(-n, n + 1):
        for k2 in range(-n, n + 1):
            for k3 in range(-n, n + 1):
                k = k1 + k2 - k3
                if -n <= k <= n:
                    out[n + k] += c[n + k1] * c[n + k2] * np.conj(c[n + k3])
    return out


class TestAgmon:
    def test_constant_field_ratio(self):
        g = sp.SpectralGrid(2.0 * np.pi, 8)
        assert sp.agmon_ratio(sp.constant_field(g, 1.0)) == pytest.approx(1 / (2 * np.pi), rel=1e-6)

    def test_scale_invariant(self, grid8, rng):
        u = sp.random_field(grid8, rng)
        assert sp.agmon_ratio(u * 17.0) == pytest.approx(sp.agmon_ratio(u), rel=1e-12)

    def test_zero_field_rejected(self, grid8):
        with pytest.raises(InvalidArgumentError):
            sp.agmon_ratio(sp.zero_field(grid8))

    def test_sampled_ratios_below_calibrated_c(self):
        rng = np.random.default_rng(0)
        grids = [sp.SpectralGrid(2.0 * np.pi, n) for n in (16, 32)]
        worst = 0.0
        for i in range(200):
            g = grids[i % 2]
            profile = list(sp._PROFILES)[i % 4]
            worst = max(worst, sp.agmon_ratio(sp.random_field(g, rng, profile)))
        assert worst <= sp.DEFAULT_UNIVERSAL_C


class TestGridValidation:
    def test_underpadded_grid_rejected(self):
        with pytest.raises(InvalidArgumentError):
            sp.SpectralGrid(2.0 * np.pi, 8, n_phys=16)

    def test_default_padding_alias_free(self):
        g = sp.SpectralGrid(1.0, 5)
        assert g.n_phys >= 2 * (2 * g.n + 1)
        assert g.n_sup >= 4 * g.n_coeff

    def test_wrong_coeff_count(self, grid8):
        with pytest.raises(InvalidArgumentError):
            sp.Field(grid8, np.zeros(4, dtype=complex))


class TestSerialization:
    def test_roundtrip_bit_exact(self, grid8, rng):
        u = sp.random_field(grid8, rng)
        v = sp.field_from_json(sp.field_to_json(u))
        assert np.array_equal(u.coeff, v.coeff)
        assert v.grid.L == grid8.L and v.grid.n == grid8.n

    def test_extreme_doubles_roundtrip(self, grid8):
        c = np.zeros(grid8.n_coeff, dtype=complex)
        c[0] = 1e-308 + 1e308j
        c[1] = -2.2250738585072014e-308
        c[2] = 0.1 + (1.0 / 3.0) * 1j
        u = sp.Field(grid8, c)
        v = sp.field_from_json(sp.field_to_json(u))
        assert np.array_equal(u.coeff, v.coeff)

    def test_key_order(self, grid8):
        obj = json.loads(sp.field_to_json(sp.constant_field(grid8, 1.0)))
        assert set(obj) == {"L", "n", "re", "im"}
        assert len(obj["re"]) == grid8.n_coeff
