import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nlslab import spectral as sp
from nlslab import trajectory as tj
from nlslab.errors import CoverageError, InvalidArgumentError


def _smooth_trajectory(grid, seed=0, count=41, ds=0.05, omega=1.0):
    """Analytic rotating-phase trajectory with exact stored derivatives."""
    rng = np.random.default_rng(seed)
    base = sp.random_field(grid, rng, "smooth").coeff
    t = ds * np.arange(count)
    phase = np.exp(1j * omega * t)[:, None]
    coeffs = phase * base[None, :]
    dcoeffs = 1j * omega * coeffs
    return tj.Trajectory(grid, 0.0, ds, coeffs, dcoeffs)


class TestNorms:
    def test_constant_window(self, grid8):
        u = sp.constant_field(grid8, 2.0)
        tr = tj.constant_trajectory(u, 0.0, 0.1, 5)
        assert tj.norm_X(tr) == pytest.approx(sp.norm(u, "l2"))
        assert tj.norm_X0(tr) == pytest.approx(sp.norm(u, "l2"))

    def test_rotating_phase_doubles_x_norm(self, grid8):
        tr = _smooth_trajectory(grid8, omega=1.0)
        v0 = tj.norm_X0(tr)
        assert tj.norm_X(tr) == pytest.approx(2.0 * v0, rel=1e-12)

    def test_x_dominates_x0(self, grid8):
        tr = _smooth_trajectory(grid8, seed=3)
        assert tj.norm_X(tr) >= tj.norm_X0(tr)

    def test_spike_max_semantics(self, grid8):
        u = sp.constant_field(grid8, 1.0)
        tr = tj.constant_trajectory(u, 0.0, 0.1, 5)
        c = tr.coeffs.copy()
        c[2] *= 3.0
        spiked = tj.Trajectory(grid8, 0.0, 0.1, c, tr.dcoeffs, check=False)
        assert tj.norm_X0(spiked) == pytest.approx(3.0 * sp.norm(u, "l2"))

    def test_projection_contracts(self, grid8):
        tr = _smooth_trajectory(grid8, seed=5)
        assert tj.norm_X0(tj.project_low_traj(tr, 3)) <= tj.norm_X0(tr) + 1e-14

    def test_y_dominates_x0(self, grid8):
        tr = _smooth_trajectory(grid8, seed=6)
        assert tj.norm_Y(tr) >= tj.norm_X0(tr)

    def test_constant_steady_y_norm(self, grid8):
        u = sp.constant_field(grid8, 1.5)
        tr = tj.constant_trajectory(u, 0.0, 0.1, 4)
        assert tj.norm_Y(tr) == pytest.approx(sp.norm(u, "h2"))

    @given(lam=st.floats(-5, 5))
    @settings(max_examples=20, deadline=None)
    def test_homogeneity(self, lam):
        g = sp.SpectralGrid(2 * np.pi, 8)
        tr = _smooth_trajectory(g, seed=7)
        assert tj.norm_X(tr * lam) == pytest.approx(abs(lam) * tj.norm_X(tr), rel=1e-12, abs=1e-12)

    @given(s1=st.integers(0, 10 ** 5), s2=st.integers(0, 10 ** 5))
    @settings(max_examples=15, deadline=None)
    def test_triangle_inequality(self, s1, s2):
        g = sp.SpectralGrid(2 * np.pi, 8)
        a = _smooth_trajectory(g, seed=s1)
        b = _smooth_trajectory(g, seed=s2, omega=-0.7)
        assert tj.norm_X(a + b) <= tj.norm_X(a) + tj.norm_X(b) + 1e-12

    def test_refinement_monotone(self, grid8):
        fine = _smooth_trajectory(grid8, seed=9, count=81, ds=0.025)
        coarse = tj.Trajectory(grid8, 0.0, 0.05, fine.coeffs[::2], fine.dcoeffs[::2])
        assert tj.norm_X(fine) >= tj.norm_X(coarse) - 1e-14


class TestValidation:
    def test_derivative_consistency_enforced(self, grid8):
        tr = _smooth_trajectory(grid8)
        with pytest.raises(InvalidArgumentError):
            tj.Trajectory(grid8, 0.0, tr.ds, tr.coeffs, 50.0 * tr.dcoeffs)

    def test_cutoff_energy_enforced(self, grid8):
        tr = _smooth_trajectory(grid8)
        with pytest.raises(InvalidArgumentError):
            tj.Trajectory(grid8, 0.0, tr.ds, tr.coeffs, tr.dcoeffs, mode_cutoff=2)

    def test_too_short(self, grid8):
        c = np.zeros((1, grid8.n_coeff), dtype=complex)
        with pytest.raises(InvalidArgumentError):
            tj.Trajectory(grid8, 0.0, 0.1, c, c)


class TestWindowSurgery:
    def test_extend_zero_is_identity(self, grid8):
        tr = _smooth_trajectory(grid8)
        same = tj.extend_constant(tr, 0.0, 0.0)
        assert same is tr

    def test_restrict_of_extend_roundtrip(self, grid8):
        tr = _smooth_trajectory(grid8, count=21)
        padded = tj.extend_constant(tr, 0.25, 0.5)
        back = tj.restrict_window(padded, tr.s0, tr.s_end)
        assert np.array_equal(back.coeffs, tr.coeffs)
        assert back.s0 == pytest.approx(tr.s0)

    def test_pads_are_constant_with_zero_derivative(self, grid8):
        tr = _smooth_trajectory(grid8, count=11)
        padded = tj.extend_constant(tr, 0.2, 0.0)
        assert np.array_equal(padded.coeffs[0], tr.coeffs[0])
        assert np.all(padded.dcoeffs[0] == 0)

    def test_projected_norm_matches(self, grid8):
        tr = _smooth_trajectory(grid8, seed=11)
        p = tj.project_low_traj(tr, 2)
        direct = max(
            np.sqrt(grid8.L * np.sum(np.abs(p.coeffs[i]) ** 2)) for i in range(len(p))
        )
        assert tj.norm_X0(p) == pytest.approx(direct)

    def test_empty_restrict_rejected(self, grid8):
        tr = _smooth_trajectory(grid8)
        with pytest.raises(InvalidArgumentError):
            tj.restrict_window(tr, 100.0, 101.0)


class TestInterpolant:
    def test_exact_at_samples(self, grid8):
        tr = _smooth_trajectory(grid8)
        interp = tj.ObservationInterpolant(tr)
        for i in (0, 3, len(tr) - 1):
            s = tr.s0 + i * tr.ds
            assert np.allclose(interp.value(s), tr.coeffs[i], atol=1e-12)

    def test_hermite_fourth_order(self, grid8):
        errs = []
        for ds in (0.05, 0.025):
            tr = _smooth_trajectory(grid8, count=int(2.0 / ds) + 1, ds=ds, omega=2.0)
            interp = tj.ObservationInterpolant(tr)
            s = tr.s0 + 7.5 * tr.ds
            exact = np.exp(1j * 2.0 * s) * tr.coeffs[0]
            errs.append(float(np.max(np.abs(interp.value(s) - exact))))
        assert errs[0] / errs[1] > 12.0  # ~16 for quartic local error

    def test_coverage_error(self, grid8):
        tr = _smooth_trajectory(grid8)
        interp = tj.ObservationInterpolant(tr)
        with pytest.raises(CoverageError):
            interp.value(tr.s_end + 1.0)

    def test_segments_partition_interval(self, grid8):
        tr = _smooth_trajectory(grid8)
        interp = tj.ObservationInterpolant(tr)
        t0 = tr.s0 + 0.3 * tr.ds
        t1 = tr.s0 + 3.6 * tr.ds
        total = sum(h for h, _ in interp.poly_segments(t0, t1))
        assert total == pytest.approx(t1 - t0, rel=1e-12)

    def test_segments_no_slivers_with_offset_origin(self, grid8):
        tr = _smooth_trajectory(grid8, count=1001, ds=1e-3)
        shifted = tj.Trajectory(grid8, 20.0, tr.ds, tr.coeffs, tr.dcoeffs)
        interp = tj.ObservationInterpolant(shifted)
        t = 20.0
        count = 0
        for _ in range(500):
            segs = list(interp.poly_segments(t, t + 5e-4))
            count = max(count, len(segs))
            t += 5e-4
        assert count <= 2


class TestManifest:
    def test_fields(self, grid8):
        import json
        tr = _smooth_trajectory(grid8, count=5)
        obj = json.loads(tj.trajectory_manifest(tr))
        assert obj["count"] == 5
        assert obj["grid"]["n"] == grid8.n
        assert obj["mode_cutoff"] is None
