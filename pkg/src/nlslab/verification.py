"""Fast property checks behind the `nlslab verify` subcommand.

Each check is a pure function returning a CheckResult; the registry mirrors
the per-module invariants at a size that runs in seconds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import bounds as bd
from . import spectral as sp
from .dynamics import NlsParams, SchemeConfig, integrate
from .trajectory import Trajectory, norm_X, norm_X0, project_low_traj


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _grid(n: int = 12) -> sp.SpectralGrid:
    return sp.SpectralGrid(2.0 * np.pi, n)


def check_parseval() -> CheckResult:
    g = _grid()
    rng = np.random.default_rng(0)
    worst = 0.0
    for _ in range(20):
        u = sp.random_field(g, rng, "flat")
        quad = float(np.real(sp.grid_quadrature(g, np.abs(sp.to_physical(u)) ** 2)))
        spec = sp.l2_norm_sq(u)
        worst = max(worst, abs(quad - spec) / spec)
    return CheckResult("parseval_consistency", worst < 1e-10, f"max rel defect {worst:.2e}")


def check_projection_orthogonality() -> CheckResult:
    g = _grid()
    rng = np.random.default_rng(1)
    worst = 0.0
    for m in (0, 3, 7, 12):
        u = sp.random_field(g, rng, "flat")
        total = sp.l2_norm_sq(u)
        parts = sp.l2_norm_sq(sp.project_low(u, m)) + sp.l2_norm_sq(sp.project_high(u, m))
        worst = max(worst, abs(total - parts) / total)
    return CheckResult("projection_orthogonality", worst < 1e-12, f"max rel defect {worst:.2e}")


def check_generalized_poincare() -> CheckResult:
    g = _grid()
    rng = np.random.default_rng(2)
    ok = True
    worst = 0.0
    for _ in range(10):
        u = sp.random_field(g, rng, "flat")
        dx = sp.norm(sp.derivative(u, 1), "l2")
        for m in range(0, g.n):
            q = sp.norm(sp.project_high(u, m), "l2")
            bound = g.L / (2.0 * np.pi * (m + 1)) * dx
            slack = (q - bound) / max(bound, 1e-300)
            worst = max(worst, slack)
            ok = ok and slack <= 1e-10
    return CheckResult("generalized_poincare", ok, f"max violation {worst:.2e}")


def check_dealiased_cubic() -> CheckResult:
    g = sp.SpectralGrid(2.0 * np.pi, 8)
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(5):
        u = sp.random_field(g, rng, "flat")
        got = sp.cubic(u).coeff
        want = _cubic_by_convolution(u)
        worst = max(worst, float(np.max(np.abs(got - want))) / float(np.max(np.abs(want))))
    return CheckResult("dealiased_cubic_vs_convolution", worst < 1e-10, f"max rel defect {worst:.2e}")


def _cubic_by_convolution(u: sp.Field) -> np.ndarray:
    n = u.grid.n
    c = u.coeff
    out = np.zeros(2 * n + 1, dtype=np.complex128)
    for k1 in range(-n, n + 1):
        for k2 in range(-n, n + 1):
            for k3 in range(-n, n + 1):
                k = k1 + k2 - k3
                if -n <= k <= n:
                    out[n + k] += c[n + k1] * c[n + k2] * np.conj(c[n + k3])
    return out


def check_agmon_calibration() -> CheckResult:
    g = _grid(16)
    rng = np.random.default_rng(4)
    worst = 0.0
    for profile in ("flat", "smooth", "steep", "peaked"):
        for _ in range(25):
            worst = max(worst, sp.agmon_ratio(sp.random_field(g, rng, profile)))
    ok = worst <= sp.DEFAULT_UNIVERSAL_C
    return CheckResult("agmon_ratio_within_calibrated_c", ok,
                       f"max ratio {worst:.4f} vs c = {sp.DEFAULT_UNIVERSAL_C}")


def check_serialization_roundtrip() -> CheckResult:
    g = _grid(6)
    rng = np.random.default_rng(5)
    u = sp.random_field(g, rng, "flat")
    v = sp.field_from_json(sp.field_to_json(u))
    ok = bool(np.array_equal(u.coeff, v.coeff)) and v.grid.L == g.L and v.grid.n == g.n
    return CheckResult("field_json_roundtrip_bit_exact", ok, "re/im arrays identical")


def check_mass_balance_quick() -> CheckResult:
    from .functionals import mass_balance_residuals
    g = _grid(8)
    f = sp.constant_field(g, 0.2 + 0.05j)
    params = NlsParams(gamma=0.5, f=f, mu=0.0)
    rng = np.random.default_rng(6)
    u0 = sp.random_field(g, rng, "smooth", 0.5)
    traj = integrate(u0, params, (0.0, 2.0), SchemeConfig(dt=1e-3, scheme="rk4_galerkin"))
    res = float(np.max(mass_balance_residuals(traj, None, params)))
    return CheckResult("mass_balance_identity", res < 1e-6, f"max residual {res:.2e}/unit time")


def check_damping_exactness() -> CheckResult:
    g = sp.SpectralGrid(2.0 * np.pi, 16)
    rng = np.random.default_rng(7)
    c = np.zeros(g.n_coeff, dtype=np.complex128)
    for k in range(-4, 5):
        c[g.n + k] = (rng.standard_normal() + 1j * rng.standard_normal()) * np.exp(-abs(k))
    u0 = sp.Field(g, c)
    params = NlsParams(gamma=0.3, f=sp.zero_field(g))
    traj = integrate(u0, params, (0.0, 4.0), SchemeConfig(dt=1e-3, sample_every=400))
    vals = [sp.norm(traj.field(i), "l2") * np.exp(0.3 * traj.times[i]) for i in range(len(traj))]
    spread = (max(vals) - min(vals)) / vals[0]
    return CheckResult("splitstep_damping_exactness", spread < 1e-12,
                       f"rel spread {spread:.2e} (band-limited data)")


def check_trajectory_norms() -> CheckResult:
    g = _grid(6)
    rng = np.random.default_rng(8)
    c = rng.standard_normal((5, g.n_coeff)) + 1j * rng.standard_normal((5, g.n_coeff))
    d = rng.standard_normal((5, g.n_coeff)) + 1j * rng.standard_normal((5, g.n_coeff))
    tr = Trajectory(g, 0.0, 0.1, c, d, check=False)
    hom = abs(norm_X(tr * 3.0) - 3.0 * norm_X(tr)) / norm_X(tr)
    tr2 = Trajectory(g, 0.0, 0.1, c[::-1], d[::-1], check=False)
    tri = norm_X(tr + tr2) <= norm_X(tr) + norm_X(tr2) + 1e-12
    mono = norm_X0(project_low_traj(tr, 3)) <= norm_X0(tr) + 1e-15
    ok = hom < 1e-12 and tri and mono
    return CheckResult("trajectory_norm_algebra", ok,
                       f"homogeneity defect {hom:.2e}, triangle {tri}, projection {mono}")


def check_bounds_monotone() -> CheckResult:
    base = bd.BoundsInput(gamma=1.0, L=2.0 * np.pi, norm_f=1.0, mu=5.0, v_X=1.0)
    ok = True
    prev = None
    for nf in (0.5, 1.0, 2.0, 4.0):
        rep = bd.compute_report(bd.BoundsInput(gamma=1.0, L=base.L, norm_f=nf, mu=5.0, v_X=1.0))
        vals = (rep.r0, rep.r1, rep.r2, rep.rprime, rep.k11)
        if prev is not None:
            ok = ok and all(a >= b for a, b in zip(vals, prev))
        prev = vals
    return CheckResult("bounds_monotone_in_f", ok, "R0,R1,R2,R',K11 nondecreasing in ||f||")


def check_condition_boundary() -> CheckResult:
    import dataclasses
    b = bd.BoundsInput(gamma=1.0, L=2.0 * np.pi, norm_f=1.0, mu=1.0, v_X=0.0)
    fake = dataclasses.replace(bd.compute_report(b), r1tt=1.0)
    cond = bd.check_conditions(fake, 0)["conditions"]["E1"]
    return CheckResult("condition_E1_boundary", cond is False,
                       "R1~~ = 1, L = 2 pi, m = 0 evaluates 1 < 1 -> False")


ALL_CHECKS = [
    check_parseval,
    check_projection_orthogonality,
    check_generalized_poincare,
    check_dealiased_cubic,
    check_agmon_calibration,
    check_serialization_roundtrip,
    check_mass_balance_quick,
    check_damping_exactness,
    check_trajectory_norms,
    check_bounds_monotone,
    check_condition_boundary,
]


def run_all_checks() -> list[CheckResult]:
    return [fn() for fn in ALL_CHECKS]
