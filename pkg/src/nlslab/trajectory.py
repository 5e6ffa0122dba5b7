"""Discrete trajectories: uniformly sampled time windows of fields with stored
time-derivative samples, standing in for the trajectory spaces

    X  = C^1_b(R, P_m H^2)   with  |v|_X  = sup ||v|| + sup ||v_s||
    Y  = C_b(R, H^2)         with  |w|_Y  = sup ||w||_H2
    |v|_{X,0} = sup ||v||.

All sups are window sups over the stored samples (lower bounds of the
continuum sup, tightened by sample refinement).  Derivatives are stored from
right-hand-side evaluations, never finite differences, so the |.|_X norm is
free of O(ds) differencing noise.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import CoverageError, InvalidArgumentError
from .spectral import Field, SpectralGrid

_SEAM_SLACK = 1e-9


@dataclass(frozen=True)
class Trajectory:
    """Sampled window: coeffs[i] ~ w(s0 + i ds), dcoeffs[i] ~ w_s(s0 + i ds).

    Both arrays have shape (num_samples, 2n+1).  When mode_cutoff = m is set
    every sample must vanish outside |k| <= m.  Construction validates the
    centered-difference consistency of (coeffs, dcoeffs) unless check=False
    (used by window surgery such as constant padding, which breaks C^1 at the
    seam by construction).
    """

    grid: SpectralGrid
    s0: float
    ds: float
    coeffs: np.ndarray = field(repr=False)
    dcoeffs: np.ndarray = field(repr=False)
    mode_cutoff: int | None = None
    check: bool = True

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=np.complex128)
        d = np.asarray(self.dcoeffs, dtype=np.complex128)
        if c.ndim != 2 or c.shape[1] != self.grid.n_coeff:
            raise InvalidArgumentError(f"coeffs shape {c.shape} does not match grid")
        if d.shape != c.shape:
            raise InvalidArgumentError("fields and derivs must have equal shapes")
        if c.shape[0] < 2:
            raise InvalidArgumentError("a trajectory needs at least 2 samples")
        if not (self.ds > 0):
            raise InvalidArgumentError(f"sample spacing must be positive, got {self.ds}")
        if not np.all(np.isfinite(c.view(np.float64))) or not np.all(np.isfinite(d.view(np.float64))):
            raise InvalidArgumentError("non-finite sample in trajectory")
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "dcoeffs", d)
        if self.mode_cutoff is not None:
            m = self.mode_cutoff
            if m < 0 or m > self.grid.n:
                raise InvalidArgumentError(f"mode_cutoff {m} outside 0..{self.grid.n}")
            k = np.abs(np.arange(-self.grid.n, self.grid.n + 1))
            if np.any(c[:, k > m] != 0) or np.any(d[:, k > m] != 0):
                raise InvalidArgumentError(f"energy outside |k| <= {m} in a cutoff trajectory")
        if self.check:
            self._check_consistency()

    def _check_consistency(self):
        """Centered difference of fields must match derivs to O(ds^2).

        The centered-difference defect is (ds^2/6) w''' ; w''' is estimated
        from the derivative samples themselves (their second differences), on
        top of the first-difference rate.  Both terms are O(ds^2).
        """
        c, d, ds = self.coeffs, self.dcoeffs, self.ds
        if c.shape[0] < 3:
            return
        fd = (c[2:] - c[:-2]) / (2.0 * ds)
        err = np.sqrt(self.grid.L * np.sum(np.abs(fd - d[1:-1]) ** 2, axis=1))
        dd = np.sqrt(self.grid.L * np.sum(np.abs(np.diff(d, axis=0) / ds) ** 2, axis=1))
        rate = float(np.max(dd)) if dd.size else 0.0
        curv = 0.0
        if d.shape[0] >= 3:
            d2 = (d[2:] - 2.0 * d[1:-1] + d[:-2]) / ds ** 2
            curv = float(np.max(np.sqrt(self.grid.L * np.sum(np.abs(d2) ** 2, axis=1))))
        tol = 10.0 * ds ** 2 * max(rate, 1e-12) + 0.25 * ds ** 2 * curv \
            + 1e-9 * (1.0 + float(np.max(np.abs(c))))
        worst = float(np.max(err))
        if worst > tol:
            raise InvalidArgumentError(
                f"derivative samples inconsistent with fields: "
                f"max |FD - deriv| = {worst:.3e} > tol {tol:.3e}"
            )

    # -- basic accessors ----------------------------------------------------

    def __len__(self) -> int:
        return self.coeffs.shape[0]

    @property
    def times(self) -> np.ndarray:
        return self.s0 + self.ds * np.arange(len(self))

    @property
    def s_end(self) -> float:
        return self.s0 + self.ds * (len(self) - 1)

    def field(self, i: int) -> Field:
        return Field(self.grid, self.coeffs[i])

    def deriv(self, i: int) -> Field:
        return Field(self.grid, self.dcoeffs[i])

    def index_of(self, s: float) -> int:
        i = round((s - self.s0) / self.ds)
        if i < 0 or i >= len(self) or abs(self.s0 + i * self.ds - s) > _SEAM_SLACK * max(1.0, self.ds):
            raise CoverageError(f"time {s} is not a sample of this window")
        return int(i)

    # -- arithmetic (samplewise; derivs transform likewise) -----------------

    def __sub__(self, other: "Trajectory") -> "Trajectory":
        self._compat(other)
        return replace(self, coeffs=self.coeffs - other.coeffs,
                       dcoeffs=self.dcoeffs - other.dcoeffs,
                       mode_cutoff=_merge_cutoff(self, other), check=False)

    def __add__(self, other: "Trajectory") -> "Trajectory":
        self._compat(other)
        return replace(self, coeffs=self.coeffs + other.coeffs,
                       dcoeffs=self.dcoeffs + other.dcoeffs,
                       mode_cutoff=_merge_cutoff(self, other), check=False)

    def __mul__(self, a) -> "Trajectory":
        return replace(self, coeffs=self.coeffs * a, dcoeffs=self.dcoeffs * a, check=False)

    __rmul__ = __mul__

    def _compat(self, other: "Trajectory"):
        if (self.grid != other.grid or len(self) != len(other)
                or abs(self.s0 - other.s0) > _SEAM_SLACK
                or abs(self.ds - other.ds) > _SEAM_SLACK * self.ds):
            raise InvalidArgumentError("trajectories are not sampled on the same window")


def _merge_cutoff(a: Trajectory, b: Trajectory) -> int | None:
    if a.mode_cutoff is None or b.mode_cutoff is None:
        return None
    return max(a.mode_cutoff, b.mode_cutoff)


def constant_trajectory(u: Field, s0: float, ds: float, count: int,
                        mode_cutoff: int | None = None) -> Trajectory:
    """Window with w(s) = u and w_s = 0 (e.g. a steady-state observation)."""
    c = np.tile(u.coeff, (count, 1))
    d = np.zeros_like(c)
    return Trajectory(u.grid, s0, ds, c, d, mode_cutoff=mode_cutoff)


# ---------------------------------------------------------------------------
# norms
# ---------------------------------------------------------------------------

def _row_l2(traj: Trajectory, arr: np.ndarray) -> np.ndarray:
    return np.sqrt(traj.grid.L * np.sum(np.abs(arr) ** 2, axis=1))


def norm_X(v: Trajectory) -> float:
    """sup ||v(s)|| + sup ||v_s(s)|| over the window samples."""
    return float(np.max(_row_l2(v, v.coeffs)) + np.max(_row_l2(v, v.dcoeffs)))


def norm_X0(v: Trajectory) -> float:
    """sup ||v(s)|| over the window samples."""
    return float(np.max(_row_l2(v, v.coeffs)))


def norm_Y(w: Trajectory) -> float:
    """sup ||w(s)||_H2 over the window samples."""
    khat2 = (w.grid.khat ** 2)[None, :]
    h2 = np.sqrt(w.grid.L * np.sum((1.0 + khat2 ** 2) * np.abs(w.coeffs) ** 2, axis=1))
    return float(np.max(h2))


def sup_l2_distance(a: Trajectory, b: Trajectory) -> float:
    a._compat(b)
    return float(np.max(_row_l2(a, a.coeffs - b.coeffs)))


# ---------------------------------------------------------------------------
# window surgery
# ---------------------------------------------------------------------------

def project_low_traj(u: Trajectory, m: int) -> Trajectory:
    """Samplewise P_m; derivs projected likewise."""
    if m < 0 or m > u.grid.n:
        raise InvalidArgumentError(f"projection cutoff m = {m} outside 0..{u.grid.n}")
    mask = np.abs(np.arange(-u.grid.n, u.grid.n + 1)) <= m
    c = np.where(mask[None, :], u.coeffs, 0.0)
    d = np.where(mask[None, :], u.dcoeffs, 0.0)
    return replace(u, coeffs=c, dcoeffs=d, mode_cutoff=m, check=False)


def restrict_window(u: Trajectory, t_a: float, t_b: float) -> Trajectory:
    """Samples with t_a <= s <= t_b (grid-aligned, inclusive)."""
    times = u.times
    sel = (times >= t_a - _SEAM_SLACK) & (times <= t_b + _SEAM_SLACK)
    idx = np.nonzero(sel)[0]
    if idx.size < 2:
        raise InvalidArgumentError(f"window [{t_a}, {t_b}] keeps fewer than 2 samples")
    return replace(u, s0=float(times[idx[0]]), coeffs=u.coeffs[idx], dcoeffs=u.dcoeffs[idx],
                   check=False)


def extend_constant(u: Trajectory, pre_pad: float, post_pad: float) -> Trajectory:
    """Repeat the boundary fields (zero derivative) over the pads.

    Pads are rounded to whole sample steps.  The result intentionally breaks
    C^1 smoothness at the seams, so consistency checking is off.
    """
    if pre_pad < 0 or post_pad < 0:
        raise InvalidArgumentError("pads must be nonnegative")
    k_pre = int(round(pre_pad / u.ds))
    k_post = int(round(post_pad / u.ds))
    if k_pre == 0 and k_post == 0:
        return u
    parts_c = []
    parts_d = []
    if k_pre:
        parts_c.append(np.tile(u.coeffs[0], (k_pre, 1)))
        parts_d.append(np.zeros((k_pre, u.coeffs.shape[1]), dtype=np.complex128))
    parts_c.append(u.coeffs)
    parts_d.append(u.dcoeffs)
    if k_post:
        parts_c.append(np.tile(u.coeffs[-1], (k_post, 1)))
        parts_d.append(np.zeros((k_post, u.coeffs.shape[1]), dtype=np.complex128))
    return replace(u, s0=u.s0 - k_pre * u.ds,
                   coeffs=np.concatenate(parts_c), dcoeffs=np.concatenate(parts_d),
                   check=False)


# ---------------------------------------------------------------------------
# time interpolation of observations
# ---------------------------------------------------------------------------

class ObservationInterpolant:
    """Piecewise-cubic Hermite interpolant of a trajectory in time.

    Uses the stored derivative samples; falls back to linear interpolation when
    use_derivs=False.  value(s) evaluates; poly_segments(t0, t1) yields the
    local polynomial description needed for exact substep quadrature.
    """

    def __init__(self, traj: Trajectory, use_derivs: bool = True):
        self.traj = traj
        self.use_derivs = use_derivs
        c, d, ds = traj.coeffs, traj.dcoeffs, traj.ds
        delta = np.diff(c, axis=0)
        npieces = c.shape[0] - 1
        width = c.shape[1]
        self._p = np.zeros((npieces, 4, width), dtype=np.complex128)
        self._p[:, 0] = c[:-1]
        if use_derivs:
            self._p[:, 1] = d[:-1]
            self._p[:, 2] = (3.0 * delta / ds - (2.0 * d[:-1] + d[1:])) / ds
            self._p[:, 3] = (-2.0 * delta / ds + (d[:-1] + d[1:])) / ds ** 2
        else:
            self._p[:, 1] = delta / ds

    @property
    def t_start(self) -> float:
        return self.traj.s0

    @property
    def t_end(self) -> float:
        return self.traj.s_end

    def covers(self, t0: float, t1: float) -> bool:
        slack = _SEAM_SLACK * max(1.0, self.traj.ds)
        return t0 >= self.t_start - slack and t1 <= self.t_end + slack

    def _piece(self, s: float) -> tuple[int, float]:
        traj = self.traj
        slack = _SEAM_SLACK * max(1.0, traj.ds)
        if s < traj.s0 - slack or s > traj.s_end + slack:
            raise CoverageError(
                f"observation window [{traj.s0:.6g}, {traj.s_end:.6g}] does not cover s = {s:.6g}"
            )
        i = int(np.floor((s - traj.s0) / traj.ds))
        i = min(max(i, 0), len(traj) - 2)
        return i, s - (traj.s0 + i * traj.ds)

    def value(self, s: float) -> np.ndarray:
        i, tau = self._piece(s)
        p = self._p[i]
        return ((p[3] * tau + p[2]) * tau + p[1]) * tau + p[0]

    def poly_segments(self, t0: float, t1: float):
        """Cover [t0, t1] by sample-aligned segments.

        Yields (h, poly) with poly of shape (4, 2n+1): the interpolant on the
        segment is poly[0] + poly[1] tau + poly[2] tau^2 + poly[3] tau^3 for
        tau in [0, h].  Splitting at sample knots keeps the description exact.
        Points within a relative 1e-6 of a knot snap to it, so accumulated
        float error in the caller's times cannot produce sliver segments.
        """
        if t1 <= t0:
            raise InvalidArgumentError("empty quadrature segment")
        traj = self.traj
        ds = traj.ds
        slack = 1e-6 * ds
        if not self.covers(t0, t1):
            raise CoverageError(
                f"observation window [{traj.s0:.6g}, {traj.s_end:.6g}] does not cover "
                f"[{t0:.6g}, {t1:.6g}]"
            )
        s = t0
        while t1 - s > slack:
            # bias the piece lookup so a point at (or within slack of) a knot
            # lands on the piece that starts there
            i = int(np.floor((s - traj.s0) / ds + 1e-6))
            i = min(max(i, 0), len(traj) - 2)
            tau = s - (traj.s0 + i * ds)
            knot = traj.s0 + (i + 1) * ds
            seg_end = t1 if knot > t1 - slack else knot
            h = seg_end - s
            p = self._p[i]
            # shift the piece polynomial to local coordinates starting at tau
            c0 = ((p[3] * tau + p[2]) * tau + p[1]) * tau + p[0]
            c1 = (3.0 * p[3] * tau + 2.0 * p[2]) * tau + p[1]
            c2 = 3.0 * p[3] * tau + p[2]
            c3 = p[3]
            yield h, np.stack([c0, c1, c2, c3])
            s = seg_end


# ---------------------------------------------------------------------------
# manifest
# ---------------------------------------------------------------------------

def trajectory_manifest(traj: Trajectory) -> str:
    return json.dumps({
        "s0": traj.s0,
        "ds": traj.ds,
        "count": len(traj),
        "mode_cutoff": traj.mode_cutoff,
        "grid": {"L": traj.grid.L, "n": traj.grid.n, "n_phys": traj.grid.n_phys},
    })
