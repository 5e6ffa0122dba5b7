"""The W-map: reconstruct a full trajectory from low-mode observations by
integrating the nudged equation from zero data with a spin-up, plus the
synchronization, Lipschitz and reverse-Poincare experiments built on it.

"Bounded solution on all of R" is operationalized as: start from w = 0 at
(window start - spinup_k), discard the spin-up, and certify insensitivity of
the returned window to doubling the spin-up (exponential forgetting of the
initial data).  Certificate failures double the spin-up up to max_restarts
times before raising.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .bounds import BoundsInput, BoundsReport, compute_report, lipschitz_W
from .dynamics import NlsParams, SchemeConfig, integrate
from .errors import InvalidArgumentError, WmapNotConvergedError
from .spectral import Field, norm, zero_field
from .trajectory import (
    Trajectory,
    extend_constant,
    norm_X,
    norm_X0,
    project_low_traj,
    restrict_window,
    sup_l2_distance,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class WmapConfig:
    spinup_k: float
    tol_converged: float = 1e-8
    max_restarts: int = 2
    certify: bool = True

    def __post_init__(self):
        if not (self.spinup_k > 0):
            raise InvalidArgumentError("spinup_k must be positive")
        if not (self.tol_converged > 0):
            raise InvalidArgumentError("tol_converged must be positive")


@dataclass(frozen=True)
class WmapEvaluation:
    trajectory: Trajectory
    spinup_used: float
    certificate_distance: float | None
    pad_pre: float


def _coverage_pad(v: Trajectory, t_lo: float) -> tuple[Trajectory, float]:
    """Extend v constantly to the left so it covers t_lo."""
    if v.s0 <= t_lo + 1e-9:
        return v, 0.0
    pad = v.s0 - t_lo
    return extend_constant(v, pad, 0.0), pad


def evaluate_W_detailed(v: Trajectory, params: NlsParams, cfg: WmapConfig,
                        scheme: SchemeConfig,
                        w0: Field | None = None) -> WmapEvaluation:
    """W(v): the bounded-solution reconstruction, with certificate metadata.

    The returned window is [v_window_start + spinup_k, v_window_end] where
    v_window_start is where genuine (unpadded) data begins; observations are
    padded constantly to cover the spin-up when they do not already.
    """
    if params.mu <= 0:
        raise InvalidArgumentError("the W-map needs a positive nudging gain")
    if v.mode_cutoff is None or v.mode_cutoff != params.m:
        raise InvalidArgumentError(
            f"observation cutoff {v.mode_cutoff} does not match params.m = {params.m}"
        )
    win_start = v.s0 + cfg.spinup_k
    win_end = v.s_end
    if win_end - win_start < 2 * scheme.dt:
        raise InvalidArgumentError("spin-up leaves no observation window")

    def run(spin: float) -> Trajectory:
        t_lo = win_start - spin
        v_cov, _ = _coverage_pad(v, t_lo)
        start = w0 if w0 is not None else zero_field(params.grid)
        return integrate(start, params, (t_lo, win_end), scheme,
                         v_traj=v_cov, record_from=win_start)

    spin = cfg.spinup_k
    w = run(spin)
    cert: float | None = None
    if cfg.certify:
        for _ in range(max(1, cfg.max_restarts)):
            w2 = run(2.0 * spin)
            cert = sup_l2_distance(w, w2)
            if cert < cfg.tol_converged:
                break
            log.info("W certificate %0.3e at spinup %g; doubling", cert, spin)
            spin *= 2.0
            w = w2
        else:
            raise WmapNotConvergedError(cert if cert is not None else float("nan"))
    pad = max(0.0, v.s0 - (win_start - spin))
    return WmapEvaluation(trajectory=w, spinup_used=spin,
                          certificate_distance=cert, pad_pre=pad)


def evaluate_W(v: Trajectory, params: NlsParams, cfg: WmapConfig,
               scheme: SchemeConfig, w0: Field | None = None) -> Trajectory:
    return evaluate_W_detailed(v, params, cfg, scheme, w0=w0).trajectory


# ---------------------------------------------------------------------------
# synchronization experiment
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SyncReport:
    times: np.ndarray = field(repr=False)
    delta: np.ndarray = field(repr=False)
    fitted_rate: float
    floor: float
    crossing_time: float | None
    target_floor: float
    passed: bool
    mu: float
    m: int


def _fit_decay_rate(t: np.ndarray, d: np.ndarray) -> float:
    """Least-squares exponential rate; positive = decay.

    Fit starts at the first drop below half the initial value; if the decay is
    not monotone enough to cross that line, fit the final two thirds.
    """
    d = np.maximum(d, 1e-300)
    idx = np.nonzero(d < 0.5 * d[0])[0]
    start = int(idx[0]) if idx.size else len(d) // 3
    start = min(start, len(d) - 2)
    seg_t, seg_d = t[start:], np.log(d[start:])
    return -float(np.polyfit(seg_t, seg_d, 1)[0])


def sync_experiment(u: Trajectory, base_params: NlsParams, mu: float, m: int,
                    scheme: SchemeConfig, target_floor: float = 1e-6,
                    deadline: float | None = None) -> SyncReport:
    """Nudge from w = 0 with v = P_m u and report the tracking error decay.

    u must be a plain-equation (mu = 0) window; the nudged run starts at the
    window start (the paper's w(-k) = 0 with -k the window start).  With
    mu = 0 this degenerates into the free-run control; non-decay is reported,
    not raised.
    """
    if base_params.mu != 0:
        raise InvalidArgumentError("u must come from the plain equation (mu = 0)")
    v = project_low_traj(u, m)
    params = NlsParams(gamma=base_params.gamma, f=base_params.f, mu=mu, m=m,
                       allow_conservative=base_params.allow_conservative)
    w = integrate(zero_field(u.grid), params, (u.s0, u.s_end), scheme,
                  v_traj=v if mu > 0 else None)
    stride = max(1, int(round(w.ds / u.ds)))
    u_sub = u.coeffs[:: stride][: len(w)]
    delta = np.sqrt(u.grid.L * np.sum(np.abs(w.coeffs - u_sub) ** 2, axis=1))
    t = w.times
    rate = _fit_decay_rate(t - t[0], delta)
    floor = float(np.min(delta))
    below = np.nonzero(delta < target_floor)[0]
    crossing = float(t[below[0]] - t[0]) if below.size else None
    horizon = deadline if deadline is not None else float(t[-1] - t[0])
    passed = (crossing is not None and crossing <= horizon and rate > 0)
    return SyncReport(times=t, delta=delta, fitted_rate=rate, floor=floor,
                      crossing_time=crossing, target_floor=target_floor,
                      passed=passed, mu=mu, m=m)


# ---------------------------------------------------------------------------
# Lipschitz probe
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LipschitzReport:
    ratio: float
    eta_norm_X: float
    image_distance_X: float
    lw_theory: float
    rho: float
    m: int
    within_bound: bool


def lipschitz_probe(v: Trajectory, vt: Trajectory, params: NlsParams,
                    cfg: WmapConfig, scheme: SchemeConfig,
                    report: BoundsReport | None = None) -> LipschitzReport:
    """|P_m W(v) - P_m W(vt)|_X / |v - vt|_X against the theoretical L_W."""
    eta = norm_X(v - vt)
    if eta == 0.0:
        raise InvalidArgumentError("the probe needs distinct observations")
    w = evaluate_W(v, params, cfg, scheme)
    wt = evaluate_W(vt, params, cfg, scheme)
    img = norm_X(project_low_traj(w, params.m) - project_low_traj(wt, params.m))
    ratio = img / eta
    rho = max(norm_X(v), norm_X(vt))
    binp = BoundsInput(gamma=params.gamma, L=params.grid.L,
                       norm_f=norm(params.f, "l2"), mu=params.mu, v_X=rho)
    lw = lipschitz_W(binp, params.m, report)
    return LipschitzReport(ratio=ratio, eta_norm_X=eta, image_distance_X=img,
                           lw_theory=lw, rho=rho, m=params.m,
                           within_bound=ratio <= lw)


# ---------------------------------------------------------------------------
# reverse Poincare check
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ReversePoincareReport:
    ratio: float
    k11: float
    sup_delta: float
    sup_delta_x: float
    within_bound: bool


def reverse_poincare_check(u: Trajectory, ut: Trajectory,
                           params: NlsParams) -> ReversePoincareReport:
    """sup ||delta_x|| / sup ||delta|| for delta = u - ut, against K11."""
    if params.mu != 0:
        raise InvalidArgumentError("reverse Poincare compares plain-equation windows")
    u._compat(ut)
    diff = u.coeffs - ut.coeffs
    grid = u.grid
    sup_d = float(np.max(np.sqrt(grid.L * np.sum(np.abs(diff) ** 2, axis=1))))
    khat2 = (grid.khat ** 2)[None, :]
    sup_dx = float(np.max(np.sqrt(grid.L * np.sum(khat2 * np.abs(diff) ** 2, axis=1))))
    if sup_d == 0.0:
        raise InvalidArgumentError("identical trajectories: the ratio is undefined")
    binp = BoundsInput(gamma=params.gamma, L=grid.L, norm_f=norm(params.f, "l2"),
                       mu=0.0, v_X=0.0)
    k11 = compute_report(binp).k11
    ratio = sup_dx / sup_d
    return ReversePoincareReport(ratio=ratio, k11=k11, sup_delta=sup_d,
                                 sup_delta_x=sup_dx, within_bound=ratio <= k11)


def wmap_bound_conformance(w: Trajectory, params: NlsParams, v_X: float) -> dict:
    """Observed sup norms of a W output against the chain bounds R0..R'."""
    grid = w.grid
    binp = BoundsInput(gamma=params.gamma, L=grid.L, norm_f=norm(params.f, "l2"),
                       mu=params.mu, v_X=v_X)
    rep = compute_report(binp)
    sup_l2 = float(np.max(np.sqrt(grid.L * np.sum(np.abs(w.coeffs) ** 2, axis=1))))
    khat2 = (grid.khat ** 2)[None, :]
    sup_h1 = float(np.max(np.sqrt(grid.L * np.sum((1 + khat2) * np.abs(w.coeffs) ** 2, axis=1))))
    sup_h2 = float(np.max(np.sqrt(grid.L * np.sum((1 + khat2 ** 2) * np.abs(w.coeffs) ** 2, axis=1))))
    sup_dt = float(np.max(np.sqrt(grid.L * np.sum(np.abs(w.dcoeffs) ** 2, axis=1))))
    return {
        "sup_l2": sup_l2, "bound_r0": rep.r0, "ok_r0": sup_l2 <= rep.r0,
        "sup_h1": sup_h1, "bound_r1": rep.r1, "ok_r1": sup_h1 <= rep.r1,
        "sup_h2": sup_h2, "bound_r2": rep.r2, "ok_r2": sup_h2 <= rep.r2,
        "sup_dt": sup_dt, "bound_rprime": rep.rprime, "ok_rprime": sup_dt <= rep.rprime,
    }
