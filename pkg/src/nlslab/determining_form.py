"""The determining form: an ODE in trajectory space,

    dv/dt = F(v) = -|v - P_m W(v)|_{X,0}^2 (v - P_m u*),

whose steady states are exactly the P_m projections of trajectories on the
global attractor.  The vector field always points along the ray from v to
P_m u*, so explicit Euler with a residual-scaled step keeps iterates on that
ray; the ray coordinate lambda is tracked alongside the residual.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .dynamics import NlsParams, SchemeConfig
from .errors import InvalidArgumentError
from .spectral import Field
from .trajectory import (
    Trajectory,
    constant_trajectory,
    norm_X,
    norm_X0,
    project_low_traj,
)
from .wmap import WmapConfig, evaluate_W, restrict_window

EULER_STEP_CAP = 0.1


@dataclass(frozen=True)
class FormState:
    v: Trajectory
    u_star: Field
    t: float
    residual: float
    R: float

    def __post_init__(self):
        if self.v.mode_cutoff is None:
            raise InvalidArgumentError("the form state needs a low-mode trajectory")
        if self.residual < 0 or self.R < 0:
            raise InvalidArgumentError("residual and R must be nonnegative")


def _pm_ustar_window(state_v: Trajectory, u_star: Field, m: int) -> Trajectory:
    base = constant_trajectory(u_star, state_v.s0, state_v.ds, len(state_v))
    return project_low_traj(base, m)


def form_residual(v: Trajectory, params: NlsParams, cfg: WmapConfig,
                  scheme: SchemeConfig) -> float:
    """|v - P_m W(v)|_{X,0} on the post-spin-up window."""
    w = evaluate_W(v, params, cfg, scheme)
    v_win = restrict_window(v, w.s0, w.s_end)
    stride = max(1, int(round(w.ds / v_win.ds)))
    vc = v_win.coeffs[::stride][: len(w)]
    pm = np.abs(np.arange(-v.grid.n, v.grid.n + 1)) <= params.m
    diff = vc - np.where(pm[None, :], w.coeffs, 0.0)
    return float(np.max(np.sqrt(v.grid.L * np.sum(np.abs(diff) ** 2, axis=1))))


def vector_field_F(state: FormState, params: NlsParams, cfg: WmapConfig,
                   scheme: SchemeConfig) -> tuple[Trajectory, float]:
    """F(v) = -residual^2 (v - P_m u*); returns (tangent, residual)."""
    res = form_residual(state.v, params, cfg, scheme)
    pmu = _pm_ustar_window(state.v, state.u_star, params.m)
    tangent = (state.v - pmu) * (-res ** 2)
    return tangent, res


def steady_state_residual(v: Trajectory, params: NlsParams, cfg: WmapConfig,
                          scheme: SchemeConfig) -> float:
    return form_residual(v, params, cfg, scheme)


@dataclass(frozen=True)
class FormStep:
    t: float
    residual: float
    dist_X: float
    lam: float
    collinearity_defect: float


@dataclass(frozen=True)
class FormEvolution:
    steps: list[FormStep] = field(repr=False)
    final: FormState
    converged: bool
    ball_exited: bool
    empirical_radius: float


def evolve_form(state0: FormState, dt_form: float, steps: int,
                params: NlsParams, cfg: WmapConfig, scheme: SchemeConfig,
                tol_residual: float = 1e-6,
                tol_stagnation: float = 1e-10) -> FormEvolution:
    """Explicit Euler in pseudo-time with step control h residual^2 <= 0.1.

    Terminates early when the residual falls below tol_residual or the step
    moves v by less than tol_stagnation in |.|_X.  Exit from the invariant
    ball |v - P_m u*|_X < 3R is recorded as a finding, not an error.
    """
    pmu = _pm_ustar_window(state0.v, state0.u_star, params.m)
    ray0 = state0.v - pmu
    ray0_norm = norm_X(ray0)
    if not ray0_norm < 3.0 * state0.R:
        raise InvalidArgumentError(
            f"start outside the invariant ball: {ray0_norm:.3g} >= 3R = {3 * state0.R:.3g}"
        )
    v = state0.v
    t = state0.t
    lam = 1.0
    out: list[FormStep] = []
    converged = False
    ball_exited = False
    res = form_residual(v, params, cfg, scheme)
    for _ in range(steps):
        dist = norm_X(v - pmu)
        defect = _collinearity_defect(v, pmu, ray0, ray0_norm)
        out.append(FormStep(t=t, residual=res, dist_X=dist, lam=lam, collinearity_defect=defect))
        if dist >= 3.0 * state0.R:
            ball_exited = True
        if res < tol_residual:
            converged = True
            break
        h = dt_form if dt_form * res ** 2 <= EULER_STEP_CAP else EULER_STEP_CAP / res ** 2
        shrink = h * res ** 2
        v_next = pmu + (v - pmu) * (1.0 - shrink)
        move = norm_X(v_next - v)
        t += h
        lam *= (1.0 - shrink)
        v = v_next
        res = form_residual(v, params, cfg, scheme)
        if move < tol_stagnation:
            converged = res < tol_residual
            break
    dist = norm_X(v - pmu)
    out.append(FormStep(t=t, residual=res, dist_X=dist, lam=lam,
                        collinearity_defect=_collinearity_defect(v, pmu, ray0, ray0_norm)))
    final = FormState(v=v, u_star=state0.u_star, t=t, residual=res, R=state0.R)
    return FormEvolution(steps=out, final=final, converged=converged or res < tol_residual,
                         ball_exited=ball_exited, empirical_radius=dist)


def _collinearity_defect(v: Trajectory, pmu: Trajectory, ray0: Trajectory,
                         ray0_norm: float) -> float:
    """|(v - P_m u*) - lambda ray0|_X / |ray0|_X with lambda from the norms."""
    ray = v - pmu
    lam = norm_X(ray) / ray0_norm if ray0_norm > 0 else 0.0
    return norm_X(ray - ray0 * lam) / max(ray0_norm, 1e-300)
