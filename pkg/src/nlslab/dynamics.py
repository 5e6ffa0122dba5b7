"""Time integration of the damped driven NLS and its nudged auxiliary system.

The equation (dissipative sign conventions fixed here once):

    i w_s + w_xx + |w|^2 w + i gamma w = f - i mu [P_m w - v(s)]

is integrated in the truncated Galerkin form (the cubic term is the alias-free
truncation P_n(|w|^2 w)).  Solved for the time derivative:

    w_s = i w_xx + i |w|^2 w - gamma w - i f - mu (P_m w - v(s))
        = i w_xx + h,    h := i |w|^2 w - gamma w - mu P_m w + mu v - i f

Two schemes:

  strang_splitstep
      palindromic composition A(dt/2) D(dt/2) C(dt) D(dt/2) A(dt/2) of exact
      subflows: A = Fourier multiplier for i d_xx - gamma, C = pointwise cubic
      phase rotation (|w| is invariant under i w_s = -|w|^2 w), D = exact
      integrating-factor flow of the linear forcing/nudging part against the
      piecewise-polynomial observation interpolant (phi-function quadrature).
      Second order overall; exact mass behavior when f = 0 and mu = 0, and
      exact damping factor e^{-gamma t} composition for f = 0, mu = 0.

  rk4_galerkin
      classical four-stage explicit rule on the full truncated system; the
      oracle scheme for cross-validation and for experiments with tight
      synchronization floors.  Stability requires dt * (2 pi n / L)^2 <= 2.5.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import (
    BlowUpError,
    ConvergenceFailureError,
    CoverageError,
    InvalidArgumentError,
)
from .spectral import (
    Field,
    SpectralGrid,
    coeff_to_values,
    norm,
    random_field,
    values_to_coeff,
    zero_field,
)
from .trajectory import ObservationInterpolant, Trajectory

log = logging.getLogger(__name__)

RK4_STABILITY_LIMIT = 2.5
MU_DT_ENVELOPE = 0.5


@dataclass(frozen=True)
class NlsParams:
    """gamma: damping, f: time-independent forcing, mu: nudging gain,
    m: observed-mode cutoff."""

    gamma: float
    f: Field
    mu: float = 0.0
    m: int = 0
    allow_conservative: bool = False

    def __post_init__(self):
        if self.gamma < 0 or not np.isfinite(self.gamma):
            raise InvalidArgumentError(f"damping must be >= 0, got {self.gamma}")
        if self.gamma == 0 and not self.allow_conservative:
            raise InvalidArgumentError(
                "gamma = 0 is a diagnostic mode; set allow_conservative=True"
            )
        if self.mu < 0:
            raise InvalidArgumentError(f"nudging gain must be >= 0, got {self.mu}")
        if not (0 <= self.m <= self.f.grid.n):
            raise InvalidArgumentError(f"observed cutoff m = {self.m} outside 0..{self.f.grid.n}")

    @property
    def grid(self) -> SpectralGrid:
        return self.f.grid


@dataclass(frozen=True)
class SchemeConfig:
    dt: float
    scheme: str = "strang_splitstep"
    sample_every: int = 1

    def __post_init__(self):
        if not (self.dt > 0):
            raise InvalidArgumentError(f"dt must be positive, got {self.dt}")
        if self.scheme not in ("strang_splitstep", "rk4_galerkin"):
            raise InvalidArgumentError(f"unknown scheme {self.scheme!r}")
        if self.sample_every < 1:
            raise InvalidArgumentError("sample_every must be >= 1")


# ---------------------------------------------------------------------------
# right-hand side
# ---------------------------------------------------------------------------

def _cubic_vals(grid: SpectralGrid, c: np.ndarray) -> np.ndarray:
    vals = coeff_to_values(c, grid.n, grid.n_phys)
    return np.abs(vals) ** 2 * vals


def _cubic_arr(grid: SpectralGrid, c: np.ndarray) -> np.ndarray:
    return values_to_coeff(_cubic_vals(grid, c), grid.n)


def _check_observed_support(v: Field, m: int) -> None:
    k = np.abs(v.grid.k)
    if np.any(v.coeff[k > m] != 0):
        raise InvalidArgumentError(f"observation has energy outside |k| <= {m}")


def rhs(u: Field, params: NlsParams, v_now: Field | None = None) -> Field:
    """u_s = i u_xx + i |u|^2 u - gamma u - i f - mu (P_m u - v)."""
    grid = u.grid
    c = u.coeff
    out = (-1j * grid.khat ** 2) * c + 1j * _cubic_arr(grid, c) \
        - params.gamma * c - 1j * params.f.coeff
    if params.mu > 0 and v_now is not None:
        _check_observed_support(v_now, params.m)
        mask = np.abs(grid.k) <= params.m
        out = out - params.mu * (np.where(mask, c, 0.0) - v_now.coeff)
    elif params.mu > 0:
        raise InvalidArgumentError("mu > 0 requires an observation v_now")
    return Field(grid, out)


def rhs_decomposition_h(w: Field, params: NlsParams, v_now: Field | None = None) -> Field:
    """h in w_s = i w_xx + h, i.e. h = i |w|^2 w - gamma w - mu P_m w + mu v - i f."""
    grid = w.grid
    c = w.coeff
    out = 1j * _cubic_arr(grid, c) - params.gamma * c - 1j * params.f.coeff
    if params.mu > 0 and v_now is not None:
        _check_observed_support(v_now, params.m)
        mask = np.abs(grid.k) <= params.m
        out = out - params.mu * np.where(mask, c, 0.0) + params.mu * v_now.coeff
    elif params.mu > 0:
        raise InvalidArgumentError("mu > 0 requires an observation v_now")
    return Field(grid, out)


# ---------------------------------------------------------------------------
# phi functions: phi_j(z) = sum_i z^i / (i+j)!
# ---------------------------------------------------------------------------

_FACT = [math.factorial(i) for i in range(30)]


def _phi_funcs(z: np.ndarray, count: int = 4) -> list[np.ndarray]:
    z = np.asarray(z, dtype=np.complex128)
    out = [np.empty_like(z) for _ in range(count)]
    small = np.abs(z) < 0.5
    zs = z[small]
    for j in range(1, count + 1):
        acc = np.zeros_like(zs)
        for i in range(17, -1, -1):
            acc = acc * zs + 1.0 / _FACT[i + j]
        out[j - 1][small] = acc
    zb = z[~small]
    if zb.size:
        prev = np.exp(zb)
        for j in range(1, count + 1):
            prev = (prev - 1.0 / _FACT[j - 1]) / zb
            out[j - 1][~small] = prev
    return out


# ---------------------------------------------------------------------------
# steppers
# ---------------------------------------------------------------------------

class _StrangStepper:
    def __init__(self, params: NlsParams, dt: float,
                 interp: ObservationInterpolant | None):
        grid = params.grid
        self.grid = grid
        self.params = params
        self.dt = dt
        self.interp = interp
        self.half_mult = np.exp((-1j * grid.khat ** 2 - params.gamma) * (dt / 2.0))
        self.obs_mask = (np.abs(grid.k) <= params.m).astype(float)
        self.a = -params.mu * self.obs_mask if params.mu > 0 else np.zeros(grid.n_coeff)
        self.minus_if = -1j * params.f.coeff
        if params.mu * dt > MU_DT_ENVELOPE:
            log.warning("mu*dt = %.3g exceeds the documented accuracy envelope %.2g",
                        params.mu * dt, MU_DT_ENVELOPE)
        self._phi_cache: dict[float, list[np.ndarray]] = {}

    def _d_substep(self, c: np.ndarray, t0: float, t1: float) -> np.ndarray:
        """Exact flow of w' = -i f - mu (P_m w - v(s)) over [t0, t1]."""
        p = self.params
        if p.mu == 0 or self.interp is None:
            return c + self.minus_if * (t1 - t0)
        for h, poly in self.interp.poly_segments(t0, t1):
            hf = float(h)
            key = round(hf, 15)
            if key not in self._phi_cache:
                self._phi_cache[key] = _phi_funcs(self.a * hf)
            ph = self._phi_cache[key]
            d0 = self.minus_if + p.mu * self.obs_mask * poly[0]
            c = np.exp(self.a * hf) * c + hf * ph[0] * d0
            for j in (1, 2, 3):
                dj = p.mu * self.obs_mask * poly[j]
                c = c + _FACT[j] * hf ** (j + 1) * ph[j] * dj
        return c

    def step(self, c: np.ndarray, t: float) -> np.ndarray:
        dt = self.dt
        h = dt / 2.0
        c = self.half_mult * c
        c = self._d_substep(c, t, t + h)
        vals = coeff_to_values(c, self.grid.n, self.grid.n_phys)
        vals *= np.exp(1j * dt * np.abs(vals) ** 2)
        c = values_to_coeff(vals, self.grid.n)
        c = self._d_substep(c, t + h, t + dt)
        return self.half_mult * c


class _RK4Stepper:
    def __init__(self, params: NlsParams, dt: float,
                 interp: ObservationInterpolant | None):
        grid = params.grid
        stiffness = dt * (2.0 * np.pi * grid.n / grid.L) ** 2
        if stiffness > RK4_STABILITY_LIMIT:
            raise InvalidArgumentError(
                f"rk4_galerkin unstable: dt*(2 pi n/L)^2 = {stiffness:.3g} > {RK4_STABILITY_LIMIT}"
            )
        self.grid = grid
        self.params = params
        self.dt = dt
        self.interp = interp
        self.lin = -1j * grid.khat ** 2 - params.gamma
        self.obs_mask = np.abs(grid.k) <= params.m
        self.minus_if = -1j * params.f.coeff

    def _f(self, c: np.ndarray, s: float) -> np.ndarray:
        out = self.lin * c + 1j * _cubic_arr(self.grid, c) + self.minus_if
        p = self.params
        if p.mu > 0:
            v = self.interp.value(s)
            out = out - p.mu * (np.where(self.obs_mask, c, 0.0) - v)
        return out

    def step(self, c: np.ndarray, t: float) -> np.ndarray:
        dt = self.dt
        k1 = self._f(c, t)
        k2 = self._f(c + 0.5 * dt * k1, t + 0.5 * dt)
        k3 = self._f(c + 0.5 * dt * k2, t + 0.5 * dt)
        k4 = self._f(c + dt * k3, t + dt)
        return c + (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)


def _make_stepper(params: NlsParams, scheme: SchemeConfig,
                  interp: ObservationInterpolant | None):
    if params.mu > 0 and interp is None:
        raise InvalidArgumentError("nudged integration (mu > 0) requires observations")
    if scheme.scheme == "strang_splitstep":
        return _StrangStepper(params, scheme.dt, interp)
    return _RK4Stepper(params, scheme.dt, interp)


def step(u: Field, params: NlsParams, scheme: SchemeConfig,
         t: float = 0.0, v_interp: ObservationInterpolant | None = None) -> Field:
    """One time step from t.  Raises BlowUpError on non-finite output."""
    stepper = _make_stepper(params, scheme, v_interp)
    c = stepper.step(u.coeff.copy(), t)
    if not np.all(np.isfinite(c.view(np.float64))):
        raise BlowUpError(t + scheme.dt)
    return Field(u.grid, c)


# ---------------------------------------------------------------------------
# integration
# ---------------------------------------------------------------------------

def integrate(u0: Field, params: NlsParams, t_span: tuple[float, float],
              scheme: SchemeConfig, v_traj: Trajectory | None = None,
              record_from: float | None = None) -> Trajectory:
    """Integrate over t_span and return the sampled trajectory.

    Samples are taken every scheme.sample_every steps starting at record_from
    (default: the start of the span); stored derivatives are right-hand-side
    evaluations at the sample times, not finite differences.
    """
    t0, t1 = t_span
    if not t1 > t0:
        raise InvalidArgumentError(f"empty time span {t_span}")
    dt = scheme.dt
    nsteps = int(round((t1 - t0) / dt))
    if abs(nsteps * dt - (t1 - t0)) > 1e-9 * max(1.0, abs(t1 - t0)):
        raise InvalidArgumentError("span length must be an integer number of steps")

    interp = None
    if v_traj is not None and params.mu > 0:
        if v_traj.mode_cutoff is None or v_traj.mode_cutoff > params.m:
            k = np.abs(np.arange(-v_traj.grid.n, v_traj.grid.n + 1))
            if np.any(v_traj.coeffs[:, k > params.m] != 0):
                raise InvalidArgumentError("observations have energy outside |k| <= m")
        interp = ObservationInterpolant(v_traj)
        if not interp.covers(t0, t1):
            raise CoverageError(
                f"observations cover [{interp.t_start:.6g}, {interp.t_end:.6g}], "
                f"need [{t0:.6g}, {t1:.6g}]"
            )
    stepper = _make_stepper(params, scheme, interp)

    rec_from = t0 if record_from is None else record_from
    first_rec = max(0, int(math.ceil((rec_from - t0) / (dt * scheme.sample_every) - 1e-9)))

    def _deriv(c: np.ndarray, s: float) -> np.ndarray:
        u = Field(params.grid, c)
        v_now = Field(params.grid, interp.value(s)) if (interp is not None and params.mu > 0) else None
        return rhs(u, params, v_now).coeff

    samples = []
    dsamples = []
    c = u0.coeff.copy()
    rec_every = scheme.sample_every
    if 0 >= first_rec * rec_every:
        samples.append(c.copy())
        dsamples.append(_deriv(c, t0))
    for j in range(nsteps):
        t = t0 + j * dt
        c = stepper.step(c, t)
        if not np.all(np.isfinite(c.view(np.float64))):
            raise BlowUpError(t + dt)
        jj = j + 1
        if jj % rec_every == 0 and jj >= first_rec * rec_every:
            samples.append(c.copy())
            dsamples.append(_deriv(c, t0 + jj * dt))
    if len(samples) < 2:
        raise InvalidArgumentError("recording window keeps fewer than 2 samples")
    s_start = t0 + first_rec * rec_every * dt if first_rec > 0 else t0
    return Trajectory(params.grid, s_start, dt * rec_every,
                      np.stack(samples), np.stack(dsamples))


# ---------------------------------------------------------------------------
# steady states
# ---------------------------------------------------------------------------

def _toeplitz_mult(grid: SpectralGrid, g_vals: np.ndarray) -> np.ndarray:
    """Matrix of h -> P_n(g h) in coefficient space, g given on the grid."""
    npts = grid.n_phys
    ghat = np.fft.fft(g_vals) / npts
    n = grid.n
    lags = grid.k[:, None] - grid.k[None, :]
    return ghat[np.mod(lags, npts)]


def _steady_residual_field(u: Field, params: NlsParams) -> Field:
    """H(u) = u_xx + |u|^2 u + i gamma u - f (zero at a steady state)."""
    grid = u.grid
    c = (-grid.khat ** 2) * u.coeff + _cubic_arr(grid, u.coeff) \
        + 1j * params.gamma * u.coeff - params.f.coeff
    return Field(grid, c)


def find_steady_state(params: NlsParams, guess: Field,
                      tol: float | None = None, max_iter: int = 60) -> Field:
    """Damped Newton for the steady equation u_xx + |u|^2 u + i gamma u = f.

    Dense Jacobian on the real-imaginary split of the truncated system; the
    cubic derivative h -> P_n(2|u|^2 h + u^2 conj(h)) is assembled from exact
    truncated convolutions.
    """
    if params.mu != 0:
        raise InvalidArgumentError("steady states are sought for the plain equation (mu = 0)")
    grid = params.grid
    f_scale = max(1.0, norm(params.f, "l2"))
    target = 1e-12 * f_scale if tol is None else tol
    u = guess
    res = _steady_residual_field(u, params)
    res_norm = norm(res, "l2")
    lin_diag = np.diag((-grid.khat ** 2 + 1j * params.gamma).astype(np.complex128))
    for _ in range(max_iter):
        if res_norm <= target:
            return u
        vals = coeff_to_values(u.coeff, grid.n, grid.n_phys)
        a_mat = lin_diag + _toeplitz_mult(grid, 2.0 * np.abs(vals) ** 2)
        b_mat = _toeplitz_mult(grid, vals ** 2)
        jac = np.block([
            [(a_mat + b_mat).real, -(a_mat - b_mat).imag],
            [(a_mat + b_mat).imag, (a_mat - b_mat).real],
        ])
        rhs_vec = np.concatenate([res.coeff.real, res.coeff.imag])
        try:
            s = np.linalg.solve(jac, -rhs_vec)
        except np.linalg.LinAlgError as exc:
            raise ConvergenceFailureError(res_norm, f"singular Newton system: {exc}") from exc
        step_c = s[: grid.n_coeff] + 1j * s[grid.n_coeff:]
        lam = 1.0
        while lam >= 2.0 ** -16:
            trial = Field(grid, u.coeff + lam * step_c)
            trial_res = _steady_residual_field(trial, params)
            trial_norm = norm(trial_res, "l2")
            if trial_norm < res_norm:
                u, res, res_norm = trial, trial_res, trial_norm
                break
            lam *= 0.5
        else:
            # stalls happen at roundoff level for near-singular Jacobians;
            # accept if the contract tolerance (1e-10 * max(1, ||f||)) holds
            if res_norm <= 1e-10 * f_scale:
                return u
            raise ConvergenceFailureError(res_norm, "Newton line search stalled")
    if res_norm <= 1e-10 * f_scale:
        return u
    raise ConvergenceFailureError(res_norm)


def steady_state_defect(u: Field, params: NlsParams) -> float:
    """L2 norm of u_xx + |u|^2 u + i gamma u - f."""
    return norm(_steady_residual_field(u, params), "l2")


def linearization_eigenvalues(u_star: Field, params: NlsParams) -> np.ndarray:
    """Eigenvalues of the plain-flow linearization at u_star (real split)."""
    grid = u_star.grid
    vals = coeff_to_values(u_star.coeff, grid.n, grid.n_phys)
    lin = np.diag((-grid.khat ** 2).astype(np.complex128))
    a_mat = 1j * (lin + _toeplitz_mult(grid, 2.0 * np.abs(vals) ** 2)) \
        - params.gamma * np.eye(grid.n_coeff)
    b_mat = 1j * _toeplitz_mult(grid, vals ** 2)
    jac = np.block([
        [(a_mat + b_mat).real, -(a_mat - b_mat).imag],
        [(a_mat + b_mat).imag, (a_mat - b_mat).real],
    ])
    return np.linalg.eigvals(jac)


# ---------------------------------------------------------------------------
# attractor sampling
# ---------------------------------------------------------------------------

def stationarity_diagnostics(traj: Trajectory) -> dict:
    """Linear trends of mass and H1 norm over the window, per unit time."""
    t = traj.times - traj.times[0]
    mass = traj.grid.L * np.sum(np.abs(traj.coeffs) ** 2, axis=1)
    khat2 = (traj.grid.khat ** 2)[None, :]
    h1 = traj.grid.L * np.sum((1.0 + khat2) * np.abs(traj.coeffs) ** 2, axis=1)
    out = {}
    for name, series in (("mass", mass), ("h1", h1)):
        mean = float(np.mean(series))
        slope = float(np.polyfit(t, series, 1)[0]) if len(t) > 2 else 0.0
        out[f"{name}_mean"] = mean
        out[f"{name}_trend_per_time"] = slope
        out[f"{name}_relative_trend"] = slope * (t[-1] - t[0]) / max(mean, 1e-300)
    return out


def attractor_sample(params: NlsParams, spinup: float, window: float, seed: int,
                     scheme: SchemeConfig, trend_tol: float = 0.2,
                     amplitude: float | None = None) -> Trajectory:
    """Integrate from a seeded random state, discard spinup, return the window.

    Requires spinup >= 10/gamma (documented heuristic for forgetting the
    initial data).  Logs a warning when the window shows a systematic trend
    beyond trend_tol (relative, over the whole window).
    """
    if params.gamma > 0 and spinup < 10.0 / params.gamma - 1e-9:
        raise InvalidArgumentError(
            f"spinup {spinup} below the 10/gamma = {10.0 / params.gamma:.3g} heuristic"
        )
    rng = np.random.default_rng(seed)
    if amplitude is None:
        fn = norm(params.f, "l2")
        amplitude = 0.5 * (fn / params.gamma if (params.gamma > 0 and fn > 0) else 1.0)
    u0 = random_field(params.grid, rng, profile="smooth", amplitude=amplitude)
    traj = integrate(u0, params, (0.0, spinup + window), scheme, record_from=spinup)
    diag = stationarity_diagnostics(traj)
    for key in ("mass_relative_trend", "h1_relative_trend"):
        if abs(diag[key]) > trend_tol:
            log.warning("attractor window not stationary: %s = %.3g", key, diag[key])
    return traj


def rebase(traj: Trajectory, new_s0: float) -> Trajectory:
    """Shift the window's time origin (autonomous dynamics)."""
    return replace(traj, s0=new_s0)
