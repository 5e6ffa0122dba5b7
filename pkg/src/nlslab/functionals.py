"""Compound Lyapunov-type functionals and their balance-law residuals.

Four functionals:

    phi(w; v)      = ||w_x||^2 - 1/2 ||w||_L4^4 + 2 Re<f, w> - 2 mu Im<v, w>-type
    varphi(w; v)   = ||w_xx||^2 - 2 Int |w|^2 |w_x|^2 - Re Int w^2 wbar_x^2
                     - 2 Re Int f wbar_xx + 2 mu Im Int v wbar_xx
    Phi(delta; w, u)        difference functional for the synchronization system
    Psi(delta; w, wt, eta)  difference functional for two nudged solutions

Each functional satisfies an exact balance law along exact solutions of the
truncated system; the residual evaluators below measure the defect of that law
on sampled trajectories using centered differences in time.  For a consistent
solver the residual vanishes at second order in the step, which is the primary
cross-check that both the solver and the functional transcriptions are
correct.  All integrals are evaluated by collocation quadrature on the padded
grid and are exact for the quartic integrands involved.
"""

from __future__ import annotations

import numpy as np

from .dynamics import NlsParams
from .errors import InvalidArgumentError
from .spectral import Field, derivative, grid_quadrature, to_physical
from .trajectory import Trajectory


def _vals(u: Field) -> np.ndarray:
    return to_physical(u)


def _quad(grid, values) -> float:
    return float(np.real(grid_quadrature(grid, values)))


def _re_inner(u: Field, v: Field) -> float:
    """Re Int u vbar over [0, L] (spectral, exact)."""
    return float(np.real(u.grid.L * np.sum(u.coeff * np.conj(v.coeff))))


def _im_inner(u: Field, v: Field) -> float:
    return float(np.imag(u.grid.L * np.sum(u.coeff * np.conj(v.coeff))))


def _project(u: Field, m: int) -> Field:
    c = u.coeff.copy()
    c[np.abs(u.grid.k) > m] = 0.0
    return Field(u.grid, c)


# ---------------------------------------------------------------------------
# values
# ---------------------------------------------------------------------------

def phi(w: Field, v: Field | None, params: NlsParams) -> float:
    """||w_x||^2 - 1/2 ||w||_L4^4 + 2 Re Int f wbar - 2 mu Im Int v wbar."""
    grid = w.grid
    wx = derivative(w, 1)
    out = float(grid.L * np.sum(np.abs(wx.coeff) ** 2))
    out -= 0.5 * _quad(grid, np.abs(_vals(w)) ** 4)
    out += 2.0 * _re_inner(params.f, w)
    if params.mu > 0 and v is not None:
        out -= 2.0 * params.mu * _im_inner(v, w)
    return out


def varphi(w: Field, v: Field | None, params: NlsParams) -> float:
    """H2-level functional; see module docstring for the term list."""
    grid = w.grid
    wxx = derivative(w, 2)
    wv = _vals(w)
    wxv = _vals(derivative(w, 1))
    out = float(grid.L * np.sum(np.abs(wxx.coeff) ** 2))
    out -= 2.0 * _quad(grid, np.abs(wv) ** 2 * np.abs(wxv) ** 2)
    out -= _quad(grid, wv ** 2 * np.conj(wxv) ** 2)
    out -= 2.0 * _re_inner(params.f, wxx)
    if params.mu > 0 and v is not None:
        out += 2.0 * params.mu * _im_inner(v, wxx)
    return out


def _delta_check(delta: Field, a: Field, b: Field) -> None:
    scale = max(1.0, float(np.max(np.abs(a.coeff))), float(np.max(np.abs(b.coeff))))
    if float(np.max(np.abs(delta.coeff - (a.coeff - b.coeff)))) > 1e-12 * scale:
        raise InvalidArgumentError("delta does not equal the difference of the given fields")


def Phi(delta: Field, w: Field, u: Field) -> float:
    """||delta_x||^2 - 1/2 Int |delta|^4 - 2 Int Re(w ubar)|delta|^2
    - Re Int w u deltabar^2, with delta = w - u enforced."""
    _delta_check(delta, w, u)
    grid = delta.grid
    dx = derivative(delta, 1)
    dv = _vals(delta)
    wv = _vals(w)
    uv = _vals(u)
    out = float(grid.L * np.sum(np.abs(dx.coeff) ** 2))
    out -= 0.5 * _quad(grid, np.abs(dv) ** 4)
    out -= 2.0 * _quad(grid, np.real(wv * np.conj(uv)) * np.abs(dv) ** 2)
    out -= _quad(grid, wv * uv * np.conj(dv) ** 2)
    return out


def Psi(delta: Field, w: Field, wt: Field, eta: Field, mu: float) -> float:
    """Phi-type functional for two nudged solutions, minus mu Im Int eta deltabar."""
    _delta_check(delta, w, wt)
    grid = delta.grid
    dx = derivative(delta, 1)
    dv = _vals(delta)
    wv = _vals(w)
    tv = _vals(wt)
    out = float(grid.L * np.sum(np.abs(dx.coeff) ** 2))
    out -= 0.5 * _quad(grid, np.abs(dv) ** 4)
    out -= 2.0 * _quad(grid, np.real(wv * np.conj(tv)) * np.abs(dv) ** 2)
    out -= _quad(grid, wv * tv * np.conj(dv) ** 2)
    out -= mu * _im_inner(eta, delta)
    return out


# ---------------------------------------------------------------------------
# balance-law right-hand sides (exact identities in continuous time)
# ---------------------------------------------------------------------------

def phi_balance_rhs(w: Field, v: Field | None, v_s: Field | None, params: NlsParams) -> float:
    """Right side of  d phi/ds + 4 gamma phi = ...  (nudged system)."""
    g, mu = params.gamma, params.mu
    grid = w.grid
    wx = derivative(w, 1)
    out = 2.0 * g * float(grid.L * np.sum(np.abs(wx.coeff) ** 2))
    out += 6.0 * g * _re_inner(params.f, w)
    if mu > 0 and v is not None:
        m = params.m
        pw = _project(w, m)
        pwx = derivative(pw, 1)
        wv = _vals(w)
        cubic_vals = np.abs(wv) ** 2 * wv
        pw_vals = _vals(pw)
        out -= 6.0 * mu * g * _im_inner(v, w)
        out += 2.0 * mu * _quad(grid, cubic_vals * np.conj(pw_vals))
        out -= 2.0 * mu * float(grid.L * np.sum(np.abs(pwx.coeff) ** 2))
        out -= 2.0 * mu * _re_inner(_project(params.f, m), pw)
        out += 2.0 * mu ** 2 * _im_inner(v, pw)
        out -= 2.0 * mu * _im_inner(v_s, w)
    return out


def varphi_balance_rhs(w: Field, w_s: Field, v: Field | None, v_s: Field | None,
                       params: NlsParams) -> float:
    """Right side of  1/2 d varphi/ds + gamma varphi = ...  (uses stored w_s)."""
    g, mu = params.gamma, params.mu
    grid = w.grid
    wv = _vals(w)
    wsv = _vals(w_s)
    wxv = _vals(derivative(w, 1))
    wxx = derivative(w, 2)
    out = -2.0 * _quad(grid, np.real(wv * np.conj(wsv)) * np.abs(wxv) ** 2)
    out -= _quad(grid, wv * wsv * np.conj(wxv) ** 2)
    out -= g * _re_inner(params.f, wxx)
    if mu > 0 and v is not None:
        m = params.m
        pwx = derivative(_project(w, m), 1)
        pwxs = derivative(_project(w_s, m), 1)
        out += mu * _im_inner(v_s, wxx)
        out += g * mu * _im_inner(v, wxx)
        out -= mu * _im_inner(pwx, pwxs)
    return out


def Phi_balance_rhs(delta: Field, w: Field, u: Field, w_s: Field, u_s: Field,
                    mu: float, m: int, gamma: float) -> float:
    """Right side of  d Phi/ds + 2 gamma Phi = ...  for the sync difference system.

    The product-rule terms carry (w ubar)_s = w_s ubar + w ubar_s in full; the
    finite-difference oracle confirms the identity at second order.
    """
    grid = delta.grid
    dv = _vals(delta)
    wv = _vals(w)
    uv = _vals(u)
    wsv = _vals(w_s)
    usv = _vals(u_s)
    out = gamma * _quad(grid, np.abs(dv) ** 4)
    out -= 2.0 * _quad(grid, np.real(wsv * np.conj(uv) + wv * np.conj(usv)) * np.abs(dv) ** 2)
    out -= _quad(grid, (wsv * uv + wv * usv) * np.conj(dv) ** 2)
    if mu > 0:
        pd = _project(delta, m)
        pdx = derivative(pd, 1)
        pdv = _vals(pd)
        out -= 2.0 * mu * float(grid.L * np.sum(np.abs(pdx.coeff) ** 2))
        out += 2.0 * mu * _quad(grid, np.abs(dv) ** 2 * dv * np.conj(pdv))
        out += 4.0 * mu * _quad(grid, np.real(wv * np.conj(uv)) * np.real(dv * np.conj(pdv)))
        out += 2.0 * mu * _quad(grid, wv * uv * np.conj(dv) * np.conj(pdv))
    return out


def Psi_balance_rhs(delta: Field, w: Field, wt: Field, w_s: Field, wt_s: Field,
                    eta: Field, eta_s: Field, delta_s: Field,
                    mu: float, m: int, gamma: float) -> float:
    """Right side of  d Psi/ds + 2 gamma Psi = ...  for two nudged solutions."""
    grid = delta.grid
    dv = _vals(delta)
    wv = _vals(w)
    tv = _vals(wt)
    out = gamma * _quad(grid, np.abs(dv) ** 4)
    out -= 2.0 * _quad(grid, np.real(_vals(w_s) * np.conj(tv) + wv * np.conj(_vals(wt_s)))
                       * np.abs(dv) ** 2)
    out -= _quad(grid, (_vals(w_s) * tv + wv * _vals(wt_s)) * np.conj(dv) ** 2)
    if mu > 0:
        pd = _project(delta, m)
        pdx = derivative(pd, 1)
        pdv = _vals(pd)
        out -= 2.0 * mu * float(grid.L * np.sum(np.abs(pdx.coeff) ** 2))
        out += 2.0 * mu * _quad(grid, np.abs(dv) ** 2 * dv * np.conj(pdv))
        out += 4.0 * mu * _quad(grid, np.real(wv * np.conj(tv)) * np.real(dv * np.conj(pdv)))
        out += 2.0 * mu * _quad(grid, wv * tv * np.conj(dv) * np.conj(pdv))
        out += 2.0 * mu ** 2 * _im_inner(eta, pd)
    out += mu * _im_inner(eta, delta_s)
    out -= mu * _im_inner(eta_s, delta)
    return out


# ---------------------------------------------------------------------------
# residual series over trajectories
# ---------------------------------------------------------------------------

def _normalize(raw: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Residuals per unit time, scaled by max(1, |functional value|)."""
    return raw / np.maximum(1.0, np.abs(values[1 : raw.shape[0] + 1]))


def phi_balance_residuals(w_traj: Trajectory, v_traj: Trajectory | None,
                          params: NlsParams) -> np.ndarray:
    """|FD(d phi/ds) + 4 gamma phi - rhs| at interior samples, normalized."""
    ds = w_traj.ds
    count = len(w_traj)
    vals = np.empty(count)
    rhs_vals = np.empty(count)
    for i in range(count):
        w = w_traj.field(i)
        v = v_traj.field(i) if v_traj is not None else None
        v_s = v_traj.deriv(i) if v_traj is not None else None
        vals[i] = phi(w, v, params)
        rhs_vals[i] = phi_balance_rhs(w, v, v_s, params)
    fd = (vals[2:] - vals[:-2]) / (2.0 * ds)
    raw = np.abs(fd + 4.0 * params.gamma * vals[1:-1] - rhs_vals[1:-1])
    return _normalize(raw, vals)


def varphi_balance_residuals(w_traj: Trajectory, v_traj: Trajectory | None,
                             params: NlsParams) -> np.ndarray:
    ds = w_traj.ds
    count = len(w_traj)
    vals = np.empty(count)
    rhs_vals = np.empty(count)
    for i in range(count):
        w = w_traj.field(i)
        w_s = w_traj.deriv(i)
        v = v_traj.field(i) if v_traj is not None else None
        v_s = v_traj.deriv(i) if v_traj is not None else None
        vals[i] = varphi(w, v, params)
        rhs_vals[i] = varphi_balance_rhs(w, w_s, v, v_s, params)
    fd = (vals[2:] - vals[:-2]) / (2.0 * ds)
    raw = np.abs(0.5 * fd + params.gamma * vals[1:-1] - rhs_vals[1:-1])
    return _normalize(raw, vals)


def Phi_balance_residuals(w_traj: Trajectory, u_traj: Trajectory,
                          mu: float, m: int, gamma: float) -> np.ndarray:
    """Residuals of the synchronization difference balance law."""
    w_traj._compat(u_traj)
    ds = w_traj.ds
    count = len(w_traj)
    vals = np.empty(count)
    rhs_vals = np.empty(count)
    for i in range(count):
        w = w_traj.field(i)
        u = u_traj.field(i)
        delta = w - u
        vals[i] = Phi(delta, w, u)
        rhs_vals[i] = Phi_balance_rhs(delta, w, u, w_traj.deriv(i), u_traj.deriv(i),
                                      mu, m, gamma)
    fd = (vals[2:] - vals[:-2]) / (2.0 * ds)
    raw = np.abs(fd + 2.0 * gamma * vals[1:-1] - rhs_vals[1:-1])
    return _normalize(raw, vals)


def Psi_balance_residuals(w_traj: Trajectory, wt_traj: Trajectory,
                          v_traj: Trajectory, vt_traj: Trajectory,
                          mu: float, m: int, gamma: float) -> np.ndarray:
    """Residuals of the two-solution difference balance law."""
    w_traj._compat(wt_traj)
    ds = w_traj.ds
    count = len(w_traj)
    vals = np.empty(count)
    rhs_vals = np.empty(count)
    for i in range(count):
        w = w_traj.field(i)
        wt = wt_traj.field(i)
        delta = w - wt
        delta_s = w_traj.deriv(i) - wt_traj.deriv(i)
        eta = v_traj.field(i) - vt_traj.field(i)
        eta_s = v_traj.deriv(i) - vt_traj.deriv(i)
        vals[i] = Psi(delta, w, wt, eta, mu)
        rhs_vals[i] = Psi_balance_rhs(delta, w, wt, w_traj.deriv(i), wt_traj.deriv(i),
                                      eta, eta_s, delta_s, mu, m, gamma)
    fd = (vals[2:] - vals[:-2]) / (2.0 * ds)
    raw = np.abs(fd + 2.0 * gamma * vals[1:-1] - rhs_vals[1:-1])
    return _normalize(raw, vals)


# ---------------------------------------------------------------------------
# mass balance (the L2 identity, before any inequality)
# ---------------------------------------------------------------------------

def mass_balance_residuals(w_traj: Trajectory, v_traj: Trajectory | None,
                           params: NlsParams) -> np.ndarray:
    """Defect of  d/ds ||w||^2 + 2 gamma ||w||^2 + 2 mu ||P_m w||^2
    - 2 Im Int f wbar - 2 mu Re Int v P_m wbar = 0, per unit time."""
    grid = w_traj.grid
    ds = w_traj.ds
    kabs = np.abs(grid.k)
    mass = grid.L * np.sum(np.abs(w_traj.coeffs) ** 2, axis=1)
    rhs_vals = -2.0 * params.gamma * mass.copy()
    fw = grid.L * np.sum(params.f.coeff[None, :] * np.conj(w_traj.coeffs), axis=1)
    rhs_vals += 2.0 * np.imag(fw)
    if params.mu > 0 and v_traj is not None:
        obs = kabs <= params.m
        pm_mass = grid.L * np.sum(np.abs(w_traj.coeffs[:, obs]) ** 2, axis=1)
        rhs_vals -= 2.0 * params.mu * pm_mass
        vw = grid.L * np.sum(v_traj.coeffs[:, obs] * np.conj(w_traj.coeffs[:, obs]), axis=1)
        rhs_vals += 2.0 * params.mu * np.real(vw)
    fd = (mass[2:] - mass[:-2]) / (2.0 * ds)
    return np.abs(fd - rhs_vals[1:-1])
