"""Experiment orchestration: configuration parsing, deterministic runs,
CSV/JSON artifact writing, and run manifests.

Config format: versioned JSON with unknown keys rejected.  All floats print
with 17 significant digits so artifacts round-trip exactly; CSV files are
RFC-4180 with a header row, UTF-8.
"""

from __future__ import annotations

import csv
import json
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import __version__
from .bounds import BoundsInput, check_conditions, compute_report, determining_modes_count
from .determining_form import FormState, evolve_form, form_residual
from .dynamics import (
    NlsParams,
    SchemeConfig,
    attractor_sample,
    find_steady_state,
    integrate,
    stationarity_diagnostics,
    steady_state_defect,
)
from .errors import ConfigError, NlsLabError
from .functionals import phi, varphi
from .spectral import Field, SpectralGrid, field_to_json, norm, single_mode, zero_field
from .trajectory import (
    Trajectory,
    constant_trajectory,
    norm_X,
    project_low_traj,
    trajectory_manifest,
)
from .verification import run_all_checks
from .wmap import WmapConfig, evaluate_W_detailed, sync_experiment

EXPERIMENTS = ("simulate", "steady", "nudge", "wmap", "form", "bounds", "modes", "verify")

SCHEMA_VERSION = 1


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    grid: SpectralGrid | None
    params: NlsParams | None
    scheme: SchemeConfig | None
    bounds_input: BoundsInput | None
    seeds: tuple[int, ...]
    tolerances: dict
    options: dict
    out_dir: str


_TOP_KEYS = {"schema_version", "experiment", "grid", "params", "scheme",
             "bounds_input", "seeds", "tolerances", "options", "out_dir"}
_GRID_KEYS = {"L", "n", "n_phys"}
_PARAM_KEYS = {"gamma", "mu", "m", "forcing", "allow_conservative"}
_SCHEME_KEYS = {"dt", "scheme", "sample_every"}
_BOUNDS_KEYS = {"gamma", "L", "norm_f", "mu", "v_X", "c", "xi"}


def _reject_unknown(d: dict, allowed: set, path: str) -> None:
    for key in d:
        if key not in allowed:
            raise ConfigError(f"{path}.{key}", "unknown key")


def forcing_from_spec(spec: dict, grid: SpectralGrid, gamma: float) -> Field:
    """Forcing grammar: {constant: a} | {modes: [[k, re, im], ...]} |
    {steady_compatible: a} with f = |a|^2 a + i gamma a."""
    if not isinstance(spec, dict) or len(spec) != 1:
        raise ConfigError("params.forcing", "expected exactly one forcing kind")
    kind, val = next(iter(spec.items()))
    if kind == "constant":
        a = complex(val[0], val[1]) if isinstance(val, (list, tuple)) else complex(val)
        c = np.zeros(grid.n_coeff, dtype=np.complex128)
        c[grid.n] = a
        return Field(grid, c)
    if kind == "steady_compatible":
        a = complex(val)
        c = np.zeros(grid.n_coeff, dtype=np.complex128)
        c[grid.n] = abs(a) ** 2 * a + 1j * gamma * a
        return Field(grid, c)
    if kind == "modes":
        c = np.zeros(grid.n_coeff, dtype=np.complex128)
        for entry in val:
            k, re, im = int(entry[0]), float(entry[1]), float(entry[2])
            if abs(k) > grid.n:
                raise ConfigError("params.forcing.modes", f"|k| = {abs(k)} exceeds n = {grid.n}")
            c[grid.n + k] = re + 1j * im
        return Field(grid, c)
    raise ConfigError("params.forcing", f"unknown forcing kind {kind!r}")


def parse_config(obj: dict, out_dir: str | None = None) -> ExperimentConfig:
    if not isinstance(obj, dict):
        raise ConfigError("<root>", "config must be a JSON object")
    _reject_unknown(obj, _TOP_KEYS, "<root>")
    version = obj.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ConfigError("schema_version", f"expected {SCHEMA_VERSION}, got {version}")
    experiment = obj.get("experiment")
    if experiment not in EXPERIMENTS:
        raise ConfigError("experiment", f"must be one of {EXPERIMENTS}, got {experiment!r}")

    grid = params = scheme = None
    if "grid" in obj:
        gd = dict(obj["grid"])
        _reject_unknown(gd, _GRID_KEYS, "grid")
        try:
            grid = SpectralGrid(float(gd["L"]), int(gd["n"]), int(gd.get("n_phys", 0)))
        except (KeyError, NlsLabError, TypeError, ValueError) as exc:
            raise ConfigError("grid", str(exc)) from exc
    if "params" in obj:
        if grid is None:
            raise ConfigError("params", "params require a grid section")
        pd = dict(obj["params"])
        _reject_unknown(pd, _PARAM_KEYS, "params")
        try:
            gamma = float(pd["gamma"])
            f = forcing_from_spec(pd.get("forcing", {"constant": 0.0}), grid, gamma)
            params = NlsParams(gamma=gamma, f=f, mu=float(pd.get("mu", 0.0)),
                               m=int(pd.get("m", 0)),
                               allow_conservative=bool(pd.get("allow_conservative", False)))
        except ConfigError:
            raise
        except (KeyError, NlsLabError, TypeError, ValueError) as exc:
            raise ConfigError("params", str(exc)) from exc
    if "scheme" in obj:
        sd = dict(obj["scheme"])
        _reject_unknown(sd, _SCHEME_KEYS, "scheme")
        try:
            scheme = SchemeConfig(dt=float(sd["dt"]),
                                  scheme=str(sd.get("scheme", "strang_splitstep")),
                                  sample_every=int(sd.get("sample_every", 1)))
        except (KeyError, NlsLabError, TypeError, ValueError) as exc:
            raise ConfigError("scheme", str(exc)) from exc
    bounds_input = None
    if "bounds_input" in obj:
        bdict = dict(obj["bounds_input"])
        _reject_unknown(bdict, _BOUNDS_KEYS, "bounds_input")
        try:
            bounds_input = BoundsInput(**{k: float(v) for k, v in bdict.items()})
        except (NlsLabError, TypeError, ValueError) as exc:
            raise ConfigError("bounds_input", str(exc)) from exc

    seeds = tuple(int(s) for s in obj.get("seeds", (0,)))
    return ExperimentConfig(
        experiment=experiment, grid=grid, params=params, scheme=scheme,
        bounds_input=bounds_input, seeds=seeds,
        tolerances=dict(obj.get("tolerances", {})),
        options=dict(obj.get("options", {})),
        out_dir=out_dir or str(obj.get("out_dir", ".")),
    )


def load_config(path: str | Path, out_dir: str | None = None) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(json.load(fh), out_dir=out_dir)


# ---------------------------------------------------------------------------
# artifact writers
# ---------------------------------------------------------------------------

def write_trajectory_csv(path: Path, traj: Trajectory,
                         params: NlsParams | None = None,
                         v_traj: Trajectory | None = None,
                         functionals: bool = False) -> None:
    grid = traj.grid
    khat2 = (grid.khat ** 2)[None, :]
    l2 = np.sqrt(grid.L * np.sum(np.abs(traj.coeffs) ** 2, axis=1))
    h1 = np.sqrt(grid.L * np.sum((1 + khat2) * np.abs(traj.coeffs) ** 2, axis=1))
    h2 = np.sqrt(grid.L * np.sum((1 + khat2 ** 2) * np.abs(traj.coeffs) ** 2, axis=1))
    dt_n = np.sqrt(grid.L * np.sum(np.abs(traj.dcoeffs) ** 2, axis=1))
    header = ["s", "norm_L2", "norm_H1", "norm_H2", "norm_dt"]
    rows = [traj.times, l2, h1, h2, dt_n]
    if functionals and params is not None:
        phis = []
        varphis = []
        for i in range(len(traj)):
            v_now = v_traj.field(i) if v_traj is not None else None
            phis.append(phi(traj.field(i), v_now, params))
            varphis.append(varphi(traj.field(i), v_now, params))
        header += ["phi", "varphi"]
        rows += [np.asarray(phis), np.asarray(varphis)]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\r\n")
        writer.writerow(header)
        for i in range(len(traj)):
            writer.writerow([_fmt(col[i]) for col in rows])


def _json_default(x):
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    raise TypeError(f"not JSON serializable: {type(x)}")


def write_json(path: Path, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True, default=_json_default)
        fh.write("\n")


@dataclass
class RunManifest:
    experiment: str
    config_snapshot: dict
    code_version: str
    wall_time_s: float
    produced_files: list[str]
    assertions: dict
    error: str | None

    def passed(self) -> bool:
        return self.error is None and all(self.assertions.values())


# ---------------------------------------------------------------------------
# experiments
# ---------------------------------------------------------------------------

def _exp_bounds(cfg: ExperimentConfig, out: Path, produced: list[str], assertions: dict):
    b = cfg.bounds_input
    if b is None:
        raise ConfigError("bounds_input", "bounds experiment needs a bounds_input section")
    rep = compute_report(b)
    m = int(cfg.options.get("m", rep.m_star))
    cond = check_conditions(rep, m)
    payload = rep.as_dict()
    payload["conditions_at_m"] = {"m": m, **cond["conditions"]}
    payload["minimal_m"] = cond["minimal_m"]
    write_json(out / "bounds_report.json", payload)
    produced.append("bounds_report.json")
    lines = [f"{k:14s} = {_fmt(getattr(rep, k))}" for k in (
        "r0t", "r1tt", "r0", "r1t", "r2t", "r1", "r2", "rprime", "rinf",
        "r0_0", "r1_0", "r2_0", "rprime_0", "rinf_0", "R",
        "k8", "k9", "k10", "k11", "lw_at_m_star")]
    lines.append(f"{'m_star':14s} = {rep.m_star}")
    lines += [f"condition {k:18s}: {v}" for k, v in cond["conditions"].items()]
    (out / "bounds_report.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    produced.append("bounds_report.txt")
    assertions["report_finite"] = True


def _exp_modes(cfg: ExperimentConfig, out: Path, produced: list[str], assertions: dict):
    b = cfg.bounds_input
    if b is None:
        raise ConfigError("bounds_input", "modes experiment needs a bounds_input section")
    rep = compute_report(replace(b, mu=0.0, v_X=0.0))
    m_min = determining_modes_count(b)
    write_json(out / "modes_report.json", {
        "k11": rep.k11, "L": b.L, "m_min": m_min,
        "rinf_0": rep.rinf_0, "rprime_0": rep.rprime_0,
    })
    produced.append("modes_report.json")
    assertions["m_min_nonnegative"] = m_min >= 0


def _require_run_sections(cfg: ExperimentConfig):
    if cfg.grid is None or cfg.params is None or cfg.scheme is None:
        raise ConfigError("<root>", "this experiment needs grid, params and scheme sections")


def _exp_simulate(cfg: ExperimentConfig, out: Path, produced: list[str], assertions: dict):
    _require_run_sections(cfg)
    params, scheme = cfg.params, cfg.scheme
    t_end = float(cfg.options.get("t_end", 10.0))
    spinup = float(cfg.options.get("spinup", 0.0))
    seed = cfg.seeds[0]
    if spinup > 0:
        traj = attractor_sample(params, spinup, t_end, seed, scheme)
        diag = stationarity_diagnostics(traj)
        write_json(out / "stationarity.json", diag)
        produced.append("stationarity.json")
    else:
        rng = np.random.default_rng(seed)
        from .spectral import random_field
        u0 = random_field(cfg.grid, rng, amplitude=float(cfg.options.get("amplitude", 1.0)))
        traj = integrate(u0, params, (0.0, t_end), scheme)
    write_trajectory_csv(out / "trajectory.csv", traj, params,
                         functionals=bool(cfg.options.get("functionals", False)))
    produced.append("trajectory.csv")
    (out / "trajectory_manifest.json").write_text(trajectory_manifest(traj) + "\n", "utf-8")
    produced.append("trajectory_manifest.json")
    if cfg.options.get("snapshots", False):
        snaps = [json.loads(field_to_json(traj.field(i))) for i in range(len(traj))]
        write_json(out / "snapshots.json", snaps)
        produced.append("snapshots.json")
    assertions["finite"] = True


def _exp_steady(cfg: ExperimentConfig, out: Path, produced: list[str], assertions: dict):
    _require_run_sections(cfg)
    params = cfg.params
    if params.mu != 0:
        raise ConfigError("params.mu", "steady experiment requires mu = 0")
    guess_spec = cfg.options.get("guess", {"constant": 0.1})
    guess = forcing_from_spec(guess_spec, cfg.grid, params.gamma)
    u_star = find_steady_state(params, guess)
    defect = steady_state_defect(u_star, params)
    (out / "steady_state.json").write_text(field_to_json(u_star) + "\n", "utf-8")
    produced.append("steady_state.json")
    write_json(out / "steady_report.json", {"defect": defect,
                                            "norm_L2": norm(u_star, "l2"),
                                            "norm_H2": norm(u_star, "h2")})
    produced.append("steady_report.json")
    assertions["defect_within_tol"] = defect <= 1e-10 * max(1.0, norm(params.f, "l2"))


def _exp_nudge(cfg: ExperimentConfig, out: Path, produced: list[str], assertions: dict):
    _require_run_sections(cfg)
    params, scheme = cfg.params, cfg.scheme
    base = NlsParams(gamma=params.gamma, f=params.f, mu=0.0,
                     allow_conservative=params.allow_conservative)
    spinup = float(cfg.options.get("spinup", 10.0 / params.gamma))
    window = float(cfg.options.get("window", 50.0))
    target = float(cfg.tolerances.get("sync_floor", 1e-6))
    u = attractor_sample(base, spinup, window, cfg.seeds[0], scheme)
    rep = sync_experiment(u, base, params.mu, params.m, scheme, target_floor=target,
                          deadline=float(cfg.options.get("deadline", window)))
    with open(out / "sync_series.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\r\n")
        writer.writerow(["s", "delta_L2"])
        for t, d in zip(rep.times, rep.delta):
            writer.writerow([_fmt(t), _fmt(d)])
    produced.append("sync_series.csv")
    write_json(out / "sync_report.json", {
        "mu": rep.mu, "m": rep.m, "fitted_rate": rep.fitted_rate, "floor": rep.floor,
        "crossing_time": rep.crossing_time, "target_floor": rep.target_floor,
        "pass": rep.passed, "series_csv_path": "sync_series.csv",
    })
    produced.append("sync_report.json")
    assertions["synchronized"] = rep.passed


def _exp_wmap(cfg: ExperimentConfig, out: Path, produced: list[str], assertions: dict):
    _require_run_sections(cfg)
    params, scheme = cfg.params, cfg.scheme
    if params.mu <= 0:
        raise ConfigError("params.mu", "wmap experiment requires mu > 0")
    base = NlsParams(gamma=params.gamma, f=params.f, mu=0.0)
    spinup = float(cfg.options.get("spinup", 10.0 / params.gamma))
    window = float(cfg.options.get("window", 20.0))
    wcfg = WmapConfig(spinup_k=float(cfg.options.get("spinup_k", 20.0)),
                      tol_converged=float(cfg.tolerances.get("tol_converged", 1e-7)))
    u = attractor_sample(base, spinup, window + wcfg.spinup_k, cfg.seeds[0], scheme)
    v = project_low_traj(u, params.m)
    res = evaluate_W_detailed(v, params, wcfg, scheme)
    w = res.trajectory
    write_trajectory_csv(out / "w_trajectory.csv", w, params)
    produced.append("w_trajectory.csv")
    from .trajectory import restrict_window, sup_l2_distance
    uw = restrict_window(u, w.s0, w.s_end)
    khat2 = (w.grid.khat ** 2)[None, :]
    diff = w.coeffs - uw.coeffs[:: max(1, int(round(w.ds / uw.ds)))][: len(w)]
    fixed_point_y = float(np.max(np.sqrt(w.grid.L * np.sum((1 + khat2 ** 2) * np.abs(diff) ** 2, axis=1))))
    write_json(out / "wmap_report.json", {
        "certificate_distance": res.certificate_distance,
        "spinup_used": res.spinup_used,
        "pad_pre": res.pad_pre,
        "fixed_point_defect_Y": fixed_point_y,
        "window": [w.s0, w.s_end],
    })
    produced.append("wmap_report.json")
    tol = float(cfg.tolerances.get("fixed_point_Y", 1e-6))
    assertions["fixed_point"] = fixed_point_y < tol


def _exp_form(cfg: ExperimentConfig, out: Path, produced: list[str], assertions: dict):
    _require_run_sections(cfg)
    params, scheme = cfg.params, cfg.scheme
    base = NlsParams(gamma=params.gamma, f=params.f, mu=0.0)
    guess = forcing_from_spec(cfg.options.get("guess", {"constant": 0.1}), cfg.grid, params.gamma)
    u_star = find_steady_state(base, guess)
    binp = BoundsInput(gamma=params.gamma, L=cfg.grid.L, norm_f=norm(params.f, "l2"),
                       mu=params.mu, v_X=float(cfg.options.get("v_X", 1.0)))
    R = compute_report(binp).R
    wcfg = WmapConfig(spinup_k=float(cfg.options.get("spinup_k", 20.0)),
                      tol_converged=float(cfg.tolerances.get("tol_converged", 1e-7)),
                      certify=False)
    ds = scheme.dt * scheme.sample_every
    count = int(float(cfg.options.get("obs_window", 25.0)) / ds) + 1
    pmu = project_low_traj(constant_trajectory(u_star, 0.0, ds, count), params.m)
    eps = float(cfg.options.get("epsilon", 1e-4))
    pert = single_mode(cfg.grid, min(1, params.m), eps)
    v0 = Trajectory(cfg.grid, 0.0, ds, pmu.coeffs + pert.coeff[None, :], pmu.dcoeffs,
                    mode_cutoff=params.m, check=False)
    res0 = form_residual(v0, params, wcfg, scheme)
    state0 = FormState(v=v0, u_star=u_star, t=0.0, residual=res0, R=R)
    ev = evolve_form(state0, dt_form=float(cfg.options.get("dt_form", 1e12)),
                     steps=int(cfg.options.get("steps", 60)),
                     params=params, cfg=wcfg, scheme=scheme,
                     tol_residual=float(cfg.tolerances.get("residual", 1e-6)))
    with open(out / "form_evolution.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\r\n")
        writer.writerow(["t", "residual", "dist_to_Pmustar_X", "lambda"])
        for s in ev.steps:
            writer.writerow([_fmt(s.t), _fmt(s.residual), _fmt(s.dist_X), _fmt(s.lam)])
    produced.append("form_evolution.csv")
    write_json(out / "form_report.json", {
        "converged": ev.converged, "ball_exited": ev.ball_exited,
        "final_residual": ev.final.residual, "formal_R": R,
        "empirical_radius": ev.empirical_radius,
        "max_collinearity_defect": max(s.collinearity_defect for s in ev.steps),
    })
    produced.append("form_report.json")
    assertions["converged"] = ev.converged
    assertions["ball_invariant"] = not ev.ball_exited


def _exp_verify(cfg: ExperimentConfig, out: Path, produced: list[str], assertions: dict):
    results = run_all_checks()
    lines = []
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        lines.append(f"[{status}] {res.name}: {res.detail}")
        assertions[res.name] = res.passed
    summary = f"{sum(r.passed for r in results)}/{len(results)} checks passed"
    lines.append(summary)
    (out / "verify_report.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    produced.append("verify_report.txt")
    print("\n".join(lines))


_DISPATCH = {
    "bounds": _exp_bounds,
    "modes": _exp_modes,
    "simulate": _exp_simulate,
    "steady": _exp_steady,
    "nudge": _exp_nudge,
    "wmap": _exp_wmap,
    "form": _exp_form,
    "verify": _exp_verify,
}


def run(cfg: ExperimentConfig) -> RunManifest:
    """Execute the configured experiment; the manifest is written even on
    failure (in the output directory alongside the artifacts)."""
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    produced: list[str] = []
    assertions: dict = {}
    error = None
    t0 = time.perf_counter()
    try:
        if cfg.params is not None and cfg.params.gamma == 0 and not cfg.params.allow_conservative:
            raise ConfigError("params.gamma", "gamma = 0 requires allow_conservative")
        _DISPATCH[cfg.experiment](cfg, out, produced, assertions)
    except NlsLabError as exc:
        error = f"{type(exc).__name__}: {exc}"
    wall = time.perf_counter() - t0
    snapshot = {
        "experiment": cfg.experiment,
        "seeds": list(cfg.seeds),
        "tolerances": cfg.tolerances,
        "options": cfg.options,
    }
    if cfg.grid is not None:
        snapshot["grid"] = {"L": cfg.grid.L, "n": cfg.grid.n, "n_phys": cfg.grid.n_phys}
    if cfg.params is not None:
        snapshot["params"] = {"gamma": cfg.params.gamma, "mu": cfg.params.mu,
                              "m": cfg.params.m,
                              "norm_f": norm(cfg.params.f, "l2")}
    if cfg.scheme is not None:
        snapshot["scheme"] = {"dt": cfg.scheme.dt, "scheme": cfg.scheme.scheme,
                              "sample_every": cfg.scheme.sample_every}
    if cfg.bounds_input is not None:
        snapshot["bounds_input"] = {k: getattr(cfg.bounds_input, k)
                                    for k in cfg.bounds_input.__dataclass_fields__}
    manifest = RunManifest(
        experiment=cfg.experiment,
        config_snapshot=snapshot,
        code_version=__version__,
        wall_time_s=wall,
        produced_files=sorted(produced),
        assertions=assertions,
        error=error,
    )
    write_json(out / "manifest.json", {
        "experiment": manifest.experiment,
        "config": manifest.config_snapshot,
        "code_version": manifest.code_version,
        "wall_time_s": manifest.wall_time_s,
        "produced_files": manifest.produced_files,
        "assertions": manifest.assertions,
        "error": manifest.error,
    })
    return manifest
