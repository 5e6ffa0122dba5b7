"""Executable transcription of the a-priori estimate chain.

Constant naming (mirrors the tilde bookkeeping, doubled letters = double
tilde):  r0t (R~0), k1tt..k4tt, r1tt (R~~1), k1t/k2t + r1t (R~1) from the
improved L2 bound r0, k5t..k7t + r2t (R~2), the final chain k1, k2, r1,
k5..k7, r2, rprime, rinf, the mu = 0 variants, the difference chain
k8..k11 and the Lipschitz constant of P_m W.

Everything is plain float arithmetic with overflow detection; formulas are
evaluated exactly as displayed, with the H1 Gronwall chain parametric in xi
(xi = 1/7 reproduces the printed closed forms).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from .errors import BoundsOverflowError, InvalidArgumentError
from .spectral import DEFAULT_UNIVERSAL_C, UNIVERSAL_C_PROVENANCE

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class BoundsInput:
    gamma: float
    L: float
    norm_f: float
    mu: float = 0.0
    v_X: float = 0.0
    c: float = DEFAULT_UNIVERSAL_C
    xi: float = 1.0 / 7.0

    def __post_init__(self):
        if not (self.gamma > 0):
            raise InvalidArgumentError(f"gamma must be positive, got {self.gamma}")
        if not (self.L > 0):
            raise InvalidArgumentError(f"L must be positive, got {self.L}")
        if self.norm_f < 0 or self.mu < 0 or self.v_X < 0:
            raise InvalidArgumentError("norm_f, mu, v_X must be nonnegative")
        if not (self.c > 0):
            raise InvalidArgumentError(f"c must be positive, got {self.c}")
        if not (0.0 < self.xi < 0.25):
            raise InvalidArgumentError(
                f"xi must lie in (0, 1/4) for the Gronwall chain, got {self.xi}"
            )


@dataclass(frozen=True)
class BoundsReport:
    inputs: BoundsInput
    # first pass
    r0t: float
    k1tt: float
    k2tt: float
    k3tt: float
    k4tt: float
    r1tt: float
    # improved L2 and the single-tilde chain
    r0: float
    k1t: float
    k2t: float
    r1t: float
    k5t: float
    k6t: float
    k7t: float
    r2t: float
    # final chain
    k1: float
    k2: float
    r1: float
    k5: float
    k6: float
    k7: float
    r2: float
    rprime: float
    rinf: float
    # mu = 0 variants
    r0_0: float
    r1_0: float
    r2_0: float
    rprime_0: float
    rinf_0: float
    R: float
    # difference chain
    k8: float
    k9: float
    k10: float
    k11: float
    m_star: int
    lw_at_m_star: float
    c_provenance: str = field(default=UNIVERSAL_C_PROVENANCE)

    def as_dict(self) -> dict:
        d = {k: getattr(self, k) for k in self.__dataclass_fields__ if k not in ("inputs",)}
        d["inputs"] = {k: getattr(self.inputs, k) for k in self.inputs.__dataclass_fields__}
        return d


_CONSTANT_KEYS = [
    "r0t", "k1tt", "k2tt", "k3tt", "k4tt", "r1tt", "r0", "k1t", "k2t", "r1t",
    "k5t", "k6t", "k7t", "r2t", "k1", "k2", "r1", "k5", "k6", "k7", "r2",
    "rprime", "rinf", "r0_0", "r1_0", "r2_0", "rprime_0", "rinf_0", "R",
    "k8", "k9", "k10", "k11", "lw_at_m_star",
]


def _h1_tilde_chain(r_seed: float, b: BoundsInput) -> tuple[float, float, float, float, float]:
    """The H1 Gronwall chain seeded by an L2 bound (double- or single-tilde).

    Returns (K1, K2, K3, K4, R1) for that seed.  xi parametric; requires
    xi < 1/4 so the Gronwall factor (1-4 xi)/(1-xi) is positive.
    """
    g, mu, nf, vx, c, xi = b.gamma, b.mu, b.norm_f, b.v_X, b.c, b.xi
    k1 = (6.0 * g * nf * r_seed + 6.0 * mu * g * vx * r_seed
          + mu ** 2 * c ** 2 * r_seed ** 6 / g + 2.0 * mu * nf * r_seed
          + 2.0 * mu ** 2 * vx * r_seed + 2.0 * mu * vx * r_seed)
    k2 = (c ** 2 * r_seed ** 6 / (16.0 * xi) + 0.5 * c * r_seed ** 4
          + 2.0 * nf * r_seed + 2.0 * mu * vx * r_seed + (1.0 - xi) * r_seed ** 2)
    k3 = 3.0 * g * k2 / (1.0 - xi) + k1
    k4 = (1.0 - xi) / ((1.0 - 4.0 * xi) * g) * k3
    r1 = math.sqrt((k4 + k2) / (1.0 - xi))
    return k1, k2, k3, k4, r1


def _h2_chain(r0: float, r1: float, b: BoundsInput) -> tuple[float, float, float, float]:
    """The H2 chain (K5, K6, K7, R2) for a given (L2, H1) bound pair."""
    g, mu, nf, vx, c = b.gamma, b.mu, b.norm_f, b.v_X, b.c
    k5 = (c * (math.sqrt(r0) * r1 ** 2) ** 4 / g ** 3
          + c * (r0 * r1 * (r0 ** 2 * r1 + (g + mu) * r0 + mu * vx + nf)) ** 2 / g)
    k6 = (2.0 * k5 + c * mu ** 2 * vx ** 2 / g + c * g * mu ** 2 * vx ** 2
          + c * g * nf ** 2 + c * mu * (r0 ** 2 * r1) ** 2 + c * mu * nf ** 2
          + c * mu ** 3 * vx ** 2)
    k7 = c * (r0 * r1 ** 3 + nf ** 2 + mu ** 2 * vx ** 2)
    r2 = math.sqrt(4.0 * k6 / g + 4.0 * k7) + r0
    return k5, k6, k7, r2


def _final_h1_chain(r0: float, b: BoundsInput) -> tuple[float, float, float]:
    """The improved H1 chain (K1, K2, R1) built on the improved L2 bound."""
    g, mu, nf, vx, c = b.gamma, b.mu, b.norm_f, b.v_X, b.c
    k1 = (6.0 * g * nf * r0 + 6.0 * mu * g * vx * r0
          + mu * (c ** 2 * r0 ** 6 + r0 ** 2) + 2.0 * mu
          + 2.0 * mu * nf * r0 + 2.0 * mu * vx * r0)
    k2 = (3.0 * c ** 2 * r0 ** 6 / 16.0 + 0.5 * c * r0 ** 4 + 2.0 * nf * r0
          + 2.0 * mu * vx * r0 + (2.0 / 3.0) * r0 ** 2)
    r1 = math.sqrt(((1.5 * mu + 6.0 * g) * k2 + k1) / (g + mu))
    return k1, k2, r1


def _core_constants(b: BoundsInput) -> dict:
    g, mu, nf, vx, c = b.gamma, b.mu, b.norm_f, b.v_X, b.c
    out: dict = {}
    out["r0t"] = nf / g + math.sqrt(mu / g) * vx
    (out["k1tt"], out["k2tt"], out["k3tt"], out["k4tt"], out["r1tt"]) = \
        _h1_tilde_chain(out["r0t"], b)
    out["r0"] = (nf / math.sqrt(g * (g + mu))
                 + math.sqrt(mu / (g + mu)) * vx + math.sqrt(mu / (g + mu)))
    (out["k1t"], out["k2t"], _, _, out["r1t"]) = _h1_tilde_chain(out["r0"], b)
    (out["k5t"], out["k6t"], out["k7t"], out["r2t"]) = _h2_chain(out["r0"], out["r1t"], b)
    (out["k1"], out["k2"], out["r1"]) = _final_h1_chain(out["r0"], b)
    (out["k5"], out["k6"], out["k7"], out["r2"]) = _h2_chain(out["r0"], out["r1"], b)
    out["rprime"] = (out["r2"] + c * out["r0"] ** 2 * out["r1"]
                     + (g + mu) * out["r0"] + nf + mu * vx)
    out["rinf"] = c * out["r0"] * out["r1"]
    return out


def _difference_constants(core: dict, core0: dict, b: BoundsInput) -> dict:
    g, mu = b.gamma, b.mu
    rinf, rinf0 = core["rinf"], core0["rinf"]
    rp, rp0 = core["rprime"], core0["rprime"]
    sqrt_pair = math.sqrt(rinf) * math.sqrt(rinf0)
    k8 = (mu * (rinf + rinf0) + mu * sqrt_pair
          + math.sqrt(rinf0) * rp + g ** (-1.0 / 3.0) * rinf0 ** (2.0 / 3.0) * rp ** (4.0 / 3.0)
          + math.sqrt(rinf) * rp0 + g ** (-1.0 / 3.0) * rinf ** (2.0 / 3.0) * rp0 ** (4.0 / 3.0))
    k9 = sqrt_pair * (k8 + g * (rinf + rinf0 + sqrt_pair))
    k10 = rinf * ((mu + g) * rinf + g ** (-1.0 / 3.0) * rinf ** (2.0 / 3.0) * rp ** (4.0 / 3.0))
    k11 = math.sqrt((b.c * g * rinf0
                     + b.c * g ** (-1.0 / 3.0) * rinf0 ** (2.0 / 3.0) * rp0 ** (4.0 / 3.0)) / g)
    return {"k8": k8, "k9": k9, "k10": k10, "k11": k11}


def lipschitz_W(b: BoundsInput, m: int, report: "BoundsReport | None" = None) -> float:
    """L_W = (m^2 + c R_inf + gamma + mu + 1) * c R_inf (mu + 3 gamma mu)
    / ((2 pi / L)^2 (m+1)^2 gamma) + mu."""
    if report is not None and report.inputs == b:
        rinf = report.rinf
    else:
        rinf = _core_constants(b)["rinf"]
    g, mu = b.gamma, b.mu
    pref = b.c * rinf * (mu + 3.0 * g * mu) / ((TWO_PI / b.L) ** 2 * (m + 1) ** 2 * g)
    return (m ** 2 + b.c * rinf + g + mu + 1.0) * pref + mu


def _min_m(threshold: float, strict: bool) -> int:
    """Smallest integer m >= 0 with (m+1) > threshold (strict) or >= (else)."""
    if not math.isfinite(threshold):
        raise BoundsOverflowError("m threshold")
    if threshold <= 0:
        return 0
    if strict:
        return max(0, int(math.floor(threshold)))
    return max(0, int(math.ceil(threshold)) - 1)


def compute_report(b: BoundsInput) -> BoundsReport:
    """Evaluate every constant of the chain, plus the mu = 0 variants, the
    difference chain and L_W at the minimal m satisfying all m-conditions."""
    core = _core_constants(b)
    b0 = replace(b, mu=0.0, v_X=0.0)
    core0 = _core_constants(b0)
    diff = _difference_constants(core, core0, b)
    values = dict(core)
    values.update(diff)
    values["r0_0"] = core0["r0"]
    values["r1_0"] = core0["r1"]
    values["r2_0"] = core0["r2"]
    values["rprime_0"] = core0["rprime"]
    values["rinf_0"] = core0["rinf"]
    values["R"] = core0["r0"] + core0["rprime"]

    m_e1 = _min_m(values["r1tt"] * b.L / TWO_PI, strict=True)
    m_e2 = _min_m(values["r2t"] * b.L / TWO_PI, strict=False)
    m_c2 = _min_m(math.sqrt(b.c * values["k9"]) * b.L / b.gamma, strict=False)
    m_c3 = _min_m(math.sqrt(b.c * values["k10"]) * b.L / b.gamma, strict=False)
    m_star = max(m_e1, m_e2, m_c2, m_c3)
    values["m_star"] = m_star
    values["lw_at_m_star"] = lipschitz_W(b, m_star)

    for key in _CONSTANT_KEYS:
        val = values[key]
        if not math.isfinite(val) or val < 0:
            raise BoundsOverflowError(key)
    return BoundsReport(inputs=b, **values)


def check_conditions(report: BoundsReport, m: int, mu: float | None = None) -> dict:
    """Named threshold conditions at the given m (and the report's mu), plus
    the minimal m satisfying each m-condition."""
    b = report.inputs
    if mu is None:
        mu = b.mu
    sqrt_pair = math.sqrt(report.rinf) * math.sqrt(report.rinf_0)
    mp1_sq = float(m + 1) ** 2
    lsq = b.L ** 2 / (4.0 * math.pi ** 2)
    conditions = {
        "E1": report.r1tt ** 2 / mp1_sq * lsq < 1.0,
        "E2": report.r2t ** 2 * lsq / mp1_sq <= 1.0,
        "mucondition": sqrt_pair < mu,
        "mcondition2": b.c * b.L ** 2 * report.k9 / (b.gamma ** 2 * mp1_sq) <= 1.0,
        "mucondition2": report.rinf < mu,
        "mcondition3": b.c * b.L ** 2 * report.k10 / (b.gamma ** 2 * mp1_sq) <= 1.0,
        "determining_modes": m >= b.L / TWO_PI * report.k11 - 1.0,
    }
    minimal_m = {
        "E1": _min_m(report.r1tt * b.L / TWO_PI, strict=True),
        "E2": _min_m(report.r2t * b.L / TWO_PI, strict=False),
        "mcondition2": _min_m(math.sqrt(b.c * report.k9) * b.L / b.gamma, strict=False),
        "mcondition3": _min_m(math.sqrt(b.c * report.k10) * b.L / b.gamma, strict=False),
        "determining_modes": max(0, int(math.ceil(b.L / TWO_PI * report.k11 - 1.0))),
    }
    return {"conditions": conditions, "minimal_m": minimal_m}


def determining_modes_count(b: BoundsInput) -> int:
    """Minimal m with m >= (L / 2 pi) K11 - 1."""
    rep = compute_report(replace(b, mu=0.0, v_X=0.0))
    return max(0, int(math.ceil(b.L / TWO_PI * rep.k11 - 1.0)))


# ---------------------------------------------------------------------------
# asymptotic order fits
# ---------------------------------------------------------------------------

def constant_value(b: BoundsInput, selector: str, m: int | None = None) -> float:
    """Evaluate one named constant (or derived quantity) at the given inputs."""
    rep = compute_report(b)
    if selector == "sqrt_pair":
        return math.sqrt(rep.rinf) * math.sqrt(rep.rinf_0)
    if selector == "m_min_modes":
        return b.L / TWO_PI * rep.k11 - 1.0
    if selector == "lw":
        mm = rep.m_star if m is None else m
        return lipschitz_W(b, mm, rep)
    if selector in _CONSTANT_KEYS or selector in ("R",):
        return float(getattr(rep, selector))
    raise InvalidArgumentError(f"unknown constant selector {selector!r}")


def asymptotic_order_fit(selector: str, parameter: str, base: BoundsInput,
                         lo: float, hi: float, samples: int = 33,
                         m: int | None = None) -> float:
    """Least-squares slope of log(constant) against log(parameter).

    The grid is log-spaced and must span at least 4 decades; the fit uses the
    asymptotic decade (largest values for mu and norm_f, whose claims are
    mu -> infinity / ||f|| -> infinity limits; smallest for gamma -> 0).
    """
    if parameter not in ("mu", "gamma", "norm_f"):
        raise InvalidArgumentError(f"unknown sweep parameter {parameter!r}")
    if not (0 < lo < hi):
        raise InvalidArgumentError("need 0 < lo < hi")
    if math.log10(hi / lo) < 4.0 - 1e-9:
        raise InvalidArgumentError("sweep must span at least 4 decades")
    grid = np.geomspace(lo, hi, samples)
    vals = []
    for p in grid:
        bp = replace(base, **{parameter: float(p)})
        v = constant_value(bp, selector, m=m)
        if not math.isfinite(v):
            raise BoundsOverflowError(selector)
        vals.append(v)
    vals = np.asarray(vals)
    if parameter == "gamma":
        sel = grid <= lo * 10.0 * (1 + 1e-12)
    else:
        sel = grid >= hi / 10.0 * (1 - 1e-12)
    x = np.log(grid[sel])
    y = np.log(np.maximum(vals[sel], 1e-300))
    slope = float(np.polyfit(x, y, 1)[0])
    return slope


# ---------------------------------------------------------------------------
# symbolic order propagation (the paper's upper-bound arithmetic)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Order:
    """Growth order O(||f||^a * gamma^(-b)) tracked as exponent pair (a, b).

    Sums take the componentwise max (each asymptotic direction separately);
    mu, |v|_X, c, xi and numbers are O(1); the crude substitutions
    1/(gamma+mu) -> 1/gamma and (gamma+mu) -> O(1) make every entry an upper
    bound, mirroring how the printed table tracks orders.
    """

    f: Fraction
    ginv: Fraction

    def __add__(self, other: "Order") -> "Order":
        return Order(max(self.f, other.f), max(self.ginv, other.ginv))

    def __mul__(self, other: "Order") -> "Order":
        return Order(self.f + other.f, self.ginv + other.ginv)

    def __pow__(self, e) -> "Order":
        q = Fraction(e).limit_denominator(1000)
        return Order(self.f * q, self.ginv * q)

    def sqrt(self) -> "Order":
        return self ** Fraction(1, 2)

    def as_tuple(self) -> tuple[Fraction, Fraction]:
        return (self.f, self.ginv)


_ONE = Order(Fraction(0), Fraction(0))
_F = Order(Fraction(1), Fraction(0))
_GINV = Order(Fraction(0), Fraction(1))  # a factor 1/gamma
_G = Order(Fraction(0), Fraction(-1))    # a factor gamma


def _symbolic_core(mu_zero: bool) -> dict[str, Order]:
    """Propagate (||f||, gamma^-1) orders through one core chain.

    mu_zero=True drops every mu-proportional term (the ^0 constants);
    otherwise mu and |v|_X count as O(1) factors.  The crude substitutions
    1/(gamma+mu) -> 1/gamma (division) and (gamma+mu) -> O(1) (multiplication)
    reproduce the paper's upper-bound tracking.
    """

    def mu_term(o: Order) -> Order | None:
        return o if not mu_zero else None

    def osum(*terms) -> Order:
        acc = None
        for t in terms:
            if t is None:
                continue
            acc = t if acc is None else acc + t
        assert acc is not None
        return acc

    out: dict[str, Order] = {}
    r0t = osum(_F * _GINV, mu_term(_ONE))          # ||f||/gamma + sqrt(mu/gamma)|v|
    out["r0t"] = r0t

    def h1_tilde(seed: Order) -> tuple[Order, Order, Order]:
        k1 = osum(_G * _F * seed, mu_term(_G * seed), mu_term(seed ** 6 * _GINV),
                  mu_term(_F * seed), mu_term(seed), mu_term(seed))
        k2 = osum(seed ** 6, seed ** 4, _F * seed, mu_term(seed), seed ** 2)
        r1 = (osum(k2, _GINV * k1)).sqrt()
        return k1, k2, r1

    out["k1tt"], out["k2tt"], out["r1tt"] = h1_tilde(r0t)
    # improved L2: ||f||/sqrt(gamma(gamma+mu)) <= ||f||/gamma; other terms O(1)
    r0 = osum(_F * _GINV, mu_term(_ONE), mu_term(_ONE))
    out["r0"] = r0
    out["k1t"], out["k2t"], out["r1t"] = h1_tilde(r0)

    def h2(r0_, r1_) -> tuple[Order, Order, Order, Order]:
        k5 = osum((r0_ ** Fraction(1, 2) * r1_ ** 2) ** 4 * _GINV ** 3,
                  (r0_ * r1_ * osum(r0_ ** 2 * r1_, r0_, mu_term(_ONE), _F)) ** 2 * _GINV)
        k6 = osum(k5, mu_term(_GINV), mu_term(_G), _G * _F ** 2,
                  mu_term((r0_ ** 2 * r1_) ** 2), mu_term(_F ** 2), mu_term(_ONE))
        k7 = osum(r0_ * r1_ ** 3, _F ** 2, mu_term(_ONE))
        r2 = osum((osum(k6 * _GINV, k7)).sqrt(), r0_)
        return k5, k6, k7, r2

    out["k5t"], out["k6t"], out["k7t"], out["r2t"] = h2(r0, out["r1t"])

    # final H1 chain: ((3/2 mu + 6 gamma) K2 + K1)/(gamma+mu) with
    # (3/2 mu + 6 gamma)/(gamma+mu) = O(1) and K1/(gamma+mu) <= K1/gamma
    k1 = osum(_G * _F * r0, mu_term(_G * r0), mu_term(r0 ** 6), mu_term(r0 ** 2),
              mu_term(_ONE), mu_term(_F * r0), mu_term(r0))
    k2 = osum(r0 ** 6, r0 ** 4, _F * r0, mu_term(r0), r0 ** 2)
    r1 = (osum(k2, k1 * _GINV)).sqrt()
    out["k1"], out["k2"], out["r1"] = k1, k2, r1
    out["k5"], out["k6"], out["k7"], out["r2"] = h2(r0, r1)
    out["rprime"] = osum(out["r2"], r0 ** 2 * r1, r0, _F, mu_term(_ONE))
    out["rinf"] = r0 * r1
    return out


def symbolic_orders() -> dict[str, Order]:
    """Full propagated order table: the mu>0 chain, the mu=0 chain (keys with
    a _0 suffix) and the mixed difference chain k8..k11."""
    core = _symbolic_core(mu_zero=False)
    core0 = _symbolic_core(mu_zero=True)
    out = dict(core)
    out.update({f"{k}_0": v for k, v in core0.items()})
    third = Fraction(1, 3)
    rinf, rinf0 = core["rinf"], core0["rinf"]
    rp, rp0 = core["rprime"], core0["rprime"]
    sqrt_pair = rinf.sqrt() * rinf0.sqrt()
    out["sqrt_pair"] = sqrt_pair
    out["k8"] = (rinf + rinf0 + sqrt_pair
                 + rinf0.sqrt() * rp + _GINV ** third * rinf0 ** (2 * third) * rp ** (4 * third)
                 + rinf.sqrt() * rp0 + _GINV ** third * rinf ** (2 * third) * rp0 ** (4 * third))
    out["k8_0"] = (rinf0.sqrt() * rp0
                   + _GINV ** third * rinf0 ** (2 * third) * rp0 ** (4 * third))
    out["k9"] = sqrt_pair * (out["k8"] + _G * (rinf + rinf0 + sqrt_pair))
    out["k9_0"] = rinf0 * (out["k8_0"] + _G * rinf0)
    out["k10"] = rinf * (rinf + _GINV ** third * rinf ** (2 * third) * rp ** (4 * third))
    out["k10_0"] = rinf0 * (_G * rinf0 + _GINV ** third * rinf0 ** (2 * third) * rp0 ** (4 * third))
    out["k11"] = ((_G * rinf0 + _GINV ** third * rinf0 ** (2 * third) * rp0 ** (4 * third))
                  * _GINV).sqrt()
    return out


def _fr(a, b) -> tuple[Fraction, Fraction]:
    return (Fraction(a), Fraction(b))


#: Printed (||f||, gamma^-1) exponent pairs: Remark 7.1 item 1 plus the
#: detailed table in the paper's appendix comment.  Keys with _0 are the
#: mu = 0 variants.
PAPER_ORDER_TABLE: dict[str, tuple[Fraction, Fraction]] = {
    "r0t": _fr(1, 1), "r0t_0": _fr(1, 1),
    "r0": _fr(1, 1), "r0_0": _fr(1, 1),
    "k1tt": _fr(6, 7), "k1tt_0": _fr(2, 0),
    "k1": _fr(6, 6), "k1_0": _fr(2, 0),
    "k2tt": _fr(6, 6), "k2tt_0": _fr(6, 6),
    "k2": _fr(6, 6), "k2_0": _fr(6, 6),
    "r1tt": _fr(3, 4), "r1tt_0": _fr(3, 3),
    "r1t": _fr(3, 4), "r1t_0": _fr(3, 3),
    "r1": (Fraction(3), Fraction(7, 2)), "r1_0": _fr(3, 3),
    "k5t": _fr(26, 37), "k5t_0": _fr(26, 29),
    "k6t": _fr(26, 37), "k6t_0": _fr(26, 29),
    "k7t": _fr(10, 13), "k7t_0": _fr(10, 10),
    "r2t": (Fraction(13), Fraction(39, 2)), "r2t_0": _fr(13, 15),
    "r2": _fr(13, 17), "r2_0": _fr(13, 15),
    "rprime": _fr(13, 17), "rprime_0": _fr(13, 15),
    "rinf": (Fraction(4), Fraction(9, 2)), "rinf_0": _fr(4, 4),
    "k8": (Fraction(20), Fraction(77, 3)), "k8_0": _fr(20, 23),
    "k9": (Fraction(24), Fraction(359, 12)), "k9_0": _fr(24, 27),
    "k10": (Fraction(24), Fraction(61, 2)), "k10_0": _fr(24, 27),
    "k11": _fr(10, 12),
}


def paper_order_discrepancies() -> list[str]:
    """Entries where the propagated orders differ from the printed table."""
    sym = symbolic_orders()
    out = []
    for key, want in PAPER_ORDER_TABLE.items():
        got = sym[key].as_tuple()
        if got != want:
            out.append(f"{key}: chain gives f^{got[0]} gamma^-{got[1]}, "
                       f"paper prints f^{want[0]} gamma^-{want[1]}")
    return out
