"""One-dimensional exponential families tilted from an arbitrary base measure.

The family member at canonical parameter ``beta`` has density
``exp(beta*x) / Z(beta)`` with respect to the base measure.  All partition
work happens in log-domain: the tilted log integrand is probed for its
maximum, the integrand is shifted by that maximum, and atoms enter through
log-sum-exp, so the calculus stays stable for strongly tilted members.

Catalog families may attach closed forms for ``log Z``, the mean and the
variance; the numeric paths remain available for cross-checking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import (
    BadParameter,
    IntegralInconclusive,
    MeanDiverges,
    NoInteriorSolution,
    OutOfMeanRange,
    TruncationOutsideDomain,
)
from .measure import BaseMeasure
from .quadrature import (
    DEFAULT_CONFIG,
    QuadConfig,
    integrate,
    root_find_monotone,
    sum_series,
)


class MLPoint(NamedTuple):
    """Maximum-likelihood canonical parameter for one observation."""

    beta: float
    clamped: bool


@dataclass(frozen=True)
class MeanRange:
    """Closure endpoints of the mean-value range, with attainment flags."""

    mu_inf: float
    mu_sup: float
    inf_attained: bool
    sup_attained: bool

    def __post_init__(self):
        if not self.mu_inf < self.mu_sup:
            raise BadParameter("mean range needs mu_inf < mu_sup")


def _probe_points(lo: float, hi: float) -> np.ndarray:
    """Candidate abscissas for locating the maximum of a tilted log density."""
    pts: list[np.ndarray] = []
    lo_f, hi_f = math.isfinite(lo), math.isfinite(hi)
    if lo_f and hi_f:
        w = hi - lo
        pts.append(np.linspace(lo, hi, 129)[1:-1])
        offs = w * 10.0 ** np.arange(-9.0, -1.9, 1.0)
        pts.append(lo + offs)
        pts.append(hi - offs)
    else:
        # the offset ladder reaches the denormal floor: a strong exponential
        # tilt can pin the integrand's mode arbitrarily close to the endpoint
        if lo_f:
            pts.append(lo + 10.0 ** np.arange(-300.0, 0.0, 0.5))
            pts.append(lo + np.arange(0.5, 60.0, 0.5))
            pts.append(lo + 10.0 ** np.arange(1.8, 8.05, 0.1))
        if hi_f:
            pts.append(hi - 10.0 ** np.arange(-300.0, 0.0, 0.5))
            pts.append(hi - np.arange(0.5, 60.0, 0.5))
            pts.append(hi - 10.0 ** np.arange(1.8, 8.05, 0.1))
        if not lo_f and not hi_f:
            pts.append(np.arange(-60.0, 60.0, 0.5))
            grid = 10.0 ** np.arange(1.8, 8.05, 0.1)
            pts.append(grid)
            pts.append(-grid)
    x = np.unique(np.concatenate(pts))
    return x[(x > lo) & (x < hi)]


def _probe_max(h: Callable[[np.ndarray], np.ndarray], lo: float, hi: float,
               pts: np.ndarray | None = None):
    """Approximate sup of ``h`` on (lo, hi) and its location, used as the
    log-domain shift and as an integration split point."""
    if pts is None:
        x = _probe_points(lo, hi)
    else:
        x = pts[(pts > lo) & (pts < hi)]
    with np.errstate(all="ignore"):
        vals = np.asarray(h(x), float)
    ok = np.isfinite(vals)
    if not ok.any():
        return 0.0, None
    x, vals = x[ok], vals[ok]
    i = int(np.argmax(vals))
    a = x[i - 1] if i > 0 else x[i]
    b = x[i + 1] if i + 1 < len(x) else x[i]
    best, best_x = float(vals[i]), float(x[i])
    if a < b:
        res = minimize_scalar(
            lambda t: -float(np.asarray(h(np.array([t])), float)[0]),
            bounds=(a, b), method="bounded",
            options={"xatol": 1e-10 * max(1.0, abs(b))},
        )
        if math.isfinite(res.fun) and -float(res.fun) > best:
            best, best_x = -float(res.fun), float(res.x)
    return best, best_x


def _integrate_split(g, lo: float, hi: float, split: float | None,
                     cfg: QuadConfig):
    """Integrate with an optional interior split so a concentrated bump at
    the split point sits at a segment endpoint and cannot be stepped over."""
    from .quadrature import finite as _finite

    if split is None or not lo < split < hi:
        return integrate(g, (lo, hi), cfg)
    left = integrate(g, (lo, split), cfg)
    if not left.is_finite:
        return left
    right = integrate(g, (split, hi), cfg)
    if not right.is_finite:
        return right
    return _finite(left.value + right.value, left.abs_error + right.abs_error,
                   "split at integrand mode")


# probe grid in the log coordinate u = log|x - endpoint|; it spans the full
# double range so integrand structure at any scale lands on a probe point
_U_PROBES = np.arange(-746.0, 710.0, 0.5)


def _log_sub(lo: float, hi: float):
    """Substitute u = log(x - lo) (or log(hi - x)) for a piece with exactly
    one finite endpoint.

    An exponential tilt can concentrate a piece's mass at an arbitrarily
    small distance from the endpoint; in the log coordinate that bump is
    O(1) wide and interior, so ordinary quadrature resolves it.  Returns
    ``(to_x, anchor, u_hi)`` or None when the substitution does not apply.
    """
    lo_f, hi_f = math.isfinite(lo), math.isfinite(hi)
    if lo_f == hi_f:
        return None
    # clamping e^u to the double range keeps the abscissa finite at extreme
    # u: a growing tail then keeps growing (and gets flagged divergent)
    # instead of collapsing to zero past the overflow point
    tiny, xmax = 5e-324, float(np.finfo(float).max)
    if lo_f:
        def to_x(u):
            with np.errstate(over="ignore"):
                return lo + np.clip(np.exp(np.asarray(u, float)), tiny, xmax)
        anchor = lo
    else:
        def to_x(u):
            with np.errstate(over="ignore"):
                return hi - np.clip(np.exp(np.asarray(u, float)), tiny, xmax)
        anchor = hi

    return to_x, anchor, math.inf


def _u_max(h, to_x, anchor: float, u_hi: float):
    """Probe max of the log integrand in the u coordinate."""
    def hu(u):
        scalar = np.ndim(u) == 0
        ua = np.atleast_1d(np.asarray(u, float))
        x = to_x(ua)
        with np.errstate(all="ignore"):
            val = np.asarray(h(x), float) + ua
        # x can still round onto a nonzero endpoint, where a singular
        # density evaluates to garbage
        val[x == anchor] = -math.inf
        return float(val[0]) if scalar else val

    return _probe_max(hu, -math.inf, u_hi, pts=_U_PROBES), hu


def _integrate_log_sub(gu, gx, lo: float, hi: float, u_star: float | None,
                       cfg: QuadConfig):
    """Combine a log-coordinate segment near the finite endpoint with a
    plain segment over the rest of the piece.

    The log coordinate resolves structure concentrated at any scale near
    the endpoint, but cannot follow the integrand past the representable
    range of e^u; the plain segment's marching quadrature covers that
    outer tail (decay and divergence alike) at its native scale.  The
    crossover sits at twice the probed mode distance so the mode lies
    strictly inside the log segment.
    """
    from .quadrature import finite as _finite

    lo_finite = math.isfinite(lo)
    if u_star is not None and u_star > 700.0:
        # the integrand still grows at the edge of the representable range,
        # so there is no post-mode tail to hand over; the clamped log
        # coordinate keeps growing past the overflow point, which lets the
        # march flag divergence instead of silently truncating
        return _integrate_split(gu, -math.inf, math.inf, u_star, cfg)
    u_cut = 0.0 if u_star is None else u_star + math.log(2.0)
    u_cut = min(u_cut, 705.0)  # keep e^u representable
    x_cut = lo + math.exp(u_cut) if lo_finite else hi - math.exp(u_cut)
    if not lo < x_cut < hi:  # crossover rounded onto an endpoint
        return _integrate_split(gu, -math.inf, u_cut, u_star, cfg)
    seg_u = _integrate_split(gu, -math.inf, u_cut, u_star, cfg)
    seg_x = integrate(gx, (x_cut, hi) if lo_finite else (lo, x_cut), cfg)
    for s in (seg_u, seg_x):
        if s.is_divergent:
            return s
    for s in (seg_u, seg_x):
        if not s.is_finite:
            return s
    return _finite(seg_u.value + seg_x.value,
                   seg_u.abs_error + seg_x.abs_error,
                   "log-coordinate endpoint segment plus outer tail")


@dataclass(frozen=True, eq=False)
class ExpFamily:
    base: BaseMeasure
    beta_inf: float = -math.inf
    beta_sup: float = math.inf
    truncated: bool = False
    name: str = "family"
    logz_fn: Callable[[float], float] | None = None
    mean_fn: Callable[[float], float] | None = None
    var_fn: Callable[[float], float] | None = None
    nfold_fn: Callable[[int], "ExpFamily"] | None = None
    quad_config: QuadConfig = DEFAULT_CONFIG
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self.beta_inf < self.beta_sup:
            raise BadParameter("need beta_inf < beta_sup")

    # -- domain -------------------------------------------------------------

    def contains(self, beta: float, *, interior: bool = False) -> bool:
        """Whether beta belongs to the domain; finite endpoints are included
        exactly when the partition function is finite there."""
        if self.beta_inf < beta < self.beta_sup:
            return True
        if interior or not math.isfinite(beta):
            return False
        if beta in (self.beta_inf, self.beta_sup):
            return math.isfinite(self.log_partition(beta))
        return False

    def _require(self, beta: float, *, interior: bool = False) -> None:
        if not self.contains(beta, interior=interior):
            raise BadParameter(
                f"beta={beta} outside domain ({self.beta_inf}, {self.beta_sup}) of {self.name}")

    # -- partition function ---------------------------------------------------

    def log_partition(self, beta: float, config: QuadConfig | None = None) -> float:
        """log Z(beta); +inf when the defining integral diverges."""
        if self.logz_fn is not None:
            return float(self.logz_fn(beta))
        return self.log_partition_numeric(beta, config)

    def log_partition_numeric(self, beta: float, config: QuadConfig | None = None) -> float:
        cfg = config or self.quad_config
        key = ("logz", beta, cfg.truncation_doublings)
        if key in self._cache:
            return self._cache[key]
        parts: list[float] = []
        atoms = self.base.atoms
        if atoms:
            terms = np.array([a.log_mass + beta * a.location for a in atoms])
            parts.append(float(np.logaddexp.reduce(terms)))
        for p in self.base.density_pieces:
            def h(x, _p=p):
                return beta * np.asarray(x, float) + _p.log_density(x)

            sub = _log_sub(p.lo, p.hi)
            if sub is not None:
                to_x, anchor, u_hi = sub
                (m, u_star), hu = _u_max(h, to_x, anchor, u_hi)

                def gu(u, _hu=hu, _m=m):
                    with np.errstate(over="ignore"):
                        return np.exp(_hu(u) - _m)

                def gx(x, _h=h, _m=m):
                    with np.errstate(over="ignore"):
                        return np.exp(np.asarray(_h(x), float) - _m)

                v = _integrate_log_sub(gu, gx, p.lo, p.hi, u_star, cfg)
            else:
                m, x_star = _probe_max(h, p.lo, p.hi)

                def g(x, _h=h, _m=m):
                    with np.errstate(over="ignore"):
                        return np.exp(_h(x) - _m)

                v = _integrate_split(g, p.lo, p.hi, x_star, cfg)
            if v.is_divergent:
                self._cache[key] = math.inf
                return math.inf
            if not v.is_finite:
                raise IntegralInconclusive(
                    f"partition function of {self.name} at beta={beta}: {v.detail}", v)
            if v.value > 0.0:  # a fully underflowed piece carries no mass
                parts.append(m + math.log(v.value))
        c = self.base.counting
        if c is not None:
            def hk(k):
                return beta * np.asarray(k, float) + c.log_weight(k)

            probes = c.offset + c.step * np.unique(
                np.concatenate([np.arange(0, 64), 10.0 ** np.arange(1.9, 7.0, 0.2)])
            ).astype(float)
            with np.errstate(all="ignore"):
                hv = np.asarray(hk(probes), float)
            m = float(np.max(hv[np.isfinite(hv)])) if np.isfinite(hv).any() else 0.0

            def f(j, _m=m):
                with np.errstate(over="ignore"):
                    return np.exp(hk(c.offset + c.step * np.asarray(j, float)) - _m)

            v = sum_series(f, 0, cfg)
            if v.is_divergent:
                self._cache[key] = math.inf
                return math.inf
            if not v.is_finite:
                raise IntegralInconclusive(
                    f"partition function of {self.name} at beta={beta}: {v.detail}", v)
            if v.value > 0.0:
                parts.append(m + math.log(v.value))
        if not parts:
            out = -math.inf
        else:
            out = float(np.logaddexp.reduce(np.array(parts))) if len(parts) > 1 else parts[0]
        self._cache[key] = out
        return out

    # -- moments ------------------------------------------------------------

    def _tilted_moment(self, beta: float, center: float, power: int,
                       cfg: QuadConfig) -> float:
        """integral of (x - center)^power against the member at beta."""
        lz = self.log_partition(beta)
        if not math.isfinite(lz):
            raise BadParameter(f"Z diverges at beta={beta}")
        total = 0.0
        for a in self.base.atoms:
            total += (a.location - center) ** power * math.exp(
                a.log_mass + beta * a.location - lz)
        for p in self.base.density_pieces:
            def h(x, _p=p):
                x = np.asarray(x, float)
                return beta * x + _p.log_density(x)

            # probe the full log magnitude, moment factor included
            def hp(x, _h=h):
                x = np.asarray(x, float)
                with np.errstate(all="ignore"):
                    return power * np.log(np.abs(x - center)) + _h(x) - lz

            def g(x, _h=h):
                x = np.asarray(x, float)
                with np.errstate(over="ignore"):
                    return (x - center) ** power * np.exp(_h(x) - lz)

            sub = _log_sub(p.lo, p.hi)
            if sub is not None:
                to_x, anchor, u_hi = sub
                (_, u_star), _ = _u_max(hp, to_x, anchor, u_hi)

                def gu(u, _h=h, _to_x=to_x, _anchor=anchor):
                    # assembled fully in log scale: the moment factor and
                    # the density can separately overflow where their
                    # product is representable
                    scalar = np.ndim(u) == 0
                    ua = np.atleast_1d(np.asarray(u, float))
                    x = _to_x(ua)
                    s = x - center
                    with np.errstate(all="ignore"):
                        out = np.exp(power * np.log(np.abs(s))
                                     + _h(x) - lz + ua)
                    if power % 2:
                        out = np.where(s < 0, -out, out)
                    out[x == _anchor] = 0.0
                    return float(out[0]) if scalar else out

                v = _integrate_log_sub(gu, g, p.lo, p.hi, u_star, cfg)
            else:
                _, x_star = _probe_max(hp, p.lo, p.hi)
                v = _integrate_split(g, p.lo, p.hi, x_star, cfg)
            if v.is_divergent:
                raise MeanDiverges(
                    f"moment of order {power} diverges at beta={beta} for {self.name}")
            if not v.is_finite:
                raise IntegralInconclusive(
                    f"moment of order {power} at beta={beta} for {self.name}: {v.detail}", v)
            total += v.value
        c = self.base.counting
        if c is not None:
            def f(j):
                k = c.offset + c.step * np.asarray(j, float)
                with np.errstate(over="ignore"):
                    return (k - center) ** power * np.exp(beta * k + c.log_weight(k) - lz)

            v = sum_series(f, 0, cfg)
            if v.is_divergent:
                raise MeanDiverges(
                    f"moment of order {power} diverges at beta={beta} for {self.name}")
            if not v.is_finite:
                raise IntegralInconclusive(
                    f"moment of order {power} at beta={beta} for {self.name}: {v.detail}", v)
            total += v.value
        return total

    def mean_value(self, beta: float, config: QuadConfig | None = None) -> float:
        self._require(beta)
        if self.mean_fn is not None:
            return float(self.mean_fn(beta))
        cfg = config or self.quad_config
        key = ("mean", beta, cfg.truncation_doublings)
        if key not in self._cache:
            self._cache[key] = self._tilted_moment(beta, 0.0, 1, cfg)
        return self._cache[key]

    def variance(self, beta: float, config: QuadConfig | None = None) -> float:
        self._require(beta)
        if self.var_fn is not None:
            return float(self.var_fn(beta))
        cfg = config or self.quad_config
        key = ("var", beta, cfg.truncation_doublings)
        if key not in self._cache:
            mu = self.mean_value(beta, cfg)
            self._cache[key] = self._tilted_moment(beta, mu, 2, cfg)
        return self._cache[key]

    def fisher_canonical(self, beta: float) -> float:
        return self.variance(beta)

    def fisher_mean(self, mu: float) -> float:
        pt = self.ml_beta(mu)
        if pt.clamped:
            raise BadParameter(f"mu={mu} not interior to the mean range of {self.name}")
        return 1.0 / self.variance(pt.beta)

    # -- mean range and maximum likelihood ------------------------------------

    def mean_range(self) -> MeanRange:
        if "mean_range" in self._cache:
            return self._cache["mean_range"]

        def side(beta_end: float, fallback: float) -> tuple[float, bool]:
            if math.isfinite(beta_end) and math.isfinite(self.log_partition(beta_end)):
                try:
                    return self.mean_value(beta_end), True
                except MeanDiverges:
                    return fallback, False
            return fallback, False

        mu_inf, inf_att = side(self.beta_inf, self.base.support_left)
        mu_sup, sup_att = side(self.beta_sup, self.base.support_right)
        mr = MeanRange(mu_inf, mu_sup, inf_att, sup_att)
        self._cache["mean_range"] = mr
        return mr

    def ml_beta(self, x: float, rtol: float = 1e-10) -> MLPoint:
        """Canonical parameter whose mean equals x; clamps onto attained
        domain endpoints when x falls beyond the corresponding mean-range end
        but still inside the support."""
        mr = self.mean_range()
        s_lo, s_hi = self.base.support_left, self.base.support_right
        if x > mr.mu_sup or (x == mr.mu_sup and not math.isfinite(x)):
            if mr.sup_attained and x <= s_hi:
                return MLPoint(self.beta_sup, True)
            raise OutOfMeanRange(f"x={x} above mean range of {self.name}")
        if x == mr.mu_sup:
            if mr.sup_attained:
                return MLPoint(self.beta_sup, False)
            raise NoInteriorSolution(f"x={x} is an unattained mean-range endpoint")
        if x < mr.mu_inf or (x == mr.mu_inf and not math.isfinite(x)):
            if mr.inf_attained and x >= s_lo:
                return MLPoint(self.beta_inf, True)
            raise OutOfMeanRange(f"x={x} below mean range of {self.name}")
        if x == mr.mu_inf:
            if mr.inf_attained:
                return MLPoint(self.beta_inf, False)
            raise NoInteriorSolution(f"x={x} is an unattained mean-range endpoint")
        return MLPoint(self._invert_mean(x, rtol), False)

    def _mean_safe(self, beta: float) -> float:
        """Mean at beta, mapping divergence to +/- infinity by monotonicity."""
        try:
            return self.mean_value(beta)
        except (MeanDiverges, IntegralInconclusive):
            return math.inf if beta > 0.5 * (self.beta_inf + self.beta_sup) else -math.inf

    def _invert_mean(self, x: float, rtol: float) -> float:
        lo_b, hi_b = self.beta_inf, self.beta_sup
        if lo_b < 0.0 < hi_b:
            b = 0.0
        elif math.isfinite(lo_b) and math.isfinite(hi_b):
            b = 0.5 * (lo_b + hi_b)
        elif math.isfinite(lo_b):
            b = lo_b + 1.0
        else:
            b = hi_b - 1.0
        m = self._mean_safe(b)
        if m == x:
            return b
        up = m < x
        prev = b
        for k in range(200):
            if up:
                if math.isfinite(hi_b):
                    nxt = hi_b - (hi_b - b) * 0.5 ** (k + 1)
                else:
                    nxt = b + max(1.0, abs(b)) * 2.0 ** k
            else:
                if math.isfinite(lo_b):
                    nxt = lo_b + (b - lo_b) * 0.5 ** (k + 1)
                else:
                    nxt = b - max(1.0, abs(b)) * 2.0 ** k
            mn = self._mean_safe(nxt)
            if (mn >= x) == up and mn != x:
                bracket = (prev, nxt) if prev < nxt else (nxt, prev)
                return root_find_monotone(
                    lambda t: self.mean_value(t) - x, bracket, rtol=rtol)
            if mn == x:
                return nxt
            prev = nxt
        raise NoInteriorSolution(
            f"mean bracket for x={x} not found within 200 expansions in {self.name}")

    # -- divergence and truncation --------------------------------------------

    def kl_divergence(self, beta0: float, beta1: float) -> float:
        self._require(beta0)
        self._require(beta1)
        if beta0 == beta1:
            return 0.0
        mu0 = self.mean_value(beta0)
        d = (beta0 - beta1) * mu0 + self.log_partition(beta1) - self.log_partition(beta0)
        return max(d, 0.0)

    def truncate_left(self, beta_low: float) -> "ExpFamily":
        if not math.isfinite(beta_low):
            raise TruncationOutsideDomain("truncation point must be finite")
        if beta_low < self.beta_inf:
            raise TruncationOutsideDomain(
                f"cannot widen domain: beta_low={beta_low} < beta_inf={self.beta_inf}")
        if not beta_low < self.beta_sup:
            raise TruncationOutsideDomain(
                f"beta_low={beta_low} must fall below beta_sup={self.beta_sup}")
        if not math.isfinite(self.log_partition(beta_low)):
            raise TruncationOutsideDomain(
                f"Z diverges at truncation point beta_low={beta_low}")
        return ExpFamily(
            base=self.base, beta_inf=beta_low, beta_sup=self.beta_sup,
            truncated=True, name=self.name,
            logz_fn=self.logz_fn, mean_fn=self.mean_fn, var_fn=self.var_fn,
            nfold_fn=None, quad_config=self.quad_config)

    # -- declarative form -----------------------------------------------------

    def to_dict(self) -> dict:
        def enc(v: float):
            if v == math.inf:
                return "inf"
            if v == -math.inf:
                return "-inf"
            return v

        return {
            "name": self.name,
            "base": self.base.to_dict(),
            "beta_inf": enc(self.beta_inf),
            "beta_sup": enc(self.beta_sup),
            "truncated": self.truncated,
        }

    @staticmethod
    def from_dict(d: dict) -> "ExpFamily":
        def dec(v) -> float:
            if v == "inf":
                return math.inf
            if v == "-inf":
                return -math.inf
            return float(v)

        return ExpFamily(
            base=BaseMeasure.from_dict(d["base"]),
            beta_inf=dec(d.get("beta_inf", "-inf")),
            beta_sup=dec(d.get("beta_sup", "inf")),
            truncated=bool(d.get("truncated", False)),
            name=str(d.get("name", "family")),
        )
