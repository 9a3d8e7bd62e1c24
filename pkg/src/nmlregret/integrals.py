"""Maximum-likelihood normalizer integrals and finiteness indicators.

The central objects are the normalized-maximum-likelihood (NML) integral
``S = integral of sup_beta exp(beta*x)/Z(beta) dQ(x)`` and the Fisher-root
integral ``J = integral of sqrt(I)`` in either parameterization, together
with the family of indicators that decide — numerically, with evidence —
whether the minimax regret of a family is finite:

* the NML integral itself,
* the one-sided divergence limits at the upper domain endpoint,
* channel capacity under grid refinement and domination by a member
  (delegated to the capacity module),
* the density tail exponent and the left-boundary Fisher-root contribution.

All indicators are combined into a :class:`FinitenessReport` whose consensus
is `Disagreement` only when two decided indicators contradict each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from .errors import (
    BadParameter,
    HypothesisNotMet,
    IntegralInconclusive,
    MeanDiverges,
    NoInteriorSolution,
    OutOfMeanRange,
)
from .family import ExpFamily
from .measure import BaseMeasure
from .quadrature import (
    INCONCLUSIVE,
    LimitVerdict,
    IntegralVerdict,
    QuadConfig,
    finite,
    inconclusive,
    integrate,
    limit_extrapolate,
    sum_series,
)

# Fisher-root integrals need far fewer truncation windows than moment
# integrals: divergence at an endpoint shows up within ~12 halvings.  For
# families whose variance is itself a quadrature, each integrand evaluation
# costs several inner integrals, so those run at classification accuracy
# with the inner integrals loosened below the outer tolerance.
JEFFREYS_CONFIG = QuadConfig(rel_tol=1e-9, abs_tol=1e-12, truncation_doublings=24)
JEFFREYS_NUMERIC_CONFIG = QuadConfig(rel_tol=1e-4, abs_tol=1e-8,
                                     truncation_doublings=12, fixed_order=4)
SHTARKOV_NUMERIC_CONFIG = QuadConfig(rel_tol=1e-4, abs_tol=1e-8,
                                     truncation_doublings=24)
_INNER_NUMERIC_CONFIG = QuadConfig(rel_tol=1e-6, abs_tol=1e-9, fixed_order=6)


def _jeffreys_setup(fam: ExpFamily, config: QuadConfig | None):
    if fam.var_fn is not None and fam.mean_fn is not None:
        return fam, (config or JEFFREYS_CONFIG)
    lite = replace(fam, quad_config=_INNER_NUMERIC_CONFIG, _cache={})
    return lite, (config or JEFFREYS_NUMERIC_CONFIG)

_MAX_KNOTS = 240


def _anchor(lo: float, hi: float) -> float:
    if lo < 0.0 < hi:
        return 0.0
    if math.isfinite(lo) and math.isfinite(hi):
        return 0.5 * (lo + hi)
    if math.isfinite(lo):
        return lo + 1.0
    return hi - 1.0


class MLInverter:
    """Per-observation supremum of the tilted log likelihood.

    For an observation x the value is ``sup beta*x - log Z(beta)`` over the
    admissible parameter interval.  Families with a cheap closed-form mean
    are inverted by root finding at every query; numeric families get a
    cubic Hermite interpolant of the supremum (its derivative is the
    maximizing beta itself), built on a knot ladder that is extended on
    demand and clamped with exact endpoint formulas outside coverage.
    """

    def __init__(self, fam: ExpFamily, beta_range=None):
        b_lo, b_hi = fam.beta_inf, fam.beta_sup
        if beta_range is not None:
            r_lo, r_hi = float(beta_range[0]), float(beta_range[1])
            if not r_lo < r_hi:
                raise BadParameter("need beta_range lo < hi")
            if r_lo < fam.beta_inf or r_hi > fam.beta_sup:
                raise BadParameter("beta_range exceeds the family domain")
            b_lo, b_hi = max(b_lo, r_lo), min(b_hi, r_hi)
        self.fam = fam
        self.b_lo, self.b_hi = b_lo, b_hi
        if (b_lo, b_hi) == (fam.beta_inf, fam.beta_sup):
            self.wf = fam
        else:
            self.wf = replace(fam, beta_inf=b_lo, beta_sup=b_hi,
                              truncated=True, nfold_fn=None, _cache={})
        self.closed = fam.mean_fn is not None
        self.mr = self.wf.mean_range()
        self.lo_att = math.isfinite(b_lo) and math.isfinite(self.wf.log_partition(b_lo))
        self.hi_att = math.isfinite(b_hi) and math.isfinite(self.wf.log_partition(b_hi))
        self.logz_lo = self.wf.log_partition(b_lo) if self.lo_att else math.inf
        self.logz_hi = self.wf.log_partition(b_hi) if self.hi_att else math.inf
        # knots, lazily built for the interpolating path
        self._mu: np.ndarray | None = None
        self._beta: np.ndarray | None = None
        self._g: np.ndarray | None = None
        self._spline = None
        self.slack = 0.0          # bound on clamp error near an attained endpoint
        # lower-bound tangent clamps past the ladder's reach, per side; the
        # left side can sometimes be repaired with an atom upper bound
        self.tangent_lo = False
        self.tangent_hi = False

    @property
    def tangent_used(self) -> bool:
        return self.tangent_lo or self.tangent_hi

    # -- knot machinery ----------------------------------------------------

    def _eval_knot(self, beta: float):
        try:
            mu = self.wf.mean_value(beta)
            lz = self.wf.log_partition(beta)
        except (MeanDiverges, IntegralInconclusive, OverflowError, BadParameter):
            return None
        if not (math.isfinite(mu) and math.isfinite(lz)):
            return None
        return mu, beta, beta * mu - lz

    def _build(self) -> None:
        if self._mu is not None:
            return
        knots = []
        b_lo, b_hi = self.b_lo, self.b_hi
        c = _anchor(b_lo, b_hi)
        k = self._eval_knot(c)
        if k is None:
            raise BadParameter(f"mean not computable at anchor beta={c}")
        knots.append(k)
        for sign, end in ((-1.0, b_lo), (1.0, b_hi)):
            if math.isfinite(end):
                span = abs(end - c)
                stop_att = math.isfinite(self.wf.log_partition(end))
                prev_lz = None
                for j in range(1, 31):
                    b = end - math.copysign(span * 2.0 ** (-j), sign)
                    kn = self._eval_knot(b)
                    if kn is None:
                        break
                    knots.append(kn)
                    if stop_att:
                        lz = self.wf.log_partition(b)
                        if prev_lz is not None and abs(lz - prev_lz) < 1e-9:
                            break
                        prev_lz = lz
                end_knot = self._eval_knot(end) if stop_att else None
                if end_knot is not None:
                    knots.append(end_knot)
                elif stop_att:
                    # attained endpoint with diverging mean: record the clamp slack
                    inner = [kn[1] for kn in knots if math.isfinite(kn[1])]
                    b_top = max(inner) if sign > 0 else min(inner)
                    self.slack = max(self.slack, abs(
                        self.wf.log_partition(end) - self.wf.log_partition(b_top)))
            else:
                scale = max(abs(c), 1.0)
                for j in range(0, 14):
                    b = c + sign * scale * (2.0 ** j - 1.0 + (j > 0))
                    kn = self._eval_knot(b)
                    if kn is None:
                        break
                    knots.append(kn)
                    if abs(kn[0]) > 1e9:
                        break
        self._install(knots)

    def _install(self, knots) -> None:
        knots = sorted(set(knots))
        mus = np.array([k[0] for k in knots])
        keep = np.concatenate([[True], np.diff(mus) > 1e-13 * np.maximum(np.abs(mus[1:]), 1.0)])
        knots = [k for k, ok in zip(knots, keep) if ok]
        knots = self._subdivide(knots)
        self._mu = np.array([k[0] for k in knots])
        self._beta = np.array([k[1] for k in knots])
        self._g = np.array([k[2] for k in knots])
        self._spline = CubicHermiteSpline(self._mu, self._g, self._beta) \
            if len(knots) >= 2 else None

    def _subdivide(self, knots):
        """Insert knots until adjacent means are within a factor 2 (for a
        positive mean axis) so the interpolant cannot straddle wide gaps."""
        out = list(knots)
        i = 0
        while i + 1 < len(out) and len(out) < _MAX_KNOTS:
            (m0, b0, _), (m1, b1, _) = out[i], out[i + 1]
            wide = m0 > 0 and m1 > 2.0 * m0 and m1 - m0 > 1e-9
            if wide and b1 - b0 > 1e-13 * max(abs(b0), abs(b1), 1.0):
                kn = self._eval_knot(0.5 * (b0 + b1))
                if kn is not None and m0 < kn[0] < m1:
                    out.insert(i + 1, kn)
                    continue
            i += 1
        return out

    def _extend(self, x: float) -> None:
        """Grow the knot ladder toward an unattained endpoint until x is
        covered or the ladder cannot usefully grow."""
        for _ in range(60):
            if self._mu[0] <= x <= self._mu[-1] or len(self._mu) >= _MAX_KNOTS:
                return
            if x > self._mu[-1]:
                edge_b, edge_m, end = self._beta[-1], self._mu[-1], self.b_hi
            else:
                edge_b, edge_m, end = self._beta[0], self._mu[0], self.b_lo
            if math.isfinite(end):
                b = end - 0.5 * (end - edge_b)
                if abs(b - edge_b) < 1e-14 * max(abs(b), 1.0):
                    return
            else:
                b = edge_b + math.copysign(max(abs(edge_b), 1.0), end)
            kn = self._eval_knot(b)
            if kn is None or not (min(edge_m, kn[0]) < max(edge_m, kn[0])):
                return
            knots = list(zip(self._mu, self._beta, self._g)) + [kn]
            self._install(knots)

    # -- exact per-point path ------------------------------------------------

    def _mass_at(self, x: float) -> float | None:
        a = self.fam.base.atom_at(x)
        if a is not None:
            return math.exp(a.log_mass)
        c = self.fam.base.counting
        if c is not None:
            r = (x - c.offset) / c.step
            if r >= 0 and abs(r - round(r)) < 1e-9:
                lw = float(np.asarray(c.log_weight(np.array([x])), float)[0])
                return math.exp(lw)
        return None

    def loglik_exact(self, x: float) -> float:
        try:
            pt = self.wf.ml_beta(x)
        except NoInteriorSolution:
            m = self._mass_at(x)
            if m is not None and m > 0:
                return -math.log(m)
            raise
        return pt.beta * x - self.wf.log_partition(pt.beta)

    # -- interpolating path -----------------------------------------------

    def _below(self, x: np.ndarray) -> np.ndarray:
        if self.lo_att:
            return self.b_lo * x - self.logz_lo
        out = self._g[0] + self._beta[0] * (x - self._mu[0])
        a = self.fam.base.support_left
        exact = x == a
        if np.any(exact):
            m = self._mass_at(a)
            if m is not None and m > 0:
                out = np.where(exact, -math.log(m), out)
            else:
                self.tangent_hi = True  # no bound available on this value
        if np.any(~exact):
            self.tangent_lo = True
        return out

    def _above(self, x: np.ndarray) -> np.ndarray:
        if self.hi_att:
            return self.b_hi * x - self.logz_hi
        self.tangent_hi = True
        return self._g[-1] + self._beta[-1] * (x - self._mu[-1])

    def loglik_array(self, x) -> np.ndarray:
        x = np.asarray(x, float)
        self._build()
        mx = float(np.max(x)) if x.size else 0.0
        mn = float(np.min(x)) if x.size else 0.0
        if not self.hi_att and mx > self._mu[-1]:
            self._extend(mx)
        if not self.lo_att and mn < self._mu[0]:
            self._extend(mn)
        out = np.empty_like(x)
        lo_m, hi_m = self._mu[0], self._mu[-1]
        below = x < lo_m
        above = x > hi_m
        mid = ~(below | above)
        if np.any(mid):
            out[mid] = self._spline(x[mid]) if self._spline is not None \
                else self._g[0] + self._beta[0] * (x[mid] - lo_m)
        if np.any(below):
            out[below] = self._below(x[below])
        if np.any(above):
            out[above] = self._above(x[above])
        return out

    def loglik(self, x: float) -> float:
        if self.closed:
            try:
                return self.loglik_exact(x)
            except (OutOfMeanRange, NoInteriorSolution):
                pass
        return float(self.loglik_array(np.array([x]))[0])

    def beta_at(self, x: float, polish: int = 2) -> float:
        """Maximizing beta for observation x (clamped at the range ends)."""
        if self.closed:
            return self.wf.ml_beta(x).beta
        self._build()
        if not self.hi_att and x > self._mu[-1]:
            self._extend(x)
        if not self.lo_att and x < self._mu[0]:
            self._extend(x)
        if x <= self._mu[0]:
            b = self.b_lo if self.lo_att else float(self._beta[0])
        elif x >= self._mu[-1]:
            b = self.b_hi if self.hi_att else float(self._beta[-1])
        else:
            b = float(self._spline.derivative()(x)) if self._spline is not None \
                else float(self._beta[0])
            b = min(max(b, float(self._beta[0])), float(self._beta[-1]))
            for _ in range(polish):
                try:
                    mu = self.wf.mean_value(b)
                    v = self.wf.variance(b)
                except (MeanDiverges, IntegralInconclusive, BadParameter):
                    break
                if v <= 0:
                    break
                step = (mu - x) / v
                b_new = b - step
                if not self.b_lo < b_new < self.b_hi:
                    break
                b = b_new
                if abs(step) < 1e-12 * max(abs(b), 1.0):
                    break
        return b


# ---------------------------------------------------------------------------
# the two central integrals


def _combine(parts: list[IntegralVerdict], extra: float, extra_err: float,
             detail: str) -> IntegralVerdict:
    for v in parts:
        if v.is_divergent:
            return v
    for v in parts:
        if v.status == INCONCLUSIVE:
            return v
    val = extra + sum(v.value for v in parts)
    err = extra_err + sum(v.abs_error for v in parts)
    return finite(val, err, detail)


def _tangent_gap_bound(fam: ExpFamily, inv: MLInverter,
                       cfg: QuadConfig) -> float | None:
    """Bound on the NML-integral error from left-side tangent clamping.

    Below the inverter's coverage the likelihood sup g(x) was evaluated on a
    supporting tangent, a lower bound.  When the left support end ``a``
    carries an atom of mass m, the sup is also bounded above:
    g(x) <= beta*(x-a) - log m <= max(0, b_hi*(x-a)) - log m.  The induced
    integrand error is therefore at most the base density mass of the
    uncovered sliver times the gap between the two exponentiated bounds.
    Returns None when no such bound exists.
    """
    if inv.tangent_hi or inv._mu is None:
        return None
    a = fam.base.support_left
    atom = fam.base.atom_at(a) if math.isfinite(a) else None
    if atom is None or not math.isfinite(inv.b_hi) or fam.base.counting is not None:
        return None
    mu0, b0, g0 = float(inv._mu[0]), float(inv._beta[0]), float(inv._g[0])
    if not mu0 > a:
        return 0.0
    ub = max(0.0, inv.b_hi * (mu0 - a)) - atom.log_mass
    t_min = min(g0, g0 + b0 * (a - mu0))  # tangent minimum over the sliver
    gap = max(0.0, math.exp(ub) - math.exp(min(t_min, ub)))
    if gap == 0.0:
        return 0.0
    total = 0.0
    for p in fam.base.density_pieces:
        lo, hi = max(p.lo, a), min(p.hi, mu0)
        if not lo < hi:
            continue

        def q(x, _p=p):
            return math.exp(float(_p.log_density(np.array([x]))[0]))

        v = integrate(q, (lo, hi), cfg)
        if not v.is_finite:
            return None
        total += v.value + v.abs_error
    return gap * total


def shtarkov_integral(fam: ExpFamily, beta_range=None,
                      config: QuadConfig | None = None) -> IntegralVerdict:
    """Verdict for the NML normalizer over the (possibly restricted) family."""
    if fam.mean_fn is None or fam.logz_fn is None:
        # every integrand evaluation costs inner quadratures; run those at
        # classification accuracy below a loosened outer tolerance
        fam = replace(fam, quad_config=_INNER_NUMERIC_CONFIG, _cache={})
        cfg = config or SHTARKOV_NUMERIC_CONFIG
    else:
        cfg = config or fam.quad_config
    inv = MLInverter(fam, beta_range)
    atom_total = 0.0
    for a in fam.base.atoms:
        atom_total += math.exp(a.log_mass + inv.loglik_exact(a.location))
    parts: list[IntegralVerdict] = []
    for p in fam.base.density_pieces:
        def f(x, _p=p):
            with np.errstate(over="ignore"):
                return math.exp(float(_p.log_density(np.array([x]))[0]) + inv.loglik(x))

        parts.append(integrate(f, (p.lo, p.hi), cfg))
    c = fam.base.counting
    if c is not None:
        def fs(j):
            k = c.offset + c.step * np.asarray(j, float)
            with np.errstate(over="ignore"):
                return np.exp(np.asarray(c.log_weight(k), float) + inv.loglik_array(k))

        parts.append(sum_series(fs, 0, cfg))
    out = _combine(parts, atom_total, 0.0, "NML integral")
    if out.is_finite:
        cont = out.value - atom_total
        err = out.abs_error + abs(cont) * math.expm1(inv.slack)
        if inv.tangent_used:
            bound = _tangent_gap_bound(fam, inv, cfg)
            if bound is None or not math.isfinite(bound):
                return inconclusive(
                    out.evidence,
                    "inverter coverage exhausted before the tail resolved")
            err += bound
        return finite(out.value, err, out.detail)
    return out


def jeffreys_canonical(fam: ExpFamily, beta_range=None,
                       config: QuadConfig | None = None) -> IntegralVerdict:
    """Fisher-root integral in the canonical parameterization."""
    b1, b2 = beta_range if beta_range is not None else (fam.beta_inf, fam.beta_sup)
    if b1 < fam.beta_inf or b2 > fam.beta_sup or not b1 < b2:
        raise BadParameter(f"range ({b1}, {b2}) outside domain of {fam.name}")
    wfam, cfg = _jeffreys_setup(fam, config)

    def f(b):
        try:
            v = wfam.variance(b)
        except (MeanDiverges, IntegralInconclusive, BadParameter, OverflowError):
            return math.inf
        return math.sqrt(max(v, 0.0))

    return integrate(f, (b1, b2), cfg)


def jeffreys_mean(fam: ExpFamily, mu_range=None,
                  config: QuadConfig | None = None) -> IntegralVerdict:
    """Fisher-root integral in the mean-value parameterization."""
    mr = fam.mean_range()
    m1, m2 = mu_range if mu_range is not None else (mr.mu_inf, mr.mu_sup)
    if m1 < mr.mu_inf or m2 > mr.mu_sup or not m1 < m2:
        raise BadParameter(f"range ({m1}, {m2}) outside mean range of {fam.name}")
    wfam, cfg = _jeffreys_setup(fam, config)
    inv = MLInverter(wfam)

    # reach[0]/reach[1]: tightest mean queries known to lie beyond the
    # inverter's coverage on each side; coverage only ever grows toward the
    # ends, so anything past a failed query fails too
    reach = [-math.inf, math.inf]

    def f(mu):
        if mu <= reach[0] or mu >= reach[1]:
            return math.inf
        try:
            b = inv.beta_at(mu)
            v = wfam.variance(b)
            mb = wfam.mean_value(b)
        except (MeanDiverges, IntegralInconclusive, BadParameter,
                OutOfMeanRange, NoInteriorSolution, OverflowError):
            return math.inf
        if not math.isfinite(v) or v <= 0:
            return math.inf
        # a clamped inversion (query past the knot ladder's reach) says
        # nothing about the variance at mu; round-trip to detect it
        if not math.isclose(mb, mu, rel_tol=0.5):
            side = 0 if mu < mb else 1
            reach[side] = max(reach[side], mu) if side == 0 else min(reach[side], mu)
            return math.inf
        return 1.0 / math.sqrt(v)

    return integrate(f, (m1, m2), cfg)


# ---------------------------------------------------------------------------
# indicators


def _kl_samples(fam: ExpFamily, beta0: float, n: int):
    b_sup = fam.beta_sup
    betas = []
    if math.isfinite(b_sup):
        d0 = 0.5 * (b_sup - beta0)
        betas = [b_sup - d0 * 2.0 ** (-k) for k in range(n)]
    else:
        s = max(abs(beta0), 1.0)
        betas = [beta0 + s * 2.0 ** k for k in range(n)]
    return betas


def _safe_kl(fam: ExpFamily, b0: float, b1: float) -> float:
    try:
        return fam.kl_divergence(b0, b1)
    except (MeanDiverges, IntegralInconclusive, OverflowError, BadParameter):
        return math.inf


def default_beta0(fam: ExpFamily) -> float:
    """Reference parameter: the mean-range midpoint when compact, otherwise
    the domain anchor."""
    mr = fam.mean_range()
    if math.isfinite(mr.mu_inf) and math.isfinite(mr.mu_sup):
        try:
            pt = fam.ml_beta(0.5 * (mr.mu_inf + mr.mu_sup))
            if not pt.clamped:
                return pt.beta
        except (OutOfMeanRange, NoInteriorSolution):
            pass
    return _anchor(fam.beta_inf, fam.beta_sup)


def kl_limit_test(fam: ExpFamily, beta0: float | None = None,
                  n: int = 16) -> tuple[LimitVerdict, LimitVerdict]:
    """Both divergence limits approaching the upper domain endpoint.

    The finiteness indicator holds when either direction has a finite limit.
    """
    if beta0 is None:
        beta0 = default_beta0(fam)
    if not fam.contains(beta0, interior=True):
        raise BadParameter(f"beta0={beta0} not interior")
    betas = _kl_samples(fam, beta0, n)
    fwd = limit_extrapolate([(b, _safe_kl(fam, beta0, b)) for b in betas])
    rev = limit_extrapolate([(b, _safe_kl(fam, b, beta0)) for b in betas])
    return fwd, rev


def item7_status(fwd: LimitVerdict, rev: LimitVerdict) -> str:
    if fwd.is_limit or rev.is_limit:
        return "finite"
    if fwd.diverges and rev.diverges:
        return "infinite"
    return "inconclusive"


def tail_alpha(base: BaseMeasure) -> float | None:
    """Fitted tail exponent: log-density slope -(1+alpha) over the last two
    decades of the evaluable support; None when no stable power law fits."""
    xs = np.logspace(4.0, 6.0, 41)
    if base.counting is not None:
        with np.errstate(all="ignore"):
            ly = np.asarray(base.counting.log_weight(xs), float)
    else:
        pieces = [p for p in base.density_pieces if p.hi == math.inf]
        if not pieces:
            return None
        with np.errstate(all="ignore"):
            ly = np.asarray(pieces[0].log_density(xs), float)
    ok = np.isfinite(ly)
    if ok.sum() < 30:
        return None
    lx = np.log(xs[ok])
    y = ly[ok]
    A = np.vstack([lx, np.ones_like(lx)]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    pred = A @ coef
    ss_res = float(np.sum((y - pred) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    alpha = -float(coef[0]) - 1.0
    if r2 > 0.99 and alpha > 1e-3:
        return alpha
    return None


def left_end_contribution(fam: ExpFamily,
                          config: QuadConfig | None = None
                          ) -> tuple[IntegralVerdict, bool]:
    """Fisher-root mass just above the left mean-range endpoint, which must
    coincide with the left end of the support."""
    mr = fam.mean_range()
    a = fam.base.support_left
    if mr.mu_inf != a or not math.isfinite(a):
        raise HypothesisNotMet(
            f"left mean-range end {mr.mu_inf} is not the support end {a}")
    width = mr.mu_sup - mr.mu_inf
    delta = 0.1 * width if math.isfinite(width) else 0.5
    verdict = jeffreys_mean(fam, (a, a + delta), config)
    has_atom = fam.base.atom_at(a) is not None
    if not has_atom and fam.base.counting is not None:
        c = fam.base.counting
        if c.offset == a:
            with np.errstate(all="ignore"):
                lw = float(np.asarray(c.log_weight(np.array([float(a)])), float)[0])
            has_atom = math.isfinite(lw)
    return verdict, has_atom


# ---------------------------------------------------------------------------
# the combined report


def _verdict_status(v: IntegralVerdict) -> str:
    if v.is_finite:
        return "finite"
    if v.is_divergent:
        return "infinite"
    return "inconclusive"


@dataclass(frozen=True)
class FinitenessReport:
    family_name: str
    shtarkov: IntegralVerdict
    kl_limit_fwd: LimitVerdict
    kl_limit_rev: LimitVerdict
    capacity: object          # capacity.RefinementVerdict
    dominated: object         # capacity.DominationVerdict
    jeffreys: IntegralVerdict
    tail_alpha: float | None
    left_end: IntegralVerdict | None
    left_end_atom: bool | None
    consensus: str
    theorem2_violation: bool

    @property
    def indicator_statuses(self) -> dict:
        return {
            "shtarkov": _verdict_status(self.shtarkov),
            "kl_limit": item7_status(self.kl_limit_fwd, self.kl_limit_rev),
            "capacity": self.capacity.status,
            "dominated": self.dominated.status,
        }

    def to_dict(self) -> dict:
        return {
            "family": self.family_name,
            "shtarkov": self.shtarkov.to_dict(),
            "kl_limit_fwd": {"status": self.kl_limit_fwd.status,
                             "value": self.kl_limit_fwd.value,
                             "detail": self.kl_limit_fwd.detail},
            "kl_limit_rev": {"status": self.kl_limit_rev.status,
                             "value": self.kl_limit_rev.value,
                             "detail": self.kl_limit_rev.detail},
            "capacity": self.capacity.to_dict(),
            "dominated": self.dominated.to_dict(),
            "jeffreys": self.jeffreys.to_dict(),
            "tail_alpha": self.tail_alpha,
            "left_end": self.left_end.to_dict() if self.left_end else None,
            "left_end_atom": self.left_end_atom,
            "indicators": self.indicator_statuses,
            "consensus": self.consensus,
            "theorem2_violation": self.theorem2_violation,
        }


def _consensus(statuses: dict) -> str:
    decided = {k: v for k, v in statuses.items() if v in ("finite", "infinite")}
    vals = set(decided.values())
    if not vals:
        return "Inconclusive"
    if len(vals) == 2:
        return "Disagreement(" + ", ".join(
            f"{k}={v}" for k, v in sorted(decided.items())) + ")"
    return "Finite" if vals == {"finite"} else "Infinite"


def classify(fam: ExpFamily, config: QuadConfig | None = None) -> FinitenessReport:
    """Evaluate every finiteness indicator independently and compare."""
    from .capacity import capacity_refinement, dominated_by_member

    shk = shtarkov_integral(fam, config=config)
    fwd, rev = kl_limit_test(fam)
    cap = capacity_refinement(fam)
    dom = dominated_by_member(fam)
    jef = jeffreys_canonical(fam)
    ta = tail_alpha(fam.base)
    try:
        left, left_atom = left_end_contribution(fam)
    except HypothesisNotMet:
        left, left_atom = None, None
    statuses = {
        "shtarkov": _verdict_status(shk),
        "kl_limit": item7_status(fwd, rev),
        "capacity": cap.status,
        "dominated": dom.status,
    }
    return FinitenessReport(
        family_name=fam.name,
        shtarkov=shk,
        kl_limit_fwd=fwd,
        kl_limit_rev=rev,
        capacity=cap,
        dominated=dom,
        jeffreys=jef,
        tail_alpha=ta,
        left_end=left,
        left_end_atom=left_atom,
        consensus=_consensus(statuses),
        theorem2_violation=(shk.is_divergent and jef.is_finite),
    )
