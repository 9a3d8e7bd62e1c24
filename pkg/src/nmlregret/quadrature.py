"""Improper-integral and series evaluation with explicit three-way verdicts.

Every improper integral is reduced to a finite "core" plus marches of
geometrically growing (or shrinking) windows toward each improper endpoint.
The sequence of window increments is then classified:

* geometric decay      -> finite, with an extrapolated tail folded into the
                          value and the extrapolation spread into the error;
* sustained growth or
  non-decaying windows -> divergent, with the window record as evidence;
* slow sub-geometric
  decay                -> re-marched on a log scale (windows that square the
                          coordinate), which turns ``1/(x log^2 x)`` tails
                          into clean geometric ones; if that also stalls the
                          verdict is inconclusive.

Divergence is a statistical verdict backed by evidence, never a proof.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy import integrate as _sci
from scipy import optimize as _opt

from .errors import BadBracket, BadParameter, NonFiniteIntegrand, TooFewSamples

FINITE = "finite"
DIVERGENT = "divergent"
INCONCLUSIVE = "inconclusive"

_LOG_XMAX = 700.0  # largest exponent before float overflow
_GEO_RATIO_CAP = 0.95
_FLAT_RATIO = 0.998


@dataclass(frozen=True)
class QuadConfig:
    """Tolerances and truncation policy for improper integrals."""

    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_subdivisions: int = 200
    truncation_start: float = 10.0
    truncation_doublings: int = 40
    # When set, each window uses a non-adaptive Gauss-Legendre pair of this
    # order and twice this order, with the error taken as their difference.
    # Much cheaper per window; meant for classification-grade integrals whose
    # integrand is itself a quadrature.
    fixed_order: int | None = None

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_subdivisions < 10:
            raise ValueError("max_subdivisions too small")
        if self.truncation_start <= 0:
            raise ValueError("truncation_start must be positive")
        if self.truncation_doublings < 6:
            raise ValueError("need at least 6 truncation doublings")


DEFAULT_CONFIG = QuadConfig()


@dataclass(frozen=True)
class IntegralVerdict:
    """Outcome of an improper integral or series.

    ``evidence`` holds (truncation bound, partial value) pairs for the
    divergent / inconclusive arms and is kept (possibly empty) for finite
    results as well.
    """

    status: str
    value: float | None = None
    abs_error: float | None = None
    evidence: tuple = ()
    detail: str = ""

    @property
    def is_finite(self) -> bool:
        return self.status == FINITE

    @property
    def is_divergent(self) -> bool:
        return self.status == DIVERGENT

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "value": self.value,
            "abs_error": self.abs_error,
            "evidence": [list(pair) for pair in self.evidence],
            "detail": self.detail,
        }


def finite(value: float, abs_error: float, detail: str = "") -> IntegralVerdict:
    return IntegralVerdict(FINITE, float(value), float(abs_error), (), detail)


def divergent(evidence, detail: str = "") -> IntegralVerdict:
    return IntegralVerdict(DIVERGENT, None, None, tuple(evidence), detail)


def inconclusive(evidence=(), detail: str = "") -> IntegralVerdict:
    return IntegralVerdict(INCONCLUSIVE, None, None, tuple(evidence), detail)


# ---------------------------------------------------------------------------
# scalar quadrature on one finite window


class _Guarded:
    """Wraps an integrand; records non-finite evaluations instead of dying."""

    def __init__(self, f):
        self.f = f
        self.bad_x = None
        self.bad_val = None

    def __call__(self, x):
        y = self.f(x)
        y = float(y)
        if not math.isfinite(y):
            if self.bad_x is None or not math.isnan(self.bad_val):
                self.bad_x, self.bad_val = x, y
            return 0.0
        return y

    def reset(self):
        self.bad_x = None
        self.bad_val = None


_GL_CACHE: dict = {}


def _gl_nodes(n: int):
    if n not in _GL_CACHE:
        _GL_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _GL_CACHE[n]


def _window_quad(g: _Guarded, a: float, b: float, cfg: QuadConfig):
    """Integrate over [a, b]; returns (value, err) or (+-inf, inf) on overflow."""
    g.reset()
    if cfg.fixed_order is not None:
        h, m = 0.5 * (b - a), 0.5 * (a + b)
        vals = []
        for n in (cfg.fixed_order, 2 * cfg.fixed_order):
            xs, ws = _gl_nodes(n)
            vals.append(h * sum(w * g(m + h * x) for x, w in zip(xs, ws)))
        if g.bad_x is not None:
            if math.isnan(g.bad_val):
                raise NonFiniteIntegrand(f"integrand returned NaN at x={g.bad_x!r}")
            return math.copysign(math.inf, g.bad_val), math.inf
        return vals[1], abs(vals[1] - vals[0]) + 1e-16 * abs(vals[1])
    with np.errstate(all="ignore"):
        out = _sci.quad(
            g, a, b,
            epsabs=cfg.abs_tol * 1e-3,
            epsrel=cfg.rel_tol,
            limit=cfg.max_subdivisions,
            full_output=1,
        )
    val, err = out[0], out[1]
    if g.bad_x is not None:
        if math.isnan(g.bad_val):
            raise NonFiniteIntegrand(f"integrand returned NaN at x={g.bad_x!r}")
        return math.copysign(math.inf, g.bad_val), math.inf
    return val, err


# ---------------------------------------------------------------------------
# increment-sequence analysis


def _loglog_fit(ks: Sequence[float], ys: Sequence[float]):
    """Least-squares slope of log y against log k.  Returns (slope, r2)."""
    lk = np.log(np.asarray(ks, float))
    ly = np.log(np.asarray(ys, float))
    if len(lk) < 3 or not np.all(np.isfinite(ly)):
        return 0.0, 0.0
    A = np.vstack([lk, np.ones_like(lk)]).T
    coef, res, *_ = np.linalg.lstsq(A, ly, rcond=None)
    pred = A @ coef
    ss_res = float(np.sum((ly - pred) ** 2))
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return float(coef[0]), r2


class _TailSummary(NamedTuple):
    kind: str            # "finite" | "divergent" | "subgeometric" | "inconclusive"
    tail: float = 0.0
    tail_err: float = 0.0
    detail: str = ""


def _geometric_extrapolation(incs: Sequence[float], noise: float):
    """Tail estimate when the last increments decay geometrically, else None."""
    n_ratio = 6
    if len(incs) < n_ratio + 1:
        return None
    a = np.abs(np.asarray(incs[-(n_ratio + 1):], float))
    if a[-1] <= noise:  # increments already at noise level
        return 0.0, float(a[-1] + noise)
    signs = np.sign(np.asarray(incs[-(n_ratio + 1):], float))
    if not (np.all(signs >= 0) or np.all(signs <= 0)):
        return None
    ratios = a[1:] / np.maximum(a[:-1], 1e-300)
    if np.max(ratios) >= _GEO_RATIO_CAP:
        return None
    r1 = float(ratios[-1])
    r0 = float(ratios[-2])
    r_ext = min(max(r1 + (r1 - r0), 0.0), _GEO_RATIO_CAP)
    last = float(incs[-1])
    tail1 = last * r1 / (1.0 - r1)
    tail0 = last * r0 / (1.0 - r0)
    tail_e = last * r_ext / (1.0 - r_ext)
    unc = max(abs(tail1 - tail0), abs(tail1 - tail_e)) + abs(last) * 1e-12
    return tail1, float(unc)


def _classify_stalled(incs: Sequence[float]) -> _TailSummary:
    """Classify an increment sequence after the window budget is exhausted."""
    a = np.asarray(incs, float)
    nz = np.abs(a) > 0
    if nz.sum() < 4:
        return _TailSummary("finite", 0.0, float(np.abs(a).sum()), "negligible tail")
    tail_part = a[-min(8, len(a)):]
    mags = np.abs(tail_part)
    signs = np.sign(tail_part[np.abs(tail_part) > 0])
    if len(signs) and not (np.all(signs > 0) or np.all(signs < 0)):
        if mags.max() <= 1e-14 * max(1.0, np.abs(a).max()):
            return _TailSummary("finite", 0.0, float(mags.max()), "tail at noise level")
        return _TailSummary("inconclusive", detail="mixed-sign increments")
    rr = mags[1:] / np.maximum(mags[:-1], 1e-300)
    # ratios climbing steadily toward 1 are the signature of a slowly
    # divergent or slowly convergent tail; a geometric model must not
    # absorb them, so fall through to the power-model analysis instead
    drifting = (len(rr) >= 6 and np.all(np.diff(rr[-6:]) > 0)
                and rr[-1] > 0.85)
    geo = None if drifting else _geometric_extrapolation(incs, 0.0)
    if geo is not None:
        # Accept the geometric tail only when an exponential decay model
        # explains the increments at least as well as a power model: a
        # slowly divergent integral produces |inc_k| ~ 1/k whose ratios
        # k/(k+1) drift below the geometric cap without being geometric.
        n_fit = min(10, len(a))
        ks = np.arange(len(a) - n_fit + 1, len(a) + 1, dtype=float)
        ys = np.abs(a[-n_fit:])
        if np.all(ys > 0):
            slope_p, r2_p = _loglog_fit(ks, ys)
            _, r2_g = _loglog_fit(np.exp(ks), ys)  # log y linear in k
            if r2_g + 1e-9 >= r2_p or -slope_p > 1.5:
                tail, unc = geo
                return _TailSummary("finite", tail, unc,
                                    "geometric tail at window budget")
        else:
            tail, unc = geo
            return _TailSummary("finite", tail, unc,
                                "geometric tail at window budget")
    ratios = mags[1:] / np.maximum(mags[:-1], 1e-300)
    last6 = ratios[-6:]
    if np.min(last6) >= _FLAT_RATIO:
        growth = float(np.median(np.log2(np.maximum(last6, 1e-300))))
        kind = "growing" if growth > 0.01 else "non-decaying"
        return _TailSummary(
            "divergent",
            detail=f"{kind} window increments (median doubling exponent {growth:.3f})",
        )
    # sub-geometric decay: fit |inc_k| ~ k^(-p)
    n_fit = min(10, len(a))
    ks = np.arange(len(a) - n_fit + 1, len(a) + 1, dtype=float)
    ys = np.abs(a[-n_fit:])
    if np.any(ys <= 0):
        return _TailSummary("finite", 0.0, float(ys.max()), "tail underflow")
    slope, r2 = _loglog_fit(ks, ys)
    p = -slope
    if p <= 1.05:
        return _TailSummary(
            "divergent",
            detail=f"window increments ~ k^-{p:.2f} (non-summable, R2={r2:.3f})",
        )
    return _TailSummary("subgeometric", detail=f"fitted increment exponent p={p:.2f}")


def _p_model_tail(incs: Sequence[float]) -> _TailSummary:
    """Integral-test tail bound for |inc_k| ~ k^(-p); conservative error."""
    n_fit = min(10, len(incs))
    ks = np.arange(len(incs) - n_fit + 1, len(incs) + 1, dtype=float)
    ys = np.abs(np.asarray(incs[-n_fit:], float))
    slope, r2 = _loglog_fit(ks, ys)
    p = -slope
    if p < 1.5 or r2 < 0.98:
        return _TailSummary("inconclusive", detail=f"slow decay, p={p:.2f}, R2={r2:.3f}")
    k_last = float(len(incs))
    tail = abs(incs[-1]) * k_last / (p - 1.0)
    tail = math.copysign(tail, incs[-1])
    return _TailSummary("finite", tail, 0.75 * abs(tail), f"p-model tail, p={p:.2f}")


# ---------------------------------------------------------------------------
# window marches


class _MarchResult(NamedTuple):
    status: str          # "finite" | "divergent" | "inconclusive"
    value: float
    err: float
    evidence: tuple
    detail: str


def _march(window_fn, n_max: int, tol: float, scale_fn, cfg: QuadConfig) -> _MarchResult:
    """Run windows window_fn(k) -> (val, err); stop early on geometric decay.

    ``scale_fn(k)`` maps the window index to the truncation coordinate
    recorded in the evidence trail.
    """
    incs, errs, partials, bounds = [], [], [], []
    total = 0.0
    exhausted_range = False
    for k in range(n_max):
        out = window_fn(k)
        if out is None:  # coordinate range of the float format exhausted
            exhausted_range = True
            break
        val, err = out
        if math.isnan(val):
            raise NonFiniteIntegrand("window integral returned NaN")
        if math.isinf(val) or abs(total + val) > 1e250:
            evidence = tuple(zip(bounds, partials)) + ((scale_fn(k), val),)
            return _MarchResult(DIVERGENT, 0.0, 0.0, evidence,
                                "window integral overflowed")
        total += val
        incs.append(val)
        errs.append(err)
        partials.append(total)
        bounds.append(scale_fn(k))
        if k >= 6:
            noise = cfg.abs_tol * 1e-3 + 1e-15 * abs(total)
            geo = _geometric_extrapolation(incs, noise)
            if geo is not None:
                tail, unc = geo
                if unc <= tol:
                    return _MarchResult(
                        FINITE, total + tail, sum(errs) + unc,
                        tuple(zip(bounds, partials)), "geometric tail")
    evidence = tuple(zip(bounds, partials))
    if exhausted_range:
        # extrapolate whatever tail remains beyond representable coordinates
        mags = np.abs(np.asarray(incs[-4:], float))
        if len(mags) >= 3 and mags[-1] > 0:
            ratios = mags[1:] / np.maximum(mags[:-1], 1e-300)
            r = float(np.median(ratios))
            if r < _GEO_RATIO_CAP:
                tail = incs[-1] * r / (1.0 - r)
                unc = abs(tail) * 0.5 + sum(errs)
                return _MarchResult(FINITE, total + tail, unc, evidence,
                                    "range-limited geometric tail")
        if len(mags) and mags[-1] <= cfg.abs_tol:
            return _MarchResult(FINITE, total, sum(errs) + float(mags[-1]),
                                evidence, "tail below tolerance at range limit")
        return _MarchResult(INCONCLUSIVE, 0.0, 0.0, evidence,
                            "coordinate range exhausted before tail resolved")
    summary = _classify_stalled(incs)
    if summary.kind == "finite":
        return _MarchResult(FINITE, total + summary.tail,
                            sum(errs) + summary.tail_err, evidence, summary.detail)
    if summary.kind == "divergent":
        return _MarchResult(DIVERGENT, 0.0, 0.0, evidence, summary.detail)
    if summary.kind == "subgeometric":
        return _MarchResult("subgeometric", total, sum(errs), evidence, summary.detail)
    return _MarchResult(INCONCLUSIVE, 0.0, 0.0, evidence, summary.detail)


def _march_to_plus_infinity(g: _Guarded, start: float, cfg: QuadConfig,
                            tol: float) -> _MarchResult:
    w0 = max(abs(start), 1.0)

    def edge(k):
        return start + w0 * (2.0 ** k - 1.0)

    def lin_window(k):
        a, b = edge(k), edge(k + 1)
        if b > 8.9e307:  # window midpoint arithmetic would overflow
            return None
        return _window_quad(g, a, b, cfg)

    res = _march(lin_window, cfg.truncation_doublings, tol,
                 lambda k: edge(k + 1), cfg)
    if res.status != "subgeometric":
        return res
    # log-scale escalation: windows [e^u, e^2u] handle log-weighted tails
    u0 = max(math.log(max(start, 2.0)), 0.7)

    def log_window(j):
        u_lo, u_hi = u0 * 2.0 ** j, u0 * 2.0 ** (j + 1)
        if u_hi > _LOG_XMAX:
            return None

        def h(u):
            x = math.exp(u)
            return g(x) * x

        g.reset()
        with np.errstate(all="ignore"):
            out = _sci.quad(h, u_lo, u_hi, epsabs=cfg.abs_tol * 1e-3,
                            epsrel=cfg.rel_tol, limit=cfg.max_subdivisions,
                            full_output=1)
        if g.bad_x is not None and math.isnan(g.bad_val):
            raise NonFiniteIntegrand("integrand returned NaN in log window")
        if g.bad_x is not None:
            return math.copysign(math.inf, g.bad_val), math.inf
        return out[0], out[1]

    n_log = 12  # windows past the float range return None and are extrapolated
    # the log march re-covers [start*..] from e^{u0}; add the lead-in piece
    lead, lead_err = _window_quad(g, start, math.exp(u0), cfg) \
        if math.exp(u0) > start else (0.0, 0.0)
    res2 = _march(log_window, n_log, tol, lambda j: math.exp(min(u0 * 2.0 ** (j + 1), _LOG_XMAX)), cfg)
    if res2.status == FINITE:
        return _MarchResult(FINITE, lead + res2.value, lead_err + res2.err,
                            res2.evidence, "log-scale " + res2.detail)
    if res2.status == DIVERGENT:
        return res2
    return _MarchResult(INCONCLUSIVE, 0.0, 0.0, res2.evidence,
                        res2.detail or "log-scale march stalled")


def _march_to_singular_endpoint(g: _Guarded, endpoint: float, d0: float,
                                toward_right: bool, cfg: QuadConfig,
                                tol: float) -> _MarchResult:
    """March shrinking windows toward a finite (possibly singular) endpoint.

    Windows live at distances [d0 2^-k-1, d0 2^-k]; ``toward_right`` means the
    endpoint is the left edge of the interval (we approach it from above).
    """
    sgn = 1.0 if toward_right else -1.0

    def window(k):
        hi_d = d0 * 2.0 ** (-k)
        lo_d = hi_d / 2.0
        a, b = endpoint + sgn * hi_d, endpoint + sgn * lo_d
        if not toward_right:
            a, b = b, a
        val, err = _window_quad(g, min(a, b), max(a, b), cfg)
        return val, err

    res = _march(window, cfg.truncation_doublings, tol,
                 lambda k: d0 * 2.0 ** (-(k + 1)), cfg)
    if res.status != "subgeometric":
        return res
    # escalate: distances shrink by squaring, i.e. u = log(1/d) doubles
    u0 = max(math.log(2.0 / d0), 1.0)

    def log_window(j):
        u_lo, u_hi = u0 * 2.0 ** j, u0 * 2.0 ** (j + 1)
        if u_hi > _LOG_XMAX:
            return None

        def h(u):
            d = math.exp(-u)
            return g(endpoint + sgn * d) * d

        g.reset()
        with np.errstate(all="ignore"):
            out = _sci.quad(h, u_lo, u_hi, epsabs=cfg.abs_tol * 1e-3,
                            epsrel=cfg.rel_tol, limit=cfg.max_subdivisions,
                            full_output=1)
        if g.bad_x is not None and math.isnan(g.bad_val):
            raise NonFiniteIntegrand("integrand returned NaN near endpoint")
        if g.bad_x is not None:
            return math.copysign(math.inf, g.bad_val), math.inf
        return out[0], out[1]

    d_in = math.exp(-u0)
    lead, lead_err = (0.0, 0.0)
    if d_in < d0:
        a = endpoint + sgn * d0
        b = endpoint + sgn * d_in
        lead, lead_err = _window_quad(g, min(a, b), max(a, b), cfg)
    n_log = 12  # windows past the float range return None and are extrapolated
    res2 = _march(log_window, n_log, tol, lambda j: math.exp(-min(u0 * 2.0 ** (j + 1), _LOG_XMAX)), cfg)
    if res2.status == FINITE:
        return _MarchResult(FINITE, lead + res2.value, lead_err + res2.err,
                            res2.evidence, "log-scale " + res2.detail)
    if res2.status == DIVERGENT:
        return res2
    return _MarchResult(INCONCLUSIVE, 0.0, 0.0, res2.evidence,
                        res2.detail or "endpoint march stalled")


# ---------------------------------------------------------------------------
# public operations


def _probe_singular(g: _Guarded, endpoint: float, inward: float, width: float) -> bool:
    """True when |f| blows up (or is non-finite) approaching the endpoint."""
    vals = []
    for eps in (1e-3, 1e-6, 1e-9):
        x = endpoint + inward * width * eps
        with np.errstate(all="ignore"):
            try:
                y = float(g.f(x))
            except (OverflowError, ZeroDivisionError, ValueError):
                return True
        if not math.isfinite(y):
            return True
        vals.append(abs(y))
    return vals[2] > 50.0 * max(vals[0], 1e-300) and vals[2] > vals[1] >= vals[0]


def integrate(f: Callable[[float], float], interval, cfg: QuadConfig = DEFAULT_CONFIG) -> IntegralVerdict:
    """Evaluate the improper integral of ``f`` over ``interval``.

    ``interval`` is a pair (lo, hi); either endpoint may be infinite, and
    integrable singularities are allowed at endpoints only.
    """
    lo, hi = float(interval[0]), float(interval[1])
    if not lo < hi:
        raise BadParameter(f"empty interval [{lo}, {hi}]")
    g = _Guarded(f)

    width = hi - lo if math.isfinite(lo) and math.isfinite(hi) else 1.0
    width = min(width, 1.0)

    lo_improper = not math.isfinite(lo) or _probe_singular(g, lo, +1.0, width)
    hi_improper = not math.isfinite(hi) or _probe_singular(g, hi, -1.0, width)

    # core interval
    if math.isfinite(lo) and math.isfinite(hi):
        d0 = (hi - lo) / 4.0
        a = lo + d0 if lo_improper else lo
        b = hi - d0 if hi_improper else hi
    else:
        t = cfg.truncation_start
        if math.isfinite(lo):
            d0 = 0.5
            a = lo + d0 if lo_improper else lo
            b = max(a + 1.0, lo + t, t)
        elif math.isfinite(hi):
            d0 = 0.5
            b = hi - d0 if hi_improper else hi
            a = min(b - 1.0, hi - t, -t)
        else:
            a, b = -t, t
            d0 = 0.5

    core_val, core_err = _window_quad(g, a, b, cfg)
    if not math.isfinite(core_val):
        raise NonFiniteIntegrand("integrand non-finite on the core interval")

    tol = max(cfg.abs_tol, cfg.rel_tol * abs(core_val)) / 4.0

    marches = []
    if lo_improper:
        if math.isfinite(lo):
            marches.append(_march_to_singular_endpoint(g, lo, a - lo, True, cfg, tol))
        else:
            gm = _Guarded(lambda x: f(-x))
            marches.append(_march_to_plus_infinity(gm, -a, cfg, tol))
    if hi_improper:
        if math.isfinite(hi):
            marches.append(_march_to_singular_endpoint(g, hi, hi - b, False, cfg, tol))
        else:
            marches.append(_march_to_plus_infinity(g, b, cfg, tol))

    evidence = tuple(pair for m in marches for pair in m.evidence)
    for m in marches:
        if m.status == DIVERGENT:
            return divergent(m.evidence, m.detail)
    for m in marches:
        if m.status == INCONCLUSIVE:
            return inconclusive(evidence, m.detail)
    total = core_val + sum(m.value for m in marches)
    err = core_err + sum(m.err for m in marches)
    return finite(total, err)


# ---------------------------------------------------------------------------
# series


def _vectorized(f):
    probe = np.array([2.0, 3.0])
    try:
        with np.errstate(all="ignore"):
            out = np.asarray(f(probe), float)
        if out.shape == probe.shape:
            return f
    except Exception:
        pass
    return np.vectorize(lambda k: float(f(k)), otypes=[float])


_SERIES_CHUNK = 1 << 21
_SERIES_MAX_BLOCKS = 22  # direct summation up to ~4e6 terms


def sum_series(f: Callable[[float], float], start: int,
               cfg: QuadConfig = DEFAULT_CONFIG) -> IntegralVerdict:
    """Sum ``f(k)`` for integer k >= start, with the same verdict contract
    as :func:`integrate`.  ``f`` must be eventually of one sign."""
    fv = _vectorized(f)
    start = int(start)

    def block_sum(k_lo, k_hi):  # inclusive bounds
        total = 0.0
        mixed = False
        pos = neg = False
        k = k_lo
        while k <= k_hi:
            k2 = min(k + _SERIES_CHUNK - 1, k_hi)
            with np.errstate(all="ignore"):
                vals = np.asarray(fv(np.arange(k, k2 + 1, dtype=float)), float)
            if np.any(np.isnan(vals)):
                raise NonFiniteIntegrand("series term is NaN")
            if np.any(np.isinf(vals)):
                return math.inf, True
            pos |= bool(np.any(vals > 0))
            neg |= bool(np.any(vals < 0))
            total += float(vals.sum())
            k = k2 + 1
        mixed = pos and neg
        return total, mixed

    n_blocks = min(cfg.truncation_doublings, _SERIES_MAX_BLOCKS)
    incs, partials, bounds, mixed_flags = [], [], [], []
    total = 0.0
    edge_prev = start - 1
    for k in range(n_blocks):
        edge = start - 1 + 2 ** k
        val, mixed = block_sum(edge_prev + 1, edge)
        if math.isinf(val) or abs(total + val) > 1e250:
            return divergent(tuple(zip(bounds, partials)) + ((edge, val),),
                             "series terms overflowed")
        total += val
        incs.append(val)
        partials.append(total)
        bounds.append(edge)
        mixed_flags.append(mixed)
        edge_prev = edge
        if k >= 6:
            noise = cfg.abs_tol * 1e-3 + 1e-15 * abs(total)
            geo = _geometric_extrapolation(incs, noise)
            if geo is not None:
                tail, unc = geo
                tol = max(cfg.abs_tol, cfg.rel_tol * abs(total)) / 2.0
                if unc <= tol:
                    return finite(total + tail, unc + 1e-15 * abs(total),
                                  "geometric block tail")
    if any(mixed_flags[-4:]):
        return inconclusive(tuple(zip(bounds, partials)),
                            "terms not eventually of one sign")
    summary = _classify_stalled(incs)
    evidence = tuple(zip(bounds, partials))
    if summary.kind == "finite":
        return finite(total + summary.tail, summary.tail_err, summary.detail)
    if summary.kind == "divergent":
        return divergent(evidence, summary.detail)
    if summary.kind == "inconclusive":
        return inconclusive(evidence, summary.detail)

    # sub-geometric decay: integral-test continuation when f extends to reals
    n_last = edge_prev
    try:
        with np.errstate(all="ignore"):
            probe = float(fv(np.array([n_last + 0.5]))[0])
        real_ok = math.isfinite(probe)
    except Exception:
        real_ok = False
    if real_ok:
        tail_cfg = replace(cfg, rel_tol=max(cfg.rel_tol, 1e-10))
        tail_v = integrate(lambda x: float(fv(np.array([x]))[0]),
                           (n_last + 0.5, math.inf), tail_cfg)
        if tail_v.is_divergent:
            return divergent(evidence + tail_v.evidence,
                             "integral-test tail diverges: " + tail_v.detail)
        if tail_v.is_finite:
            # midpoint rule error for a monotone tail
            with np.errstate(all="ignore"):
                f_n = float(fv(np.array([float(n_last)]))[0])
                f_n1 = float(fv(np.array([float(n_last + 1)]))[0])
            em_err = abs(f_n - f_n1) / 8.0 + abs(f_n1) * 1e-6
            return finite(total + tail_v.value,
                          tail_v.abs_error + em_err,
                          "partial sum + integral-test tail")
        return inconclusive(evidence + tail_v.evidence,
                            "integral-test tail inconclusive")
    summary2 = _p_model_tail(incs)
    if summary2.kind == "finite":
        return finite(total + summary2.tail, summary2.tail_err, summary2.detail)
    return inconclusive(evidence, summary2.detail)


# ---------------------------------------------------------------------------
# limits and roots


@dataclass(frozen=True)
class LimitVerdict:
    status: str  # "limit" | "diverges" | "inconclusive"
    value: float | None = None
    detail: str = ""

    @property
    def is_limit(self):
        return self.status == "limit"

    @property
    def diverges(self):
        return self.status == "diverges"


def limit_extrapolate(seq) -> LimitVerdict:
    """Classify a sampled sequence approaching a limit point.

    ``seq`` is a list of (t, value) pairs ordered toward the limit point.
    """
    if len(seq) < 8:
        raise TooFewSamples(f"need >= 8 samples, got {len(seq)}")
    vs = np.asarray([v for _, v in seq], float)
    if np.any(np.isnan(vs)):
        return LimitVerdict("inconclusive", detail="NaN samples")
    if np.any(np.isinf(vs)):
        return LimitVerdict("diverges", detail="samples overflowed")
    d = np.diff(vs)
    mags = np.abs(d)
    scale = max(np.abs(vs).max(), 1.0)
    # Values computed from cancelling float expressions jitter around the
    # limit well above machine epsilon; anything this small is converged.
    if mags[-4:].max() <= 1e-9 * scale:
        return LimitVerdict("limit", float(vs[-1]), "differences at noise level")
    last = mags[-5:]
    ratios = last[1:] / np.maximum(last[:-1], 1e-300)
    if np.max(ratios) < 0.8:
        r = float(ratios[-1])
        tail = d[-1] * r / (1.0 - r)
        return LimitVerdict("limit", float(vs[-1] + tail), "geometric differences")
    signs = np.sign(d[-6:])
    one_signed = np.all(signs >= 0) or np.all(signs <= 0)
    ks = np.arange(1, len(d) + 1, dtype=float)
    n_fit = min(8, len(d))
    slope, r2 = _loglog_fit(ks[-n_fit:], np.maximum(mags[-n_fit:], 1e-300))
    p = -slope
    if one_signed and (np.min(ratios) >= 0.95 or p <= 1.05):
        return LimitVerdict("diverges",
                            detail=f"monotone drift with non-summable differences (p={p:.2f})")
    if one_signed and p >= 1.4 and r2 >= 0.95:
        k_last = float(len(d))
        tail = d[-1] * k_last / (p - 1.0)
        return LimitVerdict("limit", float(vs[-1] + tail), f"p-model differences, p={p:.2f}")
    return LimitVerdict("inconclusive", detail="no stable difference model")


def root_find_monotone(g: Callable[[float], float], bracket, tol: float = 1e-12,
                       rtol: float = 1e-12) -> float:
    """Bracketed root of a monotone function via Brent's method."""
    a, b = float(bracket[0]), float(bracket[1])
    fa, fb = g(a), g(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if math.copysign(1.0, fa) == math.copysign(1.0, fb):
        raise BadBracket(f"g({a})={fa} and g({b})={fb} have the same sign")
    return float(_opt.brentq(g, a, b, xtol=tol, rtol=max(rtol, 4e-16)))
