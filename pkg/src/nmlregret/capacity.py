"""Channel capacity of a parametric family, and capacity-based indicators.

A 1-d tilted family is viewed as a channel from parameters to observations.
Members chosen on a finite grid are discretized onto a shared output
alphabet (exact atom probabilities, quadrature bin masses matched to the
mixture quantiles, and a residual cell), and the capacity of the resulting
finite channel is computed by alternating maximization.  Refining the grid
toward the domain endpoints yields a finiteness verdict: capacity either
stabilizes or keeps growing.

The same machinery provides the supremum of the divergence to a fixed
member, and the search for a member that dominates the whole family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BadParameter, IntegralInconclusive, MeanDiverges, NoConvergence
from .family import ExpFamily
from .quadrature import LimitVerdict, limit_extrapolate

_LATTICE_ENUM_CAP = 1 << 16   # largest lattice range enumerated exactly
_SPREAD = 40.0                # bulk half-width in standard deviations
_TAIL_FACTOR = 1e9            # heavy-tail extension beyond the bulk
_GROW_RATIO = 0.65            # slower increment decay means unbounded growth


def _safe_logz(fam: ExpFamily, b: float) -> float:
    try:
        return fam.log_partition(b)
    except (OverflowError, IntegralInconclusive, BadParameter):
        return math.inf


def _safe_stats(fam: ExpFamily, b: float):
    try:
        mu = fam.mean_value(b)
        v = fam.variance(b)
    except (OverflowError, MeanDiverges, IntegralInconclusive, BadParameter):
        return None
    if not (math.isfinite(mu) and math.isfinite(v)):
        return None
    return mu, v


def _safe_kl(fam: ExpFamily, b0: float, b1: float) -> float:
    try:
        return fam.kl_divergence(b0, b1)
    except (OverflowError, MeanDiverges, IntegralInconclusive, BadParameter):
        return math.inf


def _anchor(lo: float, hi: float) -> float:
    if lo < 0.0 < hi:
        return 0.0
    if math.isfinite(lo) and math.isfinite(hi):
        return 0.5 * (lo + hi)
    return lo + 1.0 if math.isfinite(lo) else hi - 1.0


@dataclass(frozen=True)
class CapacityResult:
    capacity_nats: float
    input_distribution: tuple
    grid: tuple
    iterations: int
    gap: float

    def to_dict(self) -> dict:
        return {
            "capacity_nats": self.capacity_nats,
            "input_distribution": list(self.input_distribution),
            "grid": list(self.grid),
            "iterations": self.iterations,
            "gap": self.gap,
        }


# ---------------------------------------------------------------------------
# channel discretization


def _master_nodes(lo: float, hi: float, stats):
    """Per-member local windows plus log-spaced tail sections.

    A single linear grid cannot resolve members whose means differ by many
    orders of magnitude, so each member gets its own linear window around
    its mean and the union becomes the shared alphabet."""
    sections = []
    for mu, v in stats:
        s = math.sqrt(max(v, 0.0))
        w = _SPREAD * s if s > 0 else max(abs(mu), 1.0)
        a, b = max(lo, mu - w), min(hi, mu + w)
        if b > a:
            sections.append(np.linspace(a, b, 1024))
    if not sections:
        return np.array([])
    bulk_lo = min(float(s[0]) for s in sections)
    bulk_hi = max(float(s[-1]) for s in sections)
    if math.isfinite(lo) and bulk_lo - lo > 1e-12 * max(abs(lo), 1.0):
        w = bulk_lo - lo
        sections.append(lo + w * np.logspace(-9.0, 0.0, 2048))
    if hi == math.inf:
        top = min(bulk_hi * _TAIL_FACTOR if bulk_hi > 0 else bulk_hi + _TAIL_FACTOR,
                  1e290)
        if top > bulk_hi:
            sections.append(np.geomspace(max(bulk_hi, 1e-290), top, 4096)
                            if bulk_hi > 0 else bulk_hi + np.logspace(-6, math.log10(top - bulk_hi), 4096))
    elif math.isfinite(hi) and hi - bulk_hi > 1e-12 * max(abs(hi), 1.0):
        w = hi - bulk_hi
        sections.append(hi - w * np.logspace(0.0, -9.0, 2048))
    x = np.unique(np.concatenate(sections))
    return x[np.isfinite(x)]


def _quantile_bins(cell_masses: np.ndarray, weights: np.ndarray, n_bins: int):
    """Group cells into n_bins contiguous bins with equal mixture mass."""
    mix = cell_masses.T @ weights
    cum = np.cumsum(mix)
    total = cum[-1]
    if total <= 0:
        return np.array([0])
    targets = total * np.arange(1, n_bins) / n_bins
    idx = np.unique(np.searchsorted(cum, targets))
    starts = np.concatenate([[0], idx + 1])
    return starts[starts < cell_masses.shape[1]]


def build_channel(fam: ExpFamily, grid, bins: int = 512) -> np.ndarray:
    """Row-stochastic matrix of member distributions on a shared alphabet."""
    grid = sorted(set(float(b) for b in grid))
    if len(grid) < 2:
        raise BadParameter("need at least two grid members")
    for b in grid:
        if not fam.contains(b):
            raise BadParameter(f"grid member beta={b} outside the domain")
    m = len(grid)
    logz = np.array([_safe_logz(fam, b) for b in grid])
    betas = np.array(grid)
    cols: list[np.ndarray] = []

    # exact atom columns
    for a in fam.base.atoms:
        with np.errstate(all="ignore"):
            cols.append(np.exp(a.log_mass + betas * a.location - logz))

    stats = [_safe_stats(fam, b) for b in grid]
    # members whose log-scale exceeds double precision cannot be discretized:
    # the exponent log q(x) + beta*x - log Z(beta) is a cancellation of terms
    # of magnitude |log Z|, so beyond ~1e12 every digit of it is noise.  Such
    # members sit astronomically many standard deviations away from all
    # representable ones, so each gets a dedicated exclusive column instead.
    windows = []
    huge = []
    for i, (b, s) in enumerate(zip(betas, stats)):
        if s is None:
            windows.append(None)
            continue
        mu, v = s
        sd = math.sqrt(max(v, 0.0))
        windows.append((mu - _SPREAD * sd, mu + _SPREAD * sd))
        if abs(logz[i]) > 1e12 or abs(b * mu) > 1e12:
            huge.append(i)
    usable = [stats[i] for i in range(m)
              if stats[i] is not None and i not in set(huge)]
    base = fam.base
    cont_parts: list[np.ndarray] = []   # per-member masses on shared cells
    if usable:
        bulk_lo = min(mu - _SPREAD * math.sqrt(v) for mu, v in usable)
        bulk_hi = max(mu + _SPREAD * math.sqrt(v) for mu, v in usable)
        if base.counting is not None:
            c = base.counting
            span = (bulk_hi - c.offset) / c.step
            if span <= _LATTICE_ENUM_CAP:
                ks = c.offset + c.step * np.arange(0, max(int(span) + 2, 2), dtype=float)
                with np.errstate(all="ignore"):
                    lw = np.asarray(c.log_weight(ks), float)
                    masses = np.exp(lw[None, :] + betas[:, None] * ks[None, :]
                                    - logz[:, None])
                masses[~np.isfinite(masses)] = 0.0
                cont_parts.append(masses)
            else:
                # continuized lattice: quadrature over real-argument weights
                cont_parts.append(_piece_masses(
                    lambda x: np.asarray(c.log_weight(x), float),
                    max(float(c.offset), bulk_lo), math.inf,
                    usable, betas, logz))
        for p in base.density_pieces:
            cont_parts.append(_piece_masses(
                lambda x, _p=p: np.asarray(_p.log_density(x), float),
                p.lo, p.hi, usable, betas, logz))
    if cont_parts:
        cells = np.concatenate(cont_parts, axis=1)
        cells[~np.isfinite(cells)] = 0.0
        np.clip(cells, 0.0, None, out=cells)
        p0 = np.full(m, 1.0 / m)
        starts = _quantile_bins(cells, p0, max(bins - len(cols) - 1, 8))
        binned = np.add.reduceat(cells, starts, axis=1)
        cols.extend(binned.T)
    # one exclusive column per cluster of overlapping huge-member windows;
    # members sharing a window are treated as indistinguishable, which can
    # only understate capacity
    for cluster in _merge_windows(huge, windows):
        col = np.zeros(m)
        col[list(cluster)] = 1.0
        cols.append(col)
    W = np.array(cols).T if cols else np.zeros((m, 0))
    W[~np.isfinite(W)] = 0.0
    np.clip(W, 0.0, None, out=W)
    resid = np.clip(1.0 - W.sum(axis=1), 0.0, None)
    W = np.column_stack([W, resid])
    W = np.clip(W, 1e-300, None)
    W /= W.sum(axis=1, keepdims=True)
    # re-floor: normalizing a row whose raw sum was huge can underflow
    # entries back to zero, which log() downstream cannot tolerate
    W = np.clip(W, 1e-300, None)
    keep = W.max(axis=0) > 1e-290
    keep[-1] = True
    return W[:, keep]


def _merge_windows(idx, windows):
    """Group member indices whose (lo, hi) windows overlap."""
    items = sorted((windows[i], i) for i in idx)
    clusters = []
    cur, cur_hi = [], -math.inf
    for (lo, hi), i in items:
        if cur and lo <= cur_hi:
            cur.append(i)
            cur_hi = max(cur_hi, hi)
        else:
            if cur:
                clusters.append(cur)
            cur, cur_hi = [i], hi
    if cur:
        clusters.append(cur)
    return clusters


def _piece_masses(log_density, lo, hi, stats, betas, logz):
    x = _master_nodes(lo, hi, stats)
    if x.size < 2:
        return np.zeros((len(betas), 0))
    with np.errstate(all="ignore"):
        lq = np.asarray(log_density(x), float)
        le = lq[None, :] + betas[:, None] * x[None, :] - logz[:, None]
        w = np.exp(le)
    w[~np.isfinite(w)] = 0.0
    dx = np.diff(x)
    return 0.5 * (w[:, :-1] + w[:, 1:]) * dx[None, :]


# ---------------------------------------------------------------------------
# alternating maximization


def _ba_iterate(W: np.ndarray, tol: float, max_iter: int):
    m = W.shape[0]
    logW = np.log(W)
    p = np.full(m, 1.0 / m)
    lb = ub = 0.0
    for it in range(1, max_iter + 1):
        q = p @ W
        D = np.einsum("ij,ij->i", W, logW - np.log(q))
        lb = float(p @ D)
        ub = float(D.max())
        if ub - lb < tol:
            return lb, p, it, ub - lb, True
        p = p * np.exp(D - ub)
        p /= p.sum()
    return lb, p, max_iter, ub - lb, False


def blahut_arimoto(fam: ExpFamily, grid, tol: float = 1e-7,
                   max_iter: int = 10000, bins: int = 512) -> CapacityResult:
    """Capacity (nats) of the family restricted to a finite member grid."""
    grid = sorted(set(float(b) for b in grid))
    W = build_channel(fam, grid, bins)
    val, p, it, gap, ok = _ba_iterate(W, tol, max_iter)
    if not ok:
        raise NoConvergence(
            f"capacity gap {gap:.3e} above {tol:.1e} after {max_iter} iterations")
    return CapacityResult(val, tuple(p), tuple(grid), it, gap)


# ---------------------------------------------------------------------------
# divergence suprema and domination


@dataclass(frozen=True)
class SupDivergenceResult:
    status: str        # "finite" | "infinite" | "inconclusive"
    value: float
    beta_dom: float
    detail: str

    def to_dict(self) -> dict:
        return {"status": self.status, "value": self.value,
                "beta_dom": self.beta_dom, "detail": self.detail}


def sup_divergence(fam: ExpFamily, beta_dom: float,
                   n: int = 16) -> SupDivergenceResult:
    """Supremum over the family of the divergence to the member beta_dom,
    estimated by refinement toward both domain endpoints."""
    if not fam.contains(beta_dom):
        raise BadParameter(f"beta_dom={beta_dom} outside the domain")
    c = beta_dom if fam.contains(beta_dom, interior=True) \
        else _anchor(fam.beta_inf, fam.beta_sup)
    best = 0.0
    sides = []
    for sign, end in ((-1.0, fam.beta_inf), (1.0, fam.beta_sup)):
        if math.isfinite(end):
            d0 = abs(end - c) / 2.0
            if d0 == 0.0:
                continue
            seq = [end - math.copysign(d0 * 2.0 ** (-k), sign) for k in range(n)]
        else:
            s = max(abs(c), 1.0)
            seq = [c + sign * s * 2.0 ** k for k in range(n)]
        vals = [_safe_kl(fam, b, beta_dom) for b in seq]
        best = max(best, max((v for v in vals if math.isfinite(v)), default=0.0))
        lv = limit_extrapolate(list(zip(seq, vals)))
        if lv.is_limit:
            best = max(best, lv.value)
        elif not lv.diverges and all(math.isfinite(v) for v in vals):
            # values computed through nested quadratures carry noise well
            # above the extrapolation model's resolution; a side whose
            # values have stopped moving is bounded regardless
            d = np.abs(np.diff(vals[-4:]))
            if d.size and float(d.max()) <= 1e-4 * max(abs(vals[-1]), 1.0):
                lv = LimitVerdict("limit", float(vals[-1]),
                                  "values stationary at quadrature noise level")
        sides.append(lv)
        if math.isfinite(end):
            try:
                # an attained endpoint member contributes directly
                if math.isfinite(fam.log_partition(end)):
                    v_end = _safe_kl(fam, end, beta_dom)
                    if math.isfinite(v_end):
                        best = max(best, v_end)
            except (OverflowError, IntegralInconclusive, BadParameter):
                pass
    if any(s.diverges for s in sides):
        return SupDivergenceResult("infinite", math.inf, beta_dom,
                                   "divergence grows without bound toward an endpoint")
    if sides and all(s.is_limit for s in sides):
        return SupDivergenceResult("finite", best, beta_dom,
                                   "divergence bounded toward both endpoints")
    return SupDivergenceResult("inconclusive", best, beta_dom,
                               "endpoint limits undetermined")


@dataclass(frozen=True)
class DominationVerdict:
    status: str        # "finite" | "infinite" | "inconclusive"
    beta_dom: float | None
    value: float | None
    tried: tuple

    def to_dict(self) -> dict:
        return {"status": self.status, "beta_dom": self.beta_dom,
                "value": self.value,
                "tried": [r.to_dict() for r in self.tried]}


def dominated_by_member(fam: ExpFamily) -> DominationVerdict:
    """Search for a member at bounded divergence from the whole family.

    Attained finite endpoints are tried first (the dominating member of a
    heavy-tailed family typically sits at the boundary), then three interior
    positions.
    """
    cands: list[float] = []
    for end in (fam.beta_sup, fam.beta_inf):
        if math.isfinite(end) and math.isfinite(_safe_logz(fam, end)):
            cands.append(end)
    c = _anchor(fam.beta_inf, fam.beta_sup)
    lo = fam.beta_inf if math.isfinite(fam.beta_inf) else c - 8.0
    hi = fam.beta_sup if math.isfinite(fam.beta_sup) else c + 8.0
    for t in (0.5, 0.25, 0.75):
        b = lo + t * (hi - lo)
        if fam.contains(b, interior=True):
            cands.append(b)
    results = []
    seen = set()
    for b in cands:
        if b in seen:
            continue
        seen.add(b)
        r = sup_divergence(fam, b)
        results.append(r)
        if r.status == "finite":
            return DominationVerdict("finite", b, r.value, tuple(results))
    if results and all(r.status == "infinite" for r in results):
        return DominationVerdict("infinite", None, None, tuple(results))
    return DominationVerdict("inconclusive", None, None, tuple(results))


# ---------------------------------------------------------------------------
# capacity under grid refinement


@dataclass(frozen=True)
class RefinementVerdict:
    status: str        # "finite" | "infinite" | "inconclusive"
    capacities: tuple
    detail: str

    def to_dict(self) -> dict:
        return {"status": self.status, "capacities": list(self.capacities),
                "detail": self.detail}


def refinement_grid(fam: ExpFamily, stage: int) -> list[float]:
    """Nested member grids whose ends march toward the domain endpoints."""
    c = _anchor(fam.beta_inf, fam.beta_sup)
    pts = {c}
    inner = []
    for sign, end in ((-1.0, fam.beta_inf), (1.0, fam.beta_sup)):
        if math.isfinite(end):
            span = abs(end - c)
            for j in range(1, stage + 4):
                pts.add(end - math.copysign(span * 2.0 ** (-j), sign))
            if math.isfinite(_safe_logz(fam, end)) and _safe_stats(fam, end):
                pts.add(end)
            inner.append(end - math.copysign(span / 2.0, sign))
        else:
            s = max(abs(c), 1.0)
            # doubling ladder, bisecting back toward the last usable point
            # when logZ or the moments overflow, so every stage keeps adding
            # a member even near the representability frontier
            prev = c
            j = 1
            added = 0
            while added < stage + 3:
                cand = c + sign * s * (2.0 ** j - 1.0)
                if abs(cand - prev) <= 1e-9 * max(abs(prev), 1.0):
                    break
                if (fam.contains(cand) and math.isfinite(_safe_logz(fam, cand))
                        and _safe_stats(fam, cand) is not None):
                    pts.add(cand)
                    prev = cand
                    j += 1
                    added += 1
                else:
                    hi_bad = cand
                    for _ in range(60):
                        mid = 0.5 * (prev + hi_bad)
                        if (fam.contains(mid)
                                and math.isfinite(_safe_logz(fam, mid))
                                and _safe_stats(fam, mid) is not None):
                            prev = mid
                        else:
                            hi_bad = mid
                        if abs(hi_bad - prev) <= 1e-6 * max(abs(prev), 1.0):
                            break
                    if abs(prev - c) > 0 and prev not in pts:
                        pts.add(prev)
                        added += 1
                    else:
                        break
            inner.append(c + sign * s)
    for t in np.linspace(0.0, 1.0, 7)[1:-1]:
        pts.add(inner[0] + t * (inner[1] - inner[0]))
    return sorted(b for b in pts if fam.contains(b))


def capacity_refinement(fam: ExpFamily, stages: int = 8, bins: int = 256,
                        tol: float = 1e-6, max_iter: int = 20000,
                        threshold: float = 30.0) -> RefinementVerdict:
    """Finiteness verdict: does capacity stabilize as the grid refines?"""
    caps = []
    for i in range(stages):
        grid = refinement_grid(fam, i)
        W = build_channel(fam, grid, bins)
        val, _, _, gap, ok = _ba_iterate(W, tol, max_iter)
        caps.append(val)
        if val > threshold:
            return RefinementVerdict(
                "infinite", tuple(caps),
                f"capacity exceeded {threshold} nats at stage {i}")
    diffs = np.diff(caps)
    noise = max(50.0 * tol, 1e-4) * max(1.0, abs(caps[-1]))
    if np.all(np.abs(diffs[-3:]) <= noise):
        return RefinementVerdict("finite", tuple(caps),
                                 "capacity stabilized under refinement")
    lv = limit_extrapolate(list(enumerate(caps)))
    if lv.is_limit:
        return RefinementVerdict("finite", tuple(caps), "capacity extrapolates to a limit")
    if lv.diverges:
        return RefinementVerdict("infinite", tuple(caps),
                                 "capacity grows without bound under refinement")
    tail = diffs[-5:]
    if np.all(tail > 0):
        ratios = tail[1:] / tail[:-1]
        if ratios.size and float(ratios.min()) >= _GROW_RATIO:
            return RefinementVerdict(
                "infinite", tuple(caps),
                "capacity increments are not decaying under refinement")
    # growth has stopped when the latest increments are non-positive: exact
    # capacity is non-decreasing under nested grids, so any decrease is
    # channel-binning noise around a reached plateau
    if np.all(diffs[-2:] <= noise):
        return RefinementVerdict("finite", tuple(caps),
                                 "capacity stopped increasing under refinement")
    return RefinementVerdict("inconclusive", tuple(caps),
                             "capacity trend undetermined")
