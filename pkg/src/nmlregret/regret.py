"""Minimax regret of restricted families under repeated sampling.

The minimax individual-sequence regret of a family restricted to a compact
mean interval equals the log of the NML integral of the n-fold family (the
family of the sum statistic) with the parameter clamped to that interval.
It is compared against the asymptote ``0.5*log(n/(2*pi)) + log J`` where J
is the Fisher-root integral over the restriction; the per-n gap is the
vanishing correction term.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .errors import BadParameter, ConvolutionUnavailable, IntegralInconclusive
from .family import ExpFamily
from .integrals import jeffreys_mean, shtarkov_integral
from .quadrature import QuadConfig

_LOG2 = math.log(2.0)


@dataclass(frozen=True)
class RegretReport:
    n: int
    log_shtarkov_nats: float
    asymptote_nats: float
    gap_nats: float
    j_value: float

    def to_dict(self, units: str = "nats") -> dict:
        s = 1.0 if units == "nats" else 1.0 / _LOG2
        return {
            "n": self.n,
            "log_shtarkov": self.log_shtarkov_nats * s,
            "asymptote": self.asymptote_nats * s,
            "gap": self.gap_nats * s,
            "j_value": self.j_value,
        }


def nfold(fam: ExpFamily, n: int) -> ExpFamily:
    """Family of the n-sample sum statistic, sharing the canonical parameter."""
    if n < 1 or n != int(n):
        raise BadParameter("n must be a positive integer")
    n = int(n)
    if n == 1:
        return fam
    if fam.nfold_fn is None:
        raise ConvolutionUnavailable(
            f"no convolution rule registered for family {fam.name!r}")
    return fam.nfold_fn(n)


def _beta_interval(fam: ExpFamily, ineccsi) -> tuple[float, float] | None:
    if ineccsi is None:
        return None
    m1, m2 = float(ineccsi[0]), float(ineccsi[1])
    if not m1 < m2:
        raise BadParameter("need mean interval lo < hi")
    return fam.ml_beta(m1).beta, fam.ml_beta(m2).beta


def minimax_regret(fam: ExpFamily, ineccsi=None, n: int = 1,
                   config: QuadConfig | None = None) -> float:
    """log of the NML integral of the n-fold family on the restriction (nats)."""
    rng = _beta_interval(fam, ineccsi)
    v = shtarkov_integral(nfold(fam, n), beta_range=rng, config=config)
    if not v.is_finite:
        raise IntegralInconclusive(
            f"NML integral did not resolve to a finite value: {v.detail}", v)
    return math.log(v.value)


def asymptotic_regret(j: float, n: int) -> float:
    """Leading regret expansion 0.5*log(n/(2*pi)) + log j, in nats."""
    if not (j > 0.0 and math.isfinite(j)):
        raise BadParameter("j must be finite and positive")
    return 0.5 * math.log(n / (2.0 * math.pi)) + math.log(j)


def regret_gap_curve(fam: ExpFamily, ineccsi=None, n_list=(1,),
                     config: QuadConfig | None = None) -> list[RegretReport]:
    """Per-n regret reports; the gap column witnesses the vanishing term."""
    mu_range = None if ineccsi is None else (float(ineccsi[0]), float(ineccsi[1]))
    jv = jeffreys_mean(fam, mu_range, config)
    if not jv.is_finite:
        raise IntegralInconclusive(
            f"Fisher-root integral over the restriction did not resolve: {jv.detail}",
            jv)
    j = jv.value

    def one(n: int) -> RegretReport:
        ls = minimax_regret(fam, ineccsi, n, config)
        asym = asymptotic_regret(j, n)
        return RegretReport(int(n), ls, asym, ls - asym, j)

    ns = list(n_list)
    with ThreadPoolExecutor(max_workers=min(4, max(len(ns), 1))) as ex:
        return list(ex.map(one, ns))


def curve_to_csv(reports, units: str = "nats") -> str:
    """CSV with columns n, log_shtarkov, asymptote, gap, j_value."""
    if units not in ("nats", "bits"):
        raise BadParameter(f"unknown units {units!r}")
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=["n", "log_shtarkov", "asymptote",
                                        "gap", "j_value"])
    w.writeheader()
    for r in reports:
        w.writerow(r.to_dict(units))
    return buf.getvalue()
