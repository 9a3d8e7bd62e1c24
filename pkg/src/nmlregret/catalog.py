"""Named example families with closed forms and convolution rules.

Each entry pairs a family with the analytic log-partition / mean / variance
formulas (used as oracles against the numeric paths), an n-sample
convolution rule where one exists, and the expected finiteness
classification of its minimax regret.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.special import expit, gammaln

from .errors import BadParameter
from .family import ExpFamily
from .measure import (
    Atom,
    BaseMeasure,
    factorial_reciprocal_weights,
    gamma_shape_density,
    gaussian_density,
    log_cauchy_density,
    ones_weights,
    power_law_weights,
)

FINITE = "Finite"
INFINITE = "Infinite"


@dataclass(frozen=True)
class CatalogEntry:
    family: ExpFamily
    expected_classification: str
    note: str = ""

    @property
    def has_closed_forms(self) -> bool:
        return self.family.logz_fn is not None

    @property
    def has_convolution(self) -> bool:
        return self.family.nfold_fn is not None


def bernoulli() -> CatalogEntry:
    """Atoms of mass 1 at 0 and 1; log Z = log(1 + e^beta)."""

    def nfold(n: int) -> ExpFamily:
        def binom_atom(k: int) -> Atom:
            c = math.comb(n, k)
            lm = math.log(c) if c.bit_length() < 1000 else float(
                gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1))
            return Atom(float(k), math.exp(lm) if lm < 700 else math.inf, log_mass=lm)

        atoms = tuple(binom_atom(k) for k in range(n + 1))
        return ExpFamily(
            base=BaseMeasure(atoms=atoms),
            name=f"bernoulli^{n}",
            logz_fn=lambda b: n * np.logaddexp(0.0, b),
            mean_fn=lambda b: n * expit(b),
            var_fn=lambda b: n * expit(b) * expit(-b),
        )

    fam = replace(nfold(1), name="bernoulli", nfold_fn=nfold, _cache={})
    return CatalogEntry(fam, FINITE, "two-point support, compact mean range")


def gaussian_unit() -> CatalogEntry:
    """Standard normal base; the full family has unbounded regret."""

    def nfold(n: int) -> ExpFamily:
        return ExpFamily(
            base=BaseMeasure(density_pieces=(gaussian_density(0.0, float(n)),)),
            name=f"gaussian^{n}",
            logz_fn=lambda b: 0.5 * n * b * b,
            mean_fn=lambda b: n * b,
            var_fn=lambda b: float(n),
        )

    fam = replace(nfold(1), name="gaussian", nfold_fn=nfold, _cache={})
    return CatalogEntry(fam, INFINITE, "full real line of means")


def gaussian_restricted() -> CatalogEntry:
    """Standard normal base restricted to the canonical interval [0, 1]."""
    g = gaussian_unit().family

    def nfold(n: int) -> ExpFamily:
        inner = g.nfold_fn(n)
        return replace(inner, beta_inf=0.0, beta_sup=1.0, truncated=True,
                       name=f"gaussian_restricted^{n}", _cache={})

    fam = replace(nfold(1), name="gaussian_restricted", nfold_fn=nfold, _cache={})
    return CatalogEntry(fam, FINITE, "compact canonical domain")


def poisson() -> CatalogEntry:
    """Counting weights 1/k! on k >= 0; log Z = e^beta."""

    def nfold(n: int) -> ExpFamily:
        return ExpFamily(
            base=BaseMeasure(counting=factorial_reciprocal_weights(float(n))),
            name=f"poisson^{n}",
            logz_fn=lambda b: n * math.exp(b),
            mean_fn=lambda b: n * math.exp(b),
            var_fn=lambda b: n * math.exp(b),
        )

    fam = replace(nfold(1), name="poisson", nfold_fn=nfold, _cache={})
    return CatalogEntry(fam, INFINITE, "mean range unbounded above")


def geometric() -> CatalogEntry:
    """Counting weights 1 on k >= 0 with beta < 0; Z = 1/(1 - e^beta)."""
    fam = ExpFamily(
        base=BaseMeasure(counting=ones_weights(0)),
        beta_sup=0.0,
        name="geometric",
        logz_fn=lambda b: -math.log(-math.expm1(b)) if b < 0 else math.inf,
        mean_fn=lambda b: math.exp(b) / (-math.expm1(b)),
        var_fn=lambda b: math.exp(b) / math.expm1(b) ** 2,
    )
    return CatalogEntry(fam, INFINITE, "partition function diverges at the domain edge")


def gamma_base(gamma: float) -> CatalogEntry:
    """Density x^(gamma-1) e^(-x) on (0, inf); Z = Gamma(gamma)/(1-beta)^gamma."""
    if gamma <= 0:
        raise BadParameter("shape must be positive")
    lg = float(gammaln(gamma))
    fam = ExpFamily(
        base=BaseMeasure(density_pieces=(gamma_shape_density(gamma),)),
        beta_sup=1.0,
        name=f"gamma{gamma:g}",
        logz_fn=lambda b: lg - gamma * math.log1p(-b) if b < 1 else math.inf,
        mean_fn=lambda b: gamma / (1.0 - b),
        var_fn=lambda b: gamma / (1.0 - b) ** 2,
    )
    return CatalogEntry(fam, INFINITE, "mean range unbounded above")


def power_law_base(alpha: float) -> CatalogEntry:
    """Counting weights k^-(1+alpha) on k >= 1 with beta <= 0."""
    if alpha <= 0:
        raise BadParameter("alpha must be positive")
    fam = ExpFamily(
        base=BaseMeasure(counting=power_law_weights(alpha)),
        beta_sup=0.0,
        name=f"power_law{alpha:g}",
    )
    return CatalogEntry(fam, FINITE,
                        "Z finite at the domain edge, so the edge member dominates")


def exp_cauchy_mixture() -> CatalogEntry:
    """Half a point mass at 0, half the exponentiated-Cauchy density
    1/(pi x (1 + log^2 x)) on (0, inf); beta <= 0 with Z(0) = 1."""
    base = BaseMeasure(
        atoms=(Atom(0.0, 0.5),),
        density_pieces=(log_cauchy_density(weight=0.5),),
    )
    fam = ExpFamily(base=base, beta_sup=0.0, name="exp_cauchy")
    return CatalogEntry(
        fam, FINITE,
        "regret is finite although the Fisher-information integral diverges")


def with_atom(entry: CatalogEntry, location: float, mass: float) -> CatalogEntry:
    """Entry with an extra point mass; closed forms and convolution rules no
    longer apply, so the derived family is purely numeric."""
    base = entry.family.base.with_atom(location, mass)
    fam = ExpFamily(
        base=base,
        beta_inf=entry.family.beta_inf,
        beta_sup=entry.family.beta_sup,
        truncated=entry.family.truncated,
        name=f"{entry.family.name}+atom({location:g},{mass:g})",
    )
    return CatalogEntry(fam, entry.expected_classification, "atom added")


CATALOG = {
    "bernoulli": bernoulli,
    "gaussian": gaussian_unit,
    "gaussian_restricted": gaussian_restricted,
    "poisson": poisson,
    "geometric": geometric,
    "gamma2": lambda: gamma_base(2.0),
    "power_law1": lambda: power_law_base(1.0),
    "exp_cauchy": exp_cauchy_mixture,
}


def names() -> list[str]:
    return sorted(CATALOG)


def get(name: str) -> CatalogEntry:
    try:
        return CATALOG[name]()
    except KeyError:
        raise BadParameter(f"unknown catalog family {name!r}; known: {', '.join(names())}")
