"""Base measures: atoms, continuous density pieces, and lattice weights.

A measure either carries density pieces (with respect to length measure) or
counting weights on an integer lattice, never both; atoms can accompany
either.  Densities and weights are registered by name with analytically
known log forms, which keeps tilted integrands stable far into the tails
and makes the declarative JSON form round-trippable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.special import gammaln

from .errors import BadLocation, BadParameter

_DENSITIES: dict[str, Callable] = {}
_WEIGHTS: dict[str, Callable] = {}


def register_density(name):
    def deco(fn):
        _DENSITIES[name] = fn
        return fn
    return deco


def register_weights(name):
    def deco(fn):
        _WEIGHTS[name] = fn
        return fn
    return deco


@dataclass(frozen=True)
class Atom:
    location: float
    mass: float
    log_mass: float = None  # type: ignore[assignment]

    def __post_init__(self):
        if not self.mass > 0:
            raise BadParameter(f"atom mass must be positive, got {self.mass}")
        if self.log_mass is None:
            object.__setattr__(self, "log_mass", math.log(self.mass))


@dataclass(frozen=True)
class DensityPiece:
    """Continuous component on (lo, hi) with vectorized log density."""

    lo: float
    hi: float
    log_density: Callable[[np.ndarray], np.ndarray]
    name: str = "custom"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.lo < self.hi:
            raise BadParameter("density piece needs lo < hi")


@dataclass(frozen=True)
class CountingWeights:
    """Lattice component: support offset + k*step for k = 0, 1, 2, ...

    ``log_weight`` receives lattice *locations* (not indices)."""

    offset: int
    log_weight: Callable[[np.ndarray], np.ndarray]
    step: int = 1
    name: str = "custom"
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class BaseMeasure:
    atoms: tuple[Atom, ...] = ()
    density_pieces: tuple[DensityPiece, ...] = ()
    counting: CountingWeights | None = None

    def __post_init__(self):
        if self.density_pieces and self.counting is not None:
            raise BadParameter("measure may have density pieces or counting weights, not both")
        if not self.atoms and not self.density_pieces and self.counting is None:
            raise BadParameter("empty base measure")
        locs = [a.location for a in self.atoms]
        if len(set(locs)) != len(locs):
            raise BadParameter("atom locations must be distinct")
        s_lo, s_hi = self.support_left, self.support_right
        for a in self.atoms:
            if not (s_lo <= a.location <= s_hi):
                raise BadLocation(f"atom at {a.location} outside support [{s_lo}, {s_hi}]")

    @property
    def support_left(self) -> float:
        ends = [a.location for a in self.atoms]
        ends += [p.lo for p in self.density_pieces]
        if self.counting is not None:
            ends.append(float(self.counting.offset))
        return min(ends)

    @property
    def support_right(self) -> float:
        ends = [a.location for a in self.atoms]
        ends += [p.hi for p in self.density_pieces]
        if self.counting is not None:
            ends.append(math.inf)
        return max(ends)

    @property
    def is_lattice(self) -> bool:
        return self.counting is not None and not self.density_pieces

    def atom_at(self, x: float) -> Atom | None:
        for a in self.atoms:
            if a.location == x:
                return a
        return None

    def with_atom(self, location: float, mass: float) -> "BaseMeasure":
        if not mass > 0:
            raise BadParameter("atom mass must be positive")
        return BaseMeasure(self.atoms + (Atom(float(location), float(mass)),),
                           self.density_pieces, self.counting)

    # -- declarative form --------------------------------------------------

    def to_dict(self) -> dict:
        out: dict = {"atoms": [[a.location, a.mass] for a in self.atoms]}
        if self.density_pieces:
            out["density_pieces"] = [
                {"name": p.name, "params": dict(p.params), "interval": [p.lo, p.hi]}
                for p in self.density_pieces
            ]
        if self.counting is not None:
            c = self.counting
            out["counting"] = {"name": c.name, "params": dict(c.params),
                               "offset": c.offset, "step": c.step}
        return out

    @staticmethod
    def from_dict(d: dict) -> "BaseMeasure":
        atoms = tuple(Atom(float(l), float(m)) for l, m in d.get("atoms", []))
        pieces = []
        for pd in d.get("density_pieces", []):
            name = pd["name"]
            if name not in _DENSITIES:
                raise BadParameter(f"unknown density {name!r}")
            pieces.append(_DENSITIES[name](**pd.get("params", {})))
        counting = None
        if "counting" in d:
            cd = d["counting"]
            name = cd["name"]
            if name not in _WEIGHTS:
                raise BadParameter(f"unknown counting weight {name!r}")
            counting = _WEIGHTS[name](**cd.get("params", {}))
        return BaseMeasure(atoms, tuple(pieces), counting)


# ---------------------------------------------------------------------------
# registered families of densities / weights


@register_density("gaussian")
def gaussian_density(mean: float = 0.0, var: float = 1.0, weight: float = 1.0) -> DensityPiece:
    if var <= 0:
        raise BadParameter("variance must be positive")
    lw = math.log(weight)
    c = -0.5 * math.log(2.0 * math.pi * var)

    def logq(x):
        x = np.asarray(x, float)
        return lw + c - (x - mean) ** 2 / (2.0 * var)

    return DensityPiece(-math.inf, math.inf, logq, "gaussian",
                        {"mean": mean, "var": var, "weight": weight})


@register_density("gamma_shape")
def gamma_shape_density(gamma: float, weight: float = 1.0) -> DensityPiece:
    """Unnormalised q(x) = x^(gamma-1) e^(-x) on (0, inf)."""
    if gamma <= 0:
        raise BadParameter("shape must be positive")
    lw = math.log(weight)

    def logq(x):
        x = np.asarray(x, float)
        with np.errstate(divide="ignore"):
            return lw + (gamma - 1.0) * np.log(x) - x

    return DensityPiece(0.0, math.inf, logq, "gamma_shape",
                        {"gamma": gamma, "weight": weight})


@register_density("log_cauchy")
def log_cauchy_density(weight: float = 1.0) -> DensityPiece:
    """Density of exp(Cauchy): 1 / (pi x (1 + log^2 x)) on (0, inf)."""
    lw = math.log(weight) - math.log(math.pi)

    def logq(x):
        x = np.asarray(x, float)
        with np.errstate(divide="ignore", over="ignore"):
            lx = np.log(x)
            return lw - lx - np.log1p(lx * lx)

    return DensityPiece(0.0, math.inf, logq, "log_cauchy", {"weight": weight})


@register_weights("ones")
def ones_weights(offset: int = 0) -> CountingWeights:
    def logw(k):
        return np.zeros_like(np.asarray(k, float))

    return CountingWeights(offset, logw, 1, "ones", {"offset": offset})


@register_weights("power_law")
def power_law_weights(alpha: float, offset: int = 1) -> CountingWeights:
    """w(k) = k^-(1+alpha) on k >= offset (offset >= 1)."""
    if alpha <= 0:
        raise BadParameter("alpha must be positive")
    if offset < 1:
        raise BadParameter("power-law lattice must start at k >= 1")

    def logw(k):
        return -(1.0 + alpha) * np.log(np.asarray(k, float))

    return CountingWeights(offset, logw, 1, "power_law",
                           {"alpha": alpha, "offset": offset})


@register_weights("factorial_reciprocal")
def factorial_reciprocal_weights(rate: float = 1.0) -> CountingWeights:
    """w(k) = rate^k / k! on k >= 0 (Poisson-type base)."""
    if rate <= 0:
        raise BadParameter("rate must be positive")
    lr = math.log(rate)

    def logw(k):
        k = np.asarray(k, float)
        return k * lr - gammaln(k + 1.0)

    return CountingWeights(0, logw, 1, "factorial_reciprocal", {"rate": rate})
