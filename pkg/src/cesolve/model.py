"""Physical model: the potential, its parameter maps and the energy formula.

Potential::

    V(x) = V0 + V1/sqrt(x) + (8 m V2^2 / hbar^2)/x + V2/x^(3/2),   x > 0

The strength of the 1/x term is tied to V2; that coupling is what makes the
problem solvable in closed form.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DegenerateError, DomainError

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class PhysicalParams:
    v1: float
    v2: float = 0.0
    v0: float = 0.0
    mass: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if not (self.mass > 0 and self.hbar > 0):
            raise DomainError("mass and hbar must be positive")
        for name in ("v0", "v1", "v2", "mass", "hbar"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")

    @property
    def k(self):
        """2m/hbar^2, the coefficient in front of (E - V) in the ODE."""
        return 2.0 * self.mass / self.hbar ** 2

    def require_bound(self):
        if not self.v1 < 0:
            raise DomainError(f"bound states require V1 < 0 (got V1 = {self.v1})")


@dataclass(frozen=True)
class SpectralParams:
    alpha: float
    gamma: float
    delta: float
    a: float


@dataclass(frozen=True)
class AuxPoint:
    w: float
    v: float


class Method(enum.Enum):
    EXACT = "exact"
    APPROX10 = "approx10"
    ITERATION = "iteration"
    ORACLE = "oracle"


@dataclass(frozen=True)
class EnergyLevel:
    n: int
    energy: float
    n_eff: float
    method: Method
    iterations: int | None = None

    @property
    def label(self):
        if self.method is Method.ITERATION:
            return f"iteration{self.iterations}"
        return self.method.value


def potential_value(p: PhysicalParams, x: float) -> float:
    if not x > 0:
        raise DomainError(f"potential defined for x > 0 only (got {x})")
    sx = math.sqrt(x)
    return (p.v0 + p.v1 / sx + 8.0 * p.mass * p.v2 ** 2 / p.hbar ** 2 / x
            + p.v2 / (x * sx))


def spectral_from_energy(p: PhysicalParams, energy: float) -> SpectralParams:
    if not energy < p.v0:
        raise DomainError(f"need E < V0 for real delta (E = {energy}, V0 = {p.v0})")
    delta = math.sqrt(8.0 * p.mass * (p.v0 - energy)) / p.hbar
    return spectral_from_delta(p, delta)


def spectral_from_delta(p: PhysicalParams, delta: float) -> SpectralParams:
    if not delta > 0:
        raise DomainError("delta must be positive")
    h2 = p.hbar ** 2
    gamma = 8.0 * SQRT2 * p.mass * p.v2 / h2
    alpha = gamma * delta / 2.0 - 2.0 * SQRT2 * p.mass * p.v1 / h2
    a = alpha * (alpha - gamma * delta) / delta ** 3 - 1.0
    return SpectralParams(alpha=alpha, gamma=gamma, delta=delta, a=a)


def energy_from_delta(p: PhysicalParams, delta: float) -> float:
    return p.v0 - p.hbar ** 2 * delta ** 2 / (8.0 * p.mass)


def aux_from_spectral(p: PhysicalParams, s: SpectralParams) -> AuxPoint:
    if not s.delta > 0:
        raise DomainError("delta must be positive")
    h2 = p.hbar ** 2
    v = 2.0 * SQRT2 * p.mass * p.v1 / (s.delta ** 1.5 * h2)
    w = 4.0 * SQRT2 * p.mass * p.v2 / (math.sqrt(s.delta) * h2)
    return AuxPoint(w=w, v=v)


def aux_from_delta(p: PhysicalParams, delta: float) -> AuxPoint:
    return aux_from_spectral(p, spectral_from_delta(p, delta))


def cubic_constraint_v(p: PhysicalParams, w: float) -> float:
    """v on the cubic traced by (w, v) as the energy varies."""
    if p.v2 == 0:
        raise DegenerateError("V2 = 0: the cubic collapses onto w = 0")
    return p.hbar ** 4 * p.v1 / (64.0 * p.mass ** 2 * p.v2 ** 3) * w ** 3


def delta_from_neff(p: PhysicalParams, n_eff: float) -> float:
    if not n_eff > 0:
        raise DomainError(f"n_eff must be positive (got {n_eff})")
    if p.v1 == 0:
        raise DomainError("V1 = 0 gives no energy scale")
    return (8.0 * p.mass ** 2 * p.v1 ** 2 / (p.hbar ** 4 * n_eff)) ** (1.0 / 3.0)


def neff_from_delta(p: PhysicalParams, delta: float) -> float:
    """v^2 at the given delta."""
    return 8.0 * p.mass ** 2 * p.v1 ** 2 / (p.hbar ** 4 * delta ** 3)


def energy_from_neff(p: PhysicalParams, n_eff: float) -> float:
    if not n_eff > 0:
        raise DomainError(f"n_eff must be positive (got {n_eff})")
    if p.v1 == 0:
        raise DomainError("V1 = 0 gives no energy scale")
    scale = (p.mass * p.v1 ** 4 / p.hbar ** 2) ** (1.0 / 3.0)
    return p.v0 - 0.5 * scale * n_eff ** (-2.0 / 3.0)
