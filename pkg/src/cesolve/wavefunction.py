"""Closed-form solution psi(x) built from a Hermite / Kummer combination.

With z = sqrt(2x) (or a rescaled variant) the solution reads

    psi = exp(P(z)) * du/dz,
    u   = exp(phi(z)) * [c1 H_a(y) + c2 1F1(-a/2; 1/2; y^2)],
    y   = (delta (gamma + delta z) - 2 alpha) / (sqrt(2) delta^(3/2)).

The exponents P and phi admit several readings, so a small set of candidate
groupings is enumerated and the one that actually satisfies the Schrodinger
equation is picked by a finite-difference residual test.
"""
from __future__ import annotations

import itertools
import math
import threading
from dataclasses import dataclass

import numpy as np

from . import model
from .errors import AmbiguityError, DomainError, FormError
from .model import PhysicalParams
from .specfun import hermite_h, kummer_1f1

SQRT2 = math.sqrt(2.0)

RESIDUAL_STEP = 1e-3
RESIDUAL_FLOOR = 1e-6
SELFCHECK_POINTS = 20
SELFCHECK_RANDOM_SETS = 2
SELFCHECK_SEED = 20240611


# (P(z), phi(z), phi'(z)) building blocks; s = SpectralParams
_PREFACTORS = {
    "p+dg": lambda s, z: (s.delta * z * z + s.gamma * z) / 4.0,
    "p-dg": lambda s, z: -(s.delta * z * z + s.gamma * z) / 4.0,
    "p+d2g": lambda s, z: (s.delta * z * z + 2.0 * s.gamma * z) / 4.0,
    "p-d2g": lambda s, z: -(s.delta * z * z + 2.0 * s.gamma * z) / 4.0,
}

_INNER = {
    "i-da": (lambda s, z: -(s.delta * z * z + s.alpha * z) / 2.0 - s.gamma * z,
             lambda s, z: -s.delta * z - s.alpha / 2.0 - s.gamma),
    "i+ad": (lambda s, z: -s.delta * z * z / 2.0 + (s.alpha / s.delta - s.gamma) * z,
             lambda s, z: -s.delta * z + s.alpha / s.delta - s.gamma),
    "i-ad": (lambda s, z: -s.delta * z * z / 2.0 - (s.alpha / s.delta + s.gamma) * z,
             lambda s, z: -s.delta * z - s.alpha / s.delta - s.gamma),
}

# z as a function of x
_ZMAPS = {
    "z=sqrt(2x)": lambda x: math.sqrt(2.0 * x),
    "z=2sqrt(x)": lambda x: 2.0 * math.sqrt(x),
}

VARIANTS = tuple("|".join(t) for t in itertools.product(_PREFACTORS, _INNER, _ZMAPS))


@dataclass(frozen=True)
class SolutionForm:
    variant_id: str
    c1: float = 1.0
    c2: float = 0.0

    def __post_init__(self):
        if self.variant_id not in VARIANTS:
            raise FormError(f"unknown variant {self.variant_id!r}")

    def with_coeffs(self, c1, c2):
        return SolutionForm(self.variant_id, c1, c2)


_verified: set[str] = set()
_canonical: dict[tuple, str] = {}
_lock = threading.Lock()


def _parts(variant_id):
    pre, inner, zmap = variant_id.split("|")
    return _PREFACTORS[pre], _INNER[inner], _ZMAPS[zmap]


def _psi_raw(p, s, form, x):
    pre, (phi, dphi), zmap = _parts(form.variant_id)
    z = zmap(x)
    scale = s.delta ** 1.5 * SQRT2
    y = (s.delta * (s.gamma + s.delta * z) - 2.0 * s.alpha) / scale
    dy = s.delta ** 2 / scale
    a = s.a
    g = dg = 0.0
    if form.c1:
        g += form.c1 * hermite_h(a, y).value
        dg += form.c1 * 2.0 * a * hermite_h(a - 1.0, y).value
    if form.c2:
        g += form.c2 * kummer_1f1(-a / 2.0, 0.5, y * y).value
        dg += form.c2 * (-2.0 * a * y) * kummer_1f1(1.0 - a / 2.0, 1.5, y * y).value
    return math.exp(pre(s, z) + phi(s, z)) * (dphi(s, z) * g + dg * dy)


def psi(p: PhysicalParams, E: float, form: SolutionForm, x: float,
        validate: bool = True) -> float:
    """Unnormalized psi(x) for the given form.

    With ``validate`` the variant must have passed :func:`form_selfcheck`.
    """
    if not x > 0:
        raise DomainError(f"psi is defined for x > 0 (got {x})")
    if validate and form.variant_id not in _verified:
        raise FormError(f"variant {form.variant_id!r} has not passed the residual self-check")
    s = model.spectral_from_energy(p, E)
    return _psi_raw(p, s, form, x)


def psi_grid(p, E, form, xs, validate=True):
    return np.array([psi(p, E, form, float(x), validate) for x in xs])


def default_step(x: float) -> float:
    """FD step growing with x: near the origin psi ~ x is a cancelling
    combination, so its rounding noise would dominate a fixed small step."""
    return min(max(RESIDUAL_STEP * x / 0.1, RESIDUAL_STEP), 5.0 * RESIDUAL_STEP)


def residual(p: PhysicalParams, E: float, form: SolutionForm, x: float,
             h: float | None = None) -> float:
    """Relative residual of psi'' + (2m/hbar^2)(E - V) psi at x.

    psi'' comes from the 5-point central stencil with step h (default
    :func:`default_step`). The result is divided by the largest of max|psi|
    on the stencil, |psi''| and |(2m/hbar^2)(E - V) psi|.
    """
    if h is None:
        h = default_step(x)
    if not (h > 0 and x - 2.0 * h > 0):
        raise DomainError("need h > 0 and x - 2h > 0")
    s = model.spectral_from_energy(p, E)
    f = [_psi_raw(p, s, form, x + j * h) for j in (-2, -1, 0, 1, 2)]
    d2 = (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * h * h)
    pot = p.k * (E - model.potential_value(p, x)) * f[2]
    scale = max(max(abs(v) for v in f), abs(d2), abs(pot))
    if scale == 0.0 or not math.isfinite(scale):
        return math.inf
    return abs(d2 + pot) / scale


def _random_cases(rng, n):
    cases = []
    for _ in range(n):
        p = PhysicalParams(v1=-rng.uniform(0.5, 3.0), v2=rng.uniform(-0.6, 0.6),
                           v0=rng.uniform(-1.0, 1.0), mass=rng.uniform(0.5, 2.0),
                           hbar=rng.uniform(0.7, 1.5))
        e = p.v0 - rng.uniform(0.2, 2.0)
        cases.append((p, e))
    return cases


def _passes(variant_id, cases, xs):
    form = SolutionForm(variant_id, 1.0, 0.5)
    for p, e in cases:
        for x in xs:
            try:
                r = residual(p, e, form, x)
            except ArithmeticError:
                return False
            if not r <= RESIDUAL_FLOOR:
                return False
    return True


def form_selfcheck(p: PhysicalParams, E: float, candidates=None) -> SolutionForm:
    """Pick the unique candidate grouping that solves the Schrodinger equation.

    Each candidate is tested with c1 = 1, c2 = 0.5 at SELFCHECK_POINTS points
    for (p, E) plus SELFCHECK_RANDOM_SETS seeded random parameter sets. The
    winner is cached; later calls with the same candidate set return it
    without re-testing. Zero or several winners raise AmbiguityError.
    """
    key = tuple(candidates) if candidates is not None else VARIANTS
    unknown = [c for c in key if c not in VARIANTS]
    if unknown:
        raise FormError(f"unknown variants {unknown}")
    with _lock:
        hit = _canonical.get(key)
    if hit is not None:
        return SolutionForm(hit)
    if not E < p.v0:
        raise DomainError("self-check needs E < V0")
    rng = np.random.default_rng(SELFCHECK_SEED)
    cases = [(p, E)] + _random_cases(rng, SELFCHECK_RANDOM_SETS)
    xs = np.linspace(0.2, 4.0, SELFCHECK_POINTS)
    winners = [v for v in key if _passes(v, cases, xs)]
    if len(winners) != 1:
        raise AmbiguityError(f"{len(winners)} variants pass the residual check: {winners}")
    with _lock:
        _verified.add(winners[0])
        _canonical[key] = winners[0]
    return SolutionForm(winners[0])


def canonical_form(p: PhysicalParams | None = None, E: float | None = None) -> SolutionForm:
    """The self-checked form, running the check on a default problem if needed."""
    if p is None:
        p, E = PhysicalParams(v1=-1.3, v2=0.27), -0.71
    return form_selfcheck(p, E)


def node_count(p: PhysicalParams, E: float, form: SolutionForm, x_max: float,
               samples: int = 400, x_min: float = 1e-3) -> int:
    """Sign changes of psi on (0, x_max).

    Where |psi| dips to a local minimum without changing sign the interval is
    resampled, so a close pair of crossings is not missed. Nodes beyond x_max
    are not counted.
    """
    xs = np.geomspace(x_min, x_max, samples)
    vals = psi_grid(p, E, form, xs)
    tail_floor = 1e-10 * np.max(np.abs(vals))
    count = 0
    for i in range(len(xs) - 1):
        a, b = vals[i], vals[i + 1]
        if abs(a) < tail_floor or abs(b) < tail_floor:
            continue
        if (a > 0) != (b > 0):
            count += 1
        elif (0 < i and abs(a) < abs(vals[i - 1]) and abs(a) <= abs(b)
              and (vals[i - 1] > 0) == (a > 0)):
            fine = psi_grid(p, E, form, np.linspace(xs[i - 1], xs[i + 1], 41))
            count += int(np.sum(np.signbit(fine[1:]) != np.signbit(fine[:-1])))
    return count


def far_point(p: PhysicalParams, E: float, decay_lengths: float = 30.0) -> float:
    """A point past the outer turning point by decay_lengths tail lengths."""
    from .oracle import _turning_points
    _, x_out = _turning_points(p, E)
    kappa = math.sqrt(p.k * (p.v0 - E))
    return x_out + decay_lengths / kappa
