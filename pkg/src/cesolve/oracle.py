"""Independent shooting solver for the radial-type problem

    psi'' + (2m/hbar^2) (E - V(x)) psi = 0,   psi(0) = 0,  psi(inf) = 0.

Works in s = sqrt(x). With psi = sqrt(s) g the equation becomes

    g'' + [Q(s) - 3/(4 s^2)] g = 0,
    Q(s) = 4k [(E - V0) s^2 - V1 s - 8 m V2^2/hbar^2 - V2/s],   k = 2m/hbar^2,

which Numerov integrates on a uniform s grid. The outward solution starts
from the Frobenius series psi = s^2 (1 + c1 s + c2 s^2 + ...), the inward one
from a decaying exponential tail. Nothing here uses the closed-form solution.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import brentq

from . import model
from .errors import DomainError, IncompleteSpectrumError, StiffnessError
from .model import EnergyLevel, Method, PhysicalParams

SERIES_TERMS = 40
TAIL_DECAY_LENGTHS = 40.0


@dataclass(frozen=True)
class OracleConfig:
    x_min: float = 1e-3
    x_max: float = 60.0
    grid_points: int = 20000
    match_point: float = 1.0

    def __post_init__(self):
        if not (0 < self.x_min < self.match_point < self.x_max):
            raise DomainError("need 0 < x_min < match_point < x_max")
        if self.grid_points < 10:
            raise DomainError("grid_points too small")

    def refined(self, factor=2):
        return replace(self, grid_points=self.grid_points * factor)

    @classmethod
    def for_params(cls, p: PhysicalParams, n_max: int, grid_points: int = 20000,
                   x_min: float = 1e-3):
        """Box sized so that level n_max decays over TAIL_DECAY_LENGTHS lengths.

        Box levels are located by node counting on a coarse grid; the box is
        enlarged until the top level's outer turning point plus its tail fits,
        and the matching point is put inside the ground state's allowed region.
        """
        p.require_bound()
        x_max = 40.0 * (p.hbar ** 2 / (p.mass * abs(p.v1))) ** (2.0 / 3.0)
        for _ in range(12):
            trial = cls(x_min=x_min, x_max=x_max, grid_points=4000,
                        match_point=0.5 * x_max)
            levels = _box_levels(p, n_max, trial, rel=1e-3)
            if levels is not None:
                e_top = levels[-1][1]
                x_in, x_out = _turning_points(p, e_top)
                kappa = math.sqrt(p.k * (p.v0 - e_top))
                need = x_out + TAIL_DECAY_LENGTHS / kappa
                if need <= x_max:
                    break
                x_max = 1.3 * need
            else:
                x_max *= 2.0
        else:
            raise IncompleteSpectrumError(f"could not fit {n_max} levels in a box")
        x_in, x_out = _turning_points(p, levels[0][0])
        match = math.sqrt(x_in * x_out) if x_in else 0.5 * x_out
        match = min(max(match, 10.0 * x_min), 0.5 * x_max)
        return cls(x_min=x_min, x_max=x_max, grid_points=grid_points, match_point=match)


def _turning_points(p, energy):
    """(inner, outer) x where V(x) = energy; inner is None when V -> -inf at 0."""
    f = lambda x: model.potential_value(p, x) - energy
    xs = np.geomspace(1e-8, 1e9, 1201)
    vals = np.array([f(x) for x in xs])
    below = np.nonzero(vals < 0)[0]
    if below.size == 0 or below[-1] == xs.size - 1:
        raise DomainError(f"no classically allowed region at E = {energy}")
    i, j = below[0], below[-1]
    outer = brentq(f, xs[j], xs[j + 1])
    inner = brentq(f, xs[i - 1], xs[i]) if i > 0 else None
    return inner, outer


def frobenius_coefficients(p: PhysicalParams, energy: float, terms: int = SERIES_TERMS):
    """Coefficients c_j of psi = s^2 sum_j c_j s^j about s = 0."""
    k = p.k
    q = {-1: -4.0 * k * p.v2,
         0: -4.0 * k * 8.0 * p.mass * p.v2 ** 2 / p.hbar ** 2,
         1: -4.0 * k * p.v1,
         2: 4.0 * k * (energy - p.v0)}
    c = [1.0]
    for j in range(1, terms):
        acc = 0.0
        for shift, qv in q.items():
            idx = j - 2 - shift
            if 0 <= idx < j:
                acc += qv * c[idx]
        c.append(-acc / (j * (j + 2)))
    return c


def _series_psi(c, s):
    total, sp = 0.0, s * s
    for cj in c:
        total += cj * sp
        sp *= s
    return total


class _Grid:
    def __init__(self, p, cfg):
        self.s0 = math.sqrt(cfg.x_min)
        s1 = math.sqrt(cfg.x_max)
        self.s = np.linspace(self.s0, s1, cfg.grid_points + 1)
        self.h = self.s[1] - self.s[0]
        s = self.s
        k = p.k
        # energy independent part of f(s) = Q(s) - 3/(4 s^2)
        self.base = (4.0 * k * (-p.v1 * s - 8.0 * p.mass * p.v2 ** 2 / p.hbar ** 2
                                - p.v2 / s) - 0.75 / s ** 2)
        self.s2 = 4.0 * k * s * s
        self.m = int(round((math.sqrt(cfg.match_point) - self.s0) / self.h))
        if not 2 <= self.m <= cfg.grid_points - 2:
            raise DomainError("match point too close to the grid ends")


def _numerov(coef, g0, g1, start, stop, step):
    """Numerov sweep over indices start, start+step, ...; returns list of g values."""
    out = [g0, g1]
    i = start + step
    a_prev, a_cur = coef[start], coef[i]
    while i != stop:
        j = i + step
        a_next = coef[j]
        g_next = ((2.0 - 10.0 * a_cur) * out[-1] - (1.0 + a_prev) * out[-2]) / (1.0 + a_next)
        out.append(g_next)
        if abs(g_next) > 1e250:
            out = [v * 1e-250 for v in out]
        a_prev, a_cur = a_cur, a_next
        i = j
    return out


def _sweep(p, energy, cfg, grid):
    if not energy < p.v0:
        raise DomainError("oracle handles bound states only (E < V0)")
    f = grid.base + grid.s2 * (energy - p.v0)
    coef = (grid.h ** 2 / 12.0 * f).tolist()
    n_last = len(coef) - 1
    m = grid.m

    c = frobenius_coefficients(p, energy)
    s0, s1 = grid.s[0], grid.s[1]
    g0 = _series_psi(c, s0) / math.sqrt(s0)
    g1 = _series_psi(c, s1) / math.sqrt(s1)
    if not (math.isfinite(g0) and math.isfinite(g1)) or g0 <= 0:
        raise StiffnessError("Frobenius start failed near x_min")
    out = _numerov(coef, g0, g1, 0, m + 1, 1)

    kappa = math.sqrt(p.k * (p.v0 - energy))
    x_n, x_n1 = grid.s[-1] ** 2, grid.s[-2] ** 2
    tail = math.exp(-kappa * (x_n1 - x_n)) * math.sqrt(grid.s[-1] / grid.s[-2])
    inn = _numerov(coef, 1e-200, 1e-200 * tail, n_last, m - 1, -1)
    inn.reverse()  # inn[0] is index m-1 ... inn[-1] is the outer end
    return out, inn


def _nodes(values):
    count, prev = 0, 0.0
    for v in values:
        if v != 0.0:
            if prev != 0.0 and (v > 0) != (prev > 0):
                count += 1
            prev = v
    return count


def _mismatch_from(out, inn, h):
    a0, a1 = out[-2], out[-1]  # indices m, m+1
    b0, b1 = inn[1], inn[2]    # indices m, m+1
    cas = a0 * b1 - a1 * b0
    return cas / (h * math.hypot(a0, a1) * math.hypot(b0, b1))


def shoot_mismatch(p: PhysicalParams, E: float, cfg: OracleConfig) -> float:
    """Normalised Casoratian of outward and inward solutions at the matching point.

    Continuous in E, free of poles, zero exactly at eigenvalues of the
    discretised problem.
    """
    grid = _Grid(p, cfg)
    out, inn = _sweep(p, E, cfg, grid)
    return _mismatch_from(out, inn, grid.h)


def _node_count(p, E, cfg, grid):
    out, inn = _sweep(p, E, cfg, grid)
    return _nodes(out[:-1]) + _nodes(inn[1:])


def sturm_count(p: PhysicalParams, E: float, cfg: OracleConfig, grid=None) -> int:
    """Nodes of the outward solution over the whole box.

    Equals the number of eigenvalues below E of the problem with psi = 0 at
    x_max, hence non-decreasing in E.
    """
    grid = grid or _Grid(p, cfg)
    f = grid.base + grid.s2 * (E - p.v0)
    coef = (grid.h ** 2 / 12.0 * f).tolist()
    c = frobenius_coefficients(p, E)
    s0, s1 = grid.s[0], grid.s[1]
    out = _numerov(coef, _series_psi(c, s0) / math.sqrt(s0),
                   _series_psi(c, s1) / math.sqrt(s1), 0, len(coef) - 1, 1)
    return _nodes(out)


def _energy_floor(p, cfg, grid):
    """An energy with no box level below it.

    Starts at the Coulomb-like energy scale and walks down; starting from the
    potential minimum on the grid would be far too deep when V2 < 0.
    """
    scale = (p.mass * p.v1 ** 4 / p.hbar ** 2) ** (1.0 / 3.0)
    if p.v2 < 0:
        scale = max(scale, p.mass ** 3 * p.v2 ** 4 / p.hbar ** 6)
    e = p.v0 - scale
    for _ in range(60):
        if sturm_count(p, e, cfg, grid) == 0:
            return e
        e = p.v0 - 2.0 * (p.v0 - e)
    raise IncompleteSpectrumError("no energy without bound states below it")


def _box_levels(p, n_max, cfg, rel=1e-3, grid=None):
    """Brackets [(lo, hi)] with sturm_count(lo) = n-1 < n <= sturm_count(hi)."""
    grid = grid or _Grid(p, cfg)
    lo = _energy_floor(p, cfg, grid)
    top = p.v0 - 1e-12 * max(1.0, abs(p.v0 - lo))
    counts = {lo: 0}
    if sturm_count(p, top, cfg, grid) < n_max:
        return None
    out = []
    for n in range(1, n_max + 1):
        a, b = lo, top
        while (b - a) > rel * abs(p.v0 - b):
            mid = 0.5 * (a + b)
            cnt = counts.get(mid)
            if cnt is None:
                cnt = counts[mid] = sturm_count(p, mid, cfg, grid)
            if cnt >= n:
                b = mid
            else:
                a = mid
        out.append((a, b))
        lo = a
    return out


def eigenvalues_numeric(p: PhysicalParams, n_max: int, cfg: OracleConfig | None = None,
                        tol: float = 1e-12) -> list[EnergyLevel]:
    """Lowest n_max eigenvalues.

    Each level is bracketed by node counting in the box, then refined as a
    zero of the tail-matched mismatch. A level's index is its node count + 1.
    """
    p.require_bound()
    if n_max < 1:
        raise DomainError("n_max must be at least 1")
    cfg = cfg or OracleConfig.for_params(p, n_max)
    grid = _Grid(p, cfg)
    brackets = _box_levels(p, n_max, cfg, rel=1e-6, grid=grid)
    if brackets is None:
        raise IncompleteSpectrumError(f"fewer than {n_max} levels below V0 in the box")

    def mm(e):
        out, inn = _sweep(p, e, cfg, grid)
        return _mismatch_from(out, inn, grid.h)

    levels = []
    for n, (a, b) in enumerate(brackets, 1):
        width = b - a
        fa, fb = mm(a), mm(b)
        grow = 0
        while (fa > 0) == (fb > 0):
            # the box level sits a hair above the open-tail level
            grow += 1
            if grow > 30:
                raise IncompleteSpectrumError(f"level {n}: no mismatch sign change")
            a -= width * 2 ** grow
            fa = mm(a)
        root = brentq(mm, a, b, xtol=tol * abs(b), rtol=1e-15, maxiter=200)
        nodes = _node_count(p, root, cfg, grid)
        if nodes != n - 1:
            raise IncompleteSpectrumError(
                f"level {n} refined to a solution with {nodes} nodes")
        levels.append(EnergyLevel(n, root, _neff(p, root), Method.ORACLE))
    return levels


def _neff(p, e):
    return model.neff_from_delta(p, math.sqrt(8.0 * p.mass * (p.v0 - e)) / p.hbar)


def eigenfunction_numeric(p: PhysicalParams, E: float, cfg: OracleConfig):
    """(x, psi) of the matched shooting solution, scaled to max |psi| = 1."""
    grid = _Grid(p, cfg)
    out, inn = _sweep(p, E, cfg, grid)
    m = grid.m
    scale = out[-2] / inn[1]
    g = np.array(out[:-1] + [v * scale for v in inn[2:]])
    s = grid.s
    psi = g * np.sqrt(s)
    psi /= psi[np.argmax(np.abs(psi))]
    return s * s, psi
