"""Spectrum equation, its root curves, the tanh approximation of the roots and
the effective-quantum-number iteration.

Dimensionless form of the spectrum equation (the canonical root function)::

    F(v, w) = H_{v^2-w^2}(sqrt(2) v) - sqrt(2) (v - w) H_{v^2-w^2-1}(sqrt(2) v)

Branch n of the root set is the n-th root met when moving from the wedge
boundary v = -|w| towards v -> -inf.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from . import model
from .errors import (AccuracyError, BracketError, DegenerateError, DivergenceError,
                     DomainError, RootError, SingularFitError)
from .model import AuxPoint, EnergyLevel, Method, PhysicalParams, SpectralParams
from .specfun import _hermite_raw

SQRT2 = math.sqrt(2.0)
TANH1 = math.tanh(1.0)
# offset of the effective quantum number at w = 0 from the tanh approximation
C0_TANH = (-1.0 + TANH1) / 2.0
# offset of the pure inverse square root potential's level formula
C0_INVSQRT = -1.0 / (2.0 * math.pi)

V_INTERVAL = 1e-12
BRACKET_EXPANSIONS = 8
BRACKET_GROWTH = 1.6
# relative size of the error estimate of F against its two terms
F_ACCURACY = 1e-6
# step in n_eff when scanning along the physical cubic for sign changes
SCAN_STEP = 0.05


@dataclass(frozen=True)
class CurveSample:
    n: int
    w: float
    v_exact: float
    v_approx: float
    rel_error: float


@dataclass
class IterationTrace:
    iterates: list = field(default_factory=list)  # (k, n_eff, E)

    @property
    def last(self):
        return self.iterates[-1]

    @property
    def energies(self):
        return [e for _, _, e in self.iterates]


@dataclass(frozen=True)
class ExpansionFit:
    a0: float
    a1: float
    a2: float
    a3: float
    residual_rms: float

    def predict(self, n):
        n = np.asarray(n, dtype=float)
        c = n ** (1.0 / 3.0)
        return n + self.a0 + self.a1 * c + self.a2 / c + self.a3 / c ** 2


def _spectral_terms(v, w):
    nu = v * v - w * w
    z = SQRT2 * v
    h0, e0 = _hermite_raw(nu, z)
    h1, e1 = _hermite_raw(nu - 1.0, z)
    coef = SQRT2 * (v - w)
    return h0, coef * h1, e0 + abs(coef) * e1


def spectral_function(point: AuxPoint) -> float:
    v, w = point.v, point.w
    if not (math.isfinite(v) and math.isfinite(w)):
        raise DomainError("F(v, w) needs finite arguments")
    t0, t1, err = _spectral_terms(v, w)
    value = t0 - t1
    if not math.isfinite(value) or err > F_ACCURACY * (abs(t0) + abs(t1)):
        raise AccuracyError(f"F({v}, {w}) unreliable: est. error {err:.3g}")
    return value


def F(v: float, w: float) -> float:
    return spectral_function(AuxPoint(w=w, v=v))


def spectral_function_physical(s: SpectralParams) -> float:
    """Spectrum equation written with (alpha, gamma, delta, a)."""
    if not s.delta > 0:
        raise DomainError("delta must be positive")
    if s.a == 0:
        raise DegenerateError("a = 0: the physical form divides by a")
    d32 = s.delta ** 1.5
    xi = (s.gamma * s.delta - 2.0 * s.alpha) / (SQRT2 * d32)
    coef = (s.alpha - s.gamma * s.delta) / (SQRT2 * s.a * d32)
    ha1, _ = _hermite_raw(s.a - 1.0, xi)
    ha, _ = _hermite_raw(s.a, xi)
    return ha1 + coef * ha


def physical_terms(s: SpectralParams):
    """The two addends of :func:`spectral_function_physical` (for scaling checks)."""
    d32 = s.delta ** 1.5
    xi = (s.gamma * s.delta - 2.0 * s.alpha) / (SQRT2 * d32)
    coef = (s.alpha - s.gamma * s.delta) / (SQRT2 * s.a * d32)
    return _hermite_raw(s.a - 1.0, xi)[0], coef * _hermite_raw(s.a, xi)[0]


def approx_v_squared(n: int, w: float) -> float:
    """tanh approximation of v^2 on branch n."""
    if n < 1:
        raise DomainError("branch index starts at 1")
    return w * w + n - 0.5 + 0.5 * math.tanh(1.0 + (n + 2.0) / (n + 1.0) * w)


def _bisect(f, lo, hi, f_lo, f_hi, x_tol, f_tol=0.0):
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    while abs(hi - lo) > x_tol:
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        f_mid = f(mid)
        if f_mid == 0.0 or abs(f_mid) < f_tol:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
    return 0.5 * (lo + hi)


def _edge_root(f, edge, span, probes=60):
    """First root of f below the wedge edge, approached geometrically.

    F is positive on the edge itself; at large |w| the first root can lie
    within rounding of it, in which case the edge-side midpoint is returned.
    """
    prev_v, prev_f = edge, 1.0
    for d in np.geomspace(8.0 * np.finfo(float).eps * max(abs(edge), 1e-300), span, probes):
        v = edge - d
        fv = f(v)
        if (fv > 0) != (prev_f > 0) or fv == 0:
            if prev_v == edge:
                return 0.5 * (v + edge)
            return _bisect(f, v, prev_v, fv, prev_f, V_INTERVAL)
        prev_v, prev_f = v, fv
    return None


def solve_branch(n: int, w: float, tol: float = 0.0,
                 v_interval: float = V_INTERVAL) -> CurveSample:
    """Exact root of F(., w) on branch n, seeded by the tanh approximation.

    The bracket starts at v0 +- max(0.05, 0.1/sqrt(n)), is clipped to the
    wedge v <= -|w| and grows geometrically when F has no sign change.
    Bisection stops at |F| < tol or a bracket of width v_interval; with
    v_interval = 0 it runs down to adjacent doubles.
    """
    if n < 1:
        raise DomainError("branch index starts at 1")
    if not tol >= 0:
        raise DomainError("tol must be non-negative")
    edge = -abs(w)
    v0 = -math.sqrt(approx_v_squared(n, w))
    half = max(0.05, 0.1 / math.sqrt(n))

    def f(v):
        return F(v, w)

    if n == 1:
        lo0, hi0 = v0 - half, min(v0 + half, edge)
        if (f(lo0) > 0) == (f(hi0) > 0):
            near = _edge_root(f, edge, half)
            if near is not None:
                return CurveSample(n=n, w=w, v_exact=near, v_approx=v0,
                                   rel_error=abs(near - v0) / abs(near))

    for _ in range(BRACKET_EXPANSIONS + 1):
        lo = v0 - half
        hi = min(v0 + half, edge)
        f_lo, f_hi = f(lo), f(hi)
        if (f_lo > 0) != (f_hi > 0) or f_lo == 0 or f_hi == 0:
            break
        half *= BRACKET_GROWTH
    else:
        raise BracketError(f"no sign change of F around branch {n} at w = {w}")

    root = _bisect(f, lo, hi, f_lo, f_hi, v_interval, tol)
    # the seed neighbours fence the branch: a root outside belongs elsewhere
    upper = edge if n == 1 else -0.5 * (math.sqrt(approx_v_squared(n - 1, w)) - v0)
    lower = -0.5 * (math.sqrt(approx_v_squared(n + 1, w)) - v0)
    if not (lower < root and (root <= edge if n == 1 else root < upper)):
        raise BracketError(
            f"root {root} at w = {w} falls outside the window of branch {n}")
    return CurveSample(n=n, w=w, v_exact=root, v_approx=v0,
                       rel_error=abs(root - v0) / abs(root))


def trace_curve(n: int, w_min: float, w_max: float, step: float,
                tol: float = 0.0) -> list[CurveSample]:
    if not step > 0:
        raise DomainError("step must be positive")
    if w_max < w_min:
        raise DomainError("need w_min <= w_max")
    count = int(round((w_max - w_min) / step)) + 1
    out = []
    for w in np.linspace(w_min, w_max, count) if count > 1 else [w_min]:
        w = float(w)
        try:
            out.append(solve_branch(n, w, tol))
        except (BracketError, AccuracyError) as exc:
            raise type(exc)(f"branch {n}, w = {w}: {exc}") from exc
    return out


# --- effective quantum number -------------------------------------------------

def neff_zero(n: int) -> float:
    if n < 1:
        raise DomainError("level index starts at 1")
    return n - 0.5 + TANH1 / 2.0


def neff_first(p: PhysicalParams, n: int) -> float:
    """First iterate written out in closed form, with n in place of n_eff.

    The constant offset is dropped inside the V2-dependent terms, exactly as in
    the printed closed form; this differs slightly from one application of
    :func:`neff_map` to :func:`neff_zero`.
    """
    if n < 1:
        raise DomainError("level index starts at 1")
    if p.v1 == 0:
        raise DomainError("V1 = 0 gives no energy scale")
    r = p.mass ** 4 * n / (p.hbar ** 8 * p.v1 ** 2)
    return (n - 0.5 + 16.0 * p.v2 ** 2 * r ** (1.0 / 3.0)
            + 0.5 * math.tanh(1.0 + (2.0 + n) / (1.0 + n) * 4.0 * p.v2 * r ** (1.0 / 6.0)))


def w_of_neff(p: PhysicalParams, n_eff: float) -> float:
    delta = model.delta_from_neff(p, n_eff)
    return 4.0 * SQRT2 * p.mass * p.v2 / (math.sqrt(delta) * p.hbar ** 2)


def neff_map(p: PhysicalParams, n: int, n_eff: float) -> float:
    """One step n_eff -> approx_v_squared(n, w(n_eff))."""
    return approx_v_squared(n, w_of_neff(p, n_eff))


def neff_iterate(p: PhysicalParams, n: int, k_max: int = 50, tol: float = 1e-13,
                 ceiling: float | None = None) -> IterationTrace:
    """Successive approximations of n_eff starting from the w = 0 seed.

    Stops after ``k_max`` steps or once successive energies differ by less
    than ``tol``. A sign flip of the increment that fails to shrink it triggers
    a half step.
    """
    p.require_bound()
    if n < 1:
        raise DomainError("level index starts at 1")
    ceiling = 10.0 * n + 100.0 if ceiling is None else ceiling
    x = neff_zero(n)
    trace = IterationTrace([(0, x, model.energy_from_neff(p, x))])
    prev_step = None
    for k in range(1, k_max + 1):
        step = neff_map(p, n, x) - x
        if prev_step is not None and step * prev_step < 0 and abs(step) >= abs(prev_step):
            step *= 0.5
        x = x + step
        if not (0.0 < x < ceiling) or not math.isfinite(x):
            raise DivergenceError(f"n_eff iterate {x} left (0, {ceiling}) at k = {k}")
        e = model.energy_from_neff(p, x)
        trace.iterates.append((k, x, e))
        prev_step = step
        if abs(e - trace.iterates[-2][2]) < tol:
            break
    return trace


# --- physical spectrum -------------------------------------------------------

def _scan_coeffs(p):
    """v^2 = A/delta^3 and w^2 = B/delta."""
    h4 = p.hbar ** 4
    return 8.0 * p.mass ** 2 * p.v1 ** 2 / h4, 32.0 * p.mass ** 2 * p.v2 ** 2 / h4


def _g_exact(p, n_eff):
    return F(*_vw(p, n_eff))


def _vw(p, n_eff):
    pt = model.aux_from_delta(p, model.delta_from_neff(p, n_eff))
    return pt.v, pt.w


def exact_neffs(p: PhysicalParams, n_max: int, tol: float = 1e-14) -> list[float]:
    """v^2 at the first n_max roots of F along the physical cubic.

    The cubic is walked in n_eff from the wedge boundary (v^2 = w^2) upwards;
    v^2 - w^2 grows monotonically along it, so the k-th sign change is level k.
    """
    p.require_bound()
    a_coef, b_coef = _scan_coeffs(p)
    start = b_coef ** 1.5 / math.sqrt(a_coef) if b_coef > 0 else 0.0
    x0 = start * (1.0 + 1e-12) + 1e-9
    limit = start + 1.5 * (n_max + 2) + 2.0
    g = lambda t: _g_exact(p, t)
    roots = []
    # F -> +1 on the boundary itself. When V2 < 0 the lowest root can sit
    # within rounding of the boundary, so approach it geometrically first.
    gap_min = max(start * 8.0 * np.finfo(float).eps, 1e-300)
    probes = [start + d for d in np.geomspace(gap_min, x0 - start, 60)]
    probes[-1] = x0
    prev_x, prev_g = start, 1.0
    for xp in probes:
        gp = g(xp)
        if (gp > 0) != (prev_g > 0) or gp == 0:
            if prev_x == start:
                roots.append(0.5 * (start + xp))  # unresolvable from the boundary
            else:
                roots.append(_bisect(g, prev_x, xp, prev_g, gp, tol * max(1.0, xp)))
        prev_x, prev_g = xp, gp
    x, gx = x0, prev_g
    while len(roots) < n_max:
        x_next = x + SCAN_STEP
        if x_next > limit:
            raise RootError(f"only {len(roots)} roots found below n_eff = {limit}",
                            branch=len(roots) + 1)
        g_next = g(x_next)
        if (gx > 0) != (g_next > 0) or g_next == 0:
            roots.append(_bisect(g, x, x_next, gx, g_next, tol * max(1.0, x_next)))
        x, gx = x_next, g_next
    return roots[:n_max]


def _approx10_neff(p, n):
    """Intersection of the tanh approximation with the cubic, in n_eff."""
    if p.v2 == 0:
        return neff_zero(n)
    a_coef, b_coef = _scan_coeffs(p)
    c2 = b_coef / a_coef ** (1.0 / 3.0)  # w^2 = c2 * n_eff^(1/3)

    def neff_at_nu(nu):
        # n_eff = u^3 with u^3 - c2 u - nu = 0, largest real root
        r = np.roots([1.0, 0.0, -c2, -nu])
        u = max(z.real for z in r if abs(z.imag) < 1e-9 * max(1.0, abs(z.real)))
        return u ** 3

    lo, hi = neff_at_nu(n - 1.0), neff_at_nu(float(n))
    h = lambda t: t - neff_map(p, n, t)
    lo = max(lo, 1e-300)
    return brentq(h, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)


def bound_states(p: PhysicalParams, n_max: int, method: Method = Method.EXACT,
                 tol: float = 1e-13, iterations: int = 3) -> list[EnergyLevel]:
    """Bound-state levels 1..n_max.

    ``Method.EXACT`` locates roots of the spectrum equation along the cubic,
    ``Method.APPROX10`` intersects the tanh approximation with the cubic and
    ``Method.ITERATION`` runs ``iterations`` successive approximations.
    """
    p.require_bound()
    if n_max < 1:
        raise DomainError("n_max must be at least 1")
    if method is Method.EXACT:
        neffs = exact_neffs(p, n_max, tol=min(tol, 1e-13))
        levels = [EnergyLevel(n, model.energy_from_neff(p, x), x, method)
                  for n, x in enumerate(neffs, 1)]
    elif method is Method.APPROX10:
        levels = []
        for n in range(1, n_max + 1):
            x = _approx10_neff(p, n)
            levels.append(EnergyLevel(n, model.energy_from_neff(p, x), x, method))
    elif method is Method.ITERATION:
        levels = []
        for n in range(1, n_max + 1):
            _, x, e = neff_iterate(p, n, k_max=iterations, tol=0.0).last
            levels.append(EnergyLevel(n, e, x, method, iterations=iterations))
    else:
        raise DomainError(f"method {method} is not handled here")
    for lo, hi in zip(levels, levels[1:]):
        if not lo.energy < hi.energy:
            raise RootError(f"levels {lo.n} and {hi.n} are not ordered", branch=hi.n)
    return levels


# --- expansion in powers of n^(1/3) ------------------------------------------

def fit_expansion(values) -> ExpansionFit:
    """Least-squares fit of n_eff - n = a0 + a1 n^(1/3) + a2 n^(-1/3) + a3 n^(-2/3)."""
    data = np.asarray(list(values), dtype=float)
    if data.ndim != 2 or data.shape[0] < 5 or len(set(data[:, 0])) < 5:
        raise DomainError("need at least 5 points with distinct n")
    n, neff = data[:, 0], data[:, 1]
    c = n ** (1.0 / 3.0)
    design = np.column_stack([np.ones_like(n), c, 1.0 / c, 1.0 / c ** 2])
    if np.linalg.matrix_rank(design) < 4:
        raise SingularFitError("design matrix is rank deficient")
    coef, *_ = np.linalg.lstsq(design, neff - n, rcond=None)
    fit = ExpansionFit(*map(float, coef), residual_rms=0.0)
    resid = fit.predict(n) - neff
    return ExpansionFit(*map(float, coef), residual_rms=float(np.sqrt(np.mean(resid ** 2))))
