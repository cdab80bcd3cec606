"""Real-argument special functions: 1/Gamma, erf, Kummer 1F1 and the Hermite
function H_nu(z) of arbitrary real order.

Every evaluator of 1F1 and H_nu returns an :class:`EvalResult` carrying a
heuristic absolute error bound. The bound follows the running sum of term
magnitudes, so cancellation between terms shows up in it directly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_genlaguerre

from .errors import AccuracyError, PoleError

EPS = np.finfo(float).eps

SERIES_RTOL = 1e-17
SERIES_MAX_TERMS = 500
# Taylor series is used for 0 <= z <= SERIES_Z_MAX; beyond that the
# large-argument expansion takes over.
SERIES_Z_MAX = 250.0
ACCURACY_RTOL = 1e-8
POLE_ATOL = 1e-12
# Positive arguments above this go through the integral/recurrence route
# when the 1F1 combination cancels.
HERMITE_REROUTE_Z = 1.5
HERMITE_CANCEL_LIMIT = 1e2
LAGUERRE_NODES = 96


@dataclass(frozen=True)
class Options:
    series_rtol: float = SERIES_RTOL
    max_terms: int = SERIES_MAX_TERMS
    series_z_max: float = SERIES_Z_MAX
    accuracy_rtol: float = ACCURACY_RTOL


DEFAULT_OPTIONS = Options()


@dataclass(frozen=True)
class EvalResult:
    value: float
    est_abs_error: float

    def __float__(self):
        return float(self.value)


def _is_nonpositive_int(x):
    r = round(x)
    return r <= 0 and abs(x - r) < POLE_ATOL


def gamma_recip(x: float) -> float:
    """Return 1/Gamma(x); exactly 0 at x = 0, -1, -2, ..."""
    if _is_nonpositive_int(x):
        return 0.0
    if x > 171.0:
        return math.exp(-math.lgamma(x))
    if x < -170.0:
        # reflection: 1/Gamma(x) = Gamma(1-x) sin(pi x) / pi
        s = math.sin(math.pi * x) / math.pi
        lg = math.lgamma(1.0 - x)
        if lg > 709.0:
            return math.copysign(math.inf, s)
        return math.exp(lg) * s
    return 1.0 / math.gamma(x)


def erf(x: float) -> float:
    return math.erf(x)


def _check_b(b):
    if _is_nonpositive_int(b):
        raise PoleError(f"1F1 undefined for b = {b} (non-positive integer)")


def _series(a, b, z, opts):
    """Taylor sum of M(a, b, z); returns (value, sum of |terms|)."""
    term = 1.0
    total = 1.0
    abs_total = 1.0
    k_safe = max(abs(a), abs(b), abs(z))
    for k in range(opts.max_terms):
        term *= (a + k) / (b + k) * z / (k + 1)
        total += term
        abs_total += abs(term)
        if term == 0.0:
            return total, abs_total
        # stopping is only trusted once the term ratio is monotone decreasing,
        # otherwise a near-integer a makes one tiny term look like convergence
        if k + 1 > k_safe and abs(term) < opts.series_rtol * abs(total):
            return total, abs_total
    raise AccuracyError(
        f"1F1({a}, {b}, {z}) series did not converge in {opts.max_terms} terms")


def _asymptotic(a, b, z, opts):
    """Large positive z expansion of M(a, b, z); returns (value, error estimate)."""
    if z > 700.0:
        raise AccuracyError(f"1F1 argument {z} overflows double precision")
    lg_b = math.lgamma(b)
    sg_b = math.copysign(1.0, math.gamma(b)) if b < 171 else 1.0
    gb = sg_b * math.exp(lg_b) if lg_b < 700 else math.inf

    dom, dom_err = 0.0, 0.0
    ra = gamma_recip(a)
    if ra != 0.0:
        term, s, last = 1.0, 1.0, math.inf
        for k in range(opts.max_terms):
            nxt = term * (b - a + k) * (1 - a + k) / ((k + 1) * z)
            if abs(nxt) > abs(term) or nxt == 0.0:
                last = abs(nxt)
                break
            term = nxt
            s += term
            last = abs(term)
            if abs(term) < EPS * abs(s):
                break
        scale = math.exp(z + (a - b) * math.log(z))
        dom = ra * scale * s
        dom_err = abs(ra * scale) * (last + EPS * abs(s))

    rec, rec_err = 0.0, 0.0
    rba = gamma_recip(b - a)
    if rba != 0.0:
        term, s = 1.0, 1.0
        for k in range(opts.max_terms):
            nxt = term * (a + k) * (a - b + 1 + k) / ((k + 1) * (-z))
            if abs(nxt) > abs(term):
                break
            term = nxt
            s += term
            if term == 0.0 or abs(term) < EPS * abs(s):
                break
        mag = rba * z ** (-a) * s
        rec = math.cos(math.pi * a) * mag
        # Stokes ambiguity of the subdominant term when a is not an integer
        rec_err = abs(math.sin(math.pi * a) * mag) + EPS * abs(mag)

    value = gb * (dom + rec)
    err = abs(gb) * (dom_err + rec_err) + EPS * abs(value)
    return value, err


def _kummer_raw(a, b, z, opts=DEFAULT_OPTIONS):
    """M(a, b, z) without the accuracy check; returns (value, est_abs_error)."""
    if z == 0.0:
        return 1.0, 0.0
    a_poly = _is_nonpositive_int(a)
    if z < 0.0 and not a_poly:
        # Kummer transformation keeps the series free of alternating terms
        v, e = _kummer_raw(b - a, b, -z, opts)
        f = math.exp(z)
        return f * v, f * e
    if abs(z) <= opts.series_z_max or a_poly:
        s, sabs = _series(a, b, z, opts)
        return s, EPS * sabs
    return _asymptotic(a, b, z, opts)


def kummer_1f1(a: float, b: float, z: float,
               opts: Options = DEFAULT_OPTIONS) -> EvalResult:
    """Kummer's confluent hypergeometric function M(a; b; z).

    Raises PoleError for b in {0, -1, -2, ...} and AccuracyError when the
    internal estimate exceeds ``opts.accuracy_rtol`` relative to the value.
    """
    _check_b(b)
    value, err = _kummer_raw(a, b, z, opts)
    if not math.isfinite(value):
        raise AccuracyError(f"1F1({a}, {b}, {z}) is not finite")
    if err > opts.accuracy_rtol * abs(value):
        raise AccuracyError(
            f"1F1({a}, {b}, {z}): estimated error {err:.3g} vs value {value:.3g}")
    return EvalResult(value, err)


def _hermite_kummer(nu, z, opts):
    """Two-term 1F1 form; returns (value, err, cancellation ratio)."""
    r1 = gamma_recip((1.0 - nu) / 2.0)
    r2 = gamma_recip(-nu / 2.0)
    zz = z * z
    t1 = e1 = t2 = e2 = 0.0
    if r1 != 0.0:
        m1, m1e = _kummer_raw(-nu / 2.0, 0.5, zz, opts)
        t1, e1 = r1 * m1, abs(r1) * m1e
    if r2 != 0.0:
        m2, m2e = _kummer_raw((1.0 - nu) / 2.0, 1.5, zz, opts)
        t2, e2 = 2.0 * z * r2 * m2, abs(2.0 * z * r2) * m2e
    pref = 2.0 ** nu * math.sqrt(math.pi)
    diff = t1 - t2
    value = pref * diff
    err = abs(pref) * (e1 + e2 + EPS * (abs(t1) + abs(t2)))
    mag = abs(t1) + abs(t2)
    ratio = mag / abs(diff) if diff != 0.0 else math.inf
    return value, err, ratio


@lru_cache(maxsize=256)
def _laguerre_rule(p):
    s, w = roots_genlaguerre(LAGUERRE_NODES, p)
    return s, w


def _hermite_negative_integral(nu, z):
    """H_nu(z) for nu < 0, z > 0 from its Laplace-type integral.

    H_nu(z) = 1/Gamma(-nu) * int_0^inf t^(-nu-1) exp(-t^2 - 2 t z) dt, with the
    substitution s = 2 z t and a generalized Gauss-Laguerre rule in s.
    """
    p = -nu - 1.0
    s, w = _laguerre_rule(round(p, 15))
    integral = (2.0 * z) ** (-p - 1.0) * float(np.dot(w, np.exp(-s * s / (4.0 * z * z))))
    return gamma_recip(-nu) * integral


def _hermite_recurrence_route(nu, z):
    """H_nu(z) for z > 0 via the integral at negative order plus upward recurrence."""
    if nu < 0.0:
        v = _hermite_negative_integral(nu, z)
        return v, 8 * EPS * abs(v)
    frac = nu - math.floor(nu)
    mu = frac - 1.0
    h_prev = _hermite_negative_integral(mu - 1.0, z)
    h = _hermite_negative_integral(mu, z)
    steps = 0
    while mu < nu - 0.5:
        h_prev, h = h, hermite_recurrence_step(mu, z, h, h_prev)
        mu += 1.0
        steps += 1
    return h, 4 * EPS * (steps + 2) * max(abs(h), abs(h_prev))


def _hermite_polynomial(n, z):
    h_prev, h, mag_prev, mag = 0.0, 1.0, 0.0, 1.0
    for k in range(n):
        h_prev, h = h, 2.0 * z * h - 2.0 * k * h_prev
        mag_prev, mag = mag, 2.0 * abs(z) * mag + 2.0 * k * mag_prev
    return h, 2 * n * EPS * mag


def _hermite_raw(nu, z, opts=DEFAULT_OPTIONS):
    if nu == int(nu) and 0 <= nu <= 100:
        return _hermite_polynomial(int(nu), z)
    value, err, ratio = _hermite_kummer(nu, z, opts)
    if z > HERMITE_REROUTE_Z and ratio > HERMITE_CANCEL_LIMIT:
        value, err = _hermite_recurrence_route(nu, z)
    return value, err


def hermite_h(nu: float, z: float, opts: Options = DEFAULT_OPTIONS) -> EvalResult:
    """Hermite function H_nu(z) of real order nu.

    Computed as

        2^nu sqrt(pi) [M(-nu/2, 1/2, z^2) / Gamma((1-nu)/2)
                       - 2 z M((1-nu)/2, 3/2, z^2) / Gamma(-nu/2)]

    with the reciprocal gammas vanishing exactly at integer orders, so
    nu = 0, 1, 2, ... reproduces the Hermite polynomials (exact integer
    orders go straight to the polynomial recurrence). For z > 0 the two
    terms cancel; when that cancellation is severe the value is recomputed
    from the integral representation at negative order followed by the
    upward recurrence in nu.
    """
    value, err = _hermite_raw(nu, z, opts)
    if not math.isfinite(value):
        raise AccuracyError(f"H_{nu}({z}) is not finite")
    if err > opts.accuracy_rtol * abs(value) and err > 0.0:
        raise AccuracyError(
            f"H_{nu}({z}): estimated error {err:.3g} vs value {value:.3g}")
    return EvalResult(value, err)


def hermite_recurrence_step(nu: float, z: float, h_nu: float, h_nu_minus_1: float) -> float:
    """H_{nu+1}(z) = 2 z H_nu(z) - 2 nu H_{nu-1}(z)."""
    return 2.0 * z * h_nu - 2.0 * nu * h_nu_minus_1


def hermite_h_deriv(nu: float, z: float, opts: Options = DEFAULT_OPTIONS) -> EvalResult:
    """d/dz H_nu(z) = 2 nu H_{nu-1}(z)."""
    r = hermite_h(nu - 1.0, z, opts)
    return EvalResult(2.0 * nu * r.value, abs(2.0 * nu) * r.est_abs_error)
