"""Acceptance criteria as callable checks.

Each check returns a :class:`CriterionResult`. Thresholds live in
``THRESHOLDS`` and can be overridden per run (used by ``cesolve verify``
to demonstrate that a tightened tolerance is reported as a failure).
"""
from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import model, oracle, spectrum, wavefunction
from .model import Method, PhysicalParams
from .specfun import erf, hermite_h

C0_TANH = spectrum.C0_TANH


@dataclass
class CriterionResult:
    id: int
    name: str
    passed: bool
    measured: float
    threshold: float
    seconds: float
    time_limit: float | None = None
    detail: dict = field(default_factory=dict)

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        limit = f" (limit {self.time_limit:g} s)" if self.time_limit else ""
        return (f"[{status}] criterion {self.id:2d} {self.name}: measured {self.measured:.3e}"
                f" vs threshold {self.threshold:.3e}, {self.seconds:.2f} s{limit}")

    def as_dict(self):
        d = asdict(self)
        d["detail"] = {k: _jsonable(v) for k, v in self.detail.items()}
        return d


def _jsonable(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    return v


THRESHOLDS = {
    1: 1e-10,
    2: 1e-12,
    3: 5e-4,
    4: 1e-8,
    5: 1e-5,
    6: 1e-3,
    7: 1e-2,
    8: 0.0,
    9: 0.05,
    10: 1e-6,
    11: 5e-3,
}

TIME_LIMITS = {1: 1.0, 2: 1.0, 3: 30.0, 5: 120.0, 6: 60.0}

ORACLE_DRIFT_LIMIT = 1e-6


def _timed(cid, name, fn, thresholds):
    tol = thresholds.get(cid, THRESHOLDS[cid])
    t0 = time.perf_counter()
    passed, measured, detail = fn(tol)
    dt = time.perf_counter() - t0
    limit = TIME_LIMITS.get(cid)
    if limit is not None and dt > limit:
        passed = False
        detail["timeout"] = True
    return CriterionResult(cid, name, bool(passed), float(measured), tol, dt, limit, detail)


# --- individual criteria ------------------------------------------------------

def boundary_identities(tol):
    worst_eq, worst_opp = 0.0, 0.0
    for w in (-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0):
        worst_eq = max(worst_eq, abs(spectrum.F(w, w) - 1.0))
        ref = 1.0 + math.sqrt(2 * math.pi) * w * math.exp(2 * w * w) * (erf(math.sqrt(2) * w) + 1.0)
        worst_opp = max(worst_opp, abs(spectrum.F(-w, w) / ref - 1.0))
    worst = max(worst_eq, worst_opp)
    return worst <= tol, worst, {"abs_err_v_eq_w": worst_eq, "rel_err_v_eq_minus_w": worst_opp}


def _hermite_poly(n, z):
    h_prev, h = 0.0, 1.0
    for k in range(n):
        h_prev, h = h, 2 * z * h - 2 * k * h_prev
    return h


def integer_order(tol):
    worst = 0.0
    for n in range(11):
        for z in np.linspace(-5, 5, 41):
            ref = _hermite_poly(n, z)
            got = hermite_h(float(n), float(z)).value
            err = abs(got - ref)
            if abs(ref) > 1.0:
                err /= abs(ref)
            worst = max(worst, err)
    return worst <= tol, worst, {}


def approximation_accuracy(tol):
    worst, where = 0.0, None
    for n in range(1, 9):
        for smp in spectrum.trace_curve(n, -3.0, 3.0, 0.25, tol=0.0):
            if smp.rel_error > worst:
                worst, where = smp.rel_error, (n, smp.w)
    return worst <= tol, worst, {"worst_at_n_w": where}


def _physical_ratio(v, w, mass, hbar, delta):
    v1 = v * delta ** 1.5 * hbar ** 2 / (2 * math.sqrt(2) * mass)
    v2 = w * math.sqrt(delta) * hbar ** 2 / (4 * math.sqrt(2) * mass)
    p = PhysicalParams(v1=v1, v2=v2, mass=mass, hbar=hbar)
    s = model.spectral_from_delta(p, delta)
    t1, t2 = spectrum.physical_terms(s)
    return s.a, spectrum.spectral_function_physical(s) / max(abs(t1), abs(t2))


def form_equivalence(tol, samples=50, seed=7):
    """Roots of F on random branches, pushed through random (m, hbar, delta).

    Besides the scaled residual, the change of that residual across one ulp
    of v is recorded: near integer a at large w the expression is so steep
    that this floor can exceed the tolerance.
    """
    rng = np.random.default_rng(seed)
    worst, floor_at_worst, worst_floor, count, tries, over = 0.0, 0.0, 0.0, 0, 0, []
    while count < samples:
        tries += 1
        if tries > 50 * samples:
            return False, math.inf, {"error": "too few samples with |a| > 0.1"}
        n = int(rng.integers(1, 9))
        w = float(rng.uniform(-3, 3))
        v = spectrum.solve_branch(n, w, v_interval=0.0).v_exact
        mass, hbar, delta = rng.uniform(0.5, 2), rng.uniform(0.5, 2), rng.uniform(0.3, 3)
        a, r = _physical_ratio(v, w, mass, hbar, delta)
        if abs(a) <= 0.1:
            continue
        count += 1
        floor = max(abs(_physical_ratio(np.nextafter(v, side), w, mass, hbar, delta)[1] - r)
                    for side in (-math.inf, math.inf))
        worst_floor = max(worst_floor, floor)
        if abs(r) > tol:
            over.append((n, w, a, abs(r), floor))
        if abs(r) > worst:
            worst, floor_at_worst = abs(r), floor
    return worst <= tol, worst, {"samples": count, "one_ulp_change_at_worst": floor_at_worst,
                                 "max_one_ulp_change": worst_floor,
                                 "over_tolerance(n,w,a,value,one_ulp_change)": over}


def oracle_agreement(tol, v2_values=(-0.5, 0.0, 0.5), n_max=3):
    worst, drift, rows = 0.0, 0.0, []
    for v2 in v2_values:
        p = PhysicalParams(v1=-2.0, v2=v2)
        cfg = oracle.OracleConfig.for_params(p, n_max)
        orc = oracle.eigenvalues_numeric(p, n_max, cfg)
        fine = oracle.eigenvalues_numeric(p, n_max, cfg.refined(2))
        ex = spectrum.bound_states(p, n_max)
        for a, b, e in zip(orc, fine, ex):
            rel = abs(e.energy - a.energy) / abs(a.energy)
            d = abs(a.energy - b.energy) / abs(b.energy)
            worst, drift = max(worst, rel), max(drift, d)
            rows.append((v2, a.n, e.energy, a.energy, rel, d))
    ok = worst <= tol and drift <= ORACLE_DRIFT_LIMIT
    return ok, worst, {"grid_doubling_drift": drift, "drift_limit": ORACLE_DRIFT_LIMIT,
                       "rows(v2,n,E_exact,E_oracle,rel,drift)": rows}


def iteration_figure(tol, n=2):
    worst, monotone, bad = 0.0, True, []
    for v2 in np.round(np.arange(-1.0, 1.0001, 0.1), 10):
        p = PhysicalParams(v1=-2.0, v2=float(v2))
        exact = spectrum.bound_states(p, n)[n - 1].energy
        its = spectrum.neff_iterate(p, n, k_max=3, tol=0.0).iterates
        errs = [abs(e - exact) for _, _, e in its]
        errs += [errs[-1]] * (4 - len(errs))  # converged early (V2 = 0)
        rel3 = errs[3] / abs(exact)
        worst = max(worst, rel3)
        if not (errs[2] <= errs[1] and errs[3] <= errs[2]):
            monotone = False
            bad.append(float(v2))
    return worst <= tol and monotone, worst, {"monotone_k1_to_k3": monotone,
                                              "non_monotone_v2": bad}


def inverse_sqrt_reduction(tol):
    p = PhysicalParams(v1=-1.0)
    worst, rows = 0.0, []
    for lev in spectrum.bound_states(p, 5):
        ref = model.energy_from_neff(p, lev.n - 1.0 / (2.0 * math.pi))
        rel = abs(lev.energy / ref - 1.0)
        worst = max(worst, rel)
        rows.append((lev.n, lev.energy, ref, rel))
    return worst <= tol, worst, {"rows(n,E_exact,E_formula,rel)": rows}


def level_raising(tol):
    base = spectrum.bound_states(PhysicalParams(v1=-10.0), 2)
    worst = -math.inf
    below_v0 = True
    for v2 in (-1.0, -0.5, 0.5, 1.0):
        p = PhysicalParams(v1=-10.0, v2=v2)
        for lev, ref in zip(spectrum.bound_states(p, 2), base):
            # measured: largest amount by which a level falls below its V2 = 0 value
            worst = max(worst, ref.energy - lev.energy)
            below_v0 &= lev.energy < p.v0
    return worst <= tol and below_v0, worst, {"all_below_v0": below_v0}


def asymptote_constant(tol, n=8, w_abs=6.0):
    devs = {}
    for w in (-w_abs, w_abs):
        v = spectrum.solve_branch(n, w).v_exact
        devs[w] = v * v - w * w - n - C0_TANH
    worst = max(abs(d) for d in devs.values())
    return worst <= tol, worst, {"signed_deviation_by_w": devs}


def wavefunction_validity(tol, v2_values=(-0.5, 0.0, 0.5), n_max=3):
    form = wavefunction.canonical_form()
    worst_res, worst_origin, worst_tail, min_frac = 0.0, 0.0, 0.0, math.inf
    xs = np.linspace(0.1, 10.0, 100)
    for v2 in v2_values:
        p = PhysicalParams(v1=-2.0, v2=v2)
        for lev in spectrum.bound_states(p, n_max):
            e = lev.energy
            worst_res = max(worst_res, max(wavefunction.residual(p, e, form, x) for x in xs))
            x_far = wavefunction.far_point(p, e)
            vals = wavefunction.psi_grid(p, e, form, np.geomspace(0.01, x_far, 600))
            peak = np.max(np.abs(vals))
            worst_origin = max(worst_origin, abs(vals[0]) / peak)
            worst_tail = max(worst_tail, abs(vals[-1]) / peak)
            a = model.spectral_from_energy(p, e).a
            min_frac = min(min_frac, abs(a - round(a)))
    ok = (worst_res <= tol and worst_origin <= 0.05 and worst_tail <= 1e-4
          and min_frac > 1e-6)
    return ok, worst_res, {"origin_ratio": worst_origin, "tail_ratio": worst_tail,
                           "min_distance_of_a_from_integer": min_frac}


def expansion_fit(tol):
    p = PhysicalParams(v1=-2.0, v2=0.5)
    data = [(n, spectrum.neff_iterate(p, n, k_max=200).last[1]) for n in range(1, 11)]
    fit = spectrum.fit_expansion(data)
    n = np.array([d[0] for d in data], float)
    y = np.array([d[1] for d in data])
    rel = float(np.sqrt(np.mean(((fit.predict(n) - y) / y) ** 2)))
    exact = [(lev.n, lev.n_eff) for lev in spectrum.bound_states(p, 10)]
    ye = np.array([d[1] for d in exact])
    rel_exact = float(np.sqrt(np.mean(((fit.predict(n) - ye) / ye) ** 2)))
    return rel <= tol, rel, {"coefficients": [fit.a0, fit.a1, fit.a2, fit.a3],
                             "rel_rms_vs_exact_roots": rel_exact}


CRITERIA = [
    (1, "boundary identities of F", boundary_identities),
    (2, "integer-order Hermite reduction", integer_order),
    (3, "tanh approximation accuracy", approximation_accuracy),
    (4, "equivalence of the two spectrum forms", form_equivalence),
    (5, "oracle cross-validation", oracle_agreement),
    (6, "third iteration vs exact (n=2)", iteration_figure),
    (7, "V2=0 reduction to n - 1/(2 pi)", inverse_sqrt_reduction),
    (8, "level raising by V2", level_raising),
    (9, "hyperbola asymptote constant", asymptote_constant),
    (10, "closed-form wavefunction validity", wavefunction_validity),
    (11, "expansion fit of n_eff", expansion_fit),
]


def run(ids=None, thresholds=None) -> list[CriterionResult]:
    thresholds = {**THRESHOLDS, **(thresholds or {})}
    out = []
    for cid, name, fn in CRITERIA:
        if ids is not None and cid not in ids:
            continue
        out.append(_timed(cid, name, fn, thresholds))
    return out


def run_one(cid, thresholds=None) -> CriterionResult:
    return run([cid], thresholds)[0]
