import math

from hypothesis import given, settings
from hypothesis import strategies as st

from cesolve import model, spectrum
from cesolve.model import PhysicalParams
from cesolve.specfun import erf, hermite_h, hermite_recurrence_step
from cesolve.spectrum import F

v1s = st.floats(-5.0, -0.2)
v2s = st.floats(-1.0, 1.0)
pos = st.floats(0.5, 2.0)
deltas = st.floats(0.2, 5.0)


@given(v1s, v2s, pos, pos, deltas)
def test_order_is_v2_minus_w2_minus_one(v1, v2, m, hb, d):
    p = PhysicalParams(v1=v1, v2=v2, mass=m, hbar=hb)
    s = model.spectral_from_delta(p, d)
    pt = model.aux_from_spectral(p, s)
    assert math.isclose(s.a, pt.v ** 2 - pt.w ** 2 - 1, rel_tol=1e-9, abs_tol=1e-9 * (1 + pt.v ** 2))


@given(v1s, v2s, pos, pos, deltas)
def test_hermite_argument_is_sqrt2_v(v1, v2, m, hb, d):
    p = PhysicalParams(v1=v1, v2=v2, mass=m, hbar=hb)
    s = model.spectral_from_delta(p, d)
    pt = model.aux_from_spectral(p, s)
    y0 = (s.delta * s.gamma - 2 * s.alpha) / (math.sqrt(2) * s.delta ** 1.5)
    assert math.isclose(y0, math.sqrt(2) * pt.v, rel_tol=1e-11, abs_tol=1e-11)


@given(v1s, v2s, deltas, st.floats(0.3, 4.0))
def test_scale_invariance_of_aux_point(v1, v2, d, lam):
    p = PhysicalParams(v1=v1, v2=v2)
    q = PhysicalParams(v1=v1, v2=v2, mass=lam, hbar=math.sqrt(lam))
    a, b = model.aux_from_delta(p, d), model.aux_from_delta(q, d)
    assert math.isclose(a.v, b.v, rel_tol=1e-12) and math.isclose(a.w, b.w, rel_tol=1e-12, abs_tol=1e-14)


@settings(max_examples=60)
@given(st.floats(-2.5, 8.0), st.floats(-2.5, 2.5))
def test_hermite_three_term_recurrence(nu, z):
    up = hermite_h(nu + 1, z).value
    step = hermite_recurrence_step(nu, z, hermite_h(nu, z).value, hermite_h(nu - 1, z).value)
    assert abs(up - step) <= 1e-9 * max(1.0, abs(up))


@given(st.floats(-4.0, 4.0))
def test_spectral_function_positive_on_wedge_lines(w):
    assert F(w, w) > 0
    assert F(-abs(w), abs(w)) > 0


@given(st.floats(-4.0, 4.0))
def test_spectral_function_is_one_on_upper_line(w):
    assert math.isclose(F(w, w), 1.0, abs_tol=1e-10)


@given(st.floats(-8.0, 8.0))
def test_erf_odd_and_bounded(x):
    assert erf(-x) == -erf(x)
    assert abs(erf(x)) <= 1.0


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 6), st.floats(-2.5, 2.5))
def test_branch_root_changes_sign(n, w):
    v = spectrum.solve_branch(n, w).v_exact
    assert v <= -abs(w)
    d = v * v - w * w - n
    assert -1.0 - 1e-10 < d <= 1e-10
    eps = 1e-9 * max(1.0, abs(v))
    lo, hi = F(v - eps, w), F(min(v + eps, -abs(w)), w)
    assert (lo > 0) != (hi > 0) or abs(F(v, w)) < 1e-8


@settings(max_examples=15, deadline=None)
@given(st.floats(-3.0, -0.5), st.floats(-0.6, 0.6), st.floats(0.6, 1.8))
def test_levels_scale_invariant(v1, v2, lam):
    p = PhysicalParams(v1=v1, v2=v2)
    q = PhysicalParams(v1=v1, v2=v2, mass=lam, hbar=math.sqrt(lam))
    for a, b in zip(spectrum.bound_states(p, 2), spectrum.bound_states(q, 2)):
        assert math.isclose(a.energy, b.energy, rel_tol=1e-9)
