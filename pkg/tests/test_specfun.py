import math

import mpmath
import numpy as np
import pytest
from scipy.integrate import quad

from cesolve import specfun
from cesolve.errors import AccuracyError, PoleError
from cesolve.specfun import Options, erf, gamma_recip, hermite_h, hermite_h_deriv, kummer_1f1


def hermite_poly(n, z):
    h_prev, h = 0.0, 1.0
    for k in range(n):
        h_prev, h = h, 2 * z * h - 2 * k * h_prev
    return h


def test_gamma_recip_values():
    assert gamma_recip(1.0) == 1.0
    assert gamma_recip(0.5) == pytest.approx(0.5641895835477563, rel=1e-14)
    for x in (0.0, -1.0, -2.0, -7.0, -1.0 + 1e-13):
        assert gamma_recip(x) == 0.0


def test_gamma_recip_against_mpmath():
    for x in np.linspace(-9.7, 30.3, 97):
        assert gamma_recip(x) == pytest.approx(float(mpmath.rgamma(x)), rel=1e-12, abs=1e-300)
    assert gamma_recip(-180.5) == pytest.approx(float(mpmath.rgamma(-180.5)), rel=1e-10)
    assert gamma_recip(200.0) == pytest.approx(float(mpmath.rgamma(200)), rel=1e-10)


def test_erf_values():
    assert erf(0.0) == 0.0
    assert abs(erf(6.0) - 1.0) <= 1e-15
    assert erf(0.7071067812) == pytest.approx(0.6826894921, abs=1e-10)
    assert erf(-0.3) == -erf(0.3)


def test_kummer_simple_cases():
    assert kummer_1f1(0.3, 1.7, 0.0).value == 1.0
    assert kummer_1f1(1.0, 1.0, 2.5).value == pytest.approx(math.exp(2.5), rel=1e-14)
    assert kummer_1f1(-1.0, 0.5, 1.5 ** 2).value == pytest.approx(-3.5, rel=1e-14)


@pytest.mark.parametrize("b", [0.0, -1.0, -4.0])
def test_kummer_pole(b):
    with pytest.raises(PoleError):
        kummer_1f1(0.5, b, 1.0)


def test_kummer_accuracy_error_on_tight_tolerance():
    # heavy cancellation in the series: the estimate cannot meet 1e-20
    with pytest.raises(AccuracyError):
        kummer_1f1(-10.5, 0.5, 30.0, Options(accuracy_rtol=1e-20))


@pytest.mark.parametrize("a", [-4.3, -1.5, -0.2, 0.5, 1.7, 3.25])
@pytest.mark.parametrize("b", [0.5, 1.5, 2.75])
@pytest.mark.parametrize("z", [-30.0, -4.0, -0.5, 0.7, 6.0, 45.0, 300.0])
def test_kummer_against_mpmath(a, b, z):
    ref = float(mpmath.hyp1f1(a, b, z))
    try:
        got = kummer_1f1(a, b, z)
    except AccuracyError:
        # allowed only if the reference itself is tiny compared to the term sizes
        assert abs(ref) < 1e-6 * math.exp(abs(z))
        return
    assert got.value == pytest.approx(ref, rel=1e-9, abs=1e-300)
    assert abs(got.value - ref) <= max(10 * got.est_abs_error, 1e-12 * abs(ref))


def test_kummer_contiguous_relation():
    worst = 0.0
    for a in (-2.5, -0.7, 0.3, 1.9):
        for b in (0.5, 1.5, 3.2):
            for z in (-8.0, -1.0, 0.4, 3.0, 12.0):
                t1 = b * kummer_1f1(a, b, z).value
                t2 = b * kummer_1f1(a - 1, b, z).value
                t3 = z * kummer_1f1(a, b + 1, z).value
                worst = max(worst, abs(t1 - t2 - t3) / max(abs(t1), abs(t2), abs(t3)))
    assert worst <= 1e-10


def test_hermite_integer_orders():
    for n in range(11):
        for z in np.linspace(-5, 5, 41):
            ref = hermite_poly(n, z)
            got = hermite_h(float(n), float(z)).value
            assert abs(got - ref) <= 1e-12 * max(1.0, abs(ref))


def test_hermite_reference_values():
    assert hermite_h(0.0, 3.7).value == 1.0
    assert hermite_h(2.0, 1.0).value == pytest.approx(2.0, rel=1e-15)
    assert hermite_h(-1.0, 0.0).value == pytest.approx(0.8862269255, abs=1e-10)


def test_hermite_minus_one_closed_form():
    for z in (-2.0, -0.5, 0.0, 0.8, 3.0, 7.5):
        ref = math.sqrt(math.pi) / 2 * math.exp(z * z) * math.erfc(z)
        assert hermite_h(-1.0, z).value == pytest.approx(ref, rel=1e-11)


def test_hermite_against_mpmath_grid():
    worst = 0.0
    for nu in np.linspace(-3.0, 12.0, 31):
        for z in np.linspace(-6.0, 9.5, 32):
            ref = float(mpmath.hermite(nu, z))
            got = hermite_h(float(nu), float(z)).value
            worst = max(worst, abs(got - ref) / max(abs(ref), 1e-300))
    assert worst <= 1e-10


def test_hermite_negative_order_integral():
    for nu in (-0.3, -1.0, -1.7, -2.5):
        for z in (-1.0, 0.0, 0.9, 2.5):
            val, _ = quad(lambda t: t ** (-nu - 1) * math.exp(-t * t - 2 * t * z), 0, np.inf,
                          epsabs=0, epsrel=1e-11, limit=200)
            ref = val / math.gamma(-nu)
            assert hermite_h(nu, z).value == pytest.approx(ref, rel=1e-8)


def test_hermite_recurrence_closure():
    worst = 0.0
    for nu in np.linspace(-3.0, 10.0, 27):
        for z in np.linspace(-3.0, 3.0, 13):
            h_up = hermite_h(nu + 1, z).value
            step = specfun.hermite_recurrence_step(nu, z, hermite_h(nu, z).value,
                                                   hermite_h(nu - 1, z).value)
            worst = max(worst, abs(h_up - step) / max(1.0, abs(h_up)))
    assert worst <= 1e-9


def test_recurrence_step_examples():
    assert specfun.hermite_recurrence_step(1.0, 1.0, 2.0, 1.0) == 2.0
    z = 0.37
    assert specfun.hermite_recurrence_step(0.0, z, 1.0, hermite_h(-1.0, z).value) == 2 * z
    # H_0(0) from H_{-1}(0) and H_{-2}(0) through one ladder step
    h_m2 = quad(lambda t: t * math.exp(-t * t), 0, np.inf)[0] / math.gamma(2.0)
    up = specfun.hermite_recurrence_step(-1.0, 0.0, math.sqrt(math.pi) / 2, h_m2)
    assert up == pytest.approx(2 * h_m2, rel=1e-14)
    assert up == pytest.approx(hermite_h(0.0, 0.0).value, rel=1e-12)


def test_hermite_derivative_matches_finite_difference():
    h = 1e-5
    for nu in (-1.4, 0.5, 2.3, 5.8):
        for z in (-1.5, 0.2, 1.9):
            fd = (hermite_h(nu, z + h).value - hermite_h(nu, z - h).value) / (2 * h)
            assert hermite_h_deriv(nu, z).value == pytest.approx(fd, rel=1e-6)


def test_error_estimates_are_nonnegative_and_finite():
    for nu, z in [(3.3, 4.0), (-2.2, -3.0), (7.9, 1.1)]:
        r = hermite_h(nu, z)
        assert r.est_abs_error >= 0 and math.isfinite(r.value)
