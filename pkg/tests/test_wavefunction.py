import numpy as np
import pytest

from cesolve import oracle, spectrum, wavefunction
from cesolve.errors import AmbiguityError, DomainError, FormError
from cesolve.model import PhysicalParams
from cesolve.wavefunction import SolutionForm


@pytest.fixture(scope="module")
def form():
    return wavefunction.canonical_form()


def test_selfcheck_selects_one_variant(form):
    assert form.variant_id in wavefunction.VARIANTS
    assert len(wavefunction.VARIANTS) == 24
    # cached: a second call returns the same variant
    assert wavefunction.canonical_form().variant_id == form.variant_id
    again = wavefunction.form_selfcheck(PhysicalParams(v1=-0.9, v2=-0.2), -0.4)
    assert again.variant_id == form.variant_id


def test_selfcheck_ambiguity_when_nothing_passes(form):
    losers = [v for v in wavefunction.VARIANTS if v != form.variant_id][:3]
    with pytest.raises(AmbiguityError):
        wavefunction.form_selfcheck(PhysicalParams(v1=-1.3, v2=0.27), -0.71, losers)


def test_unknown_and_unverified_variants(form):
    with pytest.raises(FormError):
        SolutionForm("nope")
    other = next(v for v in wavefunction.VARIANTS
                 if v != form.variant_id and v not in wavefunction._verified)
    with pytest.raises(FormError):
        wavefunction.psi(PhysicalParams(v1=-1), -0.5, SolutionForm(other), 1.0)


def test_psi_domain(form):
    with pytest.raises(DomainError):
        wavefunction.psi(PhysicalParams(v1=-1), -0.5, form, 0.0)


@pytest.mark.parametrize("c1,c2", [(1.0, 0.0), (0.0, 1.0), (0.7, -1.3)])
def test_residual_small_for_any_energy(form, c1, c2):
    p = PhysicalParams(v1=-1.7, v2=0.3)
    f = form.with_coeffs(c1, c2)
    for e in (-1.1, -0.37):
        for x in (0.3, 1.0, 2.5):
            assert wavefunction.residual(p, e, f, x) < 1e-6


def test_wrong_variant_has_large_residual(form):
    p = PhysicalParams(v1=-1.7, v2=0.3)
    pre, inner, zmap = form.variant_id.split("|")
    flipped = "|".join([pre.replace("+", "#").replace("-", "+").replace("#", "-"), inner, zmap])
    worst = max(wavefunction.residual(p, -0.6, SolutionForm(flipped, 1.0, 0.5), x)
                for x in np.linspace(0.3, 3, 10))
    assert worst >= 1e-2


def test_residual_step_halving(form):
    p = PhysicalParams(v1=-2.0, v2=0.5)
    r1 = wavefunction.residual(p, -1.2, form, 1.5, h=0.04)
    r2 = wavefunction.residual(p, -1.2, form, 1.5, h=0.02)
    # fourth-order stencil: halving h cuts the truncation error by ~16
    assert 8 < r1 / r2 < 32


def test_linearity_in_coefficients(form):
    p = PhysicalParams(v1=-1.2, v2=-0.3)
    e, x = -0.45, 1.7
    a = wavefunction.psi(p, e, form.with_coeffs(1, 0), x)
    b = wavefunction.psi(p, e, form.with_coeffs(0, 1), x)
    ab = wavefunction.psi(p, e, form.with_coeffs(2.5, -0.75), x)
    assert ab == pytest.approx(2.5 * a - 0.75 * b, rel=1e-12)


def test_eigen_and_off_eigen_tails(form):
    p = PhysicalParams(v1=-2.0, v2=0.5)
    lev = spectrum.bound_states(p, 2)[1]
    x_far = wavefunction.far_point(p, lev.energy)
    xs = np.geomspace(0.01, x_far, 400)
    v = wavefunction.psi_grid(p, lev.energy, form, xs)
    assert abs(v[-1]) / np.max(np.abs(v)) < 1e-4
    assert abs(v[0]) / np.max(np.abs(v)) < 0.05
    # halfway between levels the same combination does not decay at the origin
    e_mid = 0.5 * sum(lv.energy for lv in spectrum.bound_states(p, 2))
    w = wavefunction.psi_grid(p, e_mid, form, xs)
    assert abs(w[0]) / np.max(np.abs(w)) > 0.05 or abs(w[-1]) / np.max(np.abs(w)) > 1e-4


@pytest.mark.parametrize("v2", [-0.5, 0.0, 0.5])
def test_node_counts(form, v2):
    p = PhysicalParams(v1=-2.0, v2=v2)
    for lev in spectrum.bound_states(p, 3):
        x_far = wavefunction.far_point(p, lev.energy)
        assert wavefunction.node_count(p, lev.energy, form, x_far) == lev.n - 1


def test_matches_oracle_eigenfunction(form):
    p = PhysicalParams(v1=-2.0, v2=0.5)
    cfg = oracle.OracleConfig.for_params(p, 2)
    for lev in oracle.eigenvalues_numeric(p, 2, cfg):
        x, ref = oracle.eigenfunction_numeric(p, lev.energy, cfg)
        x_far = wavefunction.far_point(p, lev.energy, 15)
        sel = (x > 0.05) & (x < x_far)
        got = wavefunction.psi_grid(p, lev.energy, form, x[sel])
        got /= got[np.argmax(np.abs(got))]
        r = ref[sel] * np.sign(ref[sel][np.argmax(np.abs(got))])
        assert np.max(np.abs(got - r)) < 1e-4

