import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from atom_mirror.errors import DegenerateDenominator, InsufficientSamples, ZeroDetuning, ZeroDriving
from atom_mirror.lindblad import steady_population
from atom_mirror.mirror_em import RadiativeCorrection, radiative_correction
from atom_mirror.params import FIG4, FIG5, AtomParams
from atom_mirror.steady_closed import (effective_detunings, extrema_offset, is_dark_state, modulation_metrics,
                                       p3_closed, p3_large_detuning, p3_weak_detuning)

rates = st.floats(0.5, 30)
rabi = st.floats(0.1, 30)
det = st.floats(-20, 20)
dist = st.floats(0.05, 60)


@st.composite
def points(draw):
    p = AtomParams(draw(rabi), draw(rabi), draw(det), draw(det), draw(rates), draw(rates))
    return p, radiative_correction(draw(dist), p)


def free(p, shift=0.0):
    return RadiativeCorrection(p.gamma1, p.gamma2, shift, math.inf)


def test_effective_detunings():
    rc = radiative_correction(1.3, FIG4)
    e = effective_detunings(FIG4, rc)
    assert e.dbar1 == FIG4.delta1 - rc.shift
    assert e.dbar1 - e.dbar2 == pytest.approx(FIG4.delta1 - FIG4.delta2, rel=1e-15)


@pytest.mark.parametrize("common", [0.0, 2.0, -7.5])
def test_dark_state_exact_zero(common):
    p = FIG4.replace(delta1=common, delta2=common)
    assert p3_closed(p, radiative_correction(3.3, p)) == 0.0
    assert is_dark_state(p)


def test_fig4_matches_liouvillian():
    rc = radiative_correction(5 * 2 * math.pi, FIG4)
    assert p3_closed(FIG4, rc) == pytest.approx(steady_population(FIG4, rc), abs=1e-8)
    # frozen from the Liouvillian solve
    assert p3_closed(FIG4, rc) == pytest.approx(0.037623452658921724, rel=1e-12)


def test_vectorised_over_distance():
    k = np.linspace(1, 20, 7)
    rc = radiative_correction(k, FIG4)
    many = p3_closed(FIG4, rc)
    one = [p3_closed(FIG4, radiative_correction(float(x), FIG4)) for x in k]
    np.testing.assert_allclose(many, one, rtol=1e-15)


def test_zero_driving_rejected():
    p = FIG4.replace(omega1=0.0, omega2=0.0)
    with pytest.raises(DegenerateDenominator):
        p3_closed(p, radiative_correction(2.0, p))
    with pytest.raises(ZeroDriving):
        p3_weak_detuning(p, radiative_correction(2.0, p))


def test_single_laser_pumps_out():
    p = FIG4.replace(omega1=0.0)
    assert p3_closed(p, radiative_correction(2.0, p)) == 0.0


# --- weak-detuning approximation ------------------------------------------

@pytest.mark.parametrize("k", [1.0, 2.5, 7.0, 19.0, 44.0])
def test_weak_equal_rabi_is_flat(k):
    p = FIG5.replace(omega1=10.0)
    assert p3_weak_detuning(p, radiative_correction(k, p)) == pytest.approx(0.1**2 / 10.0**2, rel=1e-13)


def test_weak_dark():
    p = FIG4.replace(delta2=FIG4.delta1)
    assert p3_weak_detuning(p, radiative_correction(3.0, p)) == 0.0


def test_closed_form_near_flat_at_equal_rabi():
    p = FIG5.replace(omega1=10.0)
    k = np.linspace(2 * np.pi, 12 * np.pi, 500)
    vals = p3_closed(p, radiative_correction(k, p))
    np.testing.assert_allclose(vals, 1e-4, rtol=0.05)


def test_weak_regime_agreement():
    rng = np.random.default_rng(4)
    worst = 0.0
    for _ in range(500):
        omega = rng.uniform(5, 20)
        o1, o2 = omega * rng.uniform(0.7, 1.4, 2)
        lim = min(o1, o2) / 20
        p = AtomParams(o1, o2, rng.uniform(-lim, lim), rng.uniform(-lim, lim),
                       omega * rng.uniform(0.5, 2), omega * rng.uniform(0.5, 2))
        rc = free(p)
        worst = max(worst, abs(p3_weak_detuning(p, rc) / p3_closed(p, rc) - 1))
    assert worst < 0.10


# --- large-detuning approximation -----------------------------------------

def test_large_symmetric():
    p = AtomParams(3.0, 3.0, 40.0, -40.0, 5.0, 5.0)
    assert p3_large_detuning(p, free(p)) == pytest.approx(9.0 / (4 * 1600.0), rel=1e-14)


def test_large_regime_agreement():
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(500):
        o1, o2, g1, g2 = rng.uniform(0.5, 5, 4)
        m = 20 * max(o1, o2, g1, g2)
        # opposite signs keep the two-photon detuning large as well
        d1, d2 = rng.uniform(m, 5 * m) * rng.choice([-1, 1]) * np.array([1, -1]) * rng.uniform(1, 2, 2)
        p = AtomParams(o1, o2, d1, d2, g1, g2)
        rc = free(p)
        worst = max(worst, abs(p3_large_detuning(p, rc) / p3_closed(p, rc) - 1))
    assert worst < 0.10


def test_large_decays_to_zero():
    p = AtomParams(3.0, 3.0, 1e8, -1e8, 5.0, 5.0)
    assert p3_large_detuning(p, free(p)) < 1e-15


def test_large_zero_detuning():
    p = FIG4.replace(delta1=0.0)
    with pytest.raises(ZeroDetuning):
        p3_large_detuning(p, free(p))


# --- invariants ------------------------------------------------------------

def test_population_bounded_random_draws():
    rng = np.random.default_rng(6)
    for _ in range(10_000):
        p = AtomParams(*rng.uniform(0.01, 30, 2), *rng.uniform(-30, 30, 2), *rng.uniform(0.1, 30, 2))
        v = p3_closed(p, radiative_correction(rng.uniform(0.01, 60), p))
        assert 0.0 <= v <= 0.5


@given(points())
def test_population_bounded(pt):
    p, rc = pt
    assert 0.0 <= p3_closed(p, rc) <= 0.5


@given(points())
def test_exchange_symmetry(pt):
    p, rc = pt
    swapped = AtomParams(p.omega2, p.omega1, p.delta2, p.delta1, p.gamma2, p.gamma1)
    rc_s = RadiativeCorrection(rc.gamma_bar_2, rc.gamma_bar_1, rc.shift, rc.k31r)
    assert p3_closed(swapped, rc_s) == pytest.approx(p3_closed(p, rc), rel=1e-11, abs=1e-300)


@given(points(), st.floats(-50, 50))
def test_global_detuning_shift(pt, c):
    p, rc = pt
    q = p.replace(delta1=p.delta1 + c, delta2=p.delta2 + c)
    rc_q = RadiativeCorrection(rc.gamma_bar_1, rc.gamma_bar_2, rc.shift + c, rc.k31r)
    assert p3_closed(q, rc_q) == pytest.approx(p3_closed(p, rc), rel=1e-9, abs=1e-15)


@given(points())
def test_dark_iff_two_photon_resonance(pt):
    p, rc = pt
    assume(p.delta1 == p.delta2 or abs(p.delta1 - p.delta2) > 1e-100)  # (d1 - d2)^2 must not underflow
    assert (p3_closed(p, rc) == 0.0) == (p.delta1 == p.delta2)


def test_one_sided_trapping():
    rc = radiative_correction(3.0, FIG4)
    vals = [p3_closed(FIG4.replace(omega1=FIG4.omega2 * r), rc) for r in (10, 100, 1000, 10000)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert vals[-1] < 1e-12


# --- modulation metrics ----------------------------------------------------

X = np.linspace(2 * np.pi, 12 * np.pi, 1200)


def test_metrics_pure_standing_wave():
    m = modulation_metrics(X, np.sin(X) ** 2)
    assert m.visibility == pytest.approx(1.0, abs=1e-12)
    assert m.phase == pytest.approx(0.0, abs=1e-12)
    assert m.amplitude == pytest.approx(0.5, rel=1e-3)
    np.testing.assert_allclose(m.maxima, np.pi / 2 + np.pi * np.arange(2, 12), atol=1e-4)


def test_metrics_constant_flagged():
    m = modulation_metrics(X, np.full_like(X, 3.0))
    assert m.visibility == 0.0
    assert not m.phase_defined and math.isnan(m.phase)


def test_metrics_shifted_wave():
    m = modulation_metrics(X, np.sin(X - 0.3) ** 2)
    assert m.phase == pytest.approx(-0.6, abs=1e-6)  # phase at 2 k31 r


@pytest.mark.parametrize("x", [np.linspace(0, 1.5 * np.pi, 500), np.linspace(0, 10 * np.pi, 300)])
def test_metrics_insufficient(x):
    with pytest.raises(InsufficientSamples):
        modulation_metrics(x, np.sin(x) ** 2)


def test_fig5_phase_flip():
    def maxima(o1):
        p = FIG5.replace(omega1=o1)
        return modulation_metrics(X, p3_closed(p, radiative_correction(X, p))).maxima

    below, above = maxima(5.0), maxima(20.0)
    half = np.pi / 2
    assert extrema_offset(below, above) == pytest.approx(half, rel=0.05)
