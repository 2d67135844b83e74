import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from atom_mirror.dicke import AtomPairConfig, collective_rates, verify_mirror_image
from atom_mirror.errors import NonPositiveSeparation
from atom_mirror.mirror_em import gamma_bar_1, level_shift
from atom_mirror.params import FIG4, MirrorConfig

G = FIG4.gamma1


def test_independent_atoms():
    c = collective_rates(AtomPairConfig(d=1e6), G)
    assert c.gamma_sym == pytest.approx(G, rel=1e-5)
    assert c.gamma_anti == pytest.approx(G, rel=1e-5)
    assert abs(c.dipole_shift) < 1e-5 * G


def test_contact_limit():
    c = collective_rates(AtomPairConfig(d=1e-3 / (2 * math.pi)), G)
    assert c.gamma_anti < 1e-5 * G
    assert c.gamma_sym == pytest.approx(2 * G, rel=1e-5)


@given(st.floats(1e-2, 1e3))
def test_rates_sum(d):
    c = collective_rates(AtomPairConfig(d=d), G)
    assert c.gamma_sym + c.gamma_anti == pytest.approx(2 * G, rel=1e-14)
    assert 0 <= c.gamma_anti <= 2 * G


def test_invalid_separation():
    with pytest.raises(NonPositiveSeparation):
        collective_rates(AtomPairConfig(d=0.0), G)


def test_mirror_image_quarter_wave():
    cfg = MirrorConfig.from_k31r(math.pi / 2)
    pair = collective_rates(AtomPairConfig(d=2 * cfg.r), G)
    assert pair.gamma_anti == pytest.approx(1.1519817754635067 * G, rel=1e-13)
    assert gamma_bar_1(cfg, G) == pytest.approx(1.1519817754635067 * G, rel=1e-13)
    assert pair.dipole_shift == pytest.approx(level_shift(cfg, G), rel=1e-13)


def test_mirror_image_contact():
    cfg = MirrorConfig.from_k31r(1e-3)
    report = verify_mirror_image(cfg, G)
    pair = collective_rates(AtomPairConfig(d=2 * cfg.r), G)
    assert pair.gamma_anti < 1e-5 * G and gamma_bar_1(cfg, G) < 1e-5 * G
    assert abs(report.rate_residuals[0]) < 1e-9 * G


def test_mirror_image_random_distances():
    rng = np.random.default_rng(9)
    report = verify_mirror_image([MirrorConfig(r) for r in rng.uniform(0.05, 20, 100)], G)
    assert report.passed
    assert report.max_residual < 1e-12 * G
    assert len(report.k31r) == 100
