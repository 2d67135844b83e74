"""Collective decay of two dipole-coupled two-level atoms.

Cooperative rate and dipole-dipole frequency shift for parallel dipoles
oriented perpendicular to the interatomic axis, written with spherical
Bessel functions of ``v = k d``:

    Gamma_12 = (3 Gamma / 2) [ j0(v) - j1(v) / v ]
    Omega_12 = (3 Gamma / 4) [ y0(v) - y1(v) / v ]

The symmetric Dicke state decays at ``Gamma + Gamma_12`` and the
antisymmetric one at ``Gamma - Gamma_12``; their energies are shifted by
``+Omega_12`` and ``-Omega_12``.
"""
from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np
from scipy.special import spherical_jn, spherical_yn

from . import mirror_em
from .errors import NonPositiveSeparation
from .params import MirrorConfig


@dataclass(frozen=True)
class AtomPairConfig:
    d: float
    k: float = 2 * np.pi


@dataclass(frozen=True)
class CollectiveRates:
    gamma_sym: float
    gamma_anti: float
    dipole_shift: float   # energy shift of the antisymmetric state


def cooperative_rate(v, gamma):
    return 1.5 * gamma * (spherical_jn(0, v) - spherical_jn(1, v) / v)


def cooperative_shift(v, gamma):
    return 0.75 * gamma * (spherical_yn(0, v) - spherical_yn(1, v) / v)


def collective_rates(cfg: AtomPairConfig, gamma: float) -> CollectiveRates:
    if not (cfg.d > 0 and cfg.k > 0):
        raise NonPositiveSeparation(f"need d > 0 and k > 0, got d={cfg.d}, k={cfg.k}")
    v = cfg.k * cfg.d
    g12 = float(cooperative_rate(v, gamma))
    return CollectiveRates(gamma_sym=gamma + g12, gamma_anti=gamma - g12,
                           dipole_shift=-float(cooperative_shift(v, gamma)))


@dataclass(frozen=True)
class MirrorImageReport:
    k31r: np.ndarray
    rate_residuals: np.ndarray
    shift_residuals: np.ndarray
    tol: float

    @property
    def max_residual(self) -> float:
        return float(max(np.max(np.abs(self.rate_residuals)), np.max(np.abs(self.shift_residuals))))

    @property
    def passed(self) -> bool:
        return self.max_residual < self.tol


def verify_mirror_image(configs: MirrorConfig | Iterable[MirrorConfig], gamma1: float,
                        rtol: float = 1e-12) -> MirrorImageReport:
    """Compare the atom in front of a mirror with an atom pair at twice the distance."""
    if isinstance(configs, MirrorConfig):
        configs = [configs]
    kr, dr, ds = [], [], []
    for cfg in configs:
        pair = collective_rates(AtomPairConfig(d=2 * cfg.r, k=cfg.k31), gamma1)
        kr.append(cfg.k31r)
        dr.append(pair.gamma_anti - mirror_em.gamma_bar_1(cfg, gamma1))
        ds.append(pair.dipole_shift - mirror_em.level_shift(cfg, gamma1))
    return MirrorImageReport(np.array(kr), np.array(dr), np.array(ds), tol=rtol * gamma1)
