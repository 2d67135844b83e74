"""Mirror-modified radiative quantities of the 3-1 transition.

The dipole D31 lies along z, parallel to the mirror plane x = 0. Directions
are parametrised by the polar angle ``theta`` from the mirror normal x and
the azimuth ``phi`` measured from y towards z, so that

    k = (cos theta, sin theta cos phi, sin theta sin phi).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import GridTooCoarse, NonPositiveDistance
from .params import AtomParams, MirrorConfig, validate_mirror

DIPOLE_31 = np.array([0.0, 0.0, 1.0])
DIPOLE_32 = np.array([0.0, 0.0, 1.0])

# Below this value of u = 2 k31 r the rate bracket is summed as a power series.
SERIES_CUTOFF = 1.0
_N_SERIES = 14


def _series_coefficients(n: int) -> np.ndarray:
    # 1 - 3/2 (sin u/u + cos u/u^2 - sin u/u^3) = sum_m a_m u^(2m), a_0 = 0
    a = np.zeros(n)
    for m in range(1, n):
        c = 1 / math.factorial(2 * m + 1) - 1 / math.factorial(2 * m + 2) + 1 / math.factorial(2 * m + 3)
        a[m] = -1.5 * (-1) ** m * c
    return a


_SERIES = _series_coefficients(_N_SERIES)


@dataclass(frozen=True)
class Direction:
    theta: float
    phi: float

    def __post_init__(self):
        th, ph = np.asarray(self.theta), np.asarray(self.phi)
        if np.any(th < 0) or np.any(th > math.pi) or np.any(ph < 0) or np.any(ph >= 2 * math.pi):
            raise ValueError("need 0 <= theta <= pi and 0 <= phi < 2 pi")

    def unit_vector(self) -> np.ndarray:
        th, ph = np.broadcast_arrays(np.asarray(self.theta, float), np.asarray(self.phi, float))
        return np.stack([np.cos(th), np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph)], axis=-1)


MIRROR_AXIS = Direction(0.0, 0.0)


@dataclass(frozen=True)
class RadiativeCorrection:
    """Mirror-modified rates and shift at dimensionless distance ``k31r``.

    Fields may be numpy arrays of a common shape when a whole distance grid
    is evaluated at once.
    """

    gamma_bar_1: float
    gamma_bar_2: float
    shift: float
    k31r: float


def _check_distance(k31r):
    k31r = np.asarray(k31r, dtype=float)
    if np.any(~(k31r > 0)):
        raise NonPositiveDistance("k31 r must be > 0")
    return k31r


def decay_factor(k31r):
    """Ratio of the modified to the free-space 3-1 decay rate."""
    u = 2.0 * _check_distance(k31r)
    small = u < SERIES_CUTOFF
    with np.errstate(all="ignore"):
        direct = 1.0 - 1.5 * (np.sin(u) / u + np.cos(u) / u**2 - np.sin(u) / u**3)
    series = np.polynomial.polynomial.polyval(u * u, _SERIES)
    out = np.where(small, series, direct)
    return out if out.ndim else float(out)


def shift_factor(k31r):
    """Level shift divided by the free-space rate Gamma_1."""
    u = 2.0 * _check_distance(k31r)
    out = 0.75 * (np.cos(u) / u - np.sin(u) / u**2 - np.cos(u) / u**3)
    return out if np.ndim(out) else float(out)


def gamma_bar_1(cfg: MirrorConfig, gamma1: float) -> float:
    return gamma1 * decay_factor(cfg.k31r)


def level_shift(cfg: MirrorConfig, gamma1: float) -> float:
    return gamma1 * shift_factor(cfg.k31r)


def radiative_correction(k31r, p: AtomParams) -> RadiativeCorrection:
    return RadiativeCorrection(
        gamma_bar_1=p.gamma1 * decay_factor(k31r),
        gamma_bar_2=p.gamma2,
        shift=p.gamma1 * shift_factor(k31r),
        k31r=k31r,
    )


def _angular_factor(direction: Direction, dipole) -> np.ndarray:
    dk = direction.unit_vector() @ np.asarray(dipole, float)
    return 1.0 - dk * dk


def intensity_1(direction: Direction, p3, cfg: MirrorConfig, p: AtomParams):
    """Photon rate per steradian on the 3-1 transition seen in ``direction``."""
    validate_mirror(cfg)
    k31x_r = cfg.k31r * np.cos(direction.theta)
    out = 3.0 * p.gamma1 / (4.0 * math.pi) * _angular_factor(direction, DIPOLE_31) * p3 * np.sin(k31x_r) ** 2
    return out if np.ndim(out) else float(out)


def intensity_2(direction: Direction, p3, p: AtomParams, dipole=DIPOLE_32):
    out = 3.0 * p.gamma2 / (8.0 * math.pi) * _angular_factor(direction, dipole) * p3
    return out if np.ndim(out) else float(out)


def quadrature_total_rate(cfg: MirrorConfig, p: AtomParams, n_theta: int = 64, n_phi: int = 128,
                          p3: float = 1.0) -> float:
    """Integrate ``intensity_1`` over the full sphere.

    Gauss-Legendre nodes in cos(theta) and the periodic trapezoid rule in phi.
    """
    if n_theta < 8 or n_phi < 8:
        raise GridTooCoarse(f"need at least 8x8 nodes, got {n_theta}x{n_phi}")
    mu, w_mu = leggauss(n_theta)
    phi = 2.0 * math.pi * np.arange(n_phi) / n_phi
    theta = np.arccos(mu)
    d = Direction(theta[:, None], phi[None, :])
    vals = intensity_1(d, p3, cfg, p)
    return float(w_mu @ vals.sum(axis=1) * (2.0 * math.pi / n_phi))


def converged_total_rate(cfg: MirrorConfig, p: AtomParams, rtol: float = 1e-9,
                         start: tuple[int, int] = (16, 32), cap: tuple[int, int] = (1024, 2048)) -> float:
    """Refine the quadrature grid by doubling until two levels agree to ``rtol``."""
    n_t, n_p = start
    prev = quadrature_total_rate(cfg, p, n_t, n_p)
    while n_t < cap[0] or n_p < cap[1]:
        n_t, n_p = min(2 * n_t, cap[0]), min(2 * n_p, cap[1])
        cur = quadrature_total_rate(cfg, p, n_t, n_p)
        if abs(cur - prev) <= rtol * abs(cur):
            return cur
        prev = cur
    return prev
