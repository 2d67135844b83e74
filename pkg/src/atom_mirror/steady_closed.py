"""Closed-form steady-state excited population and its limiting forms."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDenominator, InsufficientSamples, ZeroDetuning, ZeroDriving
from .mirror_em import RadiativeCorrection
from .params import AtomParams

DENOMINATOR_FLOOR = 1e-30
MODULATION_PERIOD = math.pi  # in k31 r; the modulation runs at twice the wavenumber


@dataclass(frozen=True)
class EffectiveDetunings:
    dbar1: float
    dbar2: float


def effective_detunings(p: AtomParams, rc: RadiativeCorrection) -> EffectiveDetunings:
    return EffectiveDetunings(p.delta1 - rc.shift, p.delta2 - rc.shift)


def _compensated_sum(terms: np.ndarray) -> np.ndarray:
    # Neumaier summation over axis 0, largest magnitudes first.
    order = np.argsort(-np.abs(terms), axis=0)
    terms = np.take_along_axis(terms, order, axis=0)
    s = terms[0].copy()
    c = np.zeros_like(s)
    for t in terms[1:]:
        tot = s + t
        c += np.where(np.abs(s) >= np.abs(t), (s - tot) + t, (t - tot) + s)
        s = tot
    return s + c


def p3_closed(p: AtomParams, rc: RadiativeCorrection):
    """Steady-state population of the excited level (exact closed form).

    Broadcasts over array-valued fields of ``rc``. The two-photon detuning is
    taken from the bare detunings, since the level shift cancels in it.
    """
    a = np.asarray(p.delta1 - rc.shift, float)
    b = np.asarray(p.delta2 - rc.shift, float)
    d = p.delta1 - p.delta2
    g1 = np.asarray(rc.gamma_bar_1, float)
    g2 = np.asarray(rc.gamma_bar_2, float)
    o1, o2 = p.omega1**2, p.omega2**2
    d2 = d * d
    a, b, g1, g2 = np.broadcast_arrays(a, b, g1, g2)

    terms = np.stack([
        ((o1 + o2) ** 2 + 8 * d2 * g1 * g2) * (g1 * o2 + g2 * o1),
        4 * d2 * g1 * g2 * (g1 * o1 + g2 * o2),
        4 * d2 * (g1**3 * o2 + 2 * (g1 + g2) * o1 * o2 + g2**3 * o1),
        -8 * d * (a * g1 * o2 * o2 - b * g2 * o1 * o1),
        16 * d2 * (a * a * g1 * o2 + b * b * g2 * o1),
    ])
    den = _compensated_sum(terms)
    if np.any(den < DENOMINATOR_FLOOR):
        raise DegenerateDenominator("closed-form denominator vanishes (no driving field?)")
    out = 4 * d2 * (g1 + g2) * o1 * o2 / den
    return out if out.ndim else float(out)


def is_dark_state(p: AtomParams) -> bool:
    """Two-photon resonance: the ground-state superposition decouples from both lasers."""
    return p.delta1 == p.delta2 and p.omega1 * p.omega2 != 0


def p3_weak_detuning(p: AtomParams, rc: RadiativeCorrection):
    """Approximation for detunings much smaller than the Rabi frequencies."""
    o1, o2 = p.omega1**2, p.omega2**2
    if o1 + o2 == 0:
        raise ZeroDriving("both Rabi frequencies are zero")
    g1, g2 = rc.gamma_bar_1, rc.gamma_bar_2
    out = 4 * (p.delta1 - p.delta2) ** 2 * o1 * o2 / (o1 + o2) ** 2 * (g1 + g2) / (g1 * o2 + g2 * o1)
    return out if np.ndim(out) else float(out)


def p3_large_detuning(p: AtomParams, rc: RadiativeCorrection):
    """Approximation for detunings much larger than Rabi frequencies and decay rates."""
    det = effective_detunings(p, rc)
    if np.any(np.asarray(det.dbar1) == 0) or np.any(np.asarray(det.dbar2) == 0):
        raise ZeroDetuning("effective detunings must be non-zero")
    o1, o2 = p.omega1**2, p.omega2**2
    g1, g2 = rc.gamma_bar_1, rc.gamma_bar_2
    out = 0.25 * o1 * o2 * (g1 + g2) / (det.dbar1**2 * g1 * o2 + det.dbar2**2 * g2 * o1)
    return out if np.ndim(out) else float(out)


# ---------------------------------------------------------------------------
# modulation analysis of a curve sampled over k31 r


@dataclass(frozen=True)
class ModulationMetrics:
    visibility: float
    amplitude: float          # first-harmonic amplitude at spatial frequency 2 k31
    phase: float              # offset relative to sin^2(k31 r), wrapped to (-pi, pi]; nan if undefined
    phase_defined: bool
    maxima: np.ndarray        # k31 r positions
    minima: np.ndarray
    mean: float


def _first_harmonic(x: np.ndarray, y: np.ndarray) -> complex:
    # truncate to whole periods so a constant offset does not leak into the projection
    n_periods = math.floor((x[-1] - x[0]) / MODULATION_PERIOD + 1e-9)
    m = x <= x[0] + n_periods * MODULATION_PERIOD + 1e-12
    xs, ys = x[m], y[m]
    length = xs[-1] - xs[0]
    mean = np.trapezoid(ys, xs) / length
    return 2.0 * np.trapezoid((ys - mean) * np.exp(-2j * xs), xs) / length


def _parabolic_extrema(x: np.ndarray, y: np.ndarray, sign: float) -> np.ndarray:
    ys = sign * y
    idx = np.nonzero((ys[1:-1] > ys[:-2]) & (ys[1:-1] >= ys[2:]))[0] + 1
    out = []
    for k in idx:
        h = x[k + 1] - x[k]
        y0, y1, y2 = ys[k - 1], ys[k], ys[k + 1]
        curv = y0 - 2 * y1 + y2
        out.append(x[k] + (0.5 * h * (y0 - y2) / curv if curv != 0 else 0.0))
    return np.array(out)


def modulation_metrics(k31r, values, min_periods: float = 2.0, min_per_period: int = 64) -> ModulationMetrics:
    """Visibility, extrema and harmonic phase of a curve over a uniform k31 r grid."""
    x = np.asarray(k31r, float)
    y = np.asarray(values, float)
    span = x[-1] - x[0]
    if span < min_periods * MODULATION_PERIOD * (1 - 1e-9):
        raise InsufficientSamples(f"curve covers {span / MODULATION_PERIOD:.2f} periods, need {min_periods}")
    if (len(x) - 1) / (span / MODULATION_PERIOD) < min_per_period * (1 - 1e-9):
        raise InsufficientSamples(f"need at least {min_per_period} samples per period")

    ymax, ymin = float(y.max()), float(y.min())
    visibility = (ymax - ymin) / (ymax + ymin) if ymax + ymin != 0 else 0.0
    c = _first_harmonic(x, y)
    c_ref = _first_harmonic(x, np.sin(x) ** 2)
    scale = max(abs(ymax), abs(ymin))
    defined = scale > 0 and abs(c) > 1e-12 * scale
    phase = float(np.angle(c / c_ref)) if defined else math.nan
    return ModulationMetrics(
        visibility=visibility,
        amplitude=float(abs(c)),
        phase=phase,
        phase_defined=bool(defined),
        maxima=_parabolic_extrema(x, y, 1.0),
        minima=_parabolic_extrema(x, y, -1.0),
        mean=float(np.trapezoid(y, x) / span),
    )


def extrema_offset(a: np.ndarray, b: np.ndarray, period: float = MODULATION_PERIOD) -> float:
    """Mean offset of the extrema ``b`` after the extrema ``a``, folded into [0, period)."""
    offs = [np.min((b - x) % period) for x in a]
    return float(np.mean(offs))
