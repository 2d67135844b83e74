"""Fluorescence of a laser-driven three-level Lambda atom in front of a mirror."""

__version__ = "0.1.0"

from .params import FIG4, FIG5, FIG6, AtomParams, LensGeometry, MirrorConfig, effective_image_distance, validate
from .mirror_em import (Direction, RadiativeCorrection, gamma_bar_1, intensity_1, intensity_2, level_shift,
                        quadrature_total_rate, radiative_correction)
from .steady_closed import modulation_metrics, p3_closed, p3_large_detuning, p3_weak_detuning
from .lindblad import build_hamiltonian, build_liouvillian, calibrate_sign, propagate, steady_state
from .dicke import AtomPairConfig, collective_rates, verify_mirror_image
