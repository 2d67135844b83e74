"""Aggregated cross-checks between independently computed quantities."""
from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import mirror_em
from .dicke import verify_mirror_image
from .errors import ModelError
from .lindblad import DETUNING_SIGN, build_liouvillian, calibrate_sign, check_density_matrix, steady_state
from .mirror_em import RadiativeCorrection, converged_total_rate, radiative_correction
from .params import FIG4, TWO_PI, AtomParams, MirrorConfig
from .steady_closed import p3_closed

MUTATIONS = ("gamma-sign",)


@dataclass
class CheckResult:
    name: str
    passed: bool
    max_residual: float
    tolerance: float
    detail: str = ""

    def __post_init__(self):
        self.passed = bool(self.passed)
        self.max_residual = float(self.max_residual)


@dataclass
class VerificationReport:
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> str:
        return json.dumps({"passed": self.passed, "checks": [asdict(c) for c in self.checks]}, indent=1)

    def __str__(self) -> str:
        lines = [f"{'PASS' if c.passed else 'FAIL'}  {c.name:<32} max residual {c.max_residual:.3e}"
                 f"  (tol {c.tolerance:.1e})  {c.detail}" for c in self.checks]
        return "\n".join(lines)


def random_draws(n: int, seed: int = 20020) -> list[tuple[AtomParams, float]]:
    """Reproducible random parameter points with their k31 r values."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        p = AtomParams(
            omega1=rng.uniform(0.5, 20), omega2=rng.uniform(0.5, 20),
            delta1=rng.uniform(-10, 10), delta2=rng.uniform(-10, 10),
            gamma1=rng.uniform(1, 20), gamma2=rng.uniform(1, 20),
        )
        out.append((p, rng.uniform(0.3, 40)))
    return out


def _mutated_correction(k31r: float, p: AtomParams) -> RadiativeCorrection:
    rc = radiative_correction(k31r, p)
    # flip the sign of the interference bracket: Gamma (1 + F) instead of Gamma (1 - F)
    return RadiativeCorrection(2 * p.gamma1 - rc.gamma_bar_1, rc.gamma_bar_2, rc.shift, k31r)


def closed_form_points(n_grid: int = 200, n_random: int = 500) -> list[tuple[AtomParams, float]]:
    grid = [(FIG4, float(k)) for k in np.linspace(2 * np.pi, 12 * np.pi, n_grid)]
    return grid + random_draws(n_random)


def check_closed_form(mutation: str | None = None, tol: float = 1e-8) -> tuple[CheckResult, list[np.ndarray]]:
    worst = 0.0
    states = []
    for p, k in closed_form_points():
        rc = radiative_correction(k, p)
        rc_closed = _mutated_correction(k, p) if mutation == "gamma-sign" else rc
        rho = steady_state(build_liouvillian(p, rc))
        states.append(rho)
        worst = max(worst, abs(rho[2, 2].real - p3_closed(p, rc_closed)))
    return CheckResult("closed_form_vs_liouvillian", worst < tol, worst, tol, "200 grid + 500 random points"), states


def check_quadrature(tol: float = 1e-6) -> CheckResult:
    rng = np.random.default_rng(7)
    worst = 0.0
    for k in rng.uniform(0.1, 50, 20):
        cfg = MirrorConfig.from_k31r(k)
        exact = mirror_em.gamma_bar_1(cfg, FIG4.gamma1)
        worst = max(worst, abs(converged_total_rate(cfg, FIG4) - exact) / exact)
    return CheckResult("quadrature_vs_gamma_bar_1", worst < tol, worst, tol, "20 distances, relative")


def check_dicke(tol: float = 1e-12) -> CheckResult:
    rng = np.random.default_rng(11)
    report = verify_mirror_image([MirrorConfig(r) for r in rng.uniform(0.05, 20, 100)], FIG4.gamma1, rtol=tol)
    rel = report.max_residual / FIG4.gamma1
    return CheckResult("dicke_mirror_image", report.passed, rel, tol, "100 distances, relative to Gamma_1")


def check_limits(tol: float = 1e-5) -> CheckResult:
    g = FIG4.gamma1
    far, near = MirrorConfig.from_k31r(1e6), MirrorConfig.from_k31r(1e-4)
    res = [
        abs(mirror_em.gamma_bar_1(far, g) - g) / g,
        abs(mirror_em.level_shift(far, g)) / g,
        abs(mirror_em.gamma_bar_1(near, g)) / g,
    ]
    return CheckResult("free_space_and_contact_limits", max(res) < tol, max(res), tol,
                       "k31r = 1e6 and 1e-4")


def check_dark_state(tol: float = 1e-10) -> CheckResult:
    worst = 0.0
    for p, k in random_draws(50, seed=3):
        p = p.replace(delta2=p.delta1)
        rc = radiative_correction(k, p)
        closed = p3_closed(p, rc)
        numeric = steady_state(build_liouvillian(p, rc))[2, 2].real
        if closed != 0.0:
            worst = float("inf")
        worst = max(worst, abs(numeric))
    return CheckResult("dark_state", worst < tol, worst, tol, "delta1 = delta2, 50 draws")


def check_states(states: list[np.ndarray]) -> CheckResult:
    failures = 0
    worst = 0.0
    for rho in states:
        try:
            check_density_matrix(rho)
        except ModelError:
            failures += 1
        worst = max(worst, abs(np.trace(rho) - 1), float(np.linalg.norm(rho - rho.conj().T)))
    return CheckResult("density_matrix_invariants", failures == 0, worst, 1e-12, f"{len(states)} states")


def check_trace_preservation(tol: float = 1e-12) -> CheckResult:
    worst = 0.0
    for p, k in random_draws(20, seed=5):
        L = build_liouvillian(p, radiative_correction(k, p))
        worst = max(worst, float(np.max(np.abs(np.eye(3).reshape(-1) @ L))))
    return CheckResult("liouvillian_trace_preservation", worst < tol, worst, tol, "20 draws, all basis matrices")


def check_calibration() -> CheckResult:
    rc = radiative_correction(np.pi / 2, FIG4)
    try:
        sign = calibrate_sign(FIG4, rc)
    except ModelError as e:
        return CheckResult("detuning_sign_calibration", False, float("nan"), 0.0, str(e))
    return CheckResult("detuning_sign_calibration", sign == DETUNING_SIGN, 0.0, 0.0, f"calibrated sign {sign:+d}")


def verify_all(mutation: str | None = None) -> VerificationReport:
    if mutation is not None and mutation not in MUTATIONS:
        raise ValueError(f"unknown mutation {mutation!r}")
    report = VerificationReport()
    t0 = time.perf_counter()
    closed, states = check_closed_form(mutation)
    closed.detail += f", {time.perf_counter() - t0:.2f} s"
    report.checks += [closed, check_states(states), check_trace_preservation(), check_quadrature(),
                      check_dicke(), check_limits(), check_dark_state(), check_calibration()]
    return report
