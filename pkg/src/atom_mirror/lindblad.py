"""Master equation of the driven Lambda atom in the frame rotating with both lasers.

Density matrices are vectorised row-major, ``vec(rho) = rho.reshape(-1)``, so
``vec(A @ rho @ B) = kron(A, B.T) @ vec(rho)``. Levels are indexed 0, 1, 2 for
|1>, |2>, |3>.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import CalibrationAmbiguous, DegenerateNullSpace, InvalidState, StepTooLarge
from .mirror_em import RadiativeCorrection
from .params import AtomParams
from .steady_closed import p3_closed

# Ground-state detuning sign fixed by ``calibrate_sign`` (see tests/test_lindblad.py).
DETUNING_SIGN = 1

_I3 = np.eye(3)
_TRACE_ROW = _I3.reshape(-1)


def _ket_bra(i: int, j: int) -> np.ndarray:
    m = np.zeros((3, 3))
    m[i, j] = 1.0
    return m


def build_hamiltonian(p: AtomParams, rc: RadiativeCorrection, sign: int = DETUNING_SIGN) -> np.ndarray:
    h = np.zeros((3, 3), dtype=complex)
    h[0, 2] = h[2, 0] = p.omega1 / 2
    h[1, 2] = h[2, 1] = p.omega2 / 2
    h[2, 2] = rc.shift
    h[0, 0] = sign * p.delta1
    h[1, 1] = sign * p.delta2
    return h


def build_liouvillian(p: AtomParams, rc: RadiativeCorrection, sign: int = DETUNING_SIGN) -> np.ndarray:
    """9x9 generator of ``d vec(rho)/dt``: no-jump evolution plus the reset term."""
    h_cond = build_hamiltonian(p, rc, sign)
    h_cond[2, 2] -= 0.5j * (rc.gamma_bar_1 + rc.gamma_bar_2)
    L = -1j * (np.kron(h_cond, _I3) - np.kron(_I3, h_cond.conj()))
    for j, rate in ((0, rc.gamma_bar_1), (1, rc.gamma_bar_2)):
        jump = _ket_bra(j, 2)
        L += rate * np.kron(jump, jump)
    return L


def null_space_dimension(L: np.ndarray, rtol: float = 1e-10) -> int:
    s = np.linalg.svd(L, compute_uv=False)
    return int(np.sum(s <= rtol * s[0]))


def steady_state(L: np.ndarray) -> np.ndarray:
    """Unique trace-one fixed point of ``L``.

    The population equation of |1> is a linear combination of the other two,
    so its row is replaced by the trace constraint.
    """
    dim = null_space_dimension(L)
    if dim != 1:
        raise DegenerateNullSpace(f"Liouvillian null space has dimension {dim}")
    m = L.copy()
    m[0, :] = _TRACE_ROW
    rhs = np.zeros(9, dtype=complex)
    rhs[0] = 1.0
    rho = np.linalg.solve(m, rhs).reshape(3, 3)
    return 0.5 * (rho + rho.conj().T)


def check_density_matrix(rho: np.ndarray, herm_tol: float = 1e-12, trace_tol: float = 1e-12,
                         pos_tol: float = 1e-10) -> np.ndarray:
    rho = np.asarray(rho)
    if rho.shape != (3, 3):
        raise InvalidState(f"expected a 3x3 matrix, got shape {rho.shape}")
    if np.linalg.norm(rho - rho.conj().T) >= herm_tol:
        raise InvalidState("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1) >= trace_tol:
        raise InvalidState(f"trace is {np.trace(rho)}")
    lam = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
    if lam[0] <= -pos_tol:
        raise InvalidState(f"negative eigenvalue {lam[0]}")
    return rho


def max_step(p: AtomParams, rc: RadiativeCorrection) -> float:
    """Largest RK4 step recommended for ``propagate`` at these parameters."""
    scale = max(p.gamma1, p.omega1, p.omega2, abs(p.delta1 - rc.shift), abs(p.delta2 - rc.shift))
    return 0.01 / scale


# dt times the spectral radius of L; max_step() stays well inside this bound
STEP_LIMIT = 0.05


def propagate(L: np.ndarray, rho0: np.ndarray, t: float, dt: float) -> np.ndarray:
    """Classic fourth-order Runge-Kutta integration of ``d vec(rho)/dt = L vec(rho)``.

    Since the generator is constant, one RK4 step is the fixed matrix
    ``1 + hL + (hL)^2/2 + (hL)^3/6 + (hL)^4/24``; whole steps are applied as
    a matrix power and the remainder ``t - n*dt`` as one short step.
    """
    if t < 0 or dt <= 0:
        raise ValueError("need t >= 0 and dt > 0")
    radius = float(np.max(np.abs(np.linalg.eigvals(L))))
    if dt * radius > STEP_LIMIT:
        raise StepTooLarge(f"dt*|lambda|max = {dt * radius:.3g} exceeds {STEP_LIMIT}")
    v = np.asarray(rho0, dtype=complex).reshape(-1)
    n = int(math.floor(t / dt))
    rest = t - n * dt
    if n:
        v = np.linalg.matrix_power(_rk4_matrix(L, dt), n) @ v
    if rest > 1e-15 * max(t, 1.0):
        v = _rk4_matrix(L, rest) @ v
    return v.reshape(3, 3)


def _rk4_matrix(L: np.ndarray, h: float) -> np.ndarray:
    a = h * L
    a2 = a @ a
    return np.eye(9) + a + a2 / 2 + a2 @ a / 6 + a2 @ a2 / 24


def steady_population(p: AtomParams, rc: RadiativeCorrection, sign: int = DETUNING_SIGN) -> float:
    return float(steady_state(build_liouvillian(p, rc, sign))[2, 2].real)


def calibrate_sign(p: AtomParams, rc: RadiativeCorrection, tol: float = 1e-8) -> int:
    """Return the ground-state detuning sign for which the numerical steady state reproduces the closed form."""
    closed = p3_closed(p, rc)
    passing = [s for s in (1, -1) if abs(steady_population(p, rc, s) - closed) < tol]
    if len(passing) != 1:
        raise CalibrationAmbiguous(f"signs matching the closed form: {passing}")
    return passing[0]
