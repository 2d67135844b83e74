"""Physical parameters, unit conventions and config-file parsing.

All rates, Rabi frequencies and detunings share one angular unit (MHz read
as rad/us); times are in us. Distances to the mirror are given in units of
the 3-1 transition wavelength, so the default wavenumber is ``2*pi``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, replace
from pathlib import Path

import numpy as np

from .errors import InvalidGeometry, IoFailure, InvalidSpec, NonFinite, NonPositiveDistance, NonPositiveRate

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class AtomParams:
    """Rabi frequencies, laser detunings and free-space decay rates of the Lambda system."""

    omega1: float
    omega2: float
    delta1: float
    delta2: float
    gamma1: float
    gamma2: float

    def scaled(self, s: float) -> AtomParams:
        return AtomParams(**{k: v * s for k, v in asdict(self).items()})

    def replace(self, **changes) -> AtomParams:
        return replace(self, **changes)

    def as_dict(self) -> dict[str, float]:
        return asdict(self)


@dataclass(frozen=True)
class MirrorConfig:
    r: float
    k31: float = TWO_PI
    dipole_parallel: bool = True

    @property
    def k31r(self) -> float:
        return self.k31 * self.r

    @classmethod
    def from_k31r(cls, k31r: float) -> MirrorConfig:
        return cls(r=k31r / TWO_PI)


@dataclass(frozen=True)
class LensGeometry:
    """Lens-to-focus distance ``f`` and mirror-to-lens distance ``R``, both in mm."""

    f: float
    R: float


# Fig. 4 of the experiment comparison; gamma values also used for Figs. 5 and 6.
FIG4 = AtomParams(omega1=10.0, omega2=5.0, delta1=2.0, delta2=0.0, gamma1=15.1, gamma2=5.4)
FIG5 = FIG4.replace(delta1=0.0, delta2=0.1, omega2=10.0)
FIG6 = FIG4.replace(delta2=0.0, omega1=1.0, omega2=10.0)


def validate(p: AtomParams) -> AtomParams:
    values = asdict(p)
    for name, v in values.items():
        if not math.isfinite(v):
            raise NonFinite(f"{name} must be finite, got {v!r}")
    for name in ("gamma1", "gamma2"):
        if values[name] <= 0.0:
            raise NonPositiveRate(f"{name} must be > 0, got {values[name]!r}")
    for name in ("omega1", "omega2"):
        if values[name] < 0.0:
            raise InvalidSpec(f"{name} must be >= 0, got {values[name]!r}")
    return p


def validate_mirror(cfg: MirrorConfig) -> MirrorConfig:
    r, k = np.asarray(cfg.r, float), np.asarray(cfg.k31, float)
    if not (np.all(np.isfinite(r)) and np.all(np.isfinite(k))):
        raise NonFinite("mirror distance and wavenumber must be finite")
    if np.any(r <= 0.0) or np.any(k <= 0.0):
        raise NonPositiveDistance(f"need r > 0 and k31 > 0, got r={cfg.r}, k31={cfg.k31}")
    if not cfg.dipole_parallel:
        raise InvalidSpec("only a dipole parallel to the mirror surface is supported")
    return cfg


def effective_image_distance(g: LensGeometry) -> float:
    """Distance of the mirror image from the lens focus, ``f**2 / R``, in micrometres."""
    if not (math.isfinite(g.f) and math.isfinite(g.R)):
        raise NonFinite("lens distances must be finite")
    if g.f <= 0.0 or g.R <= 0.0 or g.R <= g.f:
        raise InvalidGeometry(f"need 0 < f < R, got f={g.f}, R={g.R}")
    return g.f * g.f / g.R * 1000.0


# ---------------------------------------------------------------------------
# flat key=value configuration

CONFIG_KEYS = ("omega1", "omega2", "delta1", "delta2", "gamma1", "gamma2", "r", "theta", "phi")

DEFAULT_CONFIG: dict[str, float] = {**FIG4.as_dict(), "r": 5.0, "theta": 0.0, "phi": 0.0}


def parse_config(text: str) -> dict[str, float]:
    out: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidSpec(f"line {lineno}: expected key=value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise InvalidSpec(f"line {lineno}: unknown key {key!r}")
        try:
            out[key] = float(value)
        except ValueError:
            raise InvalidSpec(f"line {lineno}: {key} is not a number: {value!r}") from None
    return out


def load_config(path: str | Path) -> dict[str, float]:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise IoFailure(f"cannot read config {path}: {e}") from e
    return parse_config(text)


def dump_config(cfg: dict[str, float]) -> str:
    return "".join(f"{k} = {cfg[k]!r}\n" for k in CONFIG_KEYS if k in cfg)


def atom_params_from(cfg: dict[str, float]) -> AtomParams:
    return AtomParams(**{k: float(cfg[k]) for k in ("omega1", "omega2", "delta1", "delta2", "gamma1", "gamma2")})
