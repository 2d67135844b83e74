"""Parameter sweeps, figure presets, saturation study and table output."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.optimize import minimize_scalar

from . import __version__
from .errors import FlatCurve, InvalidSpec, IoFailure
from .lindblad import DETUNING_SIGN, steady_population
from .mirror_em import MIRROR_AXIS, Direction, intensity_1, intensity_2, radiative_correction
from .params import FIG4, FIG5, FIG6, TWO_PI, AtomParams, MirrorConfig, validate, validate_mirror
from .steady_closed import MODULATION_PERIOD, extrema_offset, modulation_metrics, p3_closed

VARIABLES = ("r", "omega1", "omega2", "delta1", "delta2")
OUTPUTS = ("I1", "I2", "P3", "gamma_bar_1", "shift")
INTENSITY_SCALE = 100.0  # report intensities in 1e-2 MHz per steradian

UNITS = {
    "r": "lambda31", "k31r": "rad", "omega1": "MHz", "omega2": "MHz", "delta1": "MHz", "delta2": "MHz",
    "I1": "1e-2 MHz/sr", "I2": "1e-2 MHz/sr", "P3": "1", "P3_liouvillian": "1",
    "gamma_bar_1": "MHz", "shift": "MHz",
}
UNIT_CONVENTION = "angular MHz (rad/us) for all rates; r in units of lambda31"

# k31 r from 2 pi to 12 pi
DEFAULT_R_GRID = (1.0, 6.0, 1200)


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    lo: float
    hi: float
    count: int
    params: AtomParams = FIG4
    mirror: MirrorConfig = MirrorConfig(r=5.0)
    outputs: tuple[str, ...] = OUTPUTS
    detector_1: Direction = MIRROR_AXIS
    detector_2: Direction = MIRROR_AXIS
    cross_check: bool = False

    def validate(self) -> SweepSpec:
        if self.variable not in VARIABLES:
            raise InvalidSpec(f"sweep variable must be one of {VARIABLES}, got {self.variable!r}")
        if not (math.isfinite(self.lo) and math.isfinite(self.hi) and self.lo < self.hi):
            raise InvalidSpec(f"need finite lo < hi, got {self.lo}, {self.hi}")
        if self.count < 2:
            raise InvalidSpec(f"need at least 2 grid points, got {self.count}")
        bad = [o for o in self.outputs if o not in OUTPUTS]
        if bad or len(set(self.outputs)) != len(self.outputs):
            raise InvalidSpec(f"outputs must be distinct members of {OUTPUTS}, got {self.outputs}")
        if self.variable == "r" and self.lo <= 0:
            raise InvalidSpec("r grid must be positive")
        validate(self.params)
        validate_mirror(self.mirror)
        return self


@dataclass
class SweepResult:
    variable: str
    columns: dict[str, np.ndarray]
    metadata: dict = field(default_factory=dict)

    @property
    def grid(self) -> np.ndarray:
        return self.columns[self.variable]

    def __len__(self) -> int:
        return len(self.grid)

    @property
    def output_names(self) -> list[str]:
        return [c for c in self.columns if c in OUTPUTS or c == "P3_liouvillian"]


def _metadata(spec: SweepSpec) -> dict:
    return {
        "variable": spec.variable,
        "params": spec.params.as_dict(),
        "mirror": None if spec.variable == "r" else {"r": spec.mirror.r, "k31": spec.mirror.k31},
        "detector_1": {"theta": float(spec.detector_1.theta), "phi": float(spec.detector_1.phi)},
        "detector_2": {"theta": float(spec.detector_2.theta), "phi": float(spec.detector_2.phi)},
        "units": UNIT_CONVENTION,
        "intensity_unit": UNITS["I1"],
        "detuning_sign": DETUNING_SIGN,
        "version": __version__,
    }


def run_sweep(spec: SweepSpec) -> SweepResult:
    spec.validate()
    grid = np.linspace(spec.lo, spec.hi, spec.count)
    p = spec.params
    if spec.variable == "r":
        mirror = MirrorConfig(r=grid, k31=spec.mirror.k31)
        rc = radiative_correction(mirror.k31r, p)
        p3 = np.asarray(p3_closed(p, rc))
        i1 = intensity_1(spec.detector_1, p3, mirror, p)
        i2 = intensity_2(spec.detector_2, p3, p)
        rows_params = [p] * len(grid)
        gb1, shift = np.asarray(rc.gamma_bar_1), np.broadcast_to(rc.shift, grid.shape)
    else:
        mirror = spec.mirror
        rc = radiative_correction(mirror.k31r, p)
        rows_params = [validate(p.replace(**{spec.variable: float(v)})) for v in grid]
        p3 = np.array([p3_closed(q, rc) for q in rows_params])
        i1 = np.array([intensity_1(spec.detector_1, x, mirror, q) for x, q in zip(p3, rows_params)])
        i2 = np.array([intensity_2(spec.detector_2, x, q) for x, q in zip(p3, rows_params)])
        gb1 = np.full(grid.shape, rc.gamma_bar_1)
        shift = np.full(grid.shape, rc.shift)

    columns: dict[str, np.ndarray] = {spec.variable: grid}
    if spec.variable == "r":
        columns["k31r"] = spec.mirror.k31 * grid
    available = {"I1": np.asarray(i1) * INTENSITY_SCALE, "I2": np.broadcast_to(i2, grid.shape) * INTENSITY_SCALE,
                 "P3": p3, "gamma_bar_1": gb1, "shift": shift}
    for name in OUTPUTS:
        if name in spec.outputs:
            columns[name] = np.array(available[name], dtype=float)
    if spec.cross_check:
        columns["P3_liouvillian"] = np.array([
            steady_population(q, radiative_correction(float(k), q))
            for q, k in zip(rows_params, np.broadcast_to(mirror.k31r, grid.shape))
        ])
    for name, col in columns.items():
        if col.shape != grid.shape or not np.all(np.isfinite(col)):
            raise InvalidSpec(f"column {name} is malformed")
    return SweepResult(spec.variable, columns, _metadata(spec))


def r_sweep(params: AtomParams, grid=DEFAULT_R_GRID, **kw) -> SweepResult:
    lo, hi, n = grid
    return run_sweep(SweepSpec("r", lo, hi, n, params=params, **kw))


def stack_results(results: list[SweepResult], outer: str, values) -> SweepResult:
    """Concatenate sweeps taken at several values of ``outer`` into one long table."""
    n = [len(r) for r in results]
    columns = {outer: np.repeat(np.asarray(values, float), n)}
    for name in results[0].columns:
        columns[name] = np.concatenate([r.columns[name] for r in results])
    meta = dict(results[0].metadata)
    meta["outer_variable"] = outer
    return SweepResult(results[0].variable, columns, meta)


# ---------------------------------------------------------------------------
# figure presets


@dataclass
class PresetResult:
    name: str
    table: SweepResult
    summary: dict


def preset_fig4(grid=DEFAULT_R_GRID) -> PresetResult:
    res = r_sweep(FIG4, grid)
    x = res.columns["k31r"]
    m1 = modulation_metrics(x, res.columns["I1"])
    m2 = modulation_metrics(x, res.columns["I2"])
    near5 = (res.grid >= 4.5) & (res.grid <= 5.5)
    i2 = res.columns["I2"][near5]
    summary = {
        "I1_visibility": m1.visibility,
        "I2_visibility": m2.visibility,
        "I2_visibility_near_5_lambda": float((i2.max() - i2.min()) / (i2.max() + i2.min())),
        "I1_phase": m1.phase,
        "I2_phase": m2.phase,
        "phase_difference": float((m1.phase - m2.phase) % (2 * math.pi)),
    }
    return PresetResult("fig4", res, summary)


FIG5_OMEGA1 = np.arange(1, 41) * 0.5


def preset_fig5(omega1_values=FIG5_OMEGA1, grid=DEFAULT_R_GRID, params: AtomParams = FIG5) -> PresetResult:
    omega1_values = np.asarray(omega1_values, float)
    runs = [r_sweep(params.replace(omega1=float(o)), grid, outputs=("P3", "I1", "I2")) for o in omega1_values]
    x = runs[0].columns["k31r"]
    metrics = [modulation_metrics(x, r.columns["P3"]) for r in runs]
    summary: dict = {
        "omega1": omega1_values.tolist(),
        "amplitude": [m.amplitude for m in metrics],
        "phase": [m.phase for m in metrics],
    }
    o2 = params.omega2

    def _metrics_at(o1):
        return modulation_metrics(x, p3_closed(params.replace(omega1=o1), radiative_correction(x, params)))

    equal, half, double = _metrics_at(o2), _metrics_at(o2 / 2), _metrics_at(2 * o2)
    summary["flatness_ratio"] = half.amplitude / equal.amplitude if equal.amplitude else math.inf
    summary["extrema_offset_half_periods"] = extrema_offset(half.maxima, double.maxima) / (MODULATION_PERIOD / 2)
    summary["phase_jump"] = float((double.phase - half.phase) % (2 * math.pi))
    return PresetResult("fig5", stack_results(runs, "omega1", omega1_values), summary)


FIG6_DELTA1 = np.round(np.arange(-30, 31) * 0.2, 10)


def branch_phase_jumps(values, phases, defined) -> float:
    """Largest unwrapped phase step between adjacent samples that lie on the same side of undefined points."""
    worst = 0.0
    seg: list[float] = []
    for ph, ok in list(zip(phases, defined)) + [(math.nan, False)]:
        if ok:
            seg.append(ph)
            continue
        if len(seg) > 1:
            worst = max(worst, float(np.max(np.abs(np.diff(np.unwrap(seg))))))
        seg = []
    return worst


def preset_fig6(delta1_values=FIG6_DELTA1, grid=DEFAULT_R_GRID, params: AtomParams = FIG6) -> PresetResult:
    delta1_values = np.asarray(delta1_values, float)
    runs = [r_sweep(params.replace(delta1=float(d)), grid, outputs=("P3", "I1", "I2")) for d in delta1_values]
    x = runs[0].columns["k31r"]
    metrics = [modulation_metrics(x, r.columns["P3"]) for r in runs]
    phases = [m.phase for m in metrics]
    defined = [m.phase_defined for m in metrics]
    summary = {
        "delta1": delta1_values.tolist(),
        "phase": phases,
        "phase_defined": defined,
        "max_phase_step": branch_phase_jumps(delta1_values, phases, defined),
    }
    return PresetResult("fig6", stack_results(runs, "delta1", delta1_values), summary)


PRESETS = {"fig4": preset_fig4, "fig5": preset_fig5, "fig6": preset_fig6}


# ---------------------------------------------------------------------------
# saturation study

SATURATION_BASE = FIG5.replace(omega2=1.0)


@dataclass(frozen=True)
class SaturationResult:
    omega_sat: float
    amplitude_sat: float
    amplitude_triple: float
    definition: str = "omega_sat maximises the first-harmonic modulation amplitude of P3 over r"

    @property
    def ratio(self) -> float:
        return self.amplitude_sat / self.amplitude_triple


def modulation_amplitude(params: AtomParams, k31r: np.ndarray) -> float:
    p3 = p3_closed(params, radiative_correction(k31r, params))
    return modulation_metrics(k31r, p3).amplitude


def saturation_study(params: AtomParams = SATURATION_BASE, grid=DEFAULT_R_GRID,
                     scan=(1e-2, 1e2, 241)) -> SaturationResult:
    """Ratio of P3 modulation amplitudes at the saturation point and at three times it."""
    validate(params)
    x = TWO_PI * np.linspace(*grid)
    lo, hi, n = scan
    omegas = params.omega2 * np.geomspace(lo, hi, n)
    amps = np.array([modulation_amplitude(params.replace(omega1=o), x) for o in omegas])
    if not amps.max() > 0:
        raise FlatCurve("no spatial modulation of P3 over the Rabi-frequency scan")
    i = int(np.argmax(amps))
    a, b = omegas[max(i - 1, 0)], omegas[min(i + 1, n - 1)]
    opt = minimize_scalar(lambda o: -modulation_amplitude(params.replace(omega1=o), x), bounds=(a, b),
                          method="bounded", options={"xatol": 1e-10 * b})
    o_sat = float(opt.x)
    a_sat = modulation_amplitude(params.replace(omega1=o_sat), x)
    a_3 = modulation_amplitude(params.replace(omega1=3 * o_sat), x)
    return SaturationResult(o_sat, a_sat, a_3)


# ---------------------------------------------------------------------------
# output


def format_csv(result: SweepResult) -> str:
    """CSV with a unit-annotated header; no data rows when no outputs were requested."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    names = list(result.columns)
    w.writerow([f"{n} [{UNITS.get(n, '1')}]" for n in names])
    if result.output_names:
        cols = [result.columns[n] for n in names]
        for row in zip(*cols):
            w.writerow([f"{float(v):.17g}" for v in row])
    return buf.getvalue()


def format_json(result: SweepResult) -> str:
    doc = {
        "metadata": result.metadata,
        "units": {n: UNITS.get(n, "1") for n in result.columns},
        "columns": {n: [float(v) for v in c] for n, c in result.columns.items()},
    }
    return json.dumps(doc, indent=1, allow_nan=False) + "\n"


def emit(result: SweepResult, fmt: str, path: str | Path) -> Path:
    text = {"csv": format_csv, "json": format_json}[fmt](result)
    path = Path(path)
    try:
        path.write_text(text)
    except OSError as e:
        raise IoFailure(f"cannot write {path}: {e}") from e
    return path


def _strip_unit(header: str) -> str:
    return header.split(" [", 1)[0]


def load_csv(path: str | Path) -> dict[str, np.ndarray]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    names = [_strip_unit(h) for h in rows[0]]
    data = np.array([[float(v) for v in r] for r in rows[1:]]).reshape(-1, len(names))
    return {n: data[:, i] for i, n in enumerate(names)}


def load_json(path: str | Path) -> dict[str, np.ndarray]:
    doc = json.loads(Path(path).read_text())
    return {n: np.array(v, float) for n, v in doc["columns"].items()}
