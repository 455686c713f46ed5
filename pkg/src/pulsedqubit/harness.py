"""Parameter sweeps for the figure presets, and their CSV output.

A run evaluates one or more measures along a grid in scaled time
tau = Omega t for every variant of a parameter sweep. Each measure goes to its
own CSV in long format: ``tau,<measure>,<variant columns...>``.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import oracle
from .errors import InvalidSpec, MalformedCsv
from .measures import DEFAULT_EXCHANGE, ExchangeMode, Measure, states_to_series
from .propagators import DriveConfig, Scheme, trajectory_array
from .states import StateAngles, bloch_from_angles

PI = math.pi
SCHEMES = ("RWA", "NonRWA", "OracleFull", "OracleRwa")
SWEEPABLE = ("omega", "delta", "omega_l", "lam", "theta", "phi")


def fmt(x: float) -> str:
    return f"{x:.12g}"


@dataclass(frozen=True)
class RunSpec:
    scheme: str = "RWA"
    omega: float = 1.0
    delta: float = 0.0
    omega_l: float = 1.0
    lam: float = 0.0
    pulse_duration: float | None = None
    theta: float = PI / 2
    phi: float = PI / 2
    tau_start: float = 0.0
    tau_end: float = 15.0
    n_points: int = 2001
    measures: tuple = (Measure("fidelity"),)
    variants: tuple = ({},)
    name: str = "run"

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise InvalidSpec(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")
        if self.n_points < 2:
            raise InvalidSpec(f"n_points must be >= 2, got {self.n_points}")
        if not 0 <= self.tau_start < self.tau_end:
            raise InvalidSpec(f"need 0 <= tau_start < tau_end, got [{self.tau_start}, {self.tau_end}]")
        if not self.measures:
            raise InvalidSpec("at least one measure is required")
        for v in self.variants:
            bad = set(v) - set(SWEEPABLE)
            if bad:
                raise InvalidSpec(f"cannot sweep {sorted(bad)}")
        for v in self.variants:
            params = self.params(v)
            if params["omega"] <= 0:
                raise InvalidSpec("omega must be > 0")
            if params["pulse_duration"] is not None and self.tau_end > params["omega"] * params["pulse_duration"]:
                raise InvalidSpec(
                    f"tau_end={self.tau_end} beyond the pulse (Omega*T = {params['omega'] * params['pulse_duration']})"
                )
            if self.scheme == "NonRWA" and params["delta"] != 0:
                raise InvalidSpec("NonRWA scheme requires delta == 0")

    @property
    def variant_keys(self) -> list[str]:
        keys = []
        for v in self.variants:
            keys += [k for k in v if k not in keys]
        return keys

    def params(self, variant: dict) -> dict:
        p = {k: getattr(self, k) for k in SWEEPABLE + ("pulse_duration",)}
        p.update(variant)
        return p

    def taus(self) -> np.ndarray:
        return np.linspace(self.tau_start, self.tau_end, self.n_points)


def drive_for(spec: RunSpec, variant: dict) -> tuple[DriveConfig, StateAngles]:
    p = spec.params(variant)
    T = p["pulse_duration"] if p["pulse_duration"] is not None else spec.tau_end / p["omega"]
    try:
        cfg = DriveConfig(omega=p["omega"], delta=p["delta"], omega_l=p["omega_l"], lam=p["lam"], pulse_duration=T)
        angles = StateAngles(p["theta"], p["phi"])
    except ValueError as e:
        raise InvalidSpec(str(e)) from e
    return cfg, angles


def evolve_variant(spec: RunSpec, variant: dict):
    """(taus, Bloch states of shape (n, 3), initial vector) for one variant."""
    cfg, angles = drive_for(spec, variant)
    u0 = bloch_from_angles(angles)
    taus = spec.taus()
    times = taus / cfg.omega
    if spec.scheme in ("RWA", "NonRWA"):
        states = trajectory_array(cfg, u0, times, spec.scheme)
    else:
        mode = oracle.Mode.FULL if spec.scheme == "OracleFull" else oracle.Mode.RWA_ONLY
        states = oracle.sample(cfg, u0, times, mode)
    return taus, states, u0


@dataclass
class RunResult:
    spec: RunSpec
    # label -> list of (variant, values)
    series: dict = field(default_factory=dict)
    taus: np.ndarray | None = None


def compute(spec: RunSpec) -> RunResult:
    result = RunResult(spec)
    for variant in spec.variants:
        taus, states, u0 = evolve_variant(spec, variant)
        result.taus = taus
        for m in spec.measures:
            s = states_to_series(u0, states, taus, m)
            result.series.setdefault(m.label, []).append((variant, s.values))
    return result


def to_csv(result: RunResult, label: str, log2: bool = False) -> str:
    spec = result.spec
    m = next(m for m in spec.measures if m.label == label)
    buf = io.StringIO()
    buf.write(f"# run={spec.name}\n# scheme={spec.scheme}\n")
    for k in SWEEPABLE:
        if k not in spec.variant_keys:
            buf.write(f"# {k}={fmt(getattr(spec, k))}\n")
    if m.kind == "exchange":
        buf.write(f"# exchange_mode={m.exchange_mode.value}\n# units={'bits' if log2 else 'nats'}\n")
    keys = spec.variant_keys
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["tau", label] + keys)
    scale = 1 / math.log(2) if (log2 and m.kind == "exchange") else 1.0
    for variant, values in result.series[label]:
        extra = [fmt(variant.get(k, getattr(spec, k))) for k in keys]
        for tau, v in zip(result.taus, values):
            w.writerow([fmt(tau), fmt(v * scale)] + extra)
    return buf.getvalue()


def run(spec: RunSpec, out_dir, log2: bool = False) -> list[Path]:
    """Compute a spec and write one CSV per measure; returns the written paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    result = compute(spec)
    paths = []
    for m in spec.measures:
        path = out_dir / f"{spec.name}_{m.label}.csv"
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(to_csv(result, m.label, log2=log2))
        paths.append(path)
    return paths


def read_csv(path):
    """Parse a run CSV into (metadata dict, header list, rows of floats)."""
    meta, lines = {}, []
    with open(path, encoding="utf-8") as f:
        for line in f:
            if line.startswith("#"):
                k, _, v = line[1:].strip().partition("=")
                meta[k.strip()] = v.strip()
            elif line.strip():
                lines.append(line)
    if not lines:
        raise MalformedCsv(f"{path}: no header")
    reader = csv.reader(lines)
    header = next(reader)
    if len(header) < 2 or header[0] != "tau":
        raise MalformedCsv(f"{path}: header must start with 'tau,<measure>'")
    rows = []
    for n, row in enumerate(reader, start=2):
        if len(row) != len(header):
            raise MalformedCsv(f"{path}: row {n} has {len(row)} fields, expected {len(header)}")
        try:
            rows.append([float(x) for x in row])
        except ValueError as e:
            raise MalformedCsv(f"{path}: row {n}: {e}") from e
    if not rows:
        raise MalformedCsv(f"{path}: no data rows")
    return meta, header, rows


# ---------------------------------------------------------------- presets

SHORT = dict(tau_end=15.0, n_points=2001)
LONG = dict(tau_end=50.0, n_points=2001)
FID = (Measure("fidelity"),)
OVERLAP = (Measure("overlap", i=1, j=1),)
ALL_OVERLAPS = tuple(Measure("overlap", i=i, j=j) for i in (1, 2) for j in (1, 2))


def _pair(name, base, sweep_key, values):
    variants = tuple({sweep_key: v} for v in values)
    return {
        name + "a": dict(base, variants=variants, measures=FID),
        name + "b": dict(base, variants=variants, measures=(Measure("exchange"),)),
    }


_RWA_RES = dict(scheme="RWA", lam=0.0, delta=0.0, **SHORT)
_NONRWA = dict(scheme="NonRWA", omega=1.0, omega_l=1.0, delta=0.0, **SHORT)

PRESETS: dict[str, dict] = {}
PRESETS.update(_pair("fig1", dict(_RWA_RES, theta=PI / 2), "phi", (PI / 2, PI / 3, PI / 4)))
PRESETS.update(_pair("fig2", dict(_RWA_RES, phi=PI / 4), "theta", (PI / 3, PI / 4, PI / 6)))
PRESETS.update(_pair("fig3", dict(_RWA_RES, theta=PI / 3, phi=PI / 4), "delta", (0.1, 0.5, 0.8)))
PRESETS.update(_pair("fig4", dict(_NONRWA, theta=PI / 2, phi=PI / 2), "lam", (0.01, 0.2, 0.4)))
PRESETS["fig5a"] = dict(
    _NONRWA, lam=0.2, phi=PI / 2, measures=FID, variants=tuple({"theta": v} for v in (PI / 2, PI / 3, PI / 4))
)
PRESETS["fig5b"] = dict(
    _NONRWA, lam=0.2, theta=PI / 2, measures=FID, variants=tuple({"phi": v} for v in (PI / 2, PI / 3, PI / 4))
)
_fig6 = dict(scheme="RWA", lam=0.0, delta=0.0, theta=PI / 2, phi=1e-3 * PI, measures=OVERLAP, **LONG)
PRESETS["fig6a"] = dict(_fig6)
PRESETS["fig6b"] = dict(_fig6, phi=1e-1 * PI)
PRESETS["fig6c"] = dict(_fig6, theta=PI / 4)
PRESETS["fig6d"] = dict(_fig6, delta=0.7)
_fig7 = dict(_NONRWA, theta=PI / 2, phi=PI / 8, lam=1e-4, measures=OVERLAP)
_fig7.update(LONG)
PRESETS["fig7a"] = dict(_fig7)
PRESETS["fig7b"] = dict(_fig7, lam=0.08)
PRESETS["fig7c"] = dict(_fig7, theta=PI / 4, phi=PI / 8)
PRESETS["fig7d"] = dict(_fig7, theta=PI / 4, phi=PI / 4)

# Same sweeps starting from exp(-i phi)|1>, i.e. theta = pi, instead of the
# equatorial state.
PRESETS["fig1a-text"] = dict(PRESETS["fig1a"], theta=PI)
PRESETS["fig1b-text"] = dict(PRESETS["fig1b"], theta=PI)

FIGURE_PRESETS = tuple(k for k in PRESETS if not k.endswith("-text"))


def preset_spec(name: str, all_overlaps: bool = False, exchange_mode=DEFAULT_EXCHANGE, **overrides) -> RunSpec:
    if name not in PRESETS:
        raise InvalidSpec(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    p = dict(PRESETS[name], name=name)
    if all_overlaps and p["measures"] == OVERLAP:
        p["measures"] = ALL_OVERLAPS
    p["measures"] = tuple(
        replace(m, exchange_mode=ExchangeMode(exchange_mode)) if m.kind == "exchange" else m for m in p["measures"]
    )
    p.update({k: v for k, v in overrides.items() if v is not None})
    return RunSpec(**p)
