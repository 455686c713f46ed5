"""Transfer fidelity, exchange information and orthogonality overlaps."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .propagators import DriveConfig, Scheme, trajectory
from .states import BlochVector, QubitDensity, bloch_from_density, density_from_bloch, eigensystem_2x2


class ExchangeMode(str, enum.Enum):
    VON_NEUMANN = "VonNeumann"
    FIDELITY_XLNX = "FidelityXlnX"
    FIDELITY_BINARY = "FidelityBinary"


DEFAULT_EXCHANGE = ExchangeMode.FIDELITY_BINARY


def _xlnx(p: float) -> float:
    return 0.0 if p <= 0.0 else p * math.log(p)


def fidelity(rho0: QubitDensity, rhot: QubitDensity) -> float:
    """tr(rho(t) rho(0)), the overlap used to measure retained information."""
    return float(np.trace(rhot.matrix @ rho0.matrix).real)


def von_neumann_entropy(rho: QubitDensity) -> float:
    r = min(bloch_from_density(rho).norm, 1.0)
    return -(_xlnx((1 + r) / 2) + _xlnx((1 - r) / 2))


def exchange_information(rho0: QubitDensity, rhot: QubitDensity, mode=DEFAULT_EXCHANGE) -> float:
    """Information exchanged with the drive, in nats.

    ``VonNeumann`` is the entropy of rho(t) alone, which stays zero for any
    pure state under RWA evolution. The two fidelity-based modes depend on
    F = fidelity(rho0, rhot) only: -F ln F, or the binary entropy of F.
    """
    mode = ExchangeMode(mode)
    if mode is ExchangeMode.VON_NEUMANN:
        return von_neumann_entropy(rhot)
    f = min(max(fidelity(rho0, rhot), 0.0), 1.0)
    if mode is ExchangeMode.FIDELITY_XLNX:
        return -_xlnx(f)
    return -_xlnx(f) - _xlnx(1 - f)


def orthogonality_overlaps(rho0: QubitDensity, rhot: QubitDensity) -> np.ndarray:
    """Sp[i, j] = <v_i(0)|v_j(t)> between the eigenbases, descending eigenvalue order.

    Returned as a complex 2x2 array; index (0, 0) is Sp_11.
    """
    _, v0 = eigensystem_2x2(rho0)
    _, vt = eigensystem_2x2(rhot)
    return np.array([[np.vdot(a, b) for b in vt] for a in v0])


@dataclass(frozen=True)
class Measure:
    """Which quantity a series samples: 'fidelity', 'exchange' or 'overlap'."""

    kind: str
    exchange_mode: ExchangeMode = DEFAULT_EXCHANGE
    i: int = 1
    j: int = 1

    def __post_init__(self):
        if self.kind not in ("fidelity", "exchange", "overlap"):
            raise ValueError(f"unknown measure {self.kind!r}")
        object.__setattr__(self, "exchange_mode", ExchangeMode(self.exchange_mode))
        if self.i not in (1, 2) or self.j not in (1, 2):
            raise ValueError("overlap indices must be 1 or 2")

    @property
    def label(self) -> str:
        if self.kind == "exchange":
            return f"exchange_{self.exchange_mode.value}"
        if self.kind == "overlap":
            return f"abs_sp{self.i}{self.j}"
        return "fidelity"

    def __call__(self, rho0: QubitDensity, rhot: QubitDensity) -> float:
        if self.kind == "fidelity":
            return fidelity(rho0, rhot)
        if self.kind == "exchange":
            return exchange_information(rho0, rhot, self.exchange_mode)
        return float(abs(orthogonality_overlaps(rho0, rhot)[self.i - 1, self.j - 1]))


@dataclass(frozen=True)
class MeasureSeries:
    times: np.ndarray
    values: np.ndarray
    label: str


def states_to_series(u0: BlochVector, states, times, which: Measure) -> MeasureSeries:
    """Apply a measure along already-computed Bloch vectors.

    Vectors longer than one (possible with the truncated O(lambda)
    propagator) are rescaled to unit length when the density is built.
    """
    rho0 = density_from_bloch(u0, clamp=True)
    values = [which(rho0, density_from_bloch(BlochVector.from_array(u), clamp=True)) for u in states]
    return MeasureSeries(np.asarray(times, dtype=float), np.array(values), which.label)


def measure_series(cfg: DriveConfig, u0: BlochVector, grid, scheme: Scheme | str, which: Measure) -> MeasureSeries:
    traj = trajectory(cfg, u0, grid, scheme)
    return states_to_series(u0, [u.as_array() for _, u in traj], [t for t, _ in traj], which)
