"""Closed-form Bloch-vector propagators for a rectangular pulse.

Two solutions are provided: the exact rotating-wave (RWA) propagator, which
is a rotation by Omega_1 t about the axis (Omega, 0, Delta) / Omega_1, and the
first-order iterative solution in lambda that keeps the counter-rotating
terms at exact resonance. Times are physical; scaled time is tau = Omega t.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidConfig, OutOfPulse, RequiresResonance
from .states import BlochVector

LAMBDA_MAX = 0.5


class Scheme(str, enum.Enum):
    RWA = "RWA"
    NONRWA = "NonRWA"


@dataclass(frozen=True)
class DriveConfig:
    """Pulse and atom parameters.

    ``lam`` is carried independently of omega / omega_l; nothing here derives
    one from the other. ``omega_l`` only enters outside the RWA.
    """

    omega: float = 1.0
    delta: float = 0.0
    omega_l: float = 1.0
    lam: float = 0.0
    pulse_duration: float = 15.0
    envelope: str = "rectangular"

    def __post_init__(self):
        for name in ("omega", "delta", "omega_l", "lam", "pulse_duration"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidConfig(f"{name} must be finite")
        if self.omega <= 0:
            raise InvalidConfig(f"omega must be > 0, got {self.omega}")
        if self.omega_l <= 0:
            raise InvalidConfig(f"omega_l must be > 0, got {self.omega_l}")
        if self.pulse_duration <= 0:
            raise InvalidConfig(f"pulse_duration must be > 0, got {self.pulse_duration}")
        if not 0 <= self.lam <= LAMBDA_MAX:
            raise InvalidConfig(f"lambda must lie in [0, {LAMBDA_MAX}], got {self.lam}")
        if self.envelope != "rectangular":
            raise InvalidConfig(f"unsupported envelope {self.envelope!r}")

    @property
    def omega_a(self) -> float:
        return self.delta + self.omega_l

    @property
    def omega_1(self) -> float:
        return math.sqrt(self.omega**2 + self.delta**2)

    def envelope_at(self, t: float) -> float:
        return 1.0 if 0 <= t <= self.pulse_duration else 0.0


def _check_time(cfg: DriveConfig, t: float) -> float:
    t = float(t)
    if not 0 <= t <= cfg.pulse_duration:
        raise OutOfPulse(f"t={t} outside pulse [0, {cfg.pulse_duration}]")
    return t


def rwa_matrix(cfg: DriveConfig, t: float) -> np.ndarray:
    """Exact RWA propagator u(t) = M u(0), coefficients written term by term."""
    t = _check_time(cfg, t)
    om, de = cfg.omega, cfg.delta
    om1_sq = om * om + de * de
    om1 = math.sqrt(om1_sq)
    c, s = math.cos(om1 * t), math.sin(om1 * t)
    r = om * om / om1_sq

    ax = 0.5 * (r + (de * de + om1_sq) / om1_sq * c + r * (1 - c))
    ay = -(de / om1) * s
    az = (de * om / om1_sq) * (1 - c)
    bx = -ay
    by = 0.5 * (r + (de * de + om1_sq) / om1_sq * c - r * (1 - c))
    bz = -(om / om1) * s
    gx = az
    gy = -bz
    gz = r * (c + (de / om) ** 2)
    return np.array([[ax, ay, az], [bx, by, bz], [gx, gy, gz]])


def nonrwa_matrix(cfg: DriveConfig, t: float) -> np.ndarray:
    """First-order (in lambda) propagator with counter-rotating terms, Delta = 0 only.

    The z-entry of the first row uses cos(2 omega_l t) cos(Omega t). No
    renormalization is applied: at t = 0 the matrix already differs from the
    identity by O(lambda).
    """
    if cfg.delta != 0:
        raise RequiresResonance(f"delta={cfg.delta}; iterative solution needs delta == 0")
    t = _check_time(cfg, t)
    lam = cfg.lam
    c, s = math.cos(cfg.omega * t), math.sin(cfg.omega * t)
    c2, s2 = math.cos(2 * cfg.omega_l * t), math.sin(2 * cfg.omega_l * t)

    ax = 1 + lam * ((2 - 0.25 * s2) * s + (1 - 0.25 * c2) * c)
    ay = -lam / 4 * ((1 - c2) * s - s2 * c)
    az = lam / 2 * (c2 * c - 1)
    bx = lam / 4 * ((1 - c2) * s + s2 * c)
    by = c - lam / 4 * (s2 * s + (4 - c2) * c)
    bz = -s - lam / 2 * s2 * c
    gx = lam * (2 - c2 - c)
    gy = s + lam * s2
    gz = c
    return np.array([[ax, ay, az], [bx, by, bz], [gx, gy, gz]])


def propagator(cfg: DriveConfig, t: float, scheme: Scheme | str) -> np.ndarray:
    scheme = Scheme(scheme)
    if scheme is Scheme.RWA:
        return rwa_matrix(cfg, t)
    return nonrwa_matrix(cfg, t)


def rotation_matrix(axis, angle: float) -> np.ndarray:
    """Axis-angle (Rodrigues) rotation; used as an independent check of the RWA form."""
    n = np.asarray(axis, dtype=float)
    n = n / np.linalg.norm(n)
    k = np.array([[0, -n[2], n[1]], [n[2], 0, -n[0]], [-n[1], n[0], 0]])
    return math.cos(angle) * np.eye(3) + math.sin(angle) * k + (1 - math.cos(angle)) * np.outer(n, n)


def _apply(m: np.ndarray, u: BlochVector) -> BlochVector:
    return BlochVector(
        m[0, 0] * u.ux + m[0, 1] * u.uy + m[0, 2] * u.uz,
        m[1, 0] * u.ux + m[1, 1] * u.uy + m[1, 2] * u.uz,
        m[2, 0] * u.ux + m[2, 1] * u.uy + m[2, 2] * u.uz,
    )


def evolve(u0: BlochVector, m: np.ndarray) -> BlochVector:
    return _apply(m, u0)


def trajectory(cfg: DriveConfig, u0: BlochVector, grid, scheme: Scheme | str = Scheme.RWA):
    """List of (t, u(t)) over a strictly increasing time grid inside the pulse."""
    grid = [float(t) for t in grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("time grid must be strictly increasing")
    return [(t, evolve(u0, propagator(cfg, t, scheme))) for t in grid]


def trajectory_array(cfg: DriveConfig, u0: BlochVector, grid, scheme: Scheme | str = Scheme.RWA) -> np.ndarray:
    return np.array([u.as_array() for _, u in trajectory(cfg, u0, grid, scheme)])
