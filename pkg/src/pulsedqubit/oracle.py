"""Fixed-step RK4 integration of the rotating-frame Bloch equations.

This is the numerical ground truth for both closed-form propagators. The
Heisenberg equations are linear in the Pauli operators, so their expectation
values form a closed real 3x3 linear system and no factorization is involved.
With v = u_x + i u_y in the frame rotating at omega_l:

    dv/dt   = i Delta v - i Omega (1 + exp(-2i omega_l t)) u_z
    du_z/dt = Omega Im[v (1 + exp(2i omega_l t))]

``Mode.RWA_ONLY`` drops the exp(+-2i omega_l t) terms.

All array routines broadcast, so a batch of initial states or drive
parameters can be stepped together.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidConfig, StepTooLarge
from .propagators import DriveConfig
from .states import BlochVector

RESOLUTION = 0.01  # steps per unit of 1/Omega and 1/omega_l in Full mode


class Mode(str, enum.Enum):
    FULL = "Full"
    RWA_ONLY = "RwaOnly"


@dataclass(frozen=True)
class IntegratorSpec:
    dt: float
    mode: Mode = Mode.FULL
    t_end: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        if not self.dt > 0:
            raise InvalidConfig(f"dt must be > 0, got {self.dt}")
        if not self.t_end >= 0:
            raise InvalidConfig(f"t_end must be >= 0, got {self.t_end}")


def max_step(omega: float, omega_l: float) -> float:
    return min(RESOLUTION / omega if omega > 0 else math.inf, RESOLUTION / omega_l)


def _rhs(x, y, z, t, omega, delta, omega_l, full: bool):
    if full:
        phase = 2 * omega_l * t
        if isinstance(phase, float):
            c, s = math.cos(phase), math.sin(phase)
        else:
            c, s = np.cos(phase), np.sin(phase)
        return (
            -delta * y - omega * s * z,
            delta * x - omega * (1 + c) * z,
            omega * (x * s + y * (1 + c)),
        )
    return -delta * y, delta * x - omega * z, omega * y


def bloch_rhs(u: BlochVector, t: float, cfg: DriveConfig, mode: Mode | str) -> BlochVector:
    """du/dt of the rotating-frame Bloch vector at time t."""
    full = Mode(mode) is Mode.FULL
    dx, dy, dz = _rhs(u.ux, u.uy, u.uz, t, cfg.omega, cfg.delta, cfg.omega_l, full)
    return BlochVector(float(dx), float(dy), float(dz))


def _step(x, y, z, t, h, args):
    k1 = _rhs(x, y, z, t, *args)
    k2 = _rhs(x + 0.5 * h * k1[0], y + 0.5 * h * k1[1], z + 0.5 * h * k1[2], t + 0.5 * h, *args)
    k3 = _rhs(x + 0.5 * h * k2[0], y + 0.5 * h * k2[1], z + 0.5 * h * k2[2], t + 0.5 * h, *args)
    k4 = _rhs(x + h * k3[0], y + h * k3[1], z + h * k3[2], t + h, *args)
    return tuple(
        q + h / 6 * (a + 2 * b + 2 * c + d) for q, a, b, c, d in zip((x, y, z), k1, k2, k3, k4)
    )


def rk4_bloch(u0, t_end: float, dt: float, omega, delta, omega_l, full: bool, t0: float = 0.0):
    """Classic RK4 from t0 to t_end with a final partial step if needed.

    ``u0`` has shape (..., 3); drive parameters broadcast against its leading
    axes. Returns ``(times, states)`` with states of shape (n_samples, ..., 3),
    one sample per step plus the start.
    """
    u0 = np.asarray(u0, dtype=float)
    span = t_end - t0
    n_full = int(math.floor(span / dt))
    rest = span - n_full * dt
    if rest <= 1e-12 * max(1.0, abs(t_end)):
        rest = 0.0
    times = [t0 + k * dt for k in range(n_full + 1)]
    if rest:
        times.append(t_end)
    args = (omega, delta, omega_l, full)
    x, y, z = u0[..., 0], u0[..., 1], u0[..., 2]
    out = np.empty((len(times),) + u0.shape)
    out[0] = u0
    for k in range(1, len(times)):
        x, y, z = _step(x, y, z, times[k - 1], times[k] - times[k - 1], args)
        out[k, ..., 0], out[k, ..., 1], out[k, ..., 2] = x, y, z
    return np.array(times), out


def rk4_final(u0, t_end, dt, omega, delta, omega_l, full: bool) -> np.ndarray:
    """Final states of a batch of independent RK4 runs, each with its own dt and t_end.

    Run k takes floor(t_end/dt) full steps and then one partial step; all
    arguments broadcast to the batch axis of ``u0`` (shape (n, 3)).
    """
    u0 = np.asarray(u0, dtype=float)
    n = u0.shape[0]
    t_end = np.broadcast_to(np.asarray(t_end, dtype=float), (n,))
    dt = np.broadcast_to(np.asarray(dt, dtype=float), (n,))
    args = tuple(np.broadcast_to(np.asarray(a, dtype=float), (n,)) for a in (omega, delta, omega_l)) + (full,)
    steps = int(np.max(np.ceil(t_end / dt))) if n else 0
    x, y, z = u0[:, 0].copy(), u0[:, 1].copy(), u0[:, 2].copy()
    for k in range(steps):
        t = k * dt
        h = np.clip(t_end - t, 0.0, dt)
        x, y, z = _step(x, y, z, t, h, args)
    return np.stack([x, y, z], axis=-1)


def _validate(cfg: DriveConfig, spec: IntegratorSpec):
    if spec.t_end > cfg.pulse_duration:
        raise InvalidConfig(f"t_end={spec.t_end} exceeds pulse duration {cfg.pulse_duration}")
    if spec.mode is Mode.FULL and spec.dt > max_step(cfg.omega, cfg.omega_l) * (1 + 1e-12):
        raise StepTooLarge(
            f"dt={spec.dt} > {max_step(cfg.omega, cfg.omega_l)} needed to resolve 2*omega_l"
        )


def integrate(cfg: DriveConfig, u0: BlochVector, spec: IntegratorSpec):
    """RK4 trajectory as a list of (t, BlochVector), sampled every step and at t_end."""
    _validate(cfg, spec)
    times, states = rk4_bloch(
        u0.as_array(), spec.t_end, spec.dt, cfg.omega, cfg.delta, cfg.omega_l, spec.mode is Mode.FULL
    )
    return [(float(t), BlochVector.from_array(s)) for t, s in zip(times, states)]


def sample(cfg: DriveConfig, u0: BlochVector, grid, mode: Mode | str, dt: float | None = None) -> np.ndarray:
    """Oracle states at the given time grid, shape (len(grid), 3).

    Each interval between grid points is split into equal steps no longer
    than ``dt`` (default: the Full-mode resolution limit).
    """
    mode = Mode(mode)
    dt = max_step(cfg.omega, cfg.omega_l) if dt is None else dt
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        return np.empty((0, 3))
    _validate(cfg, IntegratorSpec(dt=dt, mode=mode, t_end=float(grid[-1])))
    if grid[0] < 0 or np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be non-negative and strictly increasing")
    full = mode is Mode.FULL
    args = (cfg.omega, cfg.delta, cfg.omega_l, full)
    out = np.empty((grid.size, 3))
    x, y, z = u0.ux, u0.uy, u0.uz
    t = 0.0
    for i, target in enumerate(grid):
        span = target - t
        if span > 0:
            n = max(1, math.ceil(span / dt - 1e-9))
            h = span / n
            for k in range(n):
                x, y, z = _step(x, y, z, t + k * h, h, args)
        t = float(target)
        out[i] = (x, y, z)
    return out
