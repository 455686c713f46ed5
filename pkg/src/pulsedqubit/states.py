"""Qubit state representations and conversions between them.

Basis ordering is (|0>, |1>) with |0> the ground state. Pauli matrices are
normalized so that sigma_z|1> = +|1>, sigma_+ = |1><0| and
sigma_pm = (sigma_x +- i sigma_y) / 2. In this ordering sigma_y has the
opposite sign to the textbook matrix, which keeps (x, y, z) right-handed with
the excited state at the north pole.

Bloch components are Pauli expectation values in [-1, 1]; the spin-1/2
operators S = sigma / 2 never appear numerically.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateState, NonPhysicalState

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, 1j], [-1j, 0]], dtype=complex)
SIGMA_Z = np.array([[-1, 0], [0, 1]], dtype=complex)
SIGMA_PLUS = np.array([[0, 0], [1, 0]], dtype=complex)
SIGMA_MINUS = SIGMA_PLUS.T.copy()
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)

NORM_SLACK = 1e-9
DEGENERATE_RADIUS = 1e-10


@dataclass(frozen=True)
class StateAngles:
    """Angles of the atomic coherent state cos(theta/2)|0> + exp(-i phi) sin(theta/2)|1>."""

    theta: float
    phi: float

    def __post_init__(self):
        theta, phi = float(self.theta), float(self.phi)
        if not (math.isfinite(theta) and math.isfinite(phi)):
            raise ValueError("angles must be finite")
        if not 0.0 <= theta <= math.pi:
            raise ValueError(f"theta={theta} outside [0, pi]")
        phi = math.fmod(phi, 2 * math.pi)
        if phi < 0:
            phi += 2 * math.pi
        if phi >= 2 * math.pi:  # fmod of a tiny negative can round up to 2pi
            phi = 0.0
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", phi)

    def amplitudes(self) -> np.ndarray:
        return np.array(
            [math.cos(self.theta / 2), np.exp(-1j * self.phi) * math.sin(self.theta / 2)]
        )


@dataclass(frozen=True)
class BlochVector:
    """Real 3-vector of Pauli expectation values.

    Vectors produced by the first-order counter-rotating propagator may be
    slightly longer than one, so no norm check happens here.
    """

    ux: float
    uy: float
    uz: float

    @classmethod
    def from_array(cls, a) -> "BlochVector":
        ux, uy, uz = (float(v) for v in a)
        return cls(ux, uy, uz)

    def as_array(self) -> np.ndarray:
        return np.array([self.ux, self.uy, self.uz])

    @property
    def norm(self) -> float:
        return math.sqrt(self.ux**2 + self.uy**2 + self.uz**2)

    def dot(self, other: "BlochVector") -> float:
        return self.ux * other.ux + self.uy * other.uy + self.uz * other.uz


@dataclass(frozen=True, eq=False)
class QubitDensity:
    """2x2 Hermitian, unit-trace, positive semidefinite matrix."""

    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError(f"density must be 2x2, got {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("density has non-finite entries")
        if abs(m[1, 0] - np.conj(m[0, 1])) > 1e-12 or np.max(np.abs(m.diagonal().imag)) > 1e-12:
            raise ValueError("density is not Hermitian")
        if abs(np.trace(m) - 1) > 1e-12:
            raise ValueError(f"density trace {np.trace(m).real} != 1")
        if np.min(np.linalg.eigvalsh(m)) < -NORM_SLACK:
            raise NonPhysicalState("density has a negative eigenvalue")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def __eq__(self, other):
        if not isinstance(other, QubitDensity):
            return NotImplemented
        return bool(np.array_equal(self.matrix, other.matrix))

    __hash__ = None

    @property
    def purity(self) -> float:
        return float(np.trace(self.matrix @ self.matrix).real)


def bloch_from_angles(angles: StateAngles) -> BlochVector:
    st = math.sin(angles.theta)
    return BlochVector(st * math.cos(angles.phi), st * math.sin(angles.phi), -math.cos(angles.theta))


def density_from_bloch(u: BlochVector, clamp: bool = False) -> QubitDensity:
    """rho = (1 + u . sigma) / 2.

    With ``clamp=True`` a vector longer than one is rescaled to unit length
    instead of raising; this is how states from the truncated O(lambda)
    propagator get turned into densities.
    """
    r = u.norm
    if r > 1 + NORM_SLACK:
        if not clamp:
            raise NonPhysicalState(f"|u| = {r:.12g} > 1")
        u = BlochVector(u.ux / r, u.uy / r, u.uz / r)
    ux, uy, uz = u.ux, u.uy, u.uz
    m = 0.5 * np.array([[1 - uz, ux + 1j * uy], [ux - 1j * uy, 1 + uz]])
    return QubitDensity(m)


def bloch_from_density(rho: QubitDensity) -> BlochVector:
    m = rho.matrix
    return BlochVector(*(float(np.trace(m @ s).real) for s in PAULIS))


def _fix_phase(v: np.ndarray) -> np.ndarray:
    k = 0 if abs(v[0]) > 1e-8 else 1
    return v * (abs(v[k]) / v[k])


def _pure_state(n: np.ndarray) -> np.ndarray:
    # Ket whose Bloch vector is the unit vector n; pick the better-conditioned form.
    nx, ny, nz = n
    if nz <= 0:
        v = np.array([1 - nz, nx - 1j * ny])
    else:
        v = np.array([nx + 1j * ny, 1 + nz])
    return _fix_phase(v / np.linalg.norm(v))


def eigensystem_2x2(rho: QubitDensity):
    """Closed-form eigen-decomposition of a qubit density matrix.

    Returns ``(eigenvalues, (v1, v2))`` with eigenvalues ((1+|u|)/2, (1-|u|)/2)
    and v1, v2 the matching unit eigenvectors. Each eigenvector's first
    component of modulus above 1e-8 is made real and non-negative.
    """
    u = bloch_from_density(rho).as_array()
    r = float(np.linalg.norm(u))
    if r < DEGENERATE_RADIUS:
        raise DegenerateState(f"|u| = {r:.3g}; eigenbasis undefined")
    n = u / r
    evals = np.array([(1 + r) / 2, (1 - r) / 2])
    return evals, (_pure_state(n), _pure_state(-n))
