"""Photon directions, polarization bases, and the fixed detection geometry.

Spherical convention used by every module (it is forced by the polarization
vector formulas below, so it is documented once here):

    k_hat(theta, phi) = (sin t cos p, sin t sin p, cos t)

The two emitters sit on the y axis at -(z/2) y_hat and +(z/2) y_hat with both
transition dipoles induced along z.  Lengths are measured in units of c/Omega
and times in units of 1/Omega, so the separation is the single dimensionless
number z = Omega L / c and all photons are on shell at |k| = Omega/c.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

TWO_PI = 2.0 * math.pi
SQRT2 = math.sqrt(2.0)

# both atomic dipoles point along z
DIPOLE_AXIS = np.array([0.0, 0.0, 1.0])


@dataclass(frozen=True)
class Direction:
    """Propagation direction; theta in [0, pi], phi folded into [0, 2*pi)."""

    theta: float
    phi: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.theta) and math.isfinite(self.phi)):
            raise ValueError("direction angles must be finite")
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        object.__setattr__(self, "phi", self.phi % TWO_PI)

    @property
    def y_component(self) -> float:
        """sin(theta)*sin(phi), the only part of the direction h+/- sees."""
        return math.sin(self.theta) * math.sin(self.phi)


class Polarization(Enum):
    """The two detector polarization labels."""

    UP = "up"
    DOWN = "down"


@dataclass(frozen=True)
class PhotonMode:
    """One detected photon: a direction plus a polarization label."""

    direction: Direction
    polarization: Polarization


@dataclass(frozen=True)
class AtomGeometry:
    """Two atoms on the y axis separated by z = Omega L / c, dipoles along z."""

    z: float

    def __post_init__(self) -> None:
        if not self.z > 0.0:
            raise ValueError(f"separation z must be positive, got {self.z}")

    @property
    def position_a(self) -> np.ndarray:
        return np.array([0.0, -0.5 * self.z, 0.0])

    @property
    def position_b(self) -> np.ndarray:
        return np.array([0.0, +0.5 * self.z, 0.0])


def unit_vector(d: Direction) -> np.ndarray:
    """Cartesian unit vector for a direction."""
    st, ct = math.sin(d.theta), math.cos(d.theta)
    sp, cp = math.sin(d.phi), math.cos(d.phi)
    return np.array([st * cp, st * sp, ct])


def polarization_basis(d: Direction) -> tuple[np.ndarray, np.ndarray]:
    """Linear polarization pair transverse to unit_vector(d).

    eps1 = (cos t cos p, cos t sin p, -sin t) and eps2 = (-sin p, cos p, 0);
    (eps1, eps2, k_hat) is a right-handed orthonormal triad.
    """
    st, ct = math.sin(d.theta), math.cos(d.theta)
    sp, cp = math.sin(d.phi), math.cos(d.phi)
    eps1 = np.array([ct * cp, ct * sp, -st])
    eps2 = np.array([-sp, cp, 0.0])
    return eps1, eps2


def updown_vector(d: Direction, p: Polarization) -> np.ndarray:
    """Detector polarization vectors: up = -(eps1+eps2)/sqrt2, down = (eps1-eps2)/sqrt2."""
    eps1, eps2 = polarization_basis(d)
    if p is Polarization.UP:
        return -(eps1 + eps2) / SQRT2
    return (eps1 - eps2) / SQRT2


def dipole_coupling(d: Direction, p: Polarization) -> float:
    """z_hat . eps(k, up/down), in units of the dipole moment magnitude.

    Only eps1 has a z component (-sin theta), so the coupling is
    +sin(t)/sqrt2 for up and -sin(t)/sqrt2 for down.  The sign antisymmetry
    between the two labels is what cancels the minus Bell channels.
    """
    s = math.sin(d.theta) / SQRT2
    return s if p is Polarization.UP else -s


def fig1_preset() -> tuple[Direction, Direction]:
    """Detected directions of the reference apparatus used for the x and z scans.

    Both photons leave along (0, 1/sqrt2, 1/sqrt2), i.e. theta = pi/4 and
    phi = pi/2 for each, the assignment that realizes (h+, h-) = (sqrt2, 0).
    """
    d = Direction(theta=math.pi / 4.0, phi=math.pi / 2.0)
    return d, d
