"""Parameter scans over the (z, u) plane, causality labels, and timing.

Three scan kinds reproduce the standard pictures of the protocol:

* VS_X: concurrence against x = L/(ct) at fixed separations z, reference
  detector directions (one curve per z);
* VS_Z: concurrence against z at fixed interaction times u (one curve per u);
* VS_PHI: concurrence against the shared detector azimuth phi at fixed z and
  x, with the polar angle pinned to pi/4 -- the one value for which
  phi = pi/2 reproduces the reference geometry (h+, h-) = (sqrt2, 0).

All quantities are dimensionless (times in 1/Omega, lengths in c/Omega).
Records carry an optional wall-clock column t_seconds = u/Omega when a
transition frequency Omega in rad/s is supplied.  Points whose channel has no
events carry concurrence None, never 0, so downstream plots can show honest
gaps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .amplitudes import (BellKind, ConcurrenceUndefinedError, DimensionlessPoint, PhysicalScale,
                         closed_form_amplitudes, concurrence_from_fg, envelope_j, geometry_h)
from .kinematics import Direction, fig1_preset

SQRT2 = math.sqrt(2.0)

# half-width of the x = 1 band classified as on the light cone
LIGHT_CONE_TOLERANCE = 1e-9

FIG4_POLAR_ANGLE = math.pi / 4.0


class CausalClass(Enum):
    SPACELIKE = "Spacelike"
    LIGHTCONE = "LightCone"
    TIMELIKE = "Timelike"


class SweepKind(Enum):
    VS_X = "x"
    VS_PHI = "phi"
    VS_Z = "z"


def classify_causality(x: float) -> CausalClass:
    """Label a point by the interval between the atoms at interaction time.

    x > 1 means the atoms stay outside each other's light cone while they
    interact; x < 1 means light could have crossed between them.
    """
    if not x > 0.0:
        raise ValueError(f"x must be positive, got {x}")
    if x > 1.0 + LIGHT_CONE_TOLERANCE:
        return CausalClass.SPACELIKE
    if abs(x - 1.0) <= LIGHT_CONE_TOLERANCE:
        return CausalClass.LIGHTCONE
    return CausalClass.TIMELIKE


@dataclass(frozen=True)
class ApparatusTiming:
    """Dimensionless timing of one detection, for causality bookkeeping.

    Photons travel z/sqrt2 from either atom to the beam splitter plus an
    arbitrary instrument arm delta to a detector, so detection happens at
    u_prime = u + z/sqrt2 + delta.  z itself is the light-crossing time of
    the interatomic distance; no single spacelike verdict is encoded here,
    the raw numbers are reported instead.
    """

    z: float
    delta: float
    u: float
    path_length: float
    u_prime: float

    @property
    def detection_after_light_crossing(self) -> bool:
        """Whether the detection time exceeds the atom-atom light-crossing time."""
        return self.u_prime > self.z


def detection_timing(z: float, delta: float, u: float) -> ApparatusTiming:
    """Timing record for separation z, detector arm delta, interaction time u."""
    if not z > 0.0:
        raise ValueError(f"z must be positive, got {z}")
    if delta < 0.0 or u < 0.0:
        raise ValueError("delta and u must be nonnegative")
    path = z / SQRT2 + delta
    return ApparatusTiming(z=z, delta=delta, u=u, path_length=path, u_prime=u + path)


def fig4_preset(z: float, x: float, phi: float) -> tuple[Direction, Direction]:
    """Both detectors at polar angle pi/4 and shared azimuth phi.

    Gives h- = 0 and h+ = sqrt2 sin(phi); phi = pi/2 reproduces the reference
    apparatus.  z and x are validated here because the phi scan holds them
    fixed.
    """
    if not (z > 0.0 and x > 0.0):
        raise ValueError("z and x must be positive")
    d = Direction(theta=FIG4_POLAR_ANGLE, phi=phi)
    return d, d


@dataclass(frozen=True)
class SweepRecord:
    """One evaluated grid point of a scan."""

    sweep_coord: float
    z: float
    u: float
    x: float
    j: float
    h_plus: float
    h_minus: float
    abs_f_over_g: float | None
    concurrence: float | None
    causal_class: CausalClass
    t_seconds: float | None = None


@dataclass(frozen=True)
class SweepSpec:
    """Declarative description of one scan.

    range_start/range_stop/count give the swept coordinate grid (inclusive
    endpoints, count >= 2).  The per-kind fixed parameters are z_values
    (VS_X), u_values (VS_Z) or z and x (VS_PHI).  directions overrides the
    reference detector geometry for the x and z scans; omega (rad/s) adds the
    wall-clock column.
    """

    kind: SweepKind
    range_start: float
    range_stop: float
    count: int
    bell: BellKind = BellKind.PSI_PLUS
    z_values: tuple[float, ...] = ()
    u_values: tuple[float, ...] = ()
    z: float | None = None
    x: float | None = None
    directions: tuple[Direction, Direction] | None = None
    omega: float | None = None

    def __post_init__(self) -> None:
        if not self.range_start < self.range_stop:
            raise ValueError("range start must be below range stop")
        if self.count < 2:
            raise ValueError("a sweep needs at least 2 grid points")
        if self.omega is not None and not self.omega > 0.0:
            raise ValueError("omega must be positive")
        if self.kind is SweepKind.VS_X:
            if not self.z_values:
                raise ValueError("an x scan needs at least one fixed z value")
            if any(z <= 0.0 for z in self.z_values):
                raise ValueError("fixed z values must be positive")
            if self.range_start <= 0.0:
                raise ValueError("x grid must be positive")
        elif self.kind is SweepKind.VS_Z:
            if not self.u_values:
                raise ValueError("a z scan needs at least one fixed u value")
            if any(u <= 0.0 for u in self.u_values):
                raise ValueError("fixed u values must be positive")
            if self.range_start <= 0.0:
                raise ValueError("z grid must be positive")
        else:
            if self.z is None or self.x is None:
                raise ValueError("a phi scan needs fixed z and x")
            if self.z <= 0.0 or self.x <= 0.0:
                raise ValueError("fixed z and x must be positive")

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(self.range_start, self.range_stop, self.count)


def evaluate_point(point: DimensionlessPoint, dk: Direction, dk2: Direction, bell: BellKind,
                   sweep_coord: float, scale: PhysicalScale | None = None,
                   omega: float | None = None) -> SweepRecord:
    """Evaluate one grid point via the closed forms.

    The single shared evaluation path for scans and single-point queries, so
    the two agree bit for bit at equal inputs.
    """
    pair = closed_form_amplitudes(point, dk, dk2, bell, scale)
    h_plus, h_minus = geometry_h(dk, dk2)
    try:
        concurrence = concurrence_from_fg(pair)
    except ConcurrenceUndefinedError:
        concurrence = None
    ratio = abs(pair.f) / abs(pair.g) if abs(pair.g) > 0.0 else None
    return SweepRecord(
        sweep_coord=sweep_coord,
        z=point.z,
        u=point.u,
        x=point.x,
        j=envelope_j(point.u),
        h_plus=h_plus,
        h_minus=h_minus,
        abs_f_over_g=ratio,
        concurrence=concurrence,
        causal_class=classify_causality(point.x),
        t_seconds=point.u / omega if omega is not None else None,
    )


def run_sweep(spec: SweepSpec, scale: PhysicalScale | None = None) -> list[SweepRecord]:
    """Evaluate a scan on its full grid, in deterministic grid order.

    VS_X and VS_Z group the output by their fixed parameter (outer loop), the
    swept coordinate runs fastest.
    """
    records: list[SweepRecord] = []
    grid = spec.grid
    if spec.kind is SweepKind.VS_X:
        dk, dk2 = spec.directions if spec.directions is not None else fig1_preset()
        for z in spec.z_values:
            for x in grid:
                point = DimensionlessPoint(z=z, u=z / x)
                records.append(evaluate_point(point, dk, dk2, spec.bell,
                                              sweep_coord=float(x), scale=scale,
                                              omega=spec.omega))
    elif spec.kind is SweepKind.VS_Z:
        dk, dk2 = spec.directions if spec.directions is not None else fig1_preset()
        for u in spec.u_values:
            for z in grid:
                point = DimensionlessPoint(z=float(z), u=u)
                records.append(evaluate_point(point, dk, dk2, spec.bell,
                                              sweep_coord=float(z), scale=scale,
                                              omega=spec.omega))
    else:
        point = DimensionlessPoint(z=spec.z, u=spec.z / spec.x)
        for phi in grid:
            dk, dk2 = fig4_preset(spec.z, spec.x, float(phi))
            records.append(evaluate_point(point, dk, dk2, spec.bell,
                                          sweep_coord=float(phi), scale=scale,
                                          omega=spec.omega))
    return records
