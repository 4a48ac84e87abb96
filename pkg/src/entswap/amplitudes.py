"""Closed-form two-photon emission amplitudes and the atomic concurrence.

Both atoms start excited in the vacuum.  Detecting a two-photon Bell state
after an interaction time u = Omega*t projects the pair onto

    (f |EE> + g |GG>) / N,        N^2 = |f|^2 + |g|^2,

where g is the one-photon-from-each-atom amplitude and f the
two-photons-from-one-atom amplitude (a counter-rotating process, absent in
any rotating-wave treatment).  For the plus Bell states the amplitudes have
the closed forms

    f = (K/2) * j(u) * cos(z h+ / 2),      g = K * cos(z h- / 2),

with the temporal envelope

    j(u) = |-1 + exp(2iu) (1 - 2iu)| / u^2        (j -> 2 as u -> 0),

the geometry factors h+/- = sin(tk) sin(pk) +/- sin(tk') sin(pk'), and a
common positive prefactor K that cancels from every published quantity.  For
the minus Bell states f = g = 0 identically.  The concurrence of the
projected pair is C = 2|f g*| / N^2.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

from .kinematics import Direction

# Below this u the envelope is evaluated by series: the direct formula loses
# ~u^-2 digits to cancellation, the truncated series is accurate to ~1e-12
# at the cutoff, and the two branches agree there to well under 1e-10.
J_SERIES_CUTOFF = 0.03


class ConcurrenceUndefinedError(ValueError):
    """Raised when the post-selected channel has no amplitude (N = 0)."""


class BellKind(Enum):
    """The four two-photon Bell states."""

    PSI_PLUS = "psi+"
    PSI_MINUS = "psi-"
    PHI_PLUS = "phi+"
    PHI_MINUS = "phi-"

    @classmethod
    def from_label(cls, label: str) -> "BellKind":
        for kind in cls:
            if kind.value == label:
                return kind
        raise ValueError(f"unknown Bell state label {label!r}; "
                         f"expected one of {[k.value for k in cls]}")

    @property
    def is_plus(self) -> bool:
        return self in (BellKind.PSI_PLUS, BellKind.PHI_PLUS)


@dataclass(frozen=True)
class DimensionlessPoint:
    """A point (z, u) of the scan plane; x = z/u is the causal coordinate L/(ct)."""

    z: float
    u: float

    def __post_init__(self) -> None:
        if not self.z > 0.0:
            raise ValueError(f"z must be positive, got {self.z}")
        if not self.u > 0.0:
            raise ValueError(f"u must be positive, got {self.u}")

    @property
    def x(self) -> float:
        return self.z / self.u


@dataclass(frozen=True)
class AmplitudePair:
    """The two second-order amplitudes reaching |EE> (f) and |GG> (g)."""

    f: complex
    g: complex

    @property
    def norm(self) -> float:
        return math.hypot(abs(self.f), abs(self.g))


@dataclass(frozen=True)
class PhysicalScale:
    """Dimensionless atomic constants entering only the overall prefactor.

    dipole_group is Omega*|d|/(e*c); the default matches a strong optical
    E1 transition.  fine_structure is alpha.
    """

    dipole_group: float = 5.0e-3
    fine_structure: float = 7.2973525693e-3

    def __post_init__(self) -> None:
        if not (self.dipole_group > 0.0 and self.fine_structure > 0.0):
            raise ValueError("physical scale constants must be positive")


DEFAULT_SCALE = PhysicalScale()


def envelope_j(u: float) -> float:
    """Temporal envelope j(u) = |-1 + exp(2iu)(1-2iu)| / u^2 of the f channel.

    Monotone facts used by callers: j(0+) = 2, j decays like 2/u for large u,
    and j > 0 for every u > 0.
    """
    if not u > 0.0:
        raise ValueError(f"u must be positive, got {u}")
    if u < J_SERIES_CUTOFF:
        u2 = u * u
        return 2.0 - (2.0 / 9.0) * u2 + (4.0 / 405.0) * u2 * u2
    w = -1.0 + cmath.exp(2.0j * u) * (1.0 - 2.0j * u)
    return abs(w) / (u * u)


def geometry_h(dk: Direction, dk2: Direction) -> tuple[float, float]:
    """(h+, h-): sum and difference of the two direction y-components."""
    y1 = dk.y_component
    y2 = dk2.y_component
    return y1 + y2, y1 - y2


def prefactor_K(scale: PhysicalScale, u: float, dk: Direction, dk2: Direction) -> float:
    """Common positive prefactor of f and g, in dimensionless form.

    K = alpha * (Omega|d|/ec)^2 * u^2 * sin(tk) sin(tk') / (2 pi^2); it grows
    as u^2, vanishes with either sin(theta), and cancels in the concurrence.
    """
    if not u > 0.0:
        raise ValueError(f"u must be positive, got {u}")
    return (scale.fine_structure * scale.dipole_group ** 2 * u * u
            * math.sin(dk.theta) * math.sin(dk2.theta) / (2.0 * math.pi ** 2))


def closed_form_amplitudes(p: DimensionlessPoint, dk: Direction, dk2: Direction,
                           bell: BellKind, scale: PhysicalScale | None = None) -> AmplitudePair:
    """Amplitude pair (f, g) for a detected Bell state at a scan point.

    Plus states: f = (K/2) j(u) cos(z h+/2), g = K cos(z h-/2); the phi-plus
    pair is the psi-plus pair with both signs flipped, so its concurrence is
    identical.  Minus states: (0, 0) -- those channels are forbidden.
    """
    if bell in (BellKind.PSI_MINUS, BellKind.PHI_MINUS):
        return AmplitudePair(0.0 + 0.0j, 0.0 + 0.0j)
    scale = DEFAULT_SCALE if scale is None else scale
    h_plus, h_minus = geometry_h(dk, dk2)
    k = prefactor_K(scale, p.u, dk, dk2)
    f = 0.5 * k * envelope_j(p.u) * math.cos(0.5 * p.z * h_plus)
    g = k * math.cos(0.5 * p.z * h_minus)
    if bell is BellKind.PHI_PLUS:
        f, g = -f, -g
    return AmplitudePair(complex(f), complex(g))


def concurrence_from_fg(a: AmplitudePair) -> float:
    """Concurrence C = 2|f g*| / (|f|^2 + |g|^2) of the projected atom pair.

    Raises ConcurrenceUndefinedError when N = 0: a channel with no events has
    no post-selected state, and reporting 0 would fake a separable one.
    """
    n2 = abs(a.f) ** 2 + abs(a.g) ** 2
    if n2 == 0.0:
        raise ConcurrenceUndefinedError("both amplitudes vanish; no events in this channel")
    # clamp the AM-GM equality case |f| = |g| against roundoff
    return min(2.0 * abs(a.f * a.g.conjugate()) / n2, 1.0)


def concurrence_closed(p: DimensionlessPoint, dk: Direction, dk2: Direction) -> float:
    """Concurrence of the plus channels directly from the closed forms.

    C = 4 |c+ c-| / (c+^2 j + c-^2 4/j) with c+/- = cos(z h+/- / 2); agrees
    with concurrence_from_fg(closed_form_amplitudes(...)) to roundoff.
    """
    j = envelope_j(p.u)
    h_plus, h_minus = geometry_h(dk, dk2)
    c_plus = math.cos(0.5 * p.z * h_plus)
    c_minus = math.cos(0.5 * p.z * h_minus)
    denominator = c_plus * c_plus * j + c_minus * c_minus * 4.0 / j
    if denominator == 0.0:
        raise ConcurrenceUndefinedError("both geometry cosines vanish; no events in this channel")
    return min(4.0 * abs(c_plus * c_minus) / denominator, 1.0)


def relative_weight(a: AmplitudePair) -> float:
    """Unnormalized channel weight N^2, for comparing parameter points."""
    return abs(a.f) ** 2 + abs(a.g) ** 2
