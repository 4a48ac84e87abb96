"""First-principles reconstruction of the emission amplitudes.

This module rebuilds f and g without touching their closed forms: it expands
the detected Bell state into its four photon-pair kets, attaches one emission
vertex per photon (dipole coupling times position phase, both photons on
shell), and integrates the interaction-picture phases over ordered or
unordered emission times.  Agreement of the resulting f/g ratio with the
closed forms is therefore a genuine cross-check, and it is what the `verify`
CLI subcommand runs.

Conventions, fixed once and used in both channels:

* a photon created with unit wavevector k_hat at (dimensionless) atom
  position X contributes the phase exp(-i k_hat . X);
* emission-time integrands carry exp(i r s) with rate r in units of Omega:
  r = w/Omega - 1 for a lowering vertex and r = w/Omega + 1 for a raising
  (counter-rotating) vertex, i.e. 0 and 2 on shell;
* the g channel has one lowering vertex on each atom and its two time
  integrals factorize over the square [0,u]^2; the f channel has a lowering
  vertex followed by a raising vertex on the same atom, time ordered.

The second-order term of the evolution operator is (1/2) T(S^2); for the f
channel the 1/2 is consumed by the two identical orderings of the same-atom
vertex pair inside T, so no explicit 1/2 appears below.  Only |f|, |g| and
f/g are meaningful: both channels share one positive constant, dropped here.

Every analytic time integral has an adaptive-quadrature twin used as an
independent numerical oracle, because the small-rate series branches are the
most error-prone code in the module.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import integrate

from .amplitudes import (AmplitudePair, BellKind, DimensionlessPoint, envelope_j, geometry_h)
from .kinematics import (AtomGeometry, Direction, PhotonMode, Polarization, dipole_coupling,
                         unit_vector)

SQRT2 = math.sqrt(2.0)

# |rate * u| below which the series branches of the time integrals take over
_SMALL_PHASE = 1e-3


class Atom(Enum):
    A = "A"
    B = "B"


class RotatingSign(Enum):
    """Sign of the atomic phase exp(+/- i Omega s) carried by a vertex."""

    PLUS = +1
    MINUS = -1


@dataclass(frozen=True)
class EmissionVertex:
    """One photon emission: which atom, which rotating sign, which photon.

    The g channel uses one MINUS vertex per atom; the f channel uses a MINUS
    then a PLUS vertex on the same atom, with the PLUS one at the later time.
    """

    atom: Atom
    rotating_sign: RotatingSign
    photon: PhotonMode

    @property
    def phase_rate(self) -> float:
        """Time-phase rate in units of Omega; photons are on shell (w = Omega)."""
        return 1.0 + self.rotating_sign.value


@dataclass(frozen=True)
class KetComponent:
    """One of the four photon-pair kets of a Bell state, with its coefficient."""

    photon1: PhotonMode
    photon2: PhotonMode
    coefficient: complex


def bell_components(bell: BellKind, dk: Direction, dk2: Direction) -> list[KetComponent]:
    """Expand a Bell state over momentum-and-polarization product kets.

    Psi+/-: (k down, k' up) + (k' up, k down) +/- [(k up, k' down) + (k' down, k up)],
    Phi+/-: (k down, k' down) + (k' down, k down) +/- [(k up, k' up) + (k' up, k up)],
    all with coefficient magnitude 1/sqrt2 and no renormalization for distinct
    momenta (the overall scale cancels from every reported quantity).
    """
    up, down = Polarization.UP, Polarization.DOWN
    c = 1.0 / SQRT2
    s = c if bell.is_plus else -c
    k_up, k_down = PhotonMode(dk, up), PhotonMode(dk, down)
    k2_up, k2_down = PhotonMode(dk2, up), PhotonMode(dk2, down)
    if bell in (BellKind.PSI_PLUS, BellKind.PSI_MINUS):
        return [
            KetComponent(k_down, k2_up, c),
            KetComponent(k2_up, k_down, c),
            KetComponent(k_up, k2_down, s),
            KetComponent(k2_down, k_up, s),
        ]
    return [
        KetComponent(k_down, k2_down, c),
        KetComponent(k2_down, k_down, c),
        KetComponent(k_up, k2_up, s),
        KetComponent(k2_up, k_up, s),
    ]


def emission_matrix_element(mode: PhotonMode, atom_position: np.ndarray) -> complex:
    """Creation matrix element of one photon at one atom, in common units.

    dipole_coupling(mode) * exp(-i k_hat . X) with X the atom position in
    units of c/Omega.  The same exp(-i k.x) sign is used for every vertex;
    mixing conventions between channels would silently swap h+ and h-.
    """
    coupling = dipole_coupling(mode.direction, mode.polarization)
    phase = -1.0 * float(np.dot(unit_vector(mode.direction), atom_position))
    return coupling * cmath.exp(1j * phase)


def _phi1(x: complex) -> complex:
    """(e^x - 1)/x, series below |x| = 0.5 to avoid cancellation."""
    if abs(x) >= 0.5:
        return (cmath.exp(x) - 1.0) / x
    total = term = 1.0 + 0.0j
    for k in range(1, 16):
        term *= x / (k + 1)
        total += term
    return total


def _psi(m: int, x: complex) -> complex:
    """Moment integral int_0^1 tau^m e^(x tau) d tau."""
    if abs(x) < 1.0:
        total = 0.0 + 0.0j
        term = 1.0 + 0.0j  # x^k / k!
        for k in range(0, 22):
            if k:
                term *= x / k
            total += term / (m + k + 1)
        return total
    value = _phi1(x)
    ex = cmath.exp(x)
    for mm in range(1, m + 1):
        value = (ex - mm * value) / x
    return value


def time_integral_g(detuning1: float, detuning2: float, u: float) -> complex:
    """Factorized unordered time integral of the g channel.

    int_0^u e^(i d1 s) ds * int_0^u e^(i d2 s) ds; on shell (d1 = d2 = 0) it
    equals u^2.
    """
    if not u > 0.0:
        raise ValueError(f"u must be positive, got {u}")
    return (u * _phi1(1j * detuning1 * u)) * (u * _phi1(1j * detuning2 * u))


def time_integral_f(a: float, b: float, u: float) -> complex:
    """Ordered time integral of the f channel.

    int_0^u ds1 e^(i a s1) int_0^{s1} ds2 e^(i b s2), with a the later
    (raising) vertex rate and b the earlier (lowering) one; on shell
    (a, b) = (2, 0).  Closed form (phi1(i(a+b)u) - phi1(iau)) u / (ib) with a
    series branch in b*u, both stable at a = 0, b = 0 and a + b = 0.
    """
    if not u > 0.0:
        raise ValueError(f"u must be positive, got {u}")
    if abs(b * u) < _SMALL_PHASE:
        # expand the inner integral: sum_k (ib)^k/(k+1)! * int s1^(k+1) e^(ias1)
        total = 0.0 + 0.0j
        coefficient = 1.0 + 0.0j
        u_power = u * u
        for k in range(0, 4):
            if k:
                coefficient *= 1j * b / (k + 1)
                u_power *= u
            total += coefficient * u_power * _psi(k + 1, 1j * a * u)
        return total
    return u * (_phi1(1j * (a + b) * u) - _phi1(1j * a * u)) / (1j * b)


def time_integral_g_quadrature(detuning1: float, detuning2: float, u: float) -> complex:
    """Adaptive-quadrature twin of time_integral_g."""
    factors = []
    for d in (detuning1, detuning2):
        re, _ = integrate.quad(lambda s: math.cos(d * s), 0.0, u, limit=400)
        im, _ = integrate.quad(lambda s: math.sin(d * s), 0.0, u, limit=400)
        factors.append(complex(re, im))
    return factors[0] * factors[1]


def time_integral_f_quadrature(a: float, b: float, u: float) -> complex:
    """Adaptive 2-D quadrature of e^(i(a s1 + b s2)) over 0 <= s2 <= s1 <= u."""
    ranges = [lambda s1: (0.0, s1), (0.0, u)]
    opts = [{"limit": 400, "epsabs": 1e-12, "epsrel": 1e-11}] * 2
    re, _ = integrate.nquad(lambda s2, s1: math.cos(a * s1 + b * s2), ranges, opts=opts)
    im, _ = integrate.nquad(lambda s2, s1: math.sin(a * s1 + b * s2), ranges, opts=opts)
    return complex(re, im)


def oracle_amplitudes(p: DimensionlessPoint, dk: Direction, dk2: Direction,
                      bell: BellKind) -> AmplitudePair:
    """(f, g) assembled from Bell components, vertices, and time integrals."""
    geometry = AtomGeometry(p.z)
    positions = {Atom.A: geometry.position_a, Atom.B: geometry.position_b}
    components = bell_components(bell, dk, dk2)

    f = 0.0 + 0.0j
    g = 0.0 + 0.0j
    for component in components:
        coefficient = complex(component.coefficient).conjugate()
        pair = (component.photon1, component.photon2)
        # f: both photons from one atom, lowering vertex first, summed over
        # the emitting atom and the two photon-to-vertex assignments
        for atom in (Atom.A, Atom.B):
            position = positions[atom]
            for later, earlier in (pair, pair[::-1]):
                raising = EmissionVertex(atom, RotatingSign.PLUS, later)
                lowering = EmissionVertex(atom, RotatingSign.MINUS, earlier)
                f += (coefficient
                      * emission_matrix_element(later, position)
                      * emission_matrix_element(earlier, position)
                      * time_integral_f(raising.phase_rate, lowering.phase_rate, p.u))
        # g: one lowering vertex per atom, summed over the two assignments
        for mode_b, mode_a in (pair, pair[::-1]):
            vertex_b = EmissionVertex(Atom.B, RotatingSign.MINUS, mode_b)
            vertex_a = EmissionVertex(Atom.A, RotatingSign.MINUS, mode_a)
            g += (coefficient
                  * emission_matrix_element(mode_b, positions[Atom.B])
                  * emission_matrix_element(mode_a, positions[Atom.A])
                  * time_integral_g(vertex_b.phase_rate, vertex_a.phase_rate, p.u))
    return AmplitudePair(f, g)


# |cos| below which a closed-form ratio denominator is treated as vanishing
_COS_EPS = 1e-8


@dataclass(frozen=True)
class OracleComparison:
    """Outcome of one oracle-versus-closed-form ratio check.

    status is one of "ok" (ratio compared, within tolerance), "mismatch"
    (ratio compared, above tolerance), "zero_zero" (both sides vanish, as for
    the minus Bell states), "zero_mismatch" (closed form vanishes, oracle does
    not), or "inconclusive" (a cosine too close to zero to form the ratio).
    """

    point: DimensionlessPoint
    bell: BellKind
    oracle_f_abs: float
    oracle_g_abs: float
    oracle_ratio: float | None
    closed_ratio: float | None
    ratio_rel_error: float | None
    status: str


def compare_to_closed_form(p: DimensionlessPoint, dk: Direction, dk2: Direction,
                           bell: BellKind, tolerance: float = 1e-6) -> OracleComparison:
    """Compare the oracle f/g magnitude against the closed forms at one point.

    Only the ratio is compared: it is immune to the common constants of either
    side.  Near-zero denominators are flagged inconclusive, not failed.
    """
    amp = oracle_amplitudes(p, dk, dk2, bell)
    f_abs, g_abs = abs(amp.f), abs(amp.g)
    zero_floor = 1e-12 * max(1.0, p.u * p.u)

    if not bell.is_plus:
        status = "zero_zero" if (f_abs < zero_floor and g_abs < zero_floor) else "zero_mismatch"
        return OracleComparison(p, bell, f_abs, g_abs, None, None, None, status)

    h_plus, h_minus = geometry_h(dk, dk2)
    c_plus = math.cos(0.5 * p.z * h_plus)
    c_minus = math.cos(0.5 * p.z * h_minus)
    j = envelope_j(p.u)

    if abs(c_minus) < _COS_EPS and abs(c_plus) < _COS_EPS:
        return OracleComparison(p, bell, f_abs, g_abs, None, None, None, "inconclusive")
    if abs(c_minus) < _COS_EPS:
        # g vanishes in the closed form: no finite ratio, check g/f is tiny
        inverse = g_abs / f_abs if f_abs > 0.0 else math.inf
        status = "inconclusive" if inverse < tolerance else "mismatch"
        return OracleComparison(p, bell, f_abs, g_abs, inverse, 0.0, None, status)

    closed_ratio = abs(0.5 * j * c_plus / c_minus)
    oracle_ratio = f_abs / g_abs if g_abs > 0.0 else math.inf
    if closed_ratio < _COS_EPS:
        # f vanishes in the closed form: no relative error, check f/g is tiny
        status = "inconclusive" if oracle_ratio < tolerance else "mismatch"
        return OracleComparison(p, bell, f_abs, g_abs, oracle_ratio, closed_ratio, None, status)
    error = abs(oracle_ratio - closed_ratio) / closed_ratio
    status = "ok" if error < tolerance else "mismatch"
    return OracleComparison(p, bell, f_abs, g_abs, oracle_ratio, closed_ratio, error, status)
