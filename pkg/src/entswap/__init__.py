"""Post-selected entanglement swapping between two distant two-level emitters.

Two initially excited atoms radiate into a shared vacuum; detecting the two
emitted photons in a Bell state projects the atoms onto f|EE> + g|GG>.  This
package computes the second-order amplitudes f and g in closed form, rebuilds
them from first-principles time-ordered integrals as an independent check,
and scans the concurrence of the projected pair over separation, interaction
time, and detector geometry -- including the regime where the atoms stay
outside each other's light cone.
"""

from .amplitudes import (AmplitudePair, BellKind, ConcurrenceUndefinedError, DimensionlessPoint,
                         PhysicalScale, closed_form_amplitudes, concurrence_closed,
                         concurrence_from_fg, envelope_j, geometry_h, prefactor_K,
                         relative_weight)
from .kinematics import (AtomGeometry, Direction, PhotonMode, Polarization, dipole_coupling,
                         fig1_preset, polarization_basis, unit_vector, updown_vector)
from .oracle import (EmissionVertex, KetComponent, OracleComparison, bell_components,
                     compare_to_closed_form, emission_matrix_element, oracle_amplitudes,
                     time_integral_f, time_integral_g)
from .sweep import (ApparatusTiming, CausalClass, SweepKind, SweepRecord, SweepSpec,
                    classify_causality, detection_timing, evaluate_point, fig4_preset,
                    run_sweep)

__version__ = "0.1.0"
