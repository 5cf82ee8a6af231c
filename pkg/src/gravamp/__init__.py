"""Gravitationally amplified pointer shifts for post-selected atom ensembles.

The package evaluates how far the centre-of-mass pointer of an N-atom
ensemble moves when the atoms, prepared in a superposition of two internal
levels, fall toward a source mass and are then post-selected on the nearly
orthogonal internal state.  Closed formulas (:mod:`.analytic`) are backed by
two independent wave-packet oracles (:mod:`.wavepacket`), a weak-value layer
(:mod:`.weakcore`), source geometries (:mod:`.gravity`), natural-unit
handling (:mod:`.units`) and a CLI (:mod:`.cli`).
"""

from .analytic import (AmplificationPoint, EnsembleParams, LeadingAmplification,
                       PhaseFunctions, amp_exact, amp_exact_alt, amp_leading,
                       amplification_point, amplification_prefactor,
                       branch_coefficients, delta_c_phase, phase_functions,
                       pointer_variance_leading, surviving_atoms,
                       transition_probability)
from .errors import (ConfigError, GridEscapeError, GridUnrepresentableError,
                     PostSelectionExtinguished, PostSelectionSingular)
from .gravity import (Cylinder, GravitySource, PointMass, acceleration,
                      classical_displacement, gradient, linearization_validity,
                      potential, potential_per_mass)
from .units import (G_NATURAL, HBAR_C_EV_M, HBAR_EV_S, KG_EV, Quantity,
                    from_natural, gravitational_phase, to_natural)
from .wavepacket import (Branch, BranchSet, GaussianPacket, GridWavefunction,
                         OracleResult, gaussian_overlap_moments,
                         oracle_amplification, post_select_moments,
                         propagate_gaussian_linear, reduced_branch_set,
                         sample_packet, split_step_evolve)
from .weakcore import (WeakValue, pointer_distribution, pointer_shift_leading,
                       weak_value)

__version__ = "0.1.0"

__all__ = [
    "AmplificationPoint", "Branch", "BranchSet", "ConfigError", "Cylinder",
    "EnsembleParams", "G_NATURAL", "GaussianPacket", "GravitySource",
    "GridEscapeError", "GridUnrepresentableError", "GridWavefunction",
    "HBAR_C_EV_M", "HBAR_EV_S", "KG_EV", "LeadingAmplification",
    "OracleResult", "PhaseFunctions", "PointMass", "PostSelectionExtinguished",
    "PostSelectionSingular", "Quantity", "WeakValue", "acceleration",
    "amp_exact", "amp_exact_alt", "amp_leading", "amplification_point",
    "amplification_prefactor", "branch_coefficients", "classical_displacement",
    "delta_c_phase", "from_natural", "gaussian_overlap_moments", "gradient",
    "gravitational_phase", "linearization_validity", "oracle_amplification",
    "phase_functions", "pointer_distribution", "pointer_shift_leading",
    "pointer_variance_leading", "post_select_moments", "potential",
    "potential_per_mass", "propagate_gaussian_linear", "reduced_branch_set",
    "sample_packet", "split_step_evolve", "surviving_atoms", "to_natural",
    "transition_probability", "weak_value",
]
