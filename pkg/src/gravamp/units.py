"""Natural-unit conventions and physical constants.

Everything downstream works in natural units with hbar = c = 1 and the
electron-volt as the only surviving scale:

    energy   -> eV
    mass     -> eV        (m c^2)
    length   -> 1/eV      (multiply metres by 1/(hbar c))
    time     -> 1/eV      (multiply seconds by 1/hbar)

Constants are CODATA 2018.  Values that are exact by definition (c, eV, and
therefore kg -> eV) are written out to full precision; measured ones carry
their published digits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# --- SI anchors -------------------------------------------------------------

C_M_S = 299792458.0              # speed of light, m/s (exact)
EV_J = 1.602176634e-19           # electron-volt, J (exact)
HBAR_EV_S = 6.582119569e-16      # hbar, eV s
HBAR_C_EV_M = 1.973269804e-7     # hbar c, eV m
HBAR_J_S = HBAR_EV_S * EV_J      # hbar, J s
G_SI = 6.67430e-11               # Newton constant, m^3 kg^-1 s^-2
U_KG = 1.66053906660e-27         # unified atomic mass unit, kg
U_EV = 931.49410242e6            # unified atomic mass unit, eV

# --- natural-unit conversion factors ----------------------------------------

KG_EV = C_M_S**2 / EV_J          # kg -> eV (exact): 5.609588603804452e35
M_INV_EV = 1.0 / HBAR_C_EV_M     # m -> 1/eV
S_INV_EV = 1.0 / HBAR_EV_S       # s -> 1/eV

# Newton constant in natural units, eV^-2.
G_NATURAL = G_SI * M_INV_EV**3 / (KG_EV * S_INV_EV**2)

# A line mass density in kg/m becomes an energy squared.
KG_PER_M_EV2 = KG_EV * HBAR_C_EV_M

_TWO_PI = 2.0 * math.pi

# Conversion factor to natural units per dimension label.
_NATURAL_FACTOR = {
    "length": M_INV_EV,
    "time": S_INV_EV,
    "mass": KG_EV,
    "energy": 1.0,
    "mass_per_length": KG_PER_M_EV2,
    "dimensionless": 1.0,
}

DIMENSIONS = tuple(sorted(_NATURAL_FACTOR))


@dataclass(frozen=True)
class Quantity:
    """A value in SI base units tagged with one of the supported dimensions.

    value : float
        Magnitude in SI (m, s, kg, eV, kg/m, or pure number).
    dimension : str
        One of ``DIMENSIONS``.
    """

    value: float
    dimension: str

    def __post_init__(self):
        if self.dimension not in _NATURAL_FACTOR:
            raise ValueError(
                "unknown dimension %r; expected one of %s"
                % (self.dimension, ", ".join(DIMENSIONS))
            )
        if not math.isfinite(self.value):
            raise ValueError("quantity value must be finite, got %r" % (self.value,))


def to_natural(quantity: Quantity) -> float:
    """Convert an SI quantity to its natural-unit magnitude (powers of eV)."""
    return quantity.value * _NATURAL_FACTOR[quantity.dimension]


def from_natural(value: float, dimension: str) -> Quantity:
    """Inverse of :func:`to_natural`; returns the SI quantity."""
    if dimension not in _NATURAL_FACTOR:
        raise ValueError(
            "unknown dimension %r; expected one of %s"
            % (dimension, ", ".join(DIMENSIONS))
        )
    return Quantity(value / _NATURAL_FACTOR[dimension], dimension)


def gravitational_phase(source_mass_kg: float, delta_m_ev: float,
                        n_atoms: float, duration_s: float,
                        distance_m: float) -> float:
    """Accumulated differential phase G M (dm) N T / (R hbar c^2), in radians.

    ``delta_m_ev`` is an internal energy splitting; it enters as the mass
    difference dm = dE / c^2.  All arithmetic is plain SI.
    """
    if source_mass_kg <= 0.0 or n_atoms <= 0.0:
        raise ValueError("source mass and atom number must be positive")
    if distance_m <= 0.0:
        raise ValueError("distance must be positive")
    if duration_s < 0.0:
        raise ValueError("duration must be non-negative")
    delta_m_kg = delta_m_ev * EV_J / C_M_S**2
    return (G_SI * source_mass_kg * delta_m_kg * n_atoms * duration_s
            / (distance_m * HBAR_J_S))


def phase_distance_from_resonance(phase: float) -> float:
    """Relative distance of a phase from the nearest multiple of 2 pi."""
    wrapped = math.remainder(phase, _TWO_PI)
    return abs(wrapped) / _TWO_PI
