"""Source-mass geometries and the classical response of a test particle.

Two idealised sources are supported: a point mass and an infinite cylinder
described by its line mass density.  Potentials follow the weak-field
Newtonian form; all quantities are in natural units (see :mod:`.units`).

The cylinder potential is referenced so that it vanishes at
``radius * sqrt(e)``; with that choice the potential energy equals the
negative of the local kinetic-energy scale of a circular orbit, which keeps
the two geometries directly comparable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .units import G_NATURAL

_SQRT_E = math.exp(0.5)


@dataclass(frozen=True)
class PointMass:
    """A point (or spherically symmetric) source of mass ``mass`` (eV)."""

    mass: float

    def __post_init__(self):
        if not (self.mass > 0.0 and math.isfinite(self.mass)):
            raise ValueError("point source mass must be positive and finite")


@dataclass(frozen=True)
class Cylinder:
    """An infinite straight cylinder.

    line_density : float
        Mass per unit length in natural units (eV^2).
    radius : float
        Reference radius entering the potential zero point (1/eV).
    """

    line_density: float
    radius: float

    def __post_init__(self):
        if not (self.line_density > 0.0 and math.isfinite(self.line_density)):
            raise ValueError("cylinder line density must be positive and finite")
        if not (self.radius > 0.0 and math.isfinite(self.radius)):
            raise ValueError("cylinder radius must be positive and finite")

    @property
    def zero_radius(self) -> float:
        """Radius at which the potential crosses zero exactly."""
        return self.radius * _SQRT_E


GravitySource = PointMass | Cylinder


def _check_radius(r: float) -> None:
    if not (r > 0.0 and math.isfinite(r)):
        raise ValueError("radial distance must be positive and finite")


def potential_per_mass(source: GravitySource, r: float) -> float:
    """Gravitational potential per unit test mass at radius ``r``.

    Dimensionless for a point source (-G M / r) and for the cylinder
    (2 G rho log(r / (radius sqrt(e)))).
    """
    _check_radius(r)
    if isinstance(source, PointMass):
        return -G_NATURAL * source.mass / r
    # log1p-free on purpose: r == zero_radius must give exactly 0.0, and
    # r / zero_radius == 1.0 -> log(1.0) == 0.0 holds bitwise.
    return 2.0 * G_NATURAL * source.line_density * math.log(r / source.zero_radius)


def potential(source: GravitySource, mass: float, r: float) -> float:
    """Potential energy (eV) of a test particle of mass ``mass`` at radius ``r``."""
    if not (mass > 0.0 and math.isfinite(mass)):
        raise ValueError("test mass must be positive and finite")
    return mass * potential_per_mass(source, r)


def acceleration(source: GravitySource, r: float) -> float:
    """Radial derivative of :func:`potential_per_mass` at ``r``.

    Positive for these attractive sources; the inward pull is its negative.
    """
    _check_radius(r)
    if isinstance(source, PointMass):
        return G_NATURAL * source.mass / r**2
    return 2.0 * G_NATURAL * source.line_density / r


def gradient(source: GravitySource, mass: float, r: float) -> float:
    """Radial derivative of the potential energy, eV^2."""
    if not (mass > 0.0 and math.isfinite(mass)):
        raise ValueError("test mass must be positive and finite")
    return mass * acceleration(source, r)


def classical_displacement(source: GravitySource, r: float, duration: float) -> float:
    """Free-fall displacement -(T^2 / 2) a(R) accumulated over ``duration``.

    Mass independent; negative values point toward the source.
    """
    if duration < 0.0:
        raise ValueError("duration must be non-negative")
    return -0.5 * duration**2 * acceleration(source, r)


def linearization_validity(source: GravitySource, r: float, duration: float) -> float:
    """|classical displacement| / r; small values justify a linearised potential."""
    return abs(classical_displacement(source, r, duration)) / r
