"""Closed-form amplification of a post-selected gravitational pointer shift.

The system is an ensemble of N identical atoms prepared in a superposition of
two internal levels whose rest energies differ by ``dm``.  The ensemble's
centre of mass is a Gaussian pointer of width ``d`` that falls toward a source
mass for a time T.  Post-selecting the internal state nearly orthogonal to the
initial one amplifies the tiny branch-dependent displacement: the conditioned
pointer mean is ``amp * x_cl`` with ``x_cl`` the classical free-fall
displacement.

Two phase functions control everything (natural units throughout):

    f : interference phase between the surviving branch amplitudes
    g : overlap-decay exponent, g = (N dm d x_cl / T)^2

and the displacement gain has prefactor beta = N dm d^2 / T:

    leading order  amp = 1 + beta sin f / (1 - cos f)        (diverges at f = 2 pi n)
    exact          amp = 1 + beta e^-g sin f / (1 - e^-g cos f)   (always finite)

The exact-form phase differs from the leading one by a kinetic correction
(4/3) (N dm / T) x_cl^2 plus a spreading-mismatch term that is negligible for
any realistic parameter set.  An alternative orientation of the exact formula,
``amp = 1 - beta e^-g sin f'``  with  ``f' = -f_lead + (2/3)(N dm/T) x_cl^2``,
circulates as well; it agrees with the form above when g and the kinetic
correction vanish but differs at finite g.  The wave-packet oracle
(:mod:`.wavepacket`) singles out the first form, which is therefore the
default; the alternative is kept as ``amp_exact_alt`` for cross-checks.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple

import mpmath as mp

from . import gravity

# Width-mismatch parameter above which the closed forms stop being trustworthy.
_MISMATCH_LIMIT = 1e-6

# Relative splittings larger than this break the equal-kinetic-mass reduction.
_SPLITTING_LIMIT = 1e-9

# |1 - cos f| below this counts as sitting on a leading-order divergence.
_DIVERGENCE_EPS = 1e-12


@dataclass(frozen=True)
class EnsembleParams:
    """Atom-ensemble inputs, all in natural units (eV powers).

    n_atoms : float
        Number of atoms N in the ensemble (>= 1; fractional values allowed
        for sensitivity studies).
    m1 : float
        Rest energy of the lower internal level, eV.
    dm : float
        Level splitting, eV; must satisfy dm / m1 <= 1e-9.
    d : float
        Initial pointer (centre-of-mass packet) width, 1/eV.
    """

    n_atoms: float
    m1: float
    dm: float
    d: float

    def __post_init__(self):
        for name in ("n_atoms", "m1", "dm", "d"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v)):
                raise ValueError("%s must be a finite number" % name)
        if self.n_atoms < 1.0:
            raise ValueError("n_atoms must be at least 1")
        if self.m1 <= 0.0 or self.dm <= 0.0 or self.d <= 0.0:
            raise ValueError("m1, dm and d must be positive")
        if self.dm / self.m1 > _SPLITTING_LIMIT:
            raise ValueError(
                "dm/m1 = %.3e exceeds %.0e; the closed forms assume a "
                "near-degenerate splitting" % (self.dm / self.m1, _SPLITTING_LIMIT)
            )

    @property
    def m2(self) -> float:
        """Rest energy of the upper level, eV."""
        return self.m1 + self.dm

    @property
    def mbar(self) -> float:
        """Total kinetic mass of the ensemble, N m1 (eV)."""
        return self.n_atoms * self.m1


class LeadingAmplification(NamedTuple):
    """Leading-order gain together with its divergence marker."""

    value: float
    diverged: bool


@dataclass(frozen=True)
class PhaseFunctions:
    """The pair (f, g) evaluated for one parameter point."""

    f: float
    g: float
    include_fast_phase: bool
    variant: str


@dataclass(frozen=True)
class AmplificationPoint:
    """Everything the sweep reports for a single evolution time.

    All values are in natural units; ``duration`` is 1/eV.
    """

    duration: float
    f: float
    g: float
    amp_leading: float
    leading_diverged: bool
    amp_exact: float
    transition_probability: float
    x_cl: float
    x_mean: float
    variance_leading: float


def _check_duration(duration: float) -> None:
    if not (duration > 0.0 and math.isfinite(duration)):
        raise ValueError("duration must be positive and finite")


def width_mismatch(params: EnsembleParams, duration: float) -> float:
    """Spreading-rate mismatch between the two branches.

    Equals the difference of the two branch dispersion parameters
    T/(N m_j d^2); the closed forms require it to stay below 1e-6.
    """
    return (duration * params.dm
            / (params.n_atoms * params.m1 * params.m2 * params.d**2))


def _check_mismatch(params: EnsembleParams, duration: float) -> None:
    mism = width_mismatch(params, duration)
    if mism >= _MISMATCH_LIMIT:
        raise ValueError(
            "branch width mismatch %.3e exceeds %.0e; closed-form "
            "amplification is not valid here" % (mism, _MISMATCH_LIMIT)
        )


def _product_mod_2pi(*factors: float) -> float:
    """Product of the factors, reduced modulo 2 pi once it outgrows float64.

    Phases only ever feed trigonometric functions and complex exponentials,
    so dropping whole turns is exact; keeping the raw product instead would
    hand sin/cos a number whose ULP exceeds 2 pi.
    """
    raw = 1.0
    for factor in factors:
        raw *= factor
    if abs(raw) <= 1e9:
        return raw
    digits = 30 + max(0, int(math.log10(abs(raw))))
    with mp.workdps(digits):
        product = mp.mpf(1)
        for factor in factors:
            product *= mp.mpf(factor)
        return float(mp.fmod(product, 2 * mp.pi))


def delta_c_phase(params: EnsembleParams, source, r: float, duration: float,
                  include_fast_phase: bool = False) -> float:
    """Relative phase accumulated between the two branch coefficients.

    T N dm v(R), plus the internal-energy term T N dm when the fast phase is
    kept.  v(R) is the potential per unit mass of the source.  Each term is
    reduced modulo 2 pi if it exceeds float64 phase resolution (the fast term
    does so for any laboratory-scale ensemble).
    """
    # T = 0 is legal here: the coefficients are well defined before any
    # evolution, even though the amplification itself needs T > 0.
    if duration < 0.0 or not math.isfinite(duration):
        raise ValueError("duration must be non-negative and finite")
    v = gravity.potential_per_mass(source, r)
    theta = _product_mod_2pi(duration, params.n_atoms, params.dm, v)
    if include_fast_phase:
        theta += _product_mod_2pi(duration, params.n_atoms, params.dm)
    return theta


def branch_coefficients(params: EnsembleParams, source, r: float,
                        duration: float,
                        include_fast_phase: bool = False) -> tuple[complex, complex]:
    """Post-selected branch amplitudes (c1, c2).

    Pre- and post-selection fix |c1| = |c2| = 1/2 with a relative minus sign;
    evolution adds the relative phase of :func:`delta_c_phase`.  A common
    global phase is unobservable and dropped, so c1 is held real.
    """
    theta = delta_c_phase(params, source, r, duration, include_fast_phase)
    return 0.5 + 0.0j, -0.5 * cmath.exp(-1j * theta)


def curvature_phase(params: EnsembleParams, source, r: float,
                    duration: float) -> float:
    """Kinetic phase scale (N dm / T) x_cl^2 entering the exact f."""
    _check_duration(duration)
    x_cl = gravity.classical_displacement(source, r, duration)
    return params.n_atoms * params.dm * x_cl**2 / duration


def gouy_mismatch_phase(params: EnsembleParams, duration: float) -> float:
    """Spreading-phase difference between the branches.

    Half the difference of the two packet dispersion angles
    arctan(T / (N m_j d^2)); bounded by the width-mismatch guard and utterly
    negligible for laboratory parameters, but kept for completeness.
    """
    eps1 = duration / (params.n_atoms * params.m1 * params.d**2)
    eps2 = duration / (params.n_atoms * params.m2 * params.d**2)
    return 0.5 * math.atan2(eps1 - eps2, 1.0 + eps1 * eps2)


def amplification_prefactor(params: EnsembleParams, duration: float) -> float:
    """Displacement gain scale beta = N dm d^2 / T."""
    _check_duration(duration)
    return params.n_atoms * params.dm * params.d**2 / duration


def phase_functions(params: EnsembleParams, source, r: float, duration: float,
                    include_fast_phase: bool = False,
                    variant: str = "exact") -> PhaseFunctions:
    """Evaluate (f, g) for the requested formula variant.

    variant:
        "exact"    f = -theta_c + (4/3) (N dm/T) x_cl^2 + spreading term
        "alt"      f = +theta_c + (2/3) (N dm/T) x_cl^2
        "leading"  f = -theta_c

    theta_c is :func:`delta_c_phase`; for an attractive source and small
    splitting, -theta_c is positive.  g is variant independent.
    """
    _check_duration(duration)
    _check_mismatch(params, duration)
    theta_c = delta_c_phase(params, source, r, duration, include_fast_phase)
    x_cl = gravity.classical_displacement(source, r, duration)
    g = (params.n_atoms * params.dm * params.d * x_cl / duration) ** 2
    xi = params.n_atoms * params.dm * x_cl**2 / duration
    if variant == "exact":
        f = -theta_c + (4.0 / 3.0) * xi + gouy_mismatch_phase(params, duration)
    elif variant == "alt":
        f = theta_c + (2.0 / 3.0) * xi
    elif variant == "leading":
        f = -theta_c
    else:
        raise ValueError("unknown variant %r" % (variant,))
    return PhaseFunctions(f=f, g=g, include_fast_phase=include_fast_phase,
                          variant=variant)


def _visibility_deficit(f: float, g: float) -> float:
    """1 - e^-g cos f, assembled to stay exact when both f and g are tiny.

    The naive form rounds to zero once f^2/2 + g drops below one ULP of 1;
    2 sin^2(f/2) + cos f (1 - e^-g) has no cancellation at all.
    """
    return 2.0 * math.sin(0.5 * f) ** 2 - math.cos(f) * math.expm1(-g)


def amp_leading_from_phase(prefactor: float, f: float) -> LeadingAmplification:
    """1 + prefactor sin f / (1 - cos f), flagged when f sits on a pole."""
    den = 2.0 * math.sin(0.5 * f) ** 2
    if abs(den) < _DIVERGENCE_EPS:
        sign = prefactor * math.sin(f)
        return LeadingAmplification(math.copysign(math.inf, sign), True)
    return LeadingAmplification(1.0 + prefactor * math.sin(f) / den, False)


def amp_exact_from_phase(prefactor: float, f: float, g: float) -> float:
    """1 + prefactor e^-g sin f / (1 - e^-g cos f); finite for any g > 0."""
    if not g > 0.0:
        raise ValueError("overlap exponent g must be positive")
    return 1.0 + (prefactor * math.exp(-g) * math.sin(f)
                  / _visibility_deficit(f, g))


def amp_exact_alt_from_phase(prefactor: float, f: float, g: float) -> float:
    """Alternative orientation 1 - prefactor e^-g sin f / (1 - e^-g cos f)."""
    if not g > 0.0:
        raise ValueError("overlap exponent g must be positive")
    return 1.0 - (prefactor * math.exp(-g) * math.sin(f)
                  / _visibility_deficit(f, g))


def transition_probability_from_phase(f: float, g: float) -> float:
    """Post-selection success probability (1 - e^-g cos f) / 2."""
    if not g >= 0.0:
        raise ValueError("overlap exponent g must be non-negative")
    return 0.5 * _visibility_deficit(f, g)


def amp_leading(params: EnsembleParams, source, r: float, duration: float,
                include_fast_phase: bool = False) -> LeadingAmplification:
    """Leading-order pointer gain at one parameter point."""
    pf = phase_functions(params, source, r, duration, include_fast_phase,
                         variant="leading")
    beta = amplification_prefactor(params, duration)
    return amp_leading_from_phase(beta, pf.f)


def amp_exact(params: EnsembleParams, source, r: float, duration: float,
              include_fast_phase: bool = False) -> float:
    """Exact (always finite) pointer gain at one parameter point."""
    pf = phase_functions(params, source, r, duration, include_fast_phase,
                         variant="exact")
    beta = amplification_prefactor(params, duration)
    return amp_exact_from_phase(beta, pf.f, pf.g)


def amp_exact_alt(params: EnsembleParams, source, r: float, duration: float,
                  include_fast_phase: bool = False) -> float:
    """The alternative exact orientation, for convention comparisons."""
    pf = phase_functions(params, source, r, duration, include_fast_phase,
                         variant="alt")
    beta = amplification_prefactor(params, duration)
    return amp_exact_alt_from_phase(beta, pf.f, pf.g)


def transition_probability(params: EnsembleParams, source, r: float,
                           duration: float,
                           include_fast_phase: bool = False) -> float:
    """Probability that the post-selection succeeds for one atom ensemble."""
    pf = phase_functions(params, source, r, duration, include_fast_phase,
                         variant="exact")
    return transition_probability_from_phase(pf.f, pf.g)


def surviving_atoms(params: EnsembleParams, probability: float) -> float:
    """Expected number of atoms in the post-selected sample, N p."""
    if not 0.0 <= probability <= 1.0:
        raise ValueError("probability must lie in [0, 1]")
    return params.n_atoms * probability


def pointer_variance_leading(params: EnsembleParams, duration: float) -> float:
    """Squared width d(T)^2 = d^2 (1 + (T / (mbar d^2))^2) of the free pointer.

    This is the squared amplitude width; the position variance of the
    corresponding density is half of it.  Post-selection corrections enter
    only at higher order in the coupling.
    """
    if duration < 0.0:
        raise ValueError("duration must be non-negative")
    eps = duration / (params.mbar * params.d**2)
    return params.d**2 * (1.0 + eps**2)


def amplification_point(params: EnsembleParams, source, r: float,
                        duration: float,
                        include_fast_phase: bool = False) -> AmplificationPoint:
    """Evaluate every reported quantity at a single evolution time."""
    pf_exact = phase_functions(params, source, r, duration, include_fast_phase,
                               variant="exact")
    pf_lead = phase_functions(params, source, r, duration, include_fast_phase,
                              variant="leading")
    beta = amplification_prefactor(params, duration)
    lead = amp_leading_from_phase(beta, pf_lead.f)
    exact = amp_exact_from_phase(beta, pf_exact.f, pf_exact.g)
    p_tran = transition_probability_from_phase(pf_exact.f, pf_exact.g)
    x_cl = gravity.classical_displacement(source, r, duration)
    return AmplificationPoint(
        duration=duration,
        f=pf_exact.f,
        g=pf_exact.g,
        amp_leading=lead.value,
        leading_diverged=lead.diverged,
        amp_exact=exact,
        transition_probability=p_tran,
        x_cl=x_cl,
        x_mean=exact * x_cl,
        variance_leading=pointer_variance_leading(params, duration),
    )
