"""Weak values and Gaussian pointer readout for finite-dimensional systems.

A system prepared in ``psi_i`` couples weakly to a pointer and is then
post-selected on ``psi_f``.  The conditioned pointer responds to the weak
value

    W = <psi_f| A |psi_i> / <psi_f | psi_i>

whose real part shifts a momentum-coupled pointer by g Re W and whose
imaginary part shifts a position-coupled pointer by d^2 Im W (with the
coupling history absorbed into W).  States are plain complex vectors;
operators are square complex matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PostSelectionSingular

_ORTHOGONALITY_TOL = 1e-12
_HERMITICITY_TOL = 1e-12


@dataclass(frozen=True)
class WeakValue:
    """A weak value with its post-selection overlap and conditioning.

    conditioning = |overlap| / (|psi_i| |psi_f|), in (0, 1]; small values mean
    large amplification and large sensitivity to everything.
    """

    value: complex
    overlap: complex
    conditioning: float


def _as_state(psi, name: str) -> np.ndarray:
    arr = np.asarray(psi, dtype=complex).reshape(-1)
    if arr.size == 0:
        raise ValueError("%s must be a non-empty vector" % name)
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise ValueError("%s must be finite" % name)
    if np.linalg.norm(arr) == 0.0:
        raise ValueError("%s must be non-zero" % name)
    return arr


def _as_observable(op) -> np.ndarray:
    mat = np.asarray(op, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError("observable must be a square matrix")
    scale = np.abs(mat).max()
    dev = np.abs(mat - mat.conj().T).max()
    if dev > _HERMITICITY_TOL * max(scale, 1e-300):
        raise ValueError(
            "observable is not Hermitian: max |A - A^dag| = %.3e "
            "exceeds %.0e of its largest entry" % (dev, _HERMITICITY_TOL))
    return mat


def weak_value(observable, psi_initial, psi_final) -> WeakValue:
    """Weak value of ``observable`` between ``psi_initial`` and ``psi_final``.

    Raises PostSelectionSingular when the two states are orthogonal to within
    1e-12 of their norms: the weak value is then undefined and any pointer
    model built on it has already broken down.
    """
    mat = _as_observable(observable)
    vi = _as_state(psi_initial, "psi_initial")
    vf = _as_state(psi_final, "psi_final")
    if vi.size != vf.size or vi.size != mat.shape[0]:
        raise ValueError("dimension mismatch between states and observable")
    norm_i = np.linalg.norm(vi)
    norm_f = np.linalg.norm(vf)
    overlap = np.vdot(vf, vi)
    threshold = _ORTHOGONALITY_TOL * norm_i * norm_f
    if abs(overlap) <= threshold:
        raise PostSelectionSingular(float(abs(overlap)), float(threshold))
    value = np.vdot(vf, mat @ vi) / overlap
    return WeakValue(value=complex(value), overlap=complex(overlap),
                     conditioning=float(abs(overlap) / (norm_i * norm_f)))


def _merged_spectrum(eigenvalues: np.ndarray, weights: np.ndarray):
    """Sum weights of numerically degenerate eigenvalues."""
    scale = max(1.0, float(np.abs(eigenvalues).max()))
    tol = 1e-12 * scale
    merged_vals = []
    merged_wts = []
    for a, w in zip(eigenvalues, weights):       # eigh returns them ascending
        if merged_vals and a - merged_vals[-1] <= tol:
            merged_wts[-1] += w
        else:
            merged_vals.append(float(a))
            merged_wts.append(float(w))
    return merged_vals, merged_wts


def pointer_distribution(observable, psi_initial, coupling: float,
                         width: float, grid) -> tuple[np.ndarray, np.ndarray]:
    """Unconditioned pointer density after an impulsive coupling.

    Each eigenvalue a_k of the observable displaces a Gaussian of width
    ``width`` by coupling * a_k, weighted by |<a_k|psi_i>|^2 (degenerate
    eigenvalues merged).  ``grid`` is (x_min, x_max, points); returns (x,
    density) with the density normalised as a function, not per sample.
    """
    if width <= 0.0:
        raise ValueError("pointer width must be positive")
    x_min, x_max, points = grid
    if not (x_max > x_min and points >= 2):
        raise ValueError("grid must be (x_min, x_max, points>=2)")
    mat = _as_observable(observable)
    vi = _as_state(psi_initial, "psi_initial")
    if vi.size != mat.shape[0]:
        raise ValueError("dimension mismatch between state and observable")
    eigenvalues, vectors = np.linalg.eigh(mat)
    amps = vectors.conj().T @ vi
    weights = np.abs(amps) ** 2 / np.linalg.norm(vi) ** 2
    values, masses = _merged_spectrum(eigenvalues, weights)
    x = np.linspace(x_min, x_max, int(points))
    density = np.zeros_like(x)
    for a, wt in zip(values, masses):
        u = (x - coupling * a) / width
        density += wt * np.exp(-u ** 2) / (width * math.sqrt(math.pi))
    return x, density


def pointer_shift_leading(weak_val, mode: str, coupling: float = None,
                          width: float = None) -> float:
    """First-order conditioned pointer shift for a weak coupling.

    mode "momentum": the pointer position shifts by coupling * Re W.
    mode "position": the pointer position shifts by width^2 * Im W, with the
    coupling history (e.g. a factor T for a constant interaction) already
    inside W.
    """
    value = weak_val.value if isinstance(weak_val, WeakValue) else complex(weak_val)
    if mode == "momentum":
        if coupling is None:
            raise ValueError("momentum mode needs the coupling strength")
        return coupling * value.real
    if mode == "position":
        if width is None:
            raise ValueError("position mode needs the pointer width")
        return width ** 2 * value.imag
    raise ValueError("mode must be 'momentum' or 'position'")
