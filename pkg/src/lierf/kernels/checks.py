"""Kernel symmetry, commutator triviality and support classification."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .fields import DegenerateKernelError, KernelSpec
from .grid import MomentumGrid, minkowski_dot, reflect, shift


@dataclass
class SymmetryResult:
    c: complex
    residual: float
    tolerance: float
    passed: bool

    def as_dict(self) -> dict:
        return {"c": [self.c.real, self.c.imag], "residual": self.residual,
                "tolerance": self.tolerance, "pass": self.passed}


def kernel_symmetry_check(k: KernelSpec, tol: float = 1e-12) -> SymmetryResult:
    """Best ``c`` in ``G(v) = c conj(G(-v))`` (least squares) and the max relative residual."""
    g = k.values
    scale = float(np.max(np.abs(g))) if g.size else 0.0
    if scale == 0.0:
        raise DegenerateKernelError("kernel is identically zero")
    gr = np.conj(reflect(g))
    c = complex(np.vdot(gr, g) / np.vdot(gr, gr))
    residual = float(np.max(np.abs(g - c * gr)) / scale)
    passed = residual <= tol and abs(abs(c) - 1.0) <= tol
    return SymmetryResult(c, residual, tol, passed)


@dataclass
class CommutatorResult:
    integral: float
    symmetry_defect: float
    zero_shift: float

    @property
    def residual(self) -> float:
        return max(self.integral, self.symmetry_defect)


def _pair_products(values: np.ndarray, s, axes) -> tuple[np.ndarray, np.ndarray]:
    """``P(z) = conj(G((z-s)/2)) G((z+s)/2)`` and its ``z -> -z`` image.

    Writing ``w = (z-s)/2`` runs over every grid index exactly once, which is
    the even-index sublattice of ``z`` for the given ``s``.
    """
    gs = shift(values, s, axes)
    p = np.conj(values) * gs
    # z -> -z sends (w, w+s) to (-w-s, -w)
    rv = reflect(values, axes)
    q = np.conj(shift(rv, s, axes)) * rv
    return p, q


def commutator_details(k: KernelSpec, shifts=None, xs=None, seed: int = 0,
                       n_x: int = 6) -> CommutatorResult:
    """Relative size of the commutator integrand across shifts ``s`` and positions ``x``.

    For each ``s`` the integral part is
    ``|sum_z P(z) (exp(i x.z) - exp(-i x.z))| / (2 sum |G|^2)`` maximised over
    the sampled ``x``; the symmetry defect is ``max |P(z) - P(-z)| / max|G|^2``.
    """
    grid = k.grid
    d = grid.dimension
    axes = tuple(range(d))
    g = k.values
    norm2 = float(np.sum(np.abs(g) ** 2))
    peak2 = float(np.max(np.abs(g))) ** 2
    if norm2 == 0.0:
        return CommutatorResult(0.0, 0.0, 0.0)
    if shifts is None:
        shifts = list(np.ndindex(*grid.shape))
    if xs is None:
        rng = np.random.default_rng(seed)
        half_width = np.pi / grid.spacing
        xs = rng.uniform(-half_width, half_width, size=(n_x, d))
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    p_mom = grid.momenta
    worst_int = worst_sym = zero = 0.0
    for s in shifts:
        s = tuple(int(v) for v in s)
        p, q = _pair_products(g, s, axes)
        z = p_mom + shift(p_mom, s, tuple(range(1, d + 1)))
        sym = float(np.max(np.abs(p - q))) / peak2
        integ = 0.0
        for x in xs:
            phase = minkowski_dot(x.reshape((d,) + (1,) * d), z)
            val = abs(np.sum(p * (np.exp(1j * phase) - np.exp(-1j * phase)))) / (2 * norm2)
            integ = max(integ, float(val))
        worst_int = max(worst_int, integ)
        worst_sym = max(worst_sym, sym)
        if not any(s):
            zero = integ
    return CommutatorResult(worst_int, worst_sym, zero)


def commutator_residual(k: KernelSpec, shifts=None, xs=None, seed: int = 0) -> float:
    """Max over samples of the commutator integral and the direct ``z -> -z`` defect."""
    return commutator_details(k, shifts, xs, seed).residual


class Classification(str, Enum):
    RANDOM_FIELD = "random-field"
    SPECTRUM_CONDITION = "spectrum-condition"
    NEITHER = "neither"


def in_forward_cone(grid: MomentumGrid, mask: np.ndarray) -> bool:
    v0 = grid.momenta[0]
    cone = (v0 >= 0) & (grid.minkowski_square() >= 0)
    return bool(np.all(cone[mask]))


def spectrum_support_classify(k: KernelSpec, tol: float = 1e-12) -> Classification:
    """Random field if the phase symmetry holds, spectrum condition if supported in the closed forward cone."""
    g = np.abs(k.values)
    peak = float(np.max(g))
    if peak == 0.0:
        return Classification.NEITHER
    if kernel_symmetry_check(k, tol).passed:
        return Classification.RANDOM_FIELD
    if in_forward_cone(k.grid, g > tol * peak):
        return Classification.SPECTRUM_CONDITION
    return Classification.NEITHER
