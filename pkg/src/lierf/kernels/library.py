"""Builders for the kernels and test functions used by the checks and fixtures."""

from __future__ import annotations

import cmath
import math

import numpy as np

from .fields import KernelSpec
from .grid import MomentumGrid, reflect

DEFAULT_GRID = MomentumGrid(2, 32, 0.25)

PHASES = {"c1": 1.0 + 0j, "ci": 1j, "cpi4": cmath.exp(1j * math.pi / 4)}


def window(grid: MomentumGrid, frac: float = 0.9) -> np.ndarray:
    """Smooth radial cutoff, identically zero before the Nyquist edge."""
    r_max = frac * (grid.n // 2) * grid.spacing
    r = grid.euclidean_norm()
    return np.where(r < r_max, np.cos(0.5 * math.pi * np.minimum(r / r_max, 1.0)) ** 2, 0.0)


def shell_profile(grid: MomentumGrid, mass: float = 1.0, width: float = 1.0) -> np.ndarray:
    """Even, real weight concentrated near ``v.v = mass**2``."""
    vv = grid.minkowski_square()
    return np.exp(-((vv - mass ** 2) ** 2) / (2 * width ** 2)) * window(grid)


def shell_kernel(grid: MomentumGrid = DEFAULT_GRID, c: complex = 1.0, lam: float = 1.0,
                 mass: float = 1.0, width: float = 1.0, beta: float = 0.7, kappa: float = 1.3,
                 label: str = "") -> KernelSpec:
    """``c**(1/2) R(v) exp(i beta sin(kappa v0))``; satisfies ``G(v) = c conj(G(-v))``."""
    c = complex(c)
    root = cmath.exp(0.5j * cmath.phase(c))
    v0 = grid.momenta[0]
    values = root * shell_profile(grid, mass, width) * np.exp(1j * beta * np.sin(kappa * v0))
    return KernelSpec(grid, values, lam, c, label or "shell")


def broken_kernel(grid: MomentumGrid = DEFAULT_GRID, lam: float = 1.0, strength: float = 0.5) -> KernelSpec:
    """Shell kernel with a time-odd modulus, so neither the symmetry nor triviality hold."""
    base = shell_kernel(grid, 1.0, lam)
    values = base.values * (1.0 + strength * np.tanh(grid.momenta[0]))
    return KernelSpec(grid, values, lam, None, "broken")


def forward_cone_kernel(grid: MomentumGrid = DEFAULT_GRID, lam: float = 1.0,
                        mass: float = 1.0, width: float = 1.0) -> KernelSpec:
    """Shell weight restricted to the closed forward light cone."""
    v0 = grid.momenta[0]
    cone = (v0 >= 0) & (grid.minkowski_square() >= 0)
    return KernelSpec(grid, np.where(cone, shell_profile(grid, mass, width), 0.0), lam, None, "forward-cone")


def mass_shell_indicator(grid: MomentumGrid = DEFAULT_GRID, mass: float = 1.0, tol: float | None = None,
                         lam: float = 1.0) -> KernelSpec:
    """1 where ``|v.v - mass**2| <= tol`` (default: one grid spacing), else 0."""
    tol = grid.spacing if tol is None else tol
    on = np.abs(grid.minkowski_square() - mass ** 2) <= tol
    return KernelSpec(grid, on.astype(float), lam, 1.0, "mass-shell")


def phase_kernel(grid: MomentumGrid, theta_fn, const: float, lam: float = 1.0) -> KernelSpec:
    """Pure phase ``exp(i theta(v))`` with ``theta(-v) = -theta(v) + const``.

    ``theta`` is the odd part of ``theta_fn(momenta)`` plus ``const/2``, so the
    kernel satisfies ``G(v) = exp(i const) conj(G(-v))``.
    """
    a = np.asarray(theta_fn(grid.momenta), dtype=float)
    theta = 0.5 * (a - reflect(a)) + 0.5 * const
    return KernelSpec(grid, np.exp(1j * theta), lam, None, "phase")


def noise_kernel(grid: MomentumGrid, rng: np.random.Generator, lam: float = 1.0) -> KernelSpec:
    values = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
    return KernelSpec(grid, values, lam, None, "noise")


def random_test_function(grid: MomentumGrid, rng: np.random.Generator, real: bool = False,
                         frac: float = 0.9) -> np.ndarray:
    """Windowed complex Gaussian noise; ``real`` imposes ``f(-k) = conj(f(k))``."""
    g = (rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)) * window(grid, frac)
    if real:
        g = 0.5 * (g + np.conj(reflect(g)))
    return g


def conjugate_test_function(f: np.ndarray) -> np.ndarray:
    """Fourier data of the complex-conjugate test function: ``conj(f(-k))``."""
    return np.conj(reflect(np.asarray(f)))
