"""Kernels on the cotangent bundle: ``G(u, p)`` with ``u`` Fourier-dual to position.

Test functions depend on a momentum-space frequency ``u`` and on a
momentum coordinate ``p``; only ``u`` is Fourier transformed, so the inner
product sums over the product grid and the structure function convolves in
``u`` at fixed ``p``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

import numpy as np

from .checks import _pair_products
from .fields import _check_lambda
from .grid import GridMismatchError, MomentumGrid, minkowski_dot

KINDS = ("gaussian", "power_law")


def p_axis(n: int, spacing: float) -> np.ndarray:
    """Cell-centred p samples symmetric about 0; ``p = 0`` itself is never a sample."""
    return (np.arange(n) - n / 2 + 0.5) * spacing


def cotangent_profile(kind: str, u: np.ndarray, p: np.ndarray, m: float, r: float | None = None) -> np.ndarray:
    """Evaluate ``G(u, p)`` for broadcastable component arrays ``u``, ``p`` (leading axis = index).

    gaussian:  theta(u.u - m^2) theta(p.p) theta(p0) exp(-(2 (u.p)^2 / u.u - p.p) / (2 m^2))
    power_law: theta(u.u - m^2) theta(p.p) theta(p0) (m^4 + 2 (u.p)^2 - (u.u)(p.p))^(-r/2)
    Outside the step-function support the value is exactly 0.
    """
    uu = minkowski_dot(u, u)
    pp = minkowski_dot(p, p)
    up = minkowski_dot(u, p)
    support = (uu >= m * m) & (pp >= 0) & (p[0] >= 0)
    if kind == "gaussian":
        safe_uu = np.where(support, uu, 1.0)
        expo = (2 * up ** 2 / safe_uu - pp) / (2 * m * m)
        return np.where(support, np.exp(-np.where(support, expo, 0.0)), 0.0)
    if kind == "power_law":
        den = m ** 4 + 2 * up ** 2 - uu * pp
        safe = np.where(support, den, 1.0)
        return np.where(support, safe ** (-0.5 * r), 0.0)
    raise ValueError("unknown cotangent kernel kind %r" % (kind,))


@dataclass
class CotangentKernelSpec:
    """``G(u, p)`` tabulated with shape ``u_grid.shape + (len(p),) * d``."""

    u_grid: MomentumGrid
    p: np.ndarray
    values: np.ndarray
    lam: float
    kind: str
    m: float
    r: float | None
    symmetry_defect: float

    @property
    def d(self) -> int:
        return self.u_grid.dimension

    @property
    def u_axes(self) -> tuple[int, ...]:
        return tuple(range(self.d))

    @property
    def shape(self) -> tuple[int, ...]:
        return self.u_grid.shape + (len(self.p),) * self.d


def _broadcast_components(grid: MomentumGrid, p: np.ndarray):
    d = grid.dimension
    u = grid.momenta.reshape((d,) + grid.shape + (1,) * d)
    pm = np.stack(np.meshgrid(*([p] * d), indexing="ij"))
    pm = pm.reshape((d,) + (1,) * d + (len(p),) * d)
    return u, pm


def symmetry_defect(values: np.ndarray, d: int, shifts) -> float:
    """``max |P(z) - P(-z)| / max|G|^2`` over the given ``u`` shifts, for every ``p`` at once."""
    peak2 = float(np.max(np.abs(values))) ** 2
    if peak2 == 0.0:
        return 0.0
    axes = tuple(range(d))
    worst = 0.0
    for s in shifts:
        p, q = _pair_products(values, tuple(s), axes)
        worst = max(worst, float(np.max(np.abs(p - q))) / peak2)
    return worst


def make_cotangent_kernel(kind: str, m: float = 1.0, r: float | None = None,
                          u_grid: MomentumGrid | None = None, p_points: int = 16,
                          p_spacing: float = 0.5, lam: float = 1.0, n_shifts: int = 12,
                          seed: int = 0, tol: float = 1e-12) -> CotangentKernelSpec:
    """Tabulate a cotangent kernel and verify its ``z -> -z`` pair symmetry at sampled shifts.

    The Nyquist planes of the ``u`` grid are zeroed since their negation is
    not a grid point.
    """
    if kind not in KINDS:
        raise ValueError("kind must be one of %s" % (KINDS,))
    if not m > 0:
        raise ValueError("m must be positive")
    if kind == "power_law" and (r is None or not r > 0):
        raise ValueError("power_law needs r > 0")
    if p_points < 2 or not p_spacing > 0:
        raise ValueError("invalid p grid")
    u_grid = u_grid or MomentumGrid(2, 16, 0.5)
    p = p_axis(p_points, p_spacing)
    u, pm = _broadcast_components(u_grid, p)
    values = cotangent_profile(kind, u, pm, m, r).astype(complex)
    # u -> -u is not representable on the Nyquist planes; keep them out of the support
    values[u_grid.nyquist_mask()] = 0.0
    rng = np.random.default_rng(seed)
    shifts = [(0,) * u_grid.dimension] + [tuple(rng.integers(0, u_grid.n, u_grid.dimension))
                                          for _ in range(n_shifts)]
    defect = symmetry_defect(values, u_grid.dimension, shifts)
    if defect > tol:
        raise ValueError("cotangent kernel fails the pair symmetry (defect %.3g)" % defect)
    return CotangentKernelSpec(u_grid, p, values, _check_lambda(lam), kind, float(m),
                               None if r is None else float(r), defect)


def cotangent_test_function(ck: CotangentKernelSpec, f_u: np.ndarray, exponents: Sequence[int]) -> np.ndarray:
    """``F(u) * prod_i p_i^{a_i}`` on the product grid."""
    d = ck.d
    if len(exponents) != d:
        raise ValueError("need one exponent per p component")
    f_u = np.asarray(f_u, dtype=complex)
    if f_u.shape != ck.u_grid.shape:
        raise GridMismatchError("F(u) does not match the u grid")
    poly = np.ones((len(ck.p),) * d)
    for i, a in enumerate(exponents):
        shape = [1] * d
        shape[i] = len(ck.p)
        poly = poly * (ck.p ** a).reshape(shape)
    return f_u.reshape(f_u.shape + (1,) * d) * poly.reshape((1,) * d + poly.shape)


def _check_field(f, ck: CotangentKernelSpec) -> np.ndarray:
    f = np.asarray(f, dtype=complex)
    if f.shape != ck.shape:
        raise GridMismatchError("field shape %s, product grid %s" % (f.shape, ck.shape))
    return f


def cotangent_ip(f, g, ck: CotangentKernelSpec) -> complex:
    """``sum_{u,p} conj(G f)(u,p) (G g)(u,p)``."""
    hf = ck.values * _check_field(f, ck)
    hg = ck.values * _check_field(g, ck)
    return complex(np.vdot(hf, hg))


def cotangent_xi(f, g, ck: CotangentKernelSpec) -> np.ndarray:
    """Gimel form of ``xi(f;g)``: ``lam sum_u conj(h_f(u,p)) h_g(u+s,p)`` at each fixed ``p``."""
    hf = ck.values * _check_field(f, ck)
    hg = ck.values * _check_field(g, ck)
    axes = ck.u_axes
    spec = np.conj(np.fft.fftn(hf, axes=axes)) * np.fft.fftn(hg, axes=axes)
    return ck.lam * np.fft.ifftn(spec, axes=axes)


def default_u_weight(grid: MomentumGrid, center=None, width: float = 1.0) -> np.ndarray:
    """Gaussian bump in ``u`` centred on a timelike momentum (default ``(2, 0, ...)``)."""
    d = grid.dimension
    if center is None:
        center = np.zeros(d)
        center[0] = 2.0
    center = np.asarray(center, dtype=float)
    u = grid.momenta
    dist2 = np.sum((u - center.reshape((d,) + (1,) * d)) ** 2, axis=0)
    return np.exp(-dist2 / (2 * width ** 2))


def multinomials(d: int, degree: int) -> list[tuple[int, ...]]:
    return [e for e in product(range(degree + 1), repeat=d) if sum(e) == degree]


@dataclass
class RangeStudy:
    kind: str
    exponents: tuple
    p_points: list
    sums: list
    increments: list
    verdict: str
    last_relative_increment: float

    def as_dict(self) -> dict:
        return {"kind": self.kind, "exponents": list(self.exponents), "p_points": self.p_points,
                "sums": self.sums, "increments": self.increments, "verdict": self.verdict,
                "last_relative_increment": self.last_relative_increment}


def norm_sum(kind: str, m: float, r: float | None, u_grid: MomentumGrid, f_u: np.ndarray,
             exponents: Sequence[int], p: np.ndarray) -> float:
    """``(T;T)`` for ``T = F(u) * p^exponents`` over the product grid, one ``u`` row at a time."""
    d = u_grid.dimension
    pm = np.stack(np.meshgrid(*([p] * d), indexing="ij"))
    poly2 = np.ones(pm.shape[1:])
    for i, a in enumerate(exponents):
        poly2 = poly2 * pm[i] ** (2 * a)
    total = 0.0
    u_all = u_grid.momenta
    weight = np.where(u_grid.nyquist_mask(), 0.0, np.abs(f_u) ** 2)
    for idx in np.ndindex(*u_grid.shape):
        w = weight[idx]
        if w == 0.0:
            continue
        u = u_all[(slice(None),) + idx].reshape((d,) + (1,) * d)
        g = cotangent_profile(kind, u, pm, m, r)
        total += w * float(np.sum(g * g * poly2))
    return total


def p_range_study(kind: str, exponents: Sequence[int], m: float = 1.0, r: float | None = None,
                  u_grid: MomentumGrid | None = None, p_spacing: float = 0.5,
                  p_points: Sequence[int] = (16, 32, 64, 128), f_u: np.ndarray | None = None,
                  conv_tol: float = 0.01, growth_ratio: float = 0.5) -> RangeStudy:
    """Track ``(T;T)`` as the p range doubles at fixed spacing and classify the trend.

    ``divergent``: strictly increasing sums whose successive increments do not
    shrink faster than ``growth_ratio`` and whose last relative increment
    exceeds ``conv_tol``.  ``finite``: last relative increment at most
    ``conv_tol``, or a last increment ratio below ``growth_ratio`` (the
    remaining tail is then geometrically bounded).  Anything else is
    ``inconclusive``.
    """
    u_grid = u_grid or MomentumGrid(2, 16, 0.5)
    f_u = default_u_weight(u_grid) if f_u is None else f_u
    sums = [norm_sum(kind, m, r, u_grid, f_u, exponents, p_axis(n, p_spacing)) for n in p_points]
    inc = [b - a for a, b in zip(sums, sums[1:])]
    last_rel = inc[-1] / sums[-1] if sums[-1] else 0.0
    ratios = [b / a if a else 0.0 for a, b in zip(inc, inc[1:])]
    growing = all(x > 0 for x in inc) and all(q >= growth_ratio for q in ratios)
    if growing and last_rel > conv_tol:
        verdict = "divergent"
    elif abs(last_rel) <= conv_tol or (ratios and 0 <= ratios[-1] < growth_ratio):
        verdict = "finite"
    else:
        verdict = "inconclusive"
    return RangeStudy(kind, tuple(exponents), list(p_points), sums, inc, verdict, float(last_rel))
