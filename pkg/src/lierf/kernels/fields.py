"""Kernels, gimel fields and the numeric inner product / structure function.

Everything lives in gimel representation ``h(u) = G(u) f(u)``; the structure
function is produced directly as a gimel field, so zeros of ``G`` never
need to be divided out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from ..algebra import Coefficient, IPSymbol, UndefinedInnerProductError
from .grid import GridMismatchError, MomentumGrid


class DegenerateKernelError(ValueError):
    pass


class UnboundGeneratorError(KeyError):
    pass


def _check_lambda(lam) -> float:
    if isinstance(lam, complex):
        if lam.imag != 0:
            raise ValueError("coupling must be real, got %r" % (lam,))
        lam = lam.real
    return float(lam)


@dataclass
class KernelSpec:
    """Tabulated kernel ``G`` plus coupling and (optional) declared phase ``c``."""

    grid: MomentumGrid
    values: np.ndarray
    lam: float = 1.0
    c: Optional[complex] = None
    label: str = ""

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != self.grid.shape:
            raise GridMismatchError("kernel values %s do not match grid %s"
                                    % (self.values.shape, self.grid.shape))
        self.lam = _check_lambda(self.lam)
        if self.c is not None:
            self.c = complex(self.c)
            if abs(abs(self.c) - 1.0) > 1e-12:
                raise ValueError("declared phase must have unit modulus, |c| = %r" % abs(self.c))

    def with_lambda(self, lam) -> "KernelSpec":
        return KernelSpec(self.grid, self.values, lam, self.c, self.label)


@dataclass
class GimelField:
    """Complex field ``h(u) = G(u) f(u)`` on a momentum grid."""

    grid: MomentumGrid
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != self.grid.shape:
            raise GridMismatchError("field values %s do not match grid %s"
                                    % (self.values.shape, self.grid.shape))

    def __add__(self, other):
        _same_grid(self, other)
        return GimelField(self.grid, self.values + other.values)

    def __mul__(self, a):
        return GimelField(self.grid, self.values * a)

    __rmul__ = __mul__


def _same_grid(*objs):
    g = objs[0].grid
    for o in objs[1:]:
        if o.grid != g:
            raise GridMismatchError("objects live on different grids")
    return g


def gimel_transform(f, k: KernelSpec) -> GimelField:
    """Pointwise ``G(u) f(u)``.  ``f`` is an array on ``k.grid`` or a field on it."""
    if hasattr(f, "grid"):
        if f.grid != k.grid:
            raise GridMismatchError("test function grid differs from kernel grid")
        f = f.values
    f = np.asarray(f, dtype=complex)
    if f.shape != k.grid.shape:
        raise GridMismatchError("test function shape %s, grid %s" % (f.shape, k.grid.shape))
    return GimelField(k.grid, k.values * f)


def pairing(f: GimelField, g: GimelField) -> complex:
    """``(f;g) = sum_u conj(h_f(u)) h_g(u)``."""
    _same_grid(f, g)
    return complex(np.vdot(f.values, g.values))


def eval_xi(f: GimelField, g: GimelField, lam) -> GimelField:
    """Gimel field of ``xi(f;g)``: ``lam * sum_u conj(h_f(u)) h_g(u+s)`` with periodic ``u+s``."""
    grid = _same_grid(f, g)
    lam = _check_lambda(lam)
    if lam == 0:
        return GimelField(grid, np.zeros(grid.shape, dtype=complex))
    spec = np.conj(np.fft.fftn(f.values)) * np.fft.fftn(g.values)
    return GimelField(grid, lam * np.fft.ifftn(spec))


def eval_ip(anti: Sequence[GimelField], lin: Sequence[GimelField], lam) -> complex:
    """Multi-argument inner product ``(anti; lin)``.

    ``lam**(m+n-2)`` times the sum over all momenta with
    ``sum(v_lin) - sum(u_anti) = 0 (mod grid)`` of
    ``prod conj(h_anti(u_i)) * prod h_lin(v_j)``.  Computed as a pairing of two
    circular convolutions.
    """
    anti, lin = list(anti), list(lin)
    if not anti or not lin:
        raise UndefinedInnerProductError("inner product needs both slots non-empty")
    _same_grid(*(anti + lin))
    lam = _check_lambda(lam)
    power = len(anti) + len(lin) - 2
    if power and lam == 0:
        return 0j
    if len(anti) == 1 and len(lin) == 1:
        return pairing(anti[0], lin[0])
    fa = np.ones(anti[0].grid.shape, dtype=complex)
    for h in anti:
        fa = fa * np.fft.fftn(np.conj(h.values))
    fl = np.ones(anti[0].grid.shape, dtype=complex)
    for h in lin:
        fl = fl * np.fft.fftn(h.values)
    conv_a = np.fft.ifftn(fa)
    conv_l = np.fft.ifftn(fl)
    return complex(lam ** power * np.sum(conv_a * conv_l))


def nested_xi(anti: Sequence[GimelField], lin: Sequence[GimelField], lam) -> GimelField:
    """``xi(anti; lin)`` built only from repeated two-argument :func:`eval_xi`.

    Uses ``xi(a, A'; L) = xi(a; xi(A'; L))`` and
    ``xi(a; l1..lk) = xi(xi(l1..l(k-1); a); lk)``.
    """
    anti, lin = list(anti), list(lin)
    if not anti or not lin:
        raise UndefinedInnerProductError("nested xi needs both slots non-empty")
    if len(anti) == 1 and len(lin) == 1:
        return eval_xi(anti[0], lin[0], lam)
    if len(anti) >= 2:
        return eval_xi(anti[0], nested_xi(anti[1:], lin, lam), lam)
    inner = nested_xi(lin[:-1], anti, lam)
    return eval_xi(inner, lin[-1], lam)


def eval_ip_nested(anti: Sequence[GimelField], lin: Sequence[GimelField], lam) -> complex:
    """Independent route to :func:`eval_ip` through nested structure functions and one pairing."""
    anti, lin = list(anti), list(lin)
    if not anti or not lin:
        raise UndefinedInnerProductError("inner product needs both slots non-empty")
    if len(anti) == 1 and len(lin) == 1:
        return pairing(anti[0], lin[0])
    if len(anti) >= 2:
        # (a, A'; L) = (a; xi(A'; L))
        return pairing(anti[0], nested_xi(anti[1:], lin, lam))
    # (a; l1..lk) = (xi(l1..l(k-1); a); lk)
    return pairing(nested_xi(lin[:-1], anti, lam), lin[-1])


@dataclass
class IPBinding:
    """Numeric values for inner-product symbols with generators bound to gimel fields."""

    fields: Mapping[str, GimelField]
    lam: float
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.lam = _check_lambda(self.lam)

    @classmethod
    def from_test_functions(cls, funcs: Mapping[str, object], kernel: KernelSpec) -> "IPBinding":
        return cls({name: gimel_transform(f, kernel) for name, f in funcs.items()}, kernel.lam)

    def field_for(self, name: str) -> GimelField:
        try:
            return self.fields[name]
        except KeyError:
            raise UnboundGeneratorError(name) from None

    def value(self, sym: IPSymbol) -> complex:
        if sym not in self._cache:
            anti = [self.field_for(g) for g in sym.anti]
            lin = [self.field_for(g) for g in sym.lin]
            self._cache[sym] = eval_ip(anti, lin, self.lam)
        return self._cache[sym]

    def evaluate(self, coeff: Coefficient) -> complex:
        return coeff.evaluate(self.value)


def lambda_power(sym: IPSymbol) -> int:
    return sym.arity - 2


def relative_error(a: complex, b: complex, scale: float | None = None) -> float:
    denom = scale if scale is not None else max(abs(a), abs(b))
    if denom == 0:
        return 0.0 if a == b else math.inf
    return abs(a - b) / denom
