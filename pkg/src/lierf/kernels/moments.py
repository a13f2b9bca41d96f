"""Moments of a real field: symbolic vacuum expectation, then numeric binding."""

from __future__ import annotations

from functools import lru_cache

from ..algebra import Coefficient, ip, phi, vev
from .fields import GimelField, IPBinding, KernelSpec, eval_ip, gimel_transform

MAX_ORDER = 6


@lru_cache(maxsize=None)
def moment_polynomial(order: int, name: str = "f") -> Coefficient:
    """``<0| phi_f^order |0>`` as a polynomial in inner-product symbols (f real)."""
    if not 0 <= order <= MAX_ORDER:
        raise ValueError("moment order must be in 0..%d" % MAX_ORDER)
    return vev(phi(name) ** order)


def _as_field(f, k: KernelSpec) -> GimelField:
    return f if isinstance(f, GimelField) else gimel_transform(f, k)


def moment(f, order: int, k: KernelSpec) -> float:
    """Numeric ``<0| phi_f^order |0>``; ``f`` is real test data or its gimel field."""
    binding = IPBinding({"f": _as_field(f, k)}, k.lam)
    return binding.evaluate(moment_polynomial(order)).real


def moment_complex(f, order: int, k: KernelSpec) -> complex:
    binding = IPBinding({"f": _as_field(f, k)}, k.lam)
    return binding.evaluate(moment_polynomial(order))


def fourth_moment_closed_form(f, k: KernelSpec, c: complex | None = None) -> complex:
    """``(4 + 2 Re c) (f,f;f,f) + 3 (f;f)^2``, with ``c`` defaulting to the kernel's declared phase."""
    h = _as_field(f, k)
    c = k.c if c is None else complex(c)
    if c is None:
        raise ValueError("kernel has no declared phase")
    two = eval_ip([h], [h], k.lam)
    four = eval_ip([h, h], [h, h], k.lam)
    return (4 + 2 * c.real) * four + 3 * two ** 2


def reduction_residual(f, k: KernelSpec, c: complex | None = None) -> float:
    """Relative defect of ``(f;f,f,f) + (f,f,f;f) = (c + conj c) (f,f;f,f)``."""
    h = _as_field(f, k)
    c = k.c if c is None else complex(c)
    lhs = eval_ip([h], [h, h, h], k.lam) + eval_ip([h, h, h], [h], k.lam)
    rhs = 2 * c.real * eval_ip([h, h], [h, h], k.lam)
    scale = max(abs(lhs), abs(rhs), abs(eval_ip([h, h], [h, h], k.lam)))
    return 0.0 if scale == 0 else abs(lhs - rhs) / scale


def connected_coefficient(c: complex) -> float:
    """Weight ``4 + 2 Re c`` of ``(f,f;f,f)`` in the fourth moment; ranges over [2, 6]."""
    return 4 + 2 * complex(c).real


def two_point_symbol(name: str = "f"):
    return ip((name,), (name,))
