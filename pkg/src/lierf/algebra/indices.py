"""Index objects for dressed operators and the multi-argument inner product.

A generator is a plain string.  Every index is stored flat as a pair of
sorted multisets ``(anti; lin)``.  A bare generator ``X`` is the index
``(; X)``.

Nesting flattens by slot: an index in a linear slot contributes its own
``anti``/``lin`` unchanged, an index in an anti-linear slot contributes them
swapped.  So ``xi(xi(X1; Y1); X2) == (Y1; X1, X2)`` and
``xi(X1; xi(X2; Y1)) == (X1, X2; Y1)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

Generator = str


class AlgebraError(ValueError):
    """Base class for errors raised by the symbolic engine."""


class InvalidExpressionError(AlgebraError):
    pass


class UndefinedInnerProductError(AlgebraError):
    pass


@dataclass(frozen=True, order=True, slots=True)
class XiIndex:
    """Flattened structure-function index ``xi(anti; lin)``."""

    anti: tuple[Generator, ...]
    lin: tuple[Generator, ...]

    def __post_init__(self):
        anti = tuple(sorted(self.anti))
        lin = tuple(sorted(self.lin))
        if not anti and not lin:
            raise InvalidExpressionError("xi() with no generators")
        object.__setattr__(self, "anti", anti)
        object.__setattr__(self, "lin", lin)

    @property
    def arity(self) -> int:
        return len(self.anti) + len(self.lin)

    @property
    def is_generator(self) -> bool:
        return not self.anti and len(self.lin) == 1

    def swapped(self) -> "XiIndex":
        return XiIndex(self.lin, self.anti)

    def __str__(self):
        if self.is_generator:
            return self.lin[0]
        return "xi(%s;%s)" % (",".join(self.anti), ",".join(self.lin))


@dataclass(frozen=True, order=True, slots=True)
class IPSymbol:
    """Formal indeterminate ``(anti; lin)`` for the multi-argument inner product.

    Both sides must be non-empty: the inner product has no scalar component.
    """

    anti: tuple[Generator, ...]
    lin: tuple[Generator, ...]

    def __post_init__(self):
        anti = tuple(sorted(self.anti))
        lin = tuple(sorted(self.lin))
        if not anti or not lin:
            raise UndefinedInnerProductError(
                "inner product (%s;%s) needs both slots non-empty"
                % (",".join(anti), ",".join(lin)))
        object.__setattr__(self, "anti", anti)
        object.__setattr__(self, "lin", lin)

    @property
    def arity(self) -> int:
        return len(self.anti) + len(self.lin)

    def conjugate(self) -> "IPSymbol":
        return IPSymbol(self.lin, self.anti)

    def __str__(self):
        return "(%s;%s)" % (",".join(self.anti), ",".join(self.lin))


IndexLike = Union[Generator, XiIndex]


def as_index(x: IndexLike) -> XiIndex:
    if isinstance(x, XiIndex):
        return x
    if isinstance(x, str):
        if not x:
            raise InvalidExpressionError("empty generator name")
        return XiIndex((), (x,))
    if isinstance(x, XiNode):
        return flatten_xi(x)
    raise TypeError("cannot use %r as an index" % (x,))


def _flatten_slots(anti_items: Iterable[IndexLike], lin_items: Iterable[IndexLike]):
    anti: list[Generator] = []
    lin: list[Generator] = []
    for item in anti_items:
        idx = as_index(item)
        anti.extend(idx.lin)
        lin.extend(idx.anti)
    for item in lin_items:
        idx = as_index(item)
        anti.extend(idx.anti)
        lin.extend(idx.lin)
    return anti, lin


def xi(anti_items: Iterable[IndexLike] = (), lin_items: Iterable[IndexLike] = ()) -> XiIndex:
    """Build ``xi(anti_items; lin_items)`` from generators or nested indices."""
    anti, lin = _flatten_slots(anti_items, lin_items)
    return XiIndex(tuple(anti), tuple(lin))


def ip(anti_items: Iterable[IndexLike], lin_items: Iterable[IndexLike]) -> IPSymbol:
    """Build the inner-product symbol ``(anti_items; lin_items)``, flattening nested indices."""
    anti, lin = _flatten_slots(anti_items, lin_items)
    return IPSymbol(tuple(anti), tuple(lin))


@dataclass(frozen=True)
class XiNode:
    """Unflattened ``xi`` expression tree; leaves are generator names."""

    anti: tuple = ()
    lin: tuple = ()


def flatten_xi(tree: Union[XiNode, IndexLike]) -> XiIndex:
    """Flatten a nested ``xi`` tree into its unique ``(anti; lin)`` index.

    Raises :class:`InvalidExpressionError` when a node carries no generators.
    """
    if not isinstance(tree, XiNode):
        return as_index(tree)
    return xi([flatten_xi(t) for t in tree.anti], [flatten_xi(t) for t in tree.lin])
