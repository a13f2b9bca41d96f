"""Vacuum-sector kets, the orthogonal n-object hierarchy and its inner products.

Kets are stored as ``{creator monomial: Coefficient}`` where a creator
monomial is a sorted tuple of :class:`XiIndex` applied to the vacuum.  The
orthogonal vectors ``|X1..Xn>_n`` are computed into that basis on demand.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache
from typing import Mapping, Sequence

from .algebra import (ANN, CRE, Coefficient, DressedOp, OpPoly, XiIndex,
                      as_index, ip, normal_order, star, vev, xi)
from .algebra.indices import AlgebraError, IndexLike

Monomial = tuple  # sorted tuple of XiIndex


class Ket:
    """Linear combination of creator monomials applied to the vacuum."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Monomial, object] | None = None):
        out: dict = {}
        if terms:
            for m, c in terms.items():
                key = tuple(sorted(as_index(x) for x in m))
                c = Coefficient.coerce(c)
                if key in out:
                    c = out[key] + c
                if c:
                    out[key] = c
                else:
                    out.pop(key, None)
        self._terms = out

    @classmethod
    def vacuum(cls) -> "Ket":
        return cls({(): 1})

    @classmethod
    def monomial(cls, *indices: IndexLike) -> "Ket":
        """``adag_{X1} ... adag_{Xn} |0>``."""
        return cls({tuple(indices): 1})

    @classmethod
    def from_oppoly(cls, p: OpPoly) -> "Ket":
        """Creator-only part of ``p`` applied to the vacuum (other words vanish)."""
        out = {}
        for w, c in normal_order(p).items():
            if all(op.kind == CRE for op in w):
                out[tuple(op.index for op in w)] = c
        return cls(out)

    def items(self):
        return sorted(self._terms.items(), key=lambda kv: (len(kv[0]), kv[0]))

    def __getitem__(self, m) -> Coefficient:
        return self._terms.get(tuple(sorted(as_index(x) for x in m)), Coefficient())

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if not isinstance(other, Ket):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __add__(self, other):
        if not isinstance(other, Ket):
            return NotImplemented
        out = dict(self._terms)
        for m, c in other._terms.items():
            v = out.get(m)
            v = c if v is None else v + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        k = Ket()
        k._terms = out
        return k

    def __neg__(self):
        k = Ket()
        k._terms = {m: -c for m, c in self._terms.items()}
        return k

    def __sub__(self, other):
        if not isinstance(other, Ket):
            return NotImplemented
        return self + (-other)

    def __mul__(self, c):
        c = Coefficient.coerce(c)
        return Ket({m: v * c for m, v in self._terms.items()})

    __rmul__ = __mul__

    def create(self, y: IndexLike) -> "Ket":
        """``adag_y`` applied to this ket (creators commute)."""
        y = as_index(y)
        return Ket({m + (y,): c for m, c in self._terms.items()})

    def annihilate(self, y: IndexLike) -> "Ket":
        """``a_y`` applied to this ket, via normal ordering."""
        return Ket.from_oppoly(OpPoly.op(DressedOp(ANN, as_index(y))) * self.as_oppoly())

    def as_oppoly(self) -> OpPoly:
        return OpPoly({tuple(DressedOp(CRE, x) for x in m): c for m, c in self._terms.items()})

    def level_max(self) -> int:
        return max((len(m) for m in self._terms), default=0)

    def __repr__(self):
        return "Ket(%s)" % self

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for m, c in self.items():
            body = " ".join("adag[%s]" % x for x in m) + " |0>" if m else "|0>"
            parts.append("(%s) %s" % (c, body))
        return " + ".join(parts)


def _xi_pair(a: XiIndex, b: XiIndex) -> XiIndex:
    return xi((), (a, b))


def _drop(seq: Sequence, *positions: int) -> tuple:
    skip = set(positions)
    return tuple(x for i, x in enumerate(seq) if i not in skip)


@lru_cache(maxsize=None)
def _ket_n(args: tuple) -> Ket:
    n = len(args)
    if n == 0:
        return Ket.vacuum()
    if n == 1:
        return Ket.monomial(args[0])
    head, last = args[:-1], args[-1]
    out = _ket_n(head).create(last)
    for k in range(n - 1):
        out = out - _ket_n(_drop(head, k) + (_xi_pair(last, head[k]),))
    return out


def ket_n(*args: IndexLike) -> Ket:
    """Orthogonal n-object vector ``|X1,...,Xn>_n`` expanded into creator monomials.

    ``|..>_n = adag_{Xn} |X1..X(n-1)>_(n-1) - sum_k |X1..^Xk..X(n-1), xi(;Xn,Xk)>_(n-1)``.
    With no arguments this is the vacuum.  The argument order is honoured, so
    permutation symmetry is a checkable property rather than an assumption.
    """
    if len(args) == 1 and isinstance(args[0], (list, tuple)):
        args = tuple(args[0])
    return _ket_n(tuple(as_index(a) for a in args))


def apply_creator(y: IndexLike, args: Sequence[IndexLike]) -> Ket:
    """``adag_Y |X1..Xn>_n = |X1..Xn,Y>_(n+1) + sum_k |X1..^Xk..Xn, xi(;Y,Xk)>_n``."""
    y = as_index(y)
    xs = tuple(as_index(a) for a in args)
    out = ket_n(xs + (y,))
    for k in range(len(xs)):
        out = out + ket_n(_drop(xs, k) + (_xi_pair(y, xs[k]),))
    return out


def apply_annihilator(y: IndexLike, args: Sequence[IndexLike]) -> Ket:
    """``a_Y |X1..Xn>_n`` written back in the orthogonal basis.

    Each removed ``Xk`` contributes ``|..^Xk.., xi(Y;Xk)>_n``, the pair terms
    ``|..^Xk..^Xj.., xi(Y;Xj,Xk)>_(n-1)`` for every ``j != k``, and
    ``(Y;Xk) |..^Xk..>_(n-1)``.
    """
    y = as_index(y)
    xs = tuple(as_index(a) for a in args)
    n = len(xs)
    out = Ket()
    for k in range(n):
        rest = _drop(xs, k)
        out = out + ket_n(rest + (xi((y,), (xs[k],)),))
        for j in range(n):
            if j != k:
                out = out + ket_n(_drop(xs, k, j) + (xi((y,), (xs[j], xs[k])),))
        out = out + ket_n(rest) * ip((y,), (xs[k],))
    return out


def annihilator_closed_form(y: IndexLike, args: Sequence[IndexLike]) -> Ket:
    """``a_Y adag_{X1} .. adag_{Xn} |0>`` summed over non-empty subsets ``S`` of positions.

    Each subset contributes ``(adag_{xi(Y;X_S)} + (Y;X_S))`` times the
    remaining creators.
    """
    y = as_index(y)
    xs = tuple(as_index(a) for a in args)
    out = Ket()
    for size in range(1, len(xs) + 1):
        for subset in itertools.combinations(range(len(xs)), size):
            picked = tuple(xs[i] for i in subset)
            rest = _drop(xs, *subset)
            out = out + Ket.monomial(*(rest + (xi((y,), picked),)))
            out = out + Ket.monomial(*rest) * ip((y,), picked)
    return out


def inner_bruteforce(bra: Ket, ket: Ket) -> Coefficient:
    """``<bra|ket>`` as the vacuum expectation of ``star(bra) * ket``."""
    return vev(star(bra.as_oppoly()) * ket.as_oppoly())


@lru_cache(maxsize=None)
def _inner_rec(ys: tuple, xs: tuple) -> Coefficient:
    n = len(ys)
    if n == 0:
        return Coefficient.scalar(1)
    if n == 1:
        return Coefficient.symbol(ip((ys[0],), (xs[0],)))
    head, yn = ys[:-1], ys[-1]
    out = Coefficient()
    for j in range(n):
        rest_x = _drop(xs, j)
        out = out + inner_recursive(head, rest_x) * Coefficient.symbol(ip((yn,), (xs[j],)))
        for k in range(n - 1):
            merged = xi((xs[j],), (yn, head[k]))
            out = out + inner_recursive(_drop(head, k) + (merged,), rest_x)
    return out


def inner_recursive(ys: Sequence[IndexLike], xs: Sequence[IndexLike]) -> Coefficient:
    """``_n<Y1..Yn|X1..Xn>_n`` by the level-lowering recursion, memoized on multisets."""
    ys = tuple(sorted(as_index(y) for y in ys))
    xs = tuple(sorted(as_index(x) for x in xs))
    if len(ys) != len(xs):
        raise AlgebraError("inner_recursive needs equal levels, got %d and %d" % (len(ys), len(xs)))
    return _inner_rec(ys, xs)


def multiplicity(partition: Sequence[int]) -> int:
    """``prod_j n_j! (n_j - 1)!`` for a partition ``n_1 + ... + n_k``."""
    out = 1
    for n in partition:
        if n < 1:
            raise ValueError("partition parts must be positive")
        out *= math.factorial(n) * math.factorial(n - 1)
    return out


def partition_check(n: int) -> list[dict]:
    """Compare every term of ``<Y1..Yn|X1..Xn>`` with its partition multiplicity.

    Also confirms the set of terms is exactly the set of block matchings
    between the Y's and X's (equal block sizes), enumerated independently.
    """
    ys = ["Y%d" % (i + 1) for i in range(n)]
    xs = ["X%d" % (i + 1) for i in range(n)]
    value = inner_recursive(ys, xs)
    matchings = _block_matchings(ys, xs)
    rows = []
    for m in sorted(set(value) | matchings, key=lambda m: (len(m), m)):
        sizes = sorted((len(s.anti) for s in m), reverse=True)
        rows.append({
            "monomial": "*".join(str(s) for s in m),
            "partition": sizes,
            "coefficient": value[m],
            "expected": multiplicity(sizes) if m in matchings else 0,
        })
    return rows


def _set_partitions(items: Sequence):
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def _block_matchings(ys, xs):
    """Monomials ``prod (Y_B; X_B')`` over all size-preserving block pairings."""
    seen = set()
    for py in _set_partitions(ys):
        sizes = sorted(len(b) for b in py)
        for px in _set_partitions(xs):
            if sorted(len(b) for b in px) != sizes:
                continue
            for perm in itertools.permutations(px):
                if all(len(a) == len(b) for a, b in zip(py, perm)):
                    m = tuple(sorted(ip(tuple(a), tuple(b)) for a, b in zip(py, perm)))
                    seen.add(m)
    return seen


TABLE1_LABELS = ("|.>_1", "adag adag |0>", "|xi(;.,.)>_1", "|.,.>_2")


def _table1_kets(one: str, pair: tuple[str, str]) -> list[Ket]:
    return [
        ket_n(one),
        Ket.monomial(*pair),
        ket_n(xi((), pair)),
        ket_n(*pair),
    ]


def table1() -> list[list[Coefficient]]:
    """4x4 inner products among the lowest-level vectors (rows: bras in Y, cols: kets in X)."""
    bras = _table1_kets("Y", ("Y1", "Y2"))
    kets = _table1_kets("X", ("X1", "X2"))
    return [[inner_bruteforce(b, k) for k in kets] for b in bras]
