"""Dressed creation/annihilation operators, operator polynomials and normal ordering."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Optional, Sequence

from .indices import IndexLike, IPSymbol, XiIndex, as_index
from .scalars import Coefficient, GaussianRational, _merge, format_sum

ANN = "a"
CRE = "adag"


@dataclass(frozen=True, order=True, slots=True)
class DressedOp:
    kind: str
    index: XiIndex

    def __post_init__(self):
        if self.kind not in (ANN, CRE):
            raise ValueError("kind must be %r or %r" % (ANN, CRE))

    @property
    def is_creator(self) -> bool:
        return self.kind == CRE

    def adjoint(self) -> "DressedOp":
        # Same index: (a_Z)^dagger = adag_Z for every Z, dressed or not.
        return DressedOp(ANN if self.kind == CRE else CRE, self.index)

    def __str__(self):
        return "%s[%s]" % (self.kind, self.index)


def ann(x: IndexLike) -> DressedOp:
    return DressedOp(ANN, as_index(x))


def cre(x: IndexLike) -> DressedOp:
    return DressedOp(CRE, as_index(x))


Word = tuple  # tuple of DressedOp


def word_key(w: Word):
    return (len(w), w)


class OpPoly:
    """Linear combination ``{word: Coefficient}`` of operator words."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Word, object] | None = None):
        out: dict = {}
        if terms:
            for w, c in terms.items():
                c = Coefficient.coerce(c)
                w = tuple(w)
                if w in out:
                    c = out[w] + c
                if c:
                    out[w] = c
                else:
                    out.pop(w, None)
        self._terms = out

    @classmethod
    def _raw(cls, terms: dict) -> "OpPoly":
        obj = cls.__new__(cls)
        obj._terms = terms
        return obj

    @classmethod
    def op(cls, *ops: DressedOp) -> "OpPoly":
        return cls({tuple(ops): 1})

    @classmethod
    def scalar(cls, c) -> "OpPoly":
        c = Coefficient.coerce(c)
        return cls({(): c}) if c else cls()

    @classmethod
    def coerce(cls, x) -> "OpPoly":
        if isinstance(x, OpPoly):
            return x
        if isinstance(x, DressedOp):
            return cls.op(x)
        return cls.scalar(x)

    def items(self):
        return sorted(self._terms.items(), key=lambda kv: word_key(kv[0]))

    def words(self) -> list[Word]:
        return [w for w, _ in self.items()]

    def __getitem__(self, w) -> Coefficient:
        return self._terms.get(tuple(w), Coefficient())

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if not isinstance(other, OpPoly):
            try:
                other = OpPoly.coerce(other)
            except TypeError:
                return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __add__(self, other):
        try:
            o = OpPoly.coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for w, c in o._terms.items():
            v = out.get(w)
            v = c if v is None else v + c
            if v:
                out[w] = v
            else:
                out.pop(w, None)
        return OpPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return OpPoly._raw({w: -c for w, c in self._terms.items()})

    def __sub__(self, other):
        try:
            o = OpPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = OpPoly.coerce(other)
        except TypeError:
            return NotImplemented
        out: dict = {}
        for w1, c1 in self._terms.items():
            for w2, c2 in o._terms.items():
                w = w1 + w2
                c = c1 * c2
                v = out.get(w)
                v = c if v is None else v + c
                if v:
                    out[w] = v
                else:
                    out.pop(w, None)
        return OpPoly._raw(out)

    def __rmul__(self, other):
        return OpPoly.coerce(other) * self

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = OpPoly.scalar(1)
        for _ in range(n):
            out = out * self
        return out

    def __repr__(self):
        return "OpPoly(%s)" % self

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for w, c in self.items():
            body = " ".join(str(op) for op in w)
            if len(c) == 1 and next(iter(c)) == ():
                parts.append((c.constant(), body))
            else:
                inner = str(c)
                parts.append((GaussianRational(1), "[%s] %s" % (inner, body) if body else "[%s]" % inner))
        return format_sum(parts)

    def to_json(self) -> list:
        return [{"word": [{"kind": op.kind, "anti": list(op.index.anti), "lin": list(op.index.lin)}
                          for op in w],
                 "coeff": c.to_json()}
                for w, c in self.items()]

    @classmethod
    def from_json(cls, data) -> "OpPoly":
        terms: dict = {}
        for t in data:
            w = tuple(DressedOp(o["kind"], XiIndex(tuple(o["anti"]), tuple(o["lin"]))) for o in t["word"])
            terms[w] = terms.get(w, Coefficient()) + Coefficient.from_json(t["coeff"])
        return cls(terms)


def star(p) -> OpPoly:
    """Adjoint: reverse words, swap creator/annihilator, conjugate coefficients."""
    p = OpPoly.coerce(p)
    out: dict = {}
    for w, c in p._terms.items():
        out[tuple(op.adjoint() for op in reversed(w))] = c.conjugate()
    return OpPoly._raw(out)


def commutator_step(a: DressedOp, c: DressedOp) -> OpPoly:
    """``[a_(A;L), adag_(A';L')] = (L+A'; A+L') + a_(A+L'; L+A') + adag_(L+A'; A+L')``."""
    if a.kind != ANN or c.kind != CRE:
        raise ValueError("commutator_step needs (annihilator, creator)")
    A, L = a.index.anti, a.index.lin
    Ap, Lp = c.index.anti, c.index.lin
    sym = IPSymbol(L + Ap, A + Lp)
    return OpPoly({
        (): Coefficient.symbol(sym),
        (DressedOp(ANN, XiIndex(A + Lp, L + Ap)),): 1,
        (DressedOp(CRE, XiIndex(L + Ap, A + Lp)),): 1,
    })


def commutator(p, q) -> OpPoly:
    p, q = OpPoly.coerce(p), OpPoly.coerce(q)
    return p * q - q * p


# Normal ordering.
#
# A word is folded left to right into states (creators, annihilators, monomial)
# where creators are kept sorted (they commute) and annihilators are kept in
# the order they arrived.  A new creator is moved leftwards through the
# annihilator tuple one neighbour at a time (rightmost first) using
# commutator_step.  Every rewrite either keeps the operator count and removes
# one ann/cre inversion, or lowers the operator count by one, so the process
# terminates.  Annihilators are only sorted once the word is exhausted, which
# keeps the result sensitive to the order relations are applied in; that is
# what makes the Jacobi check non-trivial.


@lru_cache(maxsize=None)
def _move_creator(anns: tuple, c: XiIndex) -> tuple:
    """``anns * adag_c`` as terms ``(creator-or-None, anns', monomial, int)``."""
    if not anns:
        return ((c, (), (), 1),)
    last = anns[-1]
    rest = anns[:-1]
    A, L = last.anti, last.lin
    Ap, Lp = c.anti, c.lin
    acc: dict = {}

    def add(key, k):
        v = acc.get(key, 0) + k
        if v:
            acc[key] = v
        else:
            acc.pop(key, None)

    for c2, a2, m2, k in _move_creator(rest, c):
        add((c2, a2 + (last,), m2), k)
    add((None, rest, (IPSymbol(L + Ap, A + Lp),)), 1)
    add((None, rest + (XiIndex(A + Lp, L + Ap),), ()), 1)
    for c2, a2, m2, k in _move_creator(rest, XiIndex(L + Ap, A + Lp)):
        add((c2, a2, m2), k)
    return tuple((c2, a2, m2, k) for (c2, a2, m2), k in acc.items())


def _normal_order_word(word: Sequence[DressedOp]) -> dict:
    states = {((), (), ()): 1}
    for op in word:
        nxt: dict = {}
        if op.kind == ANN:
            for (cs, an, m), k in states.items():
                key = (cs, an + (op.index,), m)
                nxt[key] = nxt.get(key, 0) + k
        else:
            for (cs, an, m), k in states.items():
                for c2, a2, m2, k2 in _move_creator(an, op.index):
                    cs2 = cs if c2 is None else tuple(sorted(cs + (c2,)))
                    key = (cs2, a2, _merge(m, m2))
                    nxt[key] = nxt.get(key, 0) + k * k2
        states = {key: v for key, v in nxt.items() if v}
    out: dict = {}
    for (cs, an, m), k in states.items():
        w = tuple(DressedOp(CRE, x) for x in cs) + tuple(DressedOp(ANN, x) for x in sorted(an))
        inner = out.setdefault(w, {})
        inner[m] = inner.get(m, 0) + k
    return out


def normal_order(p) -> OpPoly:
    """Rewrite ``p`` so every word has all creators left of all annihilators."""
    p = OpPoly.coerce(p)
    acc: dict = {}
    for w, coeff in p._terms.items():
        for nw, monos in _normal_order_word(w).items():
            piece = Coefficient({m: k for m, k in monos.items() if k}) * coeff
            if nw in acc:
                acc[nw] = acc[nw] + piece
            else:
                acc[nw] = piece
    return OpPoly({w: c for w, c in acc.items() if c})


def is_normal_ordered(p) -> bool:
    for w in OpPoly.coerce(p).words():
        seen_ann = False
        for op in w:
            if op.kind == ANN:
                seen_ann = True
            elif seen_ann:
                return False
    return True


@lru_cache(maxsize=None)
def _absorb_creator(anns: tuple, c: XiIndex) -> tuple:
    """Terms of ``anns * adag_c`` in which no creator is left over."""
    if not anns:
        return ()
    last = anns[-1]
    rest = anns[:-1]
    A, L = last.anti, last.lin
    Ap, Lp = c.anti, c.lin
    acc: dict = {}
    for a2, m2, k in _absorb_creator(rest, c):
        key = (a2 + (last,), m2)
        acc[key] = acc.get(key, 0) + k
    key = (rest, (IPSymbol(L + Ap, A + Lp),))
    acc[key] = acc.get(key, 0) + 1
    key = (rest + (XiIndex(A + Lp, L + Ap),), ())
    acc[key] = acc.get(key, 0) + 1
    for a2, m2, k in _absorb_creator(rest, XiIndex(L + Ap, A + Lp)):
        acc[(a2, m2)] = acc.get((a2, m2), 0) + k
    return tuple((a2, m2, k) for (a2, m2), k in acc.items() if k)


def _vev_word(word: Sequence[DressedOp]) -> dict:
    # Same fold as _normal_order_word, dropping states that cannot reach the
    # empty word: a creator that survives to the left is never removed, and
    # annihilators with no creator to their right kill the vacuum.
    n = len(word)
    cre_left = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        cre_left[i] = cre_left[i + 1] + (word[i].kind == CRE)
    states = {((), ()): 1}
    for i, op in enumerate(word):
        if op.kind == ANN:
            if not cre_left[i + 1]:
                return {}
            states = {(an + (op.index,), m): k for (an, m), k in states.items()}
            continue
        nxt: dict = {}
        last_creator = not cre_left[i + 1]
        for (an, m), k in states.items():
            for a2, m2, k2 in _absorb_creator(an, op.index):
                if last_creator and a2:
                    continue
                key = (a2, _merge(m, m2))
                nxt[key] = nxt.get(key, 0) + k * k2
        states = {key: v for key, v in nxt.items() if v}
        if not states:
            return {}
    out: dict = {}
    for (an, m), k in states.items():
        if not an:
            out[m] = out.get(m, 0) + k
    return out


def vev(p) -> Coefficient:
    """Vacuum expectation value: scalar part of the normal-ordered form.

    Computed with a pruned normal-ordering pass; equal to ``normal_order(p)[()]``.
    """
    p = OpPoly.coerce(p)
    out = Coefficient()
    for w, coeff in p._terms.items():
        monos = _vev_word(w)
        if monos:
            out = out + Coefficient(monos) * coeff
    return out


def vacuum_part(p) -> OpPoly:
    """Normal-ordered ``p`` restricted to words that survive on the vacuum ket."""
    p = normal_order(p)
    return OpPoly({w: c for w, c in p.items() if all(op.kind == CRE for op in w)})


def check_jacobi(x: IndexLike, y: IndexLike, z: IndexLike) -> OpPoly:
    """Residual of ``[a_X,[a_Y,adag_Z]] + [a_Y,[adag_Z,a_X]] + [adag_Z,[a_X,a_Y]]``.

    Zero exactly when the commutation relations are associativity-consistent.
    """
    ax, ay, cz = OpPoly.op(ann(x)), OpPoly.op(ann(y)), OpPoly.op(cre(z))
    total = (commutator(ax, commutator(ay, cz))
             + commutator(ay, commutator(cz, ax))
             + commutator(cz, commutator(ax, ay)))
    return normal_order(total)


def phi(f: IndexLike, conj: Optional[IndexLike] = None) -> OpPoly:
    """Field ``a_{f*} + adag_f``; a real test function has ``conj`` equal to ``f``."""
    fc = f if conj is None else conj
    return OpPoly.op(ann(fc)) + OpPoly.op(cre(f))


def lambda_degree(obj) -> int:
    """Power of the coupling carried by a symbol or dressed index in numeric models."""
    if isinstance(obj, IPSymbol):
        return obj.arity - 2
    if isinstance(obj, XiIndex):
        return obj.arity - 1
    if isinstance(obj, DressedOp):
        return obj.index.arity - 1
    raise TypeError(obj)


def free_field_limit(p):
    """Drop every term that carries a positive power of the coupling."""
    if isinstance(p, Coefficient):
        return Coefficient({m: c for m, c in p.items()
                            if all(lambda_degree(s) == 0 for s in m)})
    p = OpPoly.coerce(p)
    out = {}
    for w, c in p.items():
        if any(lambda_degree(op) > 0 for op in w):
            continue
        c2 = free_field_limit(c)
        if c2:
            out[w] = c2
    return OpPoly(out)
