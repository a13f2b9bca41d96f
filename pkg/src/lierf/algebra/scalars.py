"""Exact scalars: Gaussian rationals and polynomials in inner-product symbols."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Callable, Iterable, Mapping, Union

from .indices import IPSymbol

Monomial = tuple  # sorted tuple of IPSymbol, repeated for powers


def _norm(q):
    if isinstance(q, Fraction) and q.denominator == 1:
        return q.numerator
    return q


def _rational(x) -> Union[int, Fraction]:
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, int):
        return x
    if isinstance(x, Rational):
        return _norm(Fraction(x))
    if isinstance(x, str):
        return _norm(Fraction(x))
    raise TypeError("exact scalar expected, got %r" % (x,))


class GaussianRational:
    """``re + im*i`` with rational parts.  Immutable."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _rational(re))
        object.__setattr__(self, "im", _rational(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, complex):
            raise TypeError("floating complex values are not exact")
        return cls(x, 0)

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, Rational):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __add__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = GaussianRational.coerce(other)
        d = Fraction(o.re * o.re + o.im * o.im)
        if d == 0:
            raise ZeroDivisionError("division by zero")
        n = self * o.conjugate()
        return GaussianRational(_norm(n.re / d), _norm(n.im / d))

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return "GaussianRational(%s, %s)" % (self.re, self.im)

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return "%si" % self.im
        sign = "+" if self.im > 0 else "-"
        return "(%s%s%si)" % (self.re, sign, abs(self.im))

    def to_json(self) -> list[str]:
        return [str(self.re), str(self.im)]

    @classmethod
    def from_json(cls, pair) -> "GaussianRational":
        re, im = pair
        return cls(Fraction(re), Fraction(im))


ONE = GaussianRational(1)
I = GaussianRational(0, 1)


def _merge(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    return tuple(sorted(m1 + m2))


class Coefficient:
    """Polynomial in commuting :class:`IPSymbol` indeterminates.

    Stored as ``{monomial: GaussianRational}`` with zero terms dropped.
    A monomial is a sorted tuple of symbols (repeats encode powers).
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Monomial, object] | None = None):
        clean = {}
        if terms:
            for mono, c in terms.items():
                c = GaussianRational.coerce(c)
                if c:
                    key = tuple(sorted(mono))
                    if key in clean:
                        c = clean[key] + c
                        if not c:
                            del clean[key]
                            continue
                    clean[key] = c
        self._terms = clean

    @classmethod
    def _raw(cls, terms: dict) -> "Coefficient":
        obj = cls.__new__(cls)
        obj._terms = terms
        return obj

    @classmethod
    def scalar(cls, c) -> "Coefficient":
        return cls({(): c})

    @classmethod
    def symbol(cls, sym: IPSymbol, c=1) -> "Coefficient":
        return cls({(sym,): c})

    @classmethod
    def coerce(cls, x) -> "Coefficient":
        if isinstance(x, Coefficient):
            return x
        if isinstance(x, IPSymbol):
            return cls.symbol(x)
        return cls.scalar(x)

    # mapping-ish access
    def items(self):
        return sorted(self._terms.items(), key=lambda kv: monomial_key(kv[0]))

    def __iter__(self):
        return iter(m for m, _ in self.items())

    def __len__(self):
        return len(self._terms)

    def __getitem__(self, mono) -> GaussianRational:
        return self._terms.get(tuple(sorted(mono)), GaussianRational(0))

    def coeff(self, *syms: IPSymbol) -> GaussianRational:
        return self[tuple(syms)]

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def constant(self) -> GaussianRational:
        return self._terms.get((), GaussianRational(0))

    def symbols(self) -> set[IPSymbol]:
        return {s for m in self._terms for s in m}

    def __eq__(self, other):
        if not isinstance(other, Coefficient):
            try:
                other = Coefficient.coerce(other)
            except TypeError:
                return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __add__(self, other):
        try:
            o = Coefficient.coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for m, c in o._terms.items():
            v = out.get(m)
            v = c if v is None else v + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Coefficient._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Coefficient._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        try:
            o = Coefficient.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = Coefficient.coerce(other)
        except TypeError:
            return NotImplemented
        out: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in o._terms.items():
                m = _merge(m1, m2)
                v = out.get(m)
                v = c1 * c2 if v is None else v + c1 * c2
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return Coefficient._raw(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = Coefficient.scalar(1)
        for _ in range(n):
            out = out * self
        return out

    def conjugate(self) -> "Coefficient":
        """Complex-conjugate scalars and swap the slots of every symbol."""
        return Coefficient({tuple(s.conjugate() for s in m): c.conjugate()
                            for m, c in self._terms.items()})

    def map_symbols(self, fn: Callable[[IPSymbol], "Coefficient"]) -> "Coefficient":
        out = Coefficient()
        for m, c in self._terms.items():
            term = Coefficient.scalar(c)
            for s in m:
                term = term * fn(s)
            out = out + term
        return out

    def evaluate(self, value: Callable[[IPSymbol], complex]) -> complex:
        """Numeric value with every symbol replaced by ``value(symbol)``."""
        cache: dict = {}
        total = 0j
        for m, c in self.items():
            t = complex(c)
            for s in m:
                if s not in cache:
                    cache[s] = complex(value(s))
                t *= cache[s]
            total += t
        return total

    def __repr__(self):
        return "Coefficient(%s)" % self

    def __str__(self):
        if not self._terms:
            return "0"
        return format_sum(
            (c, "*".join(_mono_str(m))) for m, c in self.items())

    def to_json(self) -> list:
        return [{"coeff": c.to_json(),
                 "monomial": [{"anti": list(s.anti), "lin": list(s.lin)} for s in m]}
                for m, c in self.items()]

    @classmethod
    def from_json(cls, data) -> "Coefficient":
        terms = {}
        for t in data:
            mono = tuple(IPSymbol(tuple(s["anti"]), tuple(s["lin"])) for s in t["monomial"])
            terms[mono] = GaussianRational.coerce(terms.get(mono, 0)) + GaussianRational.from_json(t["coeff"])
        return cls(terms)


def monomial_key(m: Monomial):
    return (len(m), m)


def _mono_str(m: Monomial) -> list[str]:
    out = []
    i = 0
    while i < len(m):
        j = i
        while j < len(m) and m[j] == m[i]:
            j += 1
        s = str(m[i])
        out.append(s if j - i == 1 else "%s^%d" % (s, j - i))
        i = j
    return out


def format_sum(terms: Iterable[tuple[GaussianRational, str]]) -> str:
    """Render ``sum c * body`` with signs folded in; empty body means scalar."""
    parts = []
    for c, body in terms:
        if c.im == 0:
            neg = c.re < 0
            mag = str(abs(c.re))
        elif c.re == 0:
            neg = c.im < 0
            mag = "%si" % abs(c.im) if abs(c.im) != 1 else "i"
        else:
            neg = False
            mag = str(c)
        if body:
            text = body if mag == "1" else "%s*%s" % (mag, body)
        else:
            text = mag
        if not parts:
            parts.append("-" + text if neg else text)
        else:
            parts.append(("- " if neg else "+ ") + text)
    return " ".join(parts) if parts else "0"
