"""Expression language for operators, kets and inner products.

Grammar (EBNF)::

    expr    := term (("+" | "-") term)*
    term    := factor ("*"? factor)*          (left-associative; "*" optional)
    factor  := "-" factor | power
    power   := atom ("^" INT)?
    atom    := NUMBER | IMAG | "(" expr ")"
             | "a" "[" index "]" | ("adag" | "a†") "[" index "]"
             | "phi" "[" NAME "]"
             | "vev" "(" expr ")" | "star" "(" expr ")"
             | "ket" "(" [index ("," index)*] ")"
             | "ip" "(" items ";" items ")"
             | index
    index   := NAME | "xi" "(" items ";" items ")"
    items   := [index ("," index)*]
    NUMBER  := DIGITS ["/" DIGITS]
    IMAG    := [NUMBER] "i"

``xi`` indices are flattened as they are parsed, so ``xi(X1; xi(X2; Y1))``
and ``xi(X1,X2; Y1)`` give the same node.  ``phi[f]`` is the real field
``a[f] + adag[f]``.  ``ket(X1,..,Xn)`` stands for the creator polynomial that
builds the orthogonal n-object vector from the vacuum.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from ..algebra import (ANN, CRE, Coefficient, DressedOp, GaussianRational, OpPoly,
                       XiIndex, ip, phi, star, vev, xi)
from ..algebra.indices import AlgebraError, InvalidExpressionError
from ..algebra.scalars import _mono_str
from ..fock import ket_n


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int, expected=()):
        self.line = line
        self.column = column
        self.expected = frozenset(expected)
        detail = " (expected one of: %s)" % ", ".join(sorted(self.expected)) if self.expected else ""
        super().__init__("line %d, column %d: %s%s" % (line, column, message, detail))


# ---------------------------------------------------------------- AST


@dataclass(frozen=True)
class Num:
    value: GaussianRational


@dataclass(frozen=True)
class Ann:
    index: XiIndex


@dataclass(frozen=True)
class Cre:
    index: XiIndex


@dataclass(frozen=True)
class Phi:
    name: str
    real: bool = True


@dataclass(frozen=True)
class Vev:
    arg: "Node"


@dataclass(frozen=True)
class Star:
    arg: "Node"


@dataclass(frozen=True)
class KetNode:
    indices: tuple


@dataclass(frozen=True)
class IPNode:
    anti: tuple
    lin: tuple


@dataclass(frozen=True)
class IndexAtom:
    index: XiIndex


@dataclass(frozen=True)
class Add:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Sub:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Mul:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Neg:
    arg: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int


Node = Union[Num, Ann, Cre, Phi, Vev, Star, KetNode, IPNode, IndexAtom, Add, Sub, Mul, Neg, Pow]

# ---------------------------------------------------------------- lexer

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<number>\d+(?:/\d+)?i?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*†?)
  | (?P<op>[-+*^()\[\];,])
""", re.VERBOSE)

KEYWORDS = {"a", "adag", "a†", "phi", "vev", "star", "ket", "ip", "xi", "i"}


@dataclass
class Token:
    kind: str   # number, imag, name, op, eof
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos, line, col = 0, 1, 1
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError("unexpected character %r" % text[pos], line, col)
        s = m.group()
        kind = m.lastgroup
        if kind == "number" and s.endswith("i"):
            kind = "imag"
        elif kind == "name" and s == "i":
            kind = "imag"
        elif kind == "name" and s.endswith("†") and s != "a†":
            raise ParseError("dagger only allowed in a†", line, col + len(s) - 1)
        if kind != "ws":
            out.append(Token(kind, s, line, col))
        for ch in s:
            if ch == "\n":
                line, col = line + 1, 1
            else:
                col += 1
        pos = m.end()
    out.append(Token("eof", "", line, col))
    return out


# ---------------------------------------------------------------- parser

_ATOM_START = {"(", "a", "adag", "a†", "phi", "vev", "star", "ket", "ip", "xi", "NUMBER", "IMAG", "NAME"}


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, expected, message=None):
        t = self.tok
        got = "end of input" if t.kind == "eof" else repr(t.text)
        raise ParseError(message or "unexpected %s" % got, t.line, t.column, expected)

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("op", "name") and t.text == text

    def expect(self, text: str):
        if not self.at(text):
            self.error({text})
        self.i += 1

    def starts_atom(self) -> bool:
        t = self.tok
        if t.kind in ("number", "imag"):
            return True
        if t.kind == "name":
            return True
        return t.kind == "op" and t.text == "("

    # expr := term (('+'|'-') term)*
    def expr(self) -> Node:
        node = self.term()
        while self.at("+") or self.at("-"):
            op = self.tok.text
            self.i += 1
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self) -> Node:
        node = self.factor()
        while True:
            if self.at("*"):
                self.i += 1
                node = Mul(node, self.factor())
            elif self.starts_atom():
                node = Mul(node, self.factor())
            else:
                return node

    def factor(self) -> Node:
        if self.at("-"):
            self.i += 1
            return Neg(self.factor())
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.at("^"):
            self.i += 1
            t = self.tok
            if t.kind != "number" or "/" in t.text:
                self.error({"INT"})
            self.i += 1
            return Pow(base, int(t.text))
        return base

    def atom(self) -> Node:
        t = self.tok
        if t.kind == "number":
            self.i += 1
            return Num(GaussianRational(Fraction(t.text)))
        if t.kind == "imag":
            self.i += 1
            mag = t.text[:-1] or "1"
            return Num(GaussianRational(0, Fraction(mag)))
        if self.at("("):
            self.i += 1
            node = self.expr()
            self.expect(")")
            return node
        if t.kind == "name":
            name = t.text
            if name == "a":
                return Ann(self._bracket_index())
            if name in ("adag", "a†"):
                return Cre(self._bracket_index())
            if name == "phi":
                self.i += 1
                self.expect("[")
                g = self._name()
                self.expect("]")
                return Phi(g)
            if name in ("vev", "star"):
                self.i += 1
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Vev(arg) if name == "vev" else Star(arg)
            if name == "ket":
                self.i += 1
                self.expect("(")
                items = self._items({")"})
                self.expect(")")
                return KetNode(tuple(items))
            if name == "ip":
                self.i += 1
                self.expect("(")
                anti = self._items({";"})
                self.expect(";")
                lin = self._items({")"})
                self.expect(")")
                try:
                    sym = ip(anti, lin)
                except AlgebraError as exc:
                    raise ParseError(str(exc), t.line, t.column) from None
                return IPNode(sym.anti, sym.lin)
            return IndexAtom(self.index())
        self.error(_ATOM_START)

    def _bracket_index(self) -> XiIndex:
        self.i += 1
        self.expect("[")
        idx = self.index()
        self.expect("]")
        return idx

    def _name(self) -> str:
        t = self.tok
        if t.kind != "name" or t.text in KEYWORDS:
            self.error({"NAME"})
        self.i += 1
        return t.text

    def index(self) -> XiIndex:
        t = self.tok
        if self.at("xi"):
            self.i += 1
            self.expect("(")
            anti = self._items({";"})
            self.expect(";")
            lin = self._items({")"})
            self.expect(")")
            try:
                return xi(anti, lin)
            except AlgebraError as exc:
                raise ParseError(str(exc), t.line, t.column) from None
        if t.kind == "name" and t.text not in KEYWORDS:
            self.i += 1
            return XiIndex((), (t.text,))
        self.error({"NAME", "xi"})

    def _items(self, closers) -> list[XiIndex]:
        out = []
        if any(self.at(c) for c in closers):
            return out
        out.append(self.index())
        while self.at(","):
            self.i += 1
            out.append(self.index())
        if not any(self.at(c) for c in closers):
            self.error(set(closers) | {","})
        return out


def parse_expr(text: str) -> Node:
    """Parse ``text`` into an AST; raises :class:`ParseError` with position and expected tokens."""
    p = _Parser(text)
    node = p.expr()
    if p.tok.kind != "eof":
        p.error({"+", "-", "*", "end of input"})
    return node


# ---------------------------------------------------------------- printer

def _index_text(x: XiIndex) -> str:
    return str(x)


def _num_text(v: GaussianRational) -> str:
    if v.im == 0:
        return str(v.re)
    if v.re == 0:
        return "i" if v.im == 1 else "%si" % v.im
    return "(%s + %s)" % (v.re, _num_text(GaussianRational(0, v.im)))


_PREC = {Add: 1, Sub: 1, Mul: 2, Neg: 3, Pow: 4}


def _prec(node) -> int:
    if isinstance(node, Num):
        v = node.value
        # literals never parse negative or mixed; such constants always get parentheses
        return 0 if (v.re < 0 or v.im < 0 or (v.re and v.im)) else 5
    return _PREC.get(type(node), 5)


def to_text(node: Node) -> str:
    """Canonical text for an AST; ``parse_expr(to_text(n)) == n``."""
    def wrap(child, need):
        s = to_text(child)
        return "(%s)" % s if _prec(child) < need else s

    if isinstance(node, Num):
        v = node.value
        if v.re < 0 or (v.re == 0 and v.im < 0):
            return "-" + _num_text(-v)
        return _num_text(v)
    if isinstance(node, Ann):
        return "a[%s]" % _index_text(node.index)
    if isinstance(node, Cre):
        return "adag[%s]" % _index_text(node.index)
    if isinstance(node, Phi):
        return "phi[%s]" % node.name
    if isinstance(node, Vev):
        return "vev(%s)" % to_text(node.arg)
    if isinstance(node, Star):
        return "star(%s)" % to_text(node.arg)
    if isinstance(node, KetNode):
        return "ket(%s)" % ", ".join(_index_text(x) for x in node.indices)
    if isinstance(node, IPNode):
        return "ip(%s;%s)" % (",".join(node.anti), ",".join(node.lin))
    if isinstance(node, IndexAtom):
        return _index_text(node.index)
    if isinstance(node, Add):
        return "%s + %s" % (wrap(node.left, 1), wrap(node.right, 2))
    if isinstance(node, Sub):
        return "%s - %s" % (wrap(node.left, 1), wrap(node.right, 2))
    if isinstance(node, Mul):
        right = wrap(node.right, 3)
        # a leading minus on the right factor would re-parse as subtraction
        if right.startswith("-"):
            right = "(%s)" % right
        return "%s %s" % (wrap(node.left, 2), right)
    if isinstance(node, Neg):
        return "-%s" % wrap(node.arg, 3)
    if isinstance(node, Pow):
        return "%s^%d" % (wrap(node.base, 5), node.exponent)
    raise TypeError("not an AST node: %r" % (node,))


# ---------------------------------------------------------------- evaluation


def evaluate(node: Node):
    """Value of an AST: :class:`Coefficient` for scalar expressions, :class:`OpPoly` otherwise.

    A bare index evaluates to its :class:`XiIndex`; using it in arithmetic is an error.
    """
    if isinstance(node, Num):
        return Coefficient.scalar(node.value)
    if isinstance(node, IPNode):
        return Coefficient.symbol(ip(node.anti, node.lin))
    if isinstance(node, Ann):
        return OpPoly.op(DressedOp(ANN, node.index))
    if isinstance(node, Cre):
        return OpPoly.op(DressedOp(CRE, node.index))
    if isinstance(node, Phi):
        return phi(node.name)
    if isinstance(node, KetNode):
        return ket_n(*node.indices).as_oppoly()
    if isinstance(node, IndexAtom):
        return node.index
    if isinstance(node, Vev):
        v = _operand(evaluate(node.arg))
        return v if isinstance(v, Coefficient) else vev(v)
    if isinstance(node, Star):
        v = _operand(evaluate(node.arg))
        return v.conjugate() if isinstance(v, Coefficient) else star(v)
    if isinstance(node, Neg):
        return -_operand(evaluate(node.arg))
    if isinstance(node, Pow):
        return _operand(evaluate(node.base)) ** node.exponent
    left = _operand(evaluate(node.left))
    right = _operand(evaluate(node.right))
    if isinstance(left, OpPoly) or isinstance(right, OpPoly):
        left, right = OpPoly.coerce(left), OpPoly.coerce(right)
    if isinstance(node, Add):
        return left + right
    if isinstance(node, Sub):
        return left - right
    if isinstance(node, Mul):
        return left * right
    raise TypeError("not an AST node: %r" % (node,))


def _operand(v):
    if isinstance(v, XiIndex):
        raise InvalidExpressionError("index %s is not an operator; wrap it in a[..] or adag[..]" % v)
    return v


def evaluate_text(text: str):
    return evaluate(parse_expr(text))


# ---------------------------------------------------------------- values back to text


def _term_text(c: GaussianRational, body: str) -> tuple[bool, str]:
    """(negative, magnitude text) for ``c * body``."""
    if c.im == 0:
        neg, mag = c.re < 0, _num_text(GaussianRational(abs(c.re)))
    elif c.re == 0:
        neg, mag = c.im < 0, _num_text(GaussianRational(0, abs(c.im)))
    else:
        neg, mag = False, _num_text(c)
    if not body:
        return neg, mag
    return neg, body if mag == "1" else "%s %s" % (mag, body)


def _join(parts) -> str:
    out = []
    for neg, s in parts:
        if not out:
            out.append("-" + s if neg else s)
        else:
            out.append(("- " if neg else "+ ") + s)
    return " ".join(out) if out else "0"


def _mono_expr(m) -> str:
    pieces = []
    for s in _mono_str(m):
        base, _, power = s.partition("^")
        body = "ip%s" % base
        pieces.append(body + ("^" + power if power else ""))
    return " ".join(pieces)


def value_to_text(v) -> str:
    """Render a Coefficient or OpPoly in the expression language (re-parses to an equal value)."""
    if isinstance(v, Coefficient):
        return _join(_term_text(c, _mono_expr(m)) for m, c in v.items())
    if isinstance(v, OpPoly):
        parts = []
        for w, c in v.items():
            word = " ".join(("a[%s]" if op.kind == ANN else "adag[%s]") % op.index for op in w)
            if len(c) == 1 and next(iter(c)) == ():
                parts.append(_term_text(c.constant(), word))
            else:
                inner = value_to_text(c)
                if word:
                    parts.append((False, "(%s) %s" % (inner, word)))
                else:
                    parts.append((False, inner if len(c) == 1 else "(%s)" % inner))
        return _join(parts)
    if isinstance(v, XiIndex):
        return str(v)
    raise TypeError("cannot render %r" % (v,))
