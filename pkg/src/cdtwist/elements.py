"""Sparse elements of a Cayley-Dickson algebra with exact rational coefficients."""

from __future__ import annotations

import itertools
import re
from fractions import Fraction
from numbers import Rational

from .cdcore import (
    DOUBLING_FORMULAS,
    MAX_INDEX,
    IndexRangeError,
    ProductVariant,
    _omega2,
    check_index,
)


class ElementParseError(ValueError):
    def __init__(self, text, token, position):
        self.text = text
        self.token = token
        self.position = position
        super().__init__(f"cannot parse element {text!r}: unexpected {token!r} at position {position}")


def _scalar(c) -> Fraction:
    if isinstance(c, bool) or not isinstance(c, (Rational, str)):
        raise TypeError(f"coefficient must be an exact rational, got {c!r}")
    return Fraction(c)


class Element:
    """A finite linear combination of shuffle-basis vectors.

    Zero coefficients are never stored, so two elements are equal exactly
    when their term mappings are equal.  Instances are immutable.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        clean = {}
        for index, coeff in (terms or {}).items():
            coeff = _scalar(coeff)
            if coeff:
                clean[check_index(index)] = coeff
        self._terms = dict(sorted(clean.items()))

    @classmethod
    def _wrap(cls, terms: dict) -> "Element":
        # trusted: indices checked and coefficients nonzero Fractions
        obj = cls.__new__(cls)
        obj._terms = dict(sorted(terms.items()))
        return obj

    @classmethod
    def basis(cls, index: int, coeff=1) -> "Element":
        return cls({index: coeff})

    @classmethod
    def zero(cls) -> "Element":
        return cls()

    @classmethod
    def parse(cls, text: str) -> "Element":
        return parse_element(text)

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __getitem__(self, index: int) -> Fraction:
        return self._terms.get(index, Fraction(0))

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __iter__(self):
        return iter(self._terms)

    def max_index(self) -> int:
        return max(self._terms, default=0)

    def __eq__(self, other):
        if isinstance(other, Element):
            return self._terms == other._terms
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self._terms.items()))

    def __repr__(self):
        return f"Element({format_element(self)!r})"

    def __str__(self):
        return format_element(self)

    def __add__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return add(self, other)

    def __neg__(self):
        return Element._wrap({i: -c for i, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return add(self, -other)

    def __mul__(self, other):
        if isinstance(other, Element):
            return mul_twist(self, other)
        if isinstance(other, Rational) and not isinstance(other, bool):
            return scale(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, Rational) and not isinstance(other, bool):
            return scale(self, other)
        return NotImplemented


# dict-level helpers; the recursive product works on plain dicts for speed

def _add_into(acc: dict, terms, factor=1):
    for i, c in terms.items():
        s = acc.get(i, 0) + factor * c
        if s:
            acc[i] = s
        else:
            acc.pop(i, None)
    return acc


def _conj(terms: dict) -> dict:
    return {i: (c if i == 0 else -c) for i, c in terms.items()}


def _split(terms: dict) -> tuple[dict, dict]:
    even, odd = {}, {}
    for i, c in terms.items():
        (odd if i & 1 else even)[i >> 1] = c
    return even, odd


def _shuffle(a: dict, b: dict) -> dict:
    out = {}
    for i, c in a.items():
        out[2 * i] = c
    for i, c in b.items():
        out[2 * i + 1] = c
    return out


def add(x: Element, y: Element) -> Element:
    return Element._wrap(_add_into(dict(x._terms), y._terms))


def scale(x: Element, factor) -> Element:
    factor = _scalar(factor)
    if not factor:
        return Element()
    return Element._wrap({i: factor * c for i, c in x._terms.items()})


def conjugate(x: Element) -> Element:
    return Element._wrap(_conj(x._terms))


def shuffle_pair(a: Element, b: Element) -> Element:
    """The pair ``(a, b)``: coordinate 2k comes from a, coordinate 2k+1 from b."""
    if (a and 2 * a.max_index() > MAX_INDEX) or (b and 2 * b.max_index() + 1 > MAX_INDEX):
        raise IndexRangeError("pair index overflow: component index too large to double")
    return Element._wrap(_shuffle(a._terms, b._terms))


def split(x: Element) -> tuple[Element, Element]:
    a, b = _split(x._terms)
    return Element._wrap(a), Element._wrap(b)


def _mul_doubling(formula, x: dict, y: dict, level: int) -> dict:
    if not x or not y:
        return {}
    if level == 0:
        return {0: x[0] * y[0]}
    a, b = _split(x)
    c, d = _split(y)
    operands = {"a": a, "b": b, "c": c, "d": d}
    halves = []
    for terms in formula:
        acc = {}
        for coeff, left, cl, right, cr in terms:
            lhs, rhs = operands[left], operands[right]
            if not lhs or not rhs:
                continue
            if cl:
                lhs = _conj(lhs)
            if cr:
                rhs = _conj(rhs)
            _add_into(acc, _mul_doubling(formula, lhs, rhs, level - 1), coeff)
        halves.append(acc)
    return _shuffle(*halves)


def mul_doubling(v: ProductVariant, x: Element, y: Element) -> Element:
    """Product by recursive pair doubling under any of the eight variants."""
    v = ProductVariant.parse(v)
    level = max(x.max_index(), y.max_index()).bit_length()
    return Element._wrap(_mul_doubling(DOUBLING_FORMULAS[v], x._terms, y._terms, level))


def mul_twist(x: Element, y: Element) -> Element:
    """P2 product as the bilinear sum of ``x_p y_q omega2(p, q) e_{p^q}``."""
    acc = {}
    for p, a in x._terms.items():
        for q, b in y._terms.items():
            r = p ^ q
            term = a * b if _omega2(p, q) > 0 else -(a * b)
            s = acc.get(r, 0) + term
            if s:
                acc[r] = s
            else:
                del acc[r]
    return Element._wrap(acc)


def norm_sq(x: Element) -> Fraction:
    return sum((c * c for c in x._terms.values()), Fraction(0))


def find_zero_divisor(dim: int):
    """Search ``x = e_a +- e_b``, ``y = e_c +- e_d`` (a < b, c < d < dim) for
    ``x y = 0`` under the P2 product.  Returns the first pair found or None."""
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1 or dim & (dim - 1):
        raise ValueError(f"dim must be a power of two, got {dim!r}")
    if dim > 16:
        raise ValueError(f"dim {dim} exceeds the search limit of 16")
    candidates = [
        Element({a: 1, b: s})
        for a, b in itertools.combinations(range(dim), 2)
        for s in (1, -1)
    ]
    for x in candidates:
        for y in candidates:
            if not mul_twist(x, y):
                return x, y
    return None


_TOKEN = re.compile(
    r"\s*(?:(?P<op>[+-])"
    r"|(?P<term>(?:(?P<num>\d+)(?:/(?P<den>\d+))?\s*\*\s*)?e(?P<idx>\d+)(?![\w/*]))"
    r"|(?P<bad>[^\s+-]+|[+-]))"
)


def parse_element(text: str) -> Element:
    """Parse ``3*e0 - 1/2*e5``-style text.  A lone ``0`` is the zero element."""
    if text.strip() == "0":
        return Element()
    acc = {}
    sign = None
    seen_term = False
    expect_term = True
    for m in _TOKEN.finditer(text):
        token = m.group(0).strip()
        at = m.end() - len(token)
        if m.group("op") and (not expect_term or (not seen_term and sign is None)):
            sign = -1 if token == "-" else 1
            expect_term = True
            continue
        if m.group("term") and expect_term:
            if m.group("den") is not None and int(m.group("den")) == 0:
                raise ElementParseError(text, token, at)
            coeff = Fraction(int(m.group("num")), int(m.group("den") or 1)) if m.group("num") else Fraction(1)
            index = int(m.group("idx"))
            if index > MAX_INDEX:
                raise ElementParseError(text, token, at)
            _add_into(acc, {index: coeff}, sign or 1)
            sign = None
            seen_term = True
            expect_term = False
            continue
        raise ElementParseError(text, token, at)
    if expect_term:
        raise ElementParseError(text, "<end>", len(text))
    return Element._wrap(acc)


def _format_coeff(c: Fraction) -> str:
    return "" if c == 1 else f"{c}*"


def format_element(x: Element) -> str:
    if not x:
        return "0"
    parts = []
    for i, c in x.items():
        if not parts:
            parts.append(("-" if c < 0 else "") + _format_coeff(abs(c)) + f"e{i}")
        else:
            parts.append(("- " if c < 0 else "+ ") + _format_coeff(abs(c)) + f"e{i}")
    return " ".join(parts)
