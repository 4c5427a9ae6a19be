"""Basis index arithmetic and the twist sign of basis products.

Basis vectors are indexed in the shuffle numbering: ``e_{2k} = (e_k, 0)`` and
``e_{2k+1} = (0, e_k)``, so the low bit of an index says which half of a pair
the vector lives in.  With this numbering ``e_p e_q = omega(p, q) e_{p ^ q}``
for every doubling product, and only the sign ``omega`` depends on the
product.
"""

from __future__ import annotations

import enum
from functools import lru_cache
from typing import NamedTuple

import numpy as np

MAX_INDEX = (1 << 63) - 1


class IndexRangeError(ValueError):
    """A basis index is negative, non-integral or wider than 63 bits."""


def check_index(p) -> int:
    if type(p) is int and 0 <= p <= MAX_INDEX:
        return p
    if isinstance(p, bool) or not isinstance(p, (int, np.integer)):
        raise IndexRangeError(f"basis index must be an integer, got {p!r}")
    p = int(p)
    if p < 0 or p > MAX_INDEX:
        raise IndexRangeError(f"basis index {p} outside [0, 2**63)")
    return p


class ProductVariant(enum.Enum):
    P0 = "P0"
    P1 = "P1"
    P2 = "P2"
    P3 = "P3"
    T0 = "T0"
    T1 = "T1"
    T2 = "T2"
    T3 = "T3"

    @property
    def transpose(self) -> "ProductVariant":
        flip = {"P": "T", "T": "P"}[self.value[0]]
        return ProductVariant(flip + self.value[1])

    @classmethod
    def parse(cls, text) -> "ProductVariant":
        if isinstance(text, cls):
            return text
        try:
            return cls(str(text).strip().upper())
        except ValueError:
            names = ", ".join(v.value for v in cls)
            raise ValueError(f"unknown product variant {text!r} (expected one of {names})") from None


class SignedBasis(NamedTuple):
    sign: int
    index: int

    def __str__(self):
        return f"{'+' if self.sign > 0 else '-'}e{self.index}"


# Doubling formulas (a,b)(c,d) = (first, second).  Each component is a sum of
# two terms (coefficient, left operand, conjugate left?, right operand,
# conjugate right?) over the operand names a, b, c, d.
Term = tuple[int, str, bool, str, bool]

DOUBLING_FORMULAS: dict[ProductVariant, tuple[tuple[Term, Term], tuple[Term, Term]]] = {
    # (ca - b*d, da* + bc)
    ProductVariant.P0: (((1, "c", False, "a", False), (-1, "b", True, "d", False)),
                        ((1, "d", False, "a", True), (1, "b", False, "c", False))),
    # (ca - db*, a*d + cb)
    ProductVariant.P1: (((1, "c", False, "a", False), (-1, "d", False, "b", True)),
                        ((1, "a", True, "d", False), (1, "c", False, "b", False))),
    # (ac - b*d, da* + bc)
    ProductVariant.P2: (((1, "a", False, "c", False), (-1, "b", True, "d", False)),
                        ((1, "d", False, "a", True), (1, "b", False, "c", False))),
    # (ac - db*, a*d + cb)
    ProductVariant.P3: (((1, "a", False, "c", False), (-1, "d", False, "b", True)),
                        ((1, "a", True, "d", False), (1, "c", False, "b", False))),
    # (ca - bd*, ad + c*b)
    ProductVariant.T0: (((1, "c", False, "a", False), (-1, "b", False, "d", True)),
                        ((1, "a", False, "d", False), (1, "c", True, "b", False))),
    # (ca - d*b, da + bc*)
    ProductVariant.T1: (((1, "c", False, "a", False), (-1, "d", True, "b", False)),
                        ((1, "d", False, "a", False), (1, "b", False, "c", True))),
    # (ac - bd*, ad + c*b)
    ProductVariant.T2: (((1, "a", False, "c", False), (-1, "b", False, "d", True)),
                        ((1, "a", False, "d", False), (1, "c", True, "b", False))),
    # (ac - d*b, da + bc*)
    ProductVariant.T3: (((1, "a", False, "c", False), (-1, "d", True, "b", False)),
                        ((1, "d", False, "a", False), (1, "b", False, "c", True))),
}


class _Step(NamedTuple):
    component: int  # which half of the result pair is nonzero
    coeff: int
    swap: bool  # lower-level product is (right, left) rather than (left, right)
    conj_left: bool
    conj_right: bool


@lru_cache(maxsize=None)
def doubling_steps(v: ProductVariant) -> tuple[tuple[_Step, _Step], tuple[_Step, _Step]]:
    """Per-level rule for multiplying two basis vectors under variant ``v``.

    Indexed by ``[p & 1][q & 1]``.  With ``x = e_p`` and ``y = e_q`` exactly
    one of a, b is nonzero and one of c, d is nonzero, so exactly one term of
    the doubling formula survives; this picks it out of the formula table.
    """
    steps = [[None, None], [None, None]]
    for pbit in (0, 1):
        for qbit in (0, 1):
            live = {"b" if pbit else "a": "x", "d" if qbit else "c": "y"}
            found = []
            for component, terms in enumerate(DOUBLING_FORMULAS[v]):
                for coeff, left, cl, right, cr in terms:
                    if left in live and right in live:
                        found.append(_Step(component, coeff, live[left] == "y", cl, cr))
            if len(found) != 1:
                raise AssertionError(f"{v.value}: malformed doubling formula")
            steps[pbit][qbit] = found[0]
    return (tuple(steps[0]), tuple(steps[1]))


def xor_index(p: int, q: int) -> int:
    return check_index(p) ^ check_index(q)


def block_exponent(p: int) -> int:
    """Return N with ``2**N <= p < 2**(N+1)``."""
    p = check_index(p)
    if p == 0:
        raise ValueError("block_exponent is undefined for index 0")
    return p.bit_length() - 1


def _omega2(p: int, q: int) -> int:
    if p == 0 or q == 0:
        return 1
    if p == q:
        return -1
    if p > q:
        return -_omega2(q, p)
    n = p.bit_length() - 1
    if q >> (n + 1) == 0:
        return 1
    return -1 if (q >> n) & 1 else 1


def omega2(p: int, q: int) -> int:
    """Closed-form twist of the P2 product: ``e_p e_q = omega2(p, q) e_{p^q}``.

    For ``0 < p < q`` with ``2**N <= p < 2**(N+1)``: +1 if q lies in the same
    block, otherwise the parity of bit N of q decides (-1 if set).  The other
    cases follow from the unit, square and anticommutation rules.
    """
    return _omega2(check_index(p), check_index(q))


def omega2_array(p, q) -> np.ndarray:
    """Vectorized :func:`omega2` over broadcastable integer arrays."""
    p = np.asarray(p, dtype=np.int64)
    q = np.asarray(q, dtype=np.int64)
    p, q = np.broadcast_arrays(p, q)
    lo = np.minimum(p, q)
    hi = np.maximum(p, q)
    # highest set bit of lo; lo == 0 rows are overwritten below
    n = np.zeros(lo.shape, dtype=np.int64)
    rest = lo >> 1
    while np.any(rest):
        n += rest > 0
        rest >>= 1
    same_block = (hi >> (n + 1)) == 0
    bit = (hi >> n) & 1
    sign = np.where(same_block | (bit == 0), 1, -1).astype(np.int8)
    sign = np.where(p > q, -sign, sign)
    sign[p == q] = -1
    sign[(p == 0) | (q == 0)] = 1
    return sign


def oracle_basis_mul(v: ProductVariant, p: int, q: int) -> SignedBasis:
    """Multiply ``e_p e_q`` by recursive pair doubling under variant ``v``.

    Both vectors are lifted to the smallest common dimension ``2**L``.  Each
    level splits off the low index bit, applies the doubling formula (with
    conjugation ``(a, b)* = (a*, -b)``, i.e. a sign flip on any nonzero lower
    index) and descends; level 0 is real multiplication ``1 * 1``.
    """
    v = ProductVariant.parse(v)
    x, y = check_index(p), check_index(q)
    steps = doubling_steps(v)
    sign = 1
    index = 0
    level = 0
    while x or y:
        step = steps[x & 1][y & 1]
        x >>= 1
        y >>= 1
        if step.swap:
            x, y = y, x
        if step.coeff < 0:
            sign = -sign
        if step.conj_left and x:
            sign = -sign
        if step.conj_right and y:
            sign = -sign
        index |= step.component << level
        level += 1
    return SignedBasis(sign, index)


def omega(v: ProductVariant, p: int, q: int) -> int:
    v = ProductVariant.parse(v)
    if v is ProductVariant.P2:
        return omega2(p, q)
    if v is ProductVariant.T2:
        return omega2(q, p)
    return oracle_basis_mul(v, p, q).sign


def basis_mul(v: ProductVariant, p: int, q: int) -> SignedBasis:
    if not isinstance(v, ProductVariant):
        v = ProductVariant.parse(v)
    p, q = check_index(p), check_index(q)
    if v is ProductVariant.P2:
        return SignedBasis(_omega2(p, q), p ^ q)
    if v is ProductVariant.T2:
        return SignedBasis(_omega2(q, p), p ^ q)
    return oracle_basis_mul(v, p, q)
