"""Cayley-Dickson algebras in the shuffle basis, with the closed-form P2 twist."""

from .cdcore import (
    IndexRangeError,
    ProductVariant,
    SignedBasis,
    basis_mul,
    block_exponent,
    omega,
    omega2,
    oracle_basis_mul,
    xor_index,
)
from .elements import (
    Element,
    ElementParseError,
    add,
    conjugate,
    find_zero_divisor,
    mul_doubling,
    mul_twist,
    norm_sq,
    parse_element,
    shuffle_pair,
    split,
)

__version__ = "0.1.0"
