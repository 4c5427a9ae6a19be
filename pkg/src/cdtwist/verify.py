"""Invariant suites behind ``cdtwist verify``."""

from __future__ import annotations

import random
from typing import NamedTuple

from . import cdcore, elements, treewalk
from .cdcore import ProductVariant


class SuiteResult(NamedTuple):
    name: str
    checked: int
    counterexample: str | None

    @property
    def ok(self) -> bool:
        return self.counterexample is None


def closed_form_vs_oracle(max_exp: int) -> SuiteResult:
    size = 1 << max_exp
    for p in range(size):
        for q in range(size):
            want = cdcore.oracle_basis_mul(ProductVariant.P2, p, q).sign
            if cdcore.omega2(p, q) != want:
                return SuiteResult("closed-form", p * size + q, f"omega2({p}, {q}) != oracle sign {want:+d}")
    return SuiteResult("closed-form", size * size, None)


def product_axioms(max_exp: int) -> SuiteResult:
    size = 1 << min(max_exp, 8)
    checked = 0
    for v in ProductVariant:
        for p in range(size):
            for q in range(size):
                checked += 1
                r = cdcore.oracle_basis_mul(v, p, q)
                w = cdcore.omega(v, p, q)
                bad = None
                if r.index != p ^ q:
                    bad = f"index {r.index} != {p ^ q}"
                elif r.sign != w:
                    bad = f"omega {w:+d} != oracle {r.sign:+d}"
                elif (p == 0 or q == 0) and w != 1:
                    bad = "unit axiom"
                elif p == q != 0 and w != -1:
                    bad = "square axiom"
                elif 0 != p != q != 0 and w != -cdcore.omega(v, q, p):
                    bad = "anticommutation"
                elif w != cdcore.omega(v.transpose, q, p):
                    bad = "transpose duality"
                if bad:
                    return SuiteResult("axioms", checked, f"{v.value} ({p}, {q}): {bad}")
    return SuiteResult("axioms", checked, None)


def block_laws(max_exp: int) -> SuiteResult:
    top = 1 << max_exp
    checked = 0
    for n in range(max_exp):
        lo, hi = 1 << n, 2 << n
        for p in range(lo, hi):
            for q in range(p + 1, top):
                checked += 1
                want = 1 if q < hi else (-1) ** (q >> n)
                if cdcore.omega2(p, q) != want:
                    return SuiteResult("block-laws", checked, f"omega2({p}, {q}) != {want:+d}")
    return SuiteResult("block-laws", checked, None)


def tree_walk(max_exp: int) -> SuiteResult:
    size = 1 << min(max_exp, 6)
    for p in range(size):
        for q in range(size):
            if treewalk.traverse(p, q) != cdcore.omega2(p, q):
                return SuiteResult("tree", p * size + q, f"traverse({p}, {q}) != omega2")
    report = treewalk.validate_automaton(bits=max_exp)
    if not report.ok:
        return SuiteResult("tree", report.checked, str(report))
    return SuiteResult("tree", report.checked, None)


def element_products(max_exp: int, seed: int = 0) -> SuiteResult:
    size = 1 << min(max_exp, 5)
    checked = 0
    for p in range(size):
        for q in range(size):
            checked += 1
            x, y = elements.Element.basis(p), elements.Element.basis(q)
            if elements.mul_twist(x, y) != elements.mul_doubling(ProductVariant.P2, x, y):
                return SuiteResult("elements", checked, f"mul_twist(e{p}, e{q}) != mul_doubling")
    rng = random.Random(seed)
    for _ in range(100):
        checked += 1
        x = elements.Element({rng.randrange(1 << max_exp): rng.randint(-3, 3) for _ in range(4)})
        y = elements.Element({rng.randrange(1 << max_exp): rng.randint(-3, 3) for _ in range(4)})
        if elements.mul_twist(x, y) != elements.mul_doubling(ProductVariant.P2, x, y):
            return SuiteResult("elements", checked, f"mul_twist({x}, {y}) != mul_doubling")
    return SuiteResult("elements", checked, None)


def norm_composition(max_exp: int, seed: int = 0) -> SuiteResult:
    # quaternion level and below; see find_zero_divisor for the dimension 8 break
    rng = random.Random(seed)
    checked = 0
    for dim in (1, 2, 4):
        if dim > 1 << max_exp:
            break
        for _ in range(100):
            checked += 1
            x = elements.Element({i: rng.randint(-9, 9) for i in range(dim)})
            y = elements.Element({i: rng.randint(-9, 9) for i in range(dim)})
            if elements.norm_sq(elements.mul_twist(x, y)) != elements.norm_sq(x) * elements.norm_sq(y):
                return SuiteResult("composition", checked, f"|({x})({y})|^2 != |x|^2 |y|^2")
    return SuiteResult("composition", checked, None)


SUITES = (closed_form_vs_oracle, product_axioms, block_laws, tree_walk, element_products, norm_composition)


def run_all(max_exp: int = 8) -> list[SuiteResult]:
    """Run every suite, stopping after the first failing one."""
    if not 1 <= max_exp <= 10:
        raise ValueError(f"max_exp must be in 1..10, got {max_exp}")
    results = []
    for suite in SUITES:
        results.append(suite(max_exp))
        if not results[-1].ok:
            break
    return results
