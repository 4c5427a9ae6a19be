"""Throughput of the closed-form twist against recursive doubling."""

from __future__ import annotations

import json
import os
import platform
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from .cdcore import ProductVariant, basis_mul, oracle_basis_mul
from .elements import Element, mul_doubling, mul_twist

DEFAULT_SEED = 20170601
MIN_OPS = 10_000
MIN_SECONDS = 1.0


def default_seed() -> int:
    env = os.environ.get("CDTWIST_SEED")
    return int(env) if env else DEFAULT_SEED


class VerificationError(AssertionError):
    pass


@dataclass
class BenchCase:
    strategy: str
    dim_exp: int
    terms: int
    ops: int
    elapsed_ns: int

    @property
    def ops_per_sec(self) -> float:
        return self.ops / (self.elapsed_ns / 1e9) if self.elapsed_ns else float("inf")


@dataclass
class BenchReport:
    cases: list = field(default_factory=list)
    seed: int = DEFAULT_SEED
    environment: str = field(default_factory=lambda: f"{platform.platform()} python {platform.python_version()}")

    def case(self, strategy: str) -> BenchCase:
        return next(c for c in self.cases if c.strategy == strategy)

    def speedup(self, fast: str, slow: str) -> float:
        return self.case(fast).ops_per_sec / self.case(slow).ops_per_sec

    def to_text(self) -> str:
        lines = [f"# seed={self.seed} env={self.environment}", "strategy,dim_exp,terms,ops,elapsed_ns"]
        lines += [f"{c.strategy},{c.dim_exp},{c.terms},{c.ops},{c.elapsed_ns}" for c in self.cases]
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps({
            "seed": self.seed,
            "environment": self.environment,
            "cases": [asdict(c) for c in self.cases],
        }, indent=2)


def _time_loop(fn, args) -> tuple[int, int]:
    # at least one full pass; then repeat until MIN_OPS ops or MIN_SECONDS
    ops = 0
    start = time.perf_counter_ns()
    while True:
        for a in args:
            fn(*a)
        ops += len(args)
        elapsed = time.perf_counter_ns() - start
        if ops >= MIN_OPS or elapsed >= MIN_SECONDS * 1e9:
            return ops, elapsed


def _time_shard(name, args):
    fn = _STRATEGIES[name]
    return _time_loop(fn, args)


def _timed(name: str, args: list, workers: int) -> tuple[int, int]:
    if workers <= 1 or len(args) < workers:
        return _time_loop(_STRATEGIES[name], args)
    shards = [args[i::workers] for i in range(workers)]
    with ProcessPoolExecutor(workers) as pool:
        results = list(pool.map(_time_shard, [name] * workers, shards))
    return sum(r[0] for r in results), max(r[1] for r in results)


def _closed_form(p, q):
    return basis_mul(ProductVariant.P2, p, q)


def _oracle(p, q):
    return oracle_basis_mul(ProductVariant.P2, p, q)


def _element_doubling(x, y):
    return mul_doubling(ProductVariant.P2, x, y)


_STRATEGIES = {
    "closed-form": _closed_form,
    "oracle": _oracle,
    "twist": mul_twist,
    "doubling": _element_doubling,
}


def sample_pairs(max_exp: int, samples: int, seed: int) -> list[tuple[int, int]]:
    rng = random.Random(seed)
    bound = 1 << max_exp
    return [(rng.randrange(bound), rng.randrange(bound)) for _ in range(samples)]


def bench_basis_products(max_exp: int, samples: int, seed: int | None = None, workers: int = 1) -> BenchReport:
    if not 1 <= max_exp <= 20:
        raise ValueError(f"max_exp must be in 1..20, got {max_exp}")
    if samples < 1:
        raise ValueError("samples must be positive")
    seed = default_seed() if seed is None else seed
    pairs = sample_pairs(max_exp, samples, seed)
    for p, q in pairs:
        if _closed_form(p, q) != _oracle(p, q):
            raise VerificationError(f"closed form and oracle disagree at ({p}, {q})")
    report = BenchReport(seed=seed)
    for name in ("closed-form", "oracle"):
        ops, elapsed = _timed(name, pairs, workers)
        report.cases.append(BenchCase(name, max_exp, 1, ops, elapsed))
    return report


def random_element(rng: random.Random, exp: int, terms: int) -> Element:
    indices = rng.sample(range(1 << exp), terms)
    return Element({i: rng.choice((1, -1)) for i in indices})


def bench_element_mul(exp: int, terms: int, samples: int, seed: int | None = None, workers: int = 1) -> BenchReport:
    if not 0 <= exp <= 14:
        raise ValueError(f"exp must be in 0..14, got {exp}")
    if not 1 <= terms <= 1 << exp:
        raise ValueError(f"terms must be in 1..{1 << exp}, got {terms}")
    if samples < 1:
        raise ValueError("samples must be positive")
    seed = default_seed() if seed is None else seed
    rng = random.Random(seed)
    operands = [(random_element(rng, exp, terms), random_element(rng, exp, terms)) for _ in range(samples)]
    for x, y in operands:
        if mul_twist(x, y) != _element_doubling(x, y):
            raise VerificationError(f"twist and doubling disagree on ({x}) * ({y})")
    report = BenchReport(seed=seed)
    for name in ("twist", "doubling"):
        ops, elapsed = _timed(name, operands, workers)
        report.cases.append(BenchCase(name, exp, terms, ops, elapsed))
    return report
