"""Evaluate omega2 by walking a small twist automaton over interleaved bits.

The bits of p and q are paired from the most significant end into doublets
``(p_i, q_i)``; each doublet moves the automaton along a 0 (left) or 1 (right)
branch.  Ending in ``-1`` or ``-D`` means omega2(p, q) = -1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from importlib import resources
from typing import NamedTuple

import numpy as np

from .cdcore import _omega2, check_index, omega2_array

DOUBLETS = ("00", "01", "10", "11")
ABSORBING = ("+1", "-1")


def interleave_bits(p: int, q: int, width: int | None = None) -> tuple[str, ...]:
    """Pair the bits of p and q, most significant first, left-padding with 0.

    >>> interleave_bits(0b111, 0b101)
    ('11', '10', '11')
    """
    p, q = check_index(p), check_index(q)
    natural = max(p.bit_length(), q.bit_length(), 1)
    if width is None:
        width = natural
    elif width < natural:
        raise ValueError(f"width {width} too small for ({p}, {q})")
    return tuple(f"{(p >> i) & 1}{(q >> i) & 1}" for i in reversed(range(width)))


class IncompleteAutomaton(LookupError):
    pass


@dataclass(frozen=True)
class TwistAutomaton:
    start: str
    negative: frozenset
    transitions: dict = field(hash=False)

    @property
    def states(self) -> tuple[str, ...]:
        seen = {self.start: None}
        for (src, _), dst in self.transitions.items():
            seen.setdefault(src, None)
            seen.setdefault(dst, None)
        return tuple(seen)

    def is_total(self) -> bool:
        return all((s, d) in self.transitions for s in self.states for d in DOUBLETS)

    def step(self, state: str, doublet: str) -> str:
        try:
            return self.transitions[state, doublet]
        except KeyError:
            raise IncompleteAutomaton(f"no transition from {state} on {doublet}") from None

    def run(self, doublets) -> list[str]:
        path = [self.start]
        for d in doublets:
            path.append(self.step(path[-1], d))
        return path

    def sign(self, state: str) -> int:
        return -1 if state in self.negative else 1

    def dumps(self) -> str:
        lines = [f"start {self.start}", "negative " + " ".join(sorted(self.negative))]
        order = {s: i for i, s in enumerate(self.states)}
        for (src, d), dst in sorted(self.transitions.items(), key=lambda kv: (order[kv[0][0]], kv[0][1])):
            lines.append(f"{src} {d} -> {dst}")
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "TwistAutomaton":
        start, negative, transitions = None, frozenset(), {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].replace("→", "->").strip()
            if not line:
                continue
            parts = line.split()
            if parts[0] == "start" and len(parts) == 2:
                start = parts[1]
            elif parts[0] == "negative":
                negative = frozenset(parts[1:])
            elif len(parts) == 4 and parts[2] == "->" and parts[1] in DOUBLETS:
                if (parts[0], parts[1]) in transitions:
                    raise ValueError(f"line {lineno}: duplicate transition {parts[0]} {parts[1]}")
                transitions[parts[0], parts[1]] = parts[3]
            else:
                raise ValueError(f"line {lineno}: cannot parse {raw!r}")
        if start is None:
            raise ValueError("automaton has no start state")
        return cls(start, negative, transitions)

    def replace(self, **changes) -> "TwistAutomaton":
        """Copy with transitions overridden; a value of None deletes the entry."""
        table = dict(self.transitions)
        for key, dst in changes.get("transitions", {}).items():
            if dst is None:
                table.pop(key, None)
            else:
                table[key] = dst
        return TwistAutomaton(
            changes.get("start", self.start),
            frozenset(changes.get("negative", self.negative)),
            table,
        )


_default = None


def default_automaton() -> TwistAutomaton:
    global _default
    if _default is None:
        text = resources.files("cdtwist").joinpath("data/omega2_tree.txt").read_text()
        _default = TwistAutomaton.loads(text)
    return _default


def trace(p: int, q: int, automaton: TwistAutomaton | None = None) -> list[str]:
    """States visited while walking [p, q], starting state included."""
    a = automaton or default_automaton()
    return a.run(interleave_bits(p, q))


def traverse(p: int, q: int, automaton: TwistAutomaton | None = None) -> int:
    a = automaton or default_automaton()
    return a.sign(a.run(interleave_bits(p, q))[-1])


def _traverse_grid(a: TwistAutomaton, p: np.ndarray, q: np.ndarray, bits: int) -> np.ndarray:
    """Vectorized traverse; returns signs, 0 where a transition is missing."""
    states = list(a.states)
    undefined = len(states)
    code = {s: i for i, s in enumerate(states)}
    table = np.full((undefined + 1, 4), undefined, dtype=np.int16)
    for (src, d), dst in a.transitions.items():
        table[code[src], DOUBLETS.index(d)] = code[dst]
    signs = np.array([a.sign(s) for s in states] + [0], dtype=np.int8)

    top = np.maximum(p, q)
    cur = np.full(np.broadcast(p, q).shape, code[a.start], dtype=np.int16)
    for b in reversed(range(bits)):
        d = (((p >> b) & 1) << 1) | ((q >> b) & 1)
        active = (top >> b) != 0 if b else np.ones(cur.shape, dtype=bool)
        cur = np.where(active, table[cur, d], cur)
    return signs[cur]


class ValidationReport(NamedTuple):
    ok: bool
    checked: int
    mismatch: tuple | None  # (p, q, expected, got); got is None for a missing transition

    def __str__(self):
        if self.ok:
            return f"ok: {self.checked} pairs agree with omega2"
        p, q, want, got = self.mismatch
        got = "undefined" if got is None else f"{got:+d}"
        return f"mismatch at ({p}, {q}): omega2 = {want:+d}, automaton = {got}"


def validate_automaton(a: TwistAutomaton | None = None, bits: int = 12) -> ValidationReport:
    """Compare the automaton with omega2 on every pair p, q < 2**bits.

    The first mismatch in row-major (p, then q) order is reported.
    """
    a = a or default_automaton()
    size = 1 << bits
    q = np.arange(size, dtype=np.int64)[None, :]
    chunk = max(1, (1 << 20) // size)
    for lo in range(0, size, chunk):
        p = np.arange(lo, min(lo + chunk, size), dtype=np.int64)[:, None]
        got = _traverse_grid(a, p, q, bits)
        want = omega2_array(p, q)
        bad = np.argwhere(got != want)
        if len(bad):
            i, j = bad[0]
            g = int(got[i, j])
            return ValidationReport(False, (lo + int(i)) * size + int(j),
                                    (lo + int(i), int(j), int(want[i, j]), g or None))
    return ValidationReport(True, size * size, None)


# Transitions spelled out in prose alongside the tree figure.  Everything
# else is recovered by fit_automaton.
PROSE_TRANSITIONS = {
    ("C", "01"): "T",
    ("C", "11"): "-D",
    ("T", "00"): "T",
    ("T", "01"): "T",
    ("T", "10"): "+1",
    ("T", "11"): "-1",
    ("-D", "00"): "-D",
    ("-D", "11"): "-D",
    ("-D", "01"): "+1",
    **{(s, d): s for s in ABSORBING for d in DOUBLETS},
}


def _fit_pairs(bits: int):
    pairs = []
    for p, q in itertools.product(range(1 << bits), repeat=2):
        natural = max(p.bit_length(), q.bit_length(), 1)
        # left padding must not change the outcome, so check padded runs too
        for width in (natural, natural + 1):
            pairs.append((interleave_bits(p, q, width), _omega2(p, q)))
    return pairs


def fit_automaton(partial=None, states=("C", "T", "D", "-D", "+1", "-1"),
                  start="C", negative=("-D", "-1"), bits: int = 5, limit: int = 16):
    """Complete a partial transition table so that the walk reproduces omega2.

    Backtracking search over the missing (state, doublet) entries; a branch is
    pruned as soon as some pair whose walk only uses assigned entries
    disagrees with omega2.  Returns every consistent completion (at most
    ``limit``) as a list of automata.
    """
    partial = dict(PROSE_TRANSITIONS if partial is None else partial)
    negative = frozenset(negative)
    missing = [(s, d) for s in states for d in DOUBLETS if (s, d) not in partial]
    pairs = _fit_pairs(bits)

    def consistent(table):
        for doublets, want in pairs:
            state = start
            for d in doublets:
                state = table.get((state, d))
                if state is None:
                    break
            else:
                if (-1 if state in negative else 1) != want:
                    return False
        return True

    found = []

    def search(i, table):
        if len(found) >= limit or not consistent(table):
            return
        if i == len(missing):
            found.append(TwistAutomaton(start, negative, dict(table)))
            return
        key = missing[i]
        # self-loop first, so the simplest completion is found first
        for dst in sorted(states, key=lambda s: s != key[0]):
            table[key] = dst
            search(i + 1, table)
            del table[key]

    search(0, partial)
    return found
