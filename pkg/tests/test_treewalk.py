import itertools
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cdtwist.cdcore import omega2
from cdtwist.treewalk import (
    ABSORBING,
    DOUBLETS,
    PROSE_TRANSITIONS,
    IncompleteAutomaton,
    TwistAutomaton,
    _traverse_grid,
    default_automaton,
    fit_automaton,
    interleave_bits,
    trace,
    traverse,
    validate_automaton,
)

GOLDEN = Path(__file__).parent / "golden"


@pytest.mark.parametrize("p,q,doublets", [
    (0b111, 0b101, "11,10,11"),
    (0b11, 0b11101, "01,01,01,10,11"),
    (0, 0, "00"),
    (3, 14, "01,01,11,10"),
])
def test_interleave_bits(p, q, doublets):
    assert ",".join(interleave_bits(p, q)) == doublets


def test_interleave_padding():
    assert interleave_bits(0b11, 0b11101) == interleave_bits(0b00011, 0b11101, width=5)
    assert interleave_bits(1, 0, width=3) == ("00", "00", "10")
    with pytest.raises(ValueError):
        interleave_bits(8, 1, width=3)


@given(st.integers(0, 1 << 40), st.integers(0, 1 << 40))
def test_interleave_recovers_operands(p, q):
    d = interleave_bits(p, q)
    assert len(d) == max(p.bit_length(), q.bit_length(), 1)
    assert int("".join(x[0] for x in d), 2) == p
    assert int("".join(x[1] for x in d), 2) == q


def test_trace_3_14():
    assert trace(3, 14) == ["C", "T", "T", "-1", "-1"]
    assert traverse(3, 14) == -1


@pytest.mark.parametrize("p,q", [(35, 55), (0, 7), (12, 51), (0, 0)])
def test_traverse_positive_examples(p, q):
    assert traverse(p, q) == 1


def test_traverse_matches_closed_form_8bit():
    for p, q in itertools.product(range(256), repeat=2):
        assert traverse(p, q) == omega2(p, q), (p, q)


@given(st.integers(0, 1 << 62), st.integers(0, 1 << 62))
def test_traverse_matches_closed_form_wide(p, q):
    assert traverse(p, q) == omega2(p, q)


def test_grid_traversal_matches_scalar():
    a = default_automaton()
    p = np.arange(128)[:, None]
    q = np.arange(128)[None, :]
    grid = _traverse_grid(a, p, q, 7)
    for i, j in itertools.product(range(128), repeat=2):
        assert grid[i, j] == traverse(i, j)


def test_prose_transitions_hold_verbatim():
    table = default_automaton().transitions
    for key, dst in PROSE_TRANSITIONS.items():
        assert table[key] == dst


def test_shipped_automaton_is_total_and_absorbing():
    a = default_automaton()
    assert a.is_total()
    for s, d in itertools.product(ABSORBING, DOUBLETS):
        assert a.step(s, d) == s
    assert set(a.states) == {"C", "T", "D", "-D", "+1", "-1"}


@given(st.integers(1, 1 << 20), st.integers(1, 1 << 20))
def test_absorption(p, q):
    path = trace(p, q)
    for i, s in enumerate(path):
        if s in ABSORBING:
            assert set(path[i:]) == {s}
            break


def test_validate_shipped_automaton():
    report = validate_automaton(bits=12)
    assert report.ok and report.checked == 1 << 24


def test_validate_swapped_absorbing_targets():
    a = default_automaton()
    flip = {"+1": "-1", "-1": "+1"}
    swapped = a.replace(transitions={k: flip[v] for k, v in a.transitions.items()
                                     if v in flip and k[0] not in ABSORBING})
    report = validate_automaton(swapped, bits=6)
    assert not report.ok
    p, q, want, got = report.mismatch
    assert (p, q) == (1, 2) and want == omega2(1, 2) == -got


def test_validate_inverted_output_labels():
    a = default_automaton()
    inverted = a.replace(negative={"C", "T", "D", "+1"})
    report = validate_automaton(inverted, bits=4)
    assert report.mismatch[:2] == (0, 0)


def test_validate_missing_exit_from_minus_d():
    broken = default_automaton().replace(transitions={("-D", "01"): None})
    assert not broken.is_total()
    report = validate_automaton(broken, bits=8)
    assert not report.ok
    p, q, want, got = report.mismatch
    assert got is None
    # a same-block pair p < q
    assert p.bit_length() == q.bit_length() and p < q
    with pytest.raises(IncompleteAutomaton):
        traverse(p, q, broken)


def test_fit_recovers_shipped_automaton_uniquely():
    fits = fit_automaton()
    assert len(fits) == 1
    assert fits[0].transitions == default_automaton().transitions
    assert fits[0].negative == default_automaton().negative


def test_fit_needs_a_d_state():
    assert fit_automaton(states=("C", "T", "-D", "+1", "-1")) == []


def test_dump_matches_golden_and_round_trips():
    text = default_automaton().dumps()
    assert text == (GOLDEN / "tree_dump.txt").read_text()
    again = TwistAutomaton.loads(text)
    assert again.transitions == default_automaton().transitions
    assert again.start == "C"


def test_loads_accepts_arrow_and_comments():
    a = TwistAutomaton.loads("# c\nstart C\nnegative -1\nC 00 → -1  # x\n")
    assert a.transitions == {("C", "00"): "-1"}
    for bad in ("start C\nC 00 -> T\nC 00 -> D\n", "start C\nC 0 -> T\n", "C 00 -> T\n"):
        with pytest.raises(ValueError):
            TwistAutomaton.loads(bad)
