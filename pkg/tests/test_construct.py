"""Greedy and exact code construction, plus the classical code families."""

from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fcodes import bounds, construct
from fcodes.bits import (
    BitWord,
    Code,
    DistanceMatrix,
    hamming_distance,
    satisfies_distance_matrix,
)
from fcodes.functions import wt_requirement_matrix


def random_matrix(rng: random.Random, max_dim: int = 6, max_entry: int = 4) -> DistanceMatrix:
    m = rng.randint(2, max_dim)
    rows = [[0] * m for _ in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            rows[i][j] = rows[j][i] = rng.randint(0, max_entry)
    return DistanceMatrix.from_rows(rows)


# --- greedy -------------------------------------------------------------------


def test_greedy_threshold_never_fails_on_100_random_matrices():
    rng = random.Random(20240817)
    for _ in range(100):
        d = random_matrix(rng)
        r = bounds.gv_irregular_threshold(d)
        code = construct.greedy_irregular_code(d, r)
        assert code is not None, f"greedy failed at its own threshold on {d.entries}"
        ok, witness = satisfies_distance_matrix(code, d)
        assert ok, witness


def test_greedy_respects_row_order():
    d = wt_requirement_matrix(4, 1)
    r = bounds.gv_irregular_threshold(d)
    order = bounds.heuristic_row_order(d)
    code = construct.greedy_irregular_code(d, r, order)
    assert code is not None
    # output is indexed by original rows whatever the visit order
    ok, _ = satisfies_distance_matrix(code, d)
    assert ok


def test_greedy_can_fail_below_threshold():
    d = DistanceMatrix.uniform(4, 2)
    # four words pairwise distance 2 need length >= 3
    assert construct.greedy_irregular_code(d, 1) is None


# --- exact search -------------------------------------------------------------


def test_exact_trivial_dimensions():
    empty = DistanceMatrix.from_rows([[0]])
    res = construct.exact_min_length(empty)
    assert res.proven and res.value == 0


def test_exact_restricted_3x3_frozen():
    # off-diagonal requirements (2, 1, 2): no length-2 triple works (any two
    # words at distance 2 in {0,1}^2 are complements, and the third word
    # cannot be at distance >= 1 from one and >= 2 from the other), so N = 3.
    d = DistanceMatrix.from_rows([[0, 2, 1], [2, 0, 2], [1, 2, 0]])
    res = construct.exact_min_length(d)
    assert res.proven and res.value == 3
    ok, _ = satisfies_distance_matrix(res.code, d)
    assert ok


def test_exact_full_weight_matrix_k4_frozen():
    d = wt_requirement_matrix(4, 1)
    res = construct.exact_min_length(d)
    assert res.proven and res.value == 3


def test_exact_witness_starts_at_zero():
    d = DistanceMatrix.uniform(3, 2)
    res = construct.exact_min_length(d)
    assert res.code[0] == BitWord.zeros(res.value)


def test_exact_permutation_invariance():
    rng = random.Random(7)
    for _ in range(10):
        d = random_matrix(rng, max_dim=4, max_entry=3)
        n0 = construct.exact_min_length(d).value
        order = list(range(d.dim))
        rng.shuffle(order)
        n1 = construct.exact_min_length(d.permuted(order)).value
        assert n0 == n1


def test_exact_budget_exhaustion_reported():
    d = DistanceMatrix.uniform(6, 4)
    tight = construct.SearchBudget(max_length=16, max_nodes=3, time_limit=30.0)
    res = construct.exact_min_length(d, tight)
    assert not res.proven
    assert res.code is None
    assert res.value >= d.max_entry  # still a valid lower bound


def test_exact_length_cap_reported():
    d = DistanceMatrix.uniform(4, 8)
    capped = construct.SearchBudget(max_length=5, max_nodes=1_000_000, time_limit=30.0)
    res = construct.exact_min_length(d, capped)
    assert not res.proven


def test_exact_trace_lines():
    lines: list[str] = []
    d = DistanceMatrix.uniform(3, 2)
    construct.exact_min_length(d, trace=lines.append)
    assert any(line.startswith("try r=") for line in lines)
    assert any(line.startswith("proven r=") for line in lines)


def test_exact_row_symmetry_same_answer():
    rng = random.Random(99)
    for _ in range(8):
        d = random_matrix(rng, max_dim=4, max_entry=3)
        plain = construct.exact_min_length(d).value
        pruned = construct.exact_min_length(d, use_row_symmetry=True).value
        assert plain == pruned


def test_exact_sandwiched_by_bounds():
    rng = random.Random(404)
    for _ in range(20):
        d = random_matrix(rng, max_dim=5, max_entry=3)
        res = construct.exact_min_length(d)
        assert res.proven
        lo, hi = bounds.sandwich(d)
        assert lo.integer_value <= res.value <= hi.integer_value


# --- Hadamard -----------------------------------------------------------------


@pytest.mark.parametrize("dist", [1, 2, 4, 8])
def test_hadamard_code_distances(dist):
    code = construct.hadamard_code(dist)
    assert code is not None
    assert code.size == 4 * dist and code.length == 2 * dist
    ok, _ = satisfies_distance_matrix(code, DistanceMatrix.uniform(4 * dist, dist))
    assert ok


def test_hadamard_code_exact_min_distance():
    code = construct.hadamard_code(4)
    assert construct.min_distance(code) == 4


def test_hadamard_requires_power_of_two():
    assert construct.hadamard_code(3) is None
    assert construct.hadamard_code(6) is None


# --- Reed-Muller ----------------------------------------------------------------


def _rm_min_distance(code: Code) -> int:
    if code.size <= 2048:
        return construct.min_distance(code)
    # linear code: min distance = min nonzero weight
    return min(w.weight() for w in code if w.value != 0)


@pytest.mark.parametrize(
    "order,m", [(0, 1), (0, 3), (1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]
)
def test_reed_muller_min_distance(order, m):
    code = construct.reed_muller_code(order, m)
    dim = sum(len(list(itertools.combinations(range(m), i))) for i in range(order + 1))
    assert code.size == 1 << dim
    assert code.length == 1 << m
    assert _rm_min_distance(code) == 1 << (m - order)


def test_reed_muller_rm13_contains_constants():
    code = construct.reed_muller_code(1, 3)
    values = {w.value for w in code}
    assert 0 in values and (1 << 8) - 1 in values


# --- even-weight subcode and replication ------------------------------------------


def test_even_weight_subcode_frozen():
    code = construct.even_weight_subcode(6, 4)
    assert [str(w) for w in code] == ["0000", "0011", "0101", "0110", "1001", "1010"]
    assert construct.min_distance(code) == 2


def test_even_weight_subcode_capacity():
    with pytest.raises(ValueError):
        construct.even_weight_subcode(9, 4)  # only 8 even words of length 4


@given(st.integers(min_value=1, max_value=4))
def test_replicate_scales_distances(factor):
    base = construct.even_weight_subcode(6, 4)
    rep = construct.replicate_bits(base, factor)
    assert rep.length == 4 * factor
    for a, b in itertools.combinations(range(base.size), 2):
        assert hamming_distance(rep[a], rep[b]) == factor * hamming_distance(
            base[a], base[b]
        )


def test_replicate_preserves_order():
    # each bit is repeated in place, keeping word order
    base = Code.from_strings(["01", "10"])
    rep = construct.replicate_bits(base, 3)
    assert [str(w) for w in rep] == ["000111", "111000"]
    assert list(construct.replicate_bits(base, 1)) == list(base)


def test_min_distance_needs_two_words():
    with pytest.raises(ValueError):
        construct.min_distance(Code.from_strings(["0101"]))
