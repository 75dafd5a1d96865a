"""Code construction: greedy builds, exact minimal-length search, classic families.

The greedy builder realises the sphere-covering existence argument behind
`bounds.gv_irregular_threshold`; the exact search settles N(M, D) on desk-scale
instances by depth-first backtracking. Hadamard (Sylvester), Reed-Muller,
even-weight subcodes and bit replication supply the raw material for the
specialised encoders in `fcodes.functions`.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Sequence

from . import bounds
from .bits import BitWord, Code, DistanceMatrix, satisfies_distance_matrix


@dataclass(frozen=True)
class SearchBudget:
    """Caps for the exact search: length, backtracking nodes, wall clock."""

    max_length: int = 16
    max_nodes: int = 2_000_000
    time_limit: float = 30.0  # seconds

    def __post_init__(self) -> None:
        if self.max_length <= 0 or self.max_nodes <= 0 or self.time_limit <= 0:
            raise ValueError(f"budget caps must be positive: {self}")


@dataclass(frozen=True)
class ExactLengthResult:
    """Outcome of exact_min_length.

    When `proven` is True, `value` is N(M, D) exactly and `code` is a witness.
    Otherwise `value` is the smallest length neither refuted nor confirmed
    before the budget ran out (so N >= value), and `code` is None.
    """

    value: int
    proven: bool
    nodes: int
    code: Code | None


def greedy_irregular_code(
    dmat: DistanceMatrix, r: int, order: Sequence[int] | None = None
) -> Code | None:
    """First-fit code for a requirement matrix at a fixed length.

    Rows are processed in `order`; each gets the lexicographically first
    length-r word far enough from all previously placed ones. Returns None if
    some row exhausts the whole space, which provably cannot happen at
    r >= gv_irregular_threshold(dmat, order).
    """
    if r < 0:
        raise ValueError(f"negative length {r}")
    m = dmat.dim
    pi = list(range(m)) if order is None else list(order)
    if sorted(pi) != list(range(m)):
        raise ValueError(f"order is not a permutation of 0..{m - 1}")
    words: dict[int, int] = {}
    for j in pi:
        row = dmat.entries[j]
        placed = None
        for cand in range(1 << r):
            if all(
                (cand ^ w).bit_count() >= row[i]
                for i, w in words.items()
            ):
                placed = cand
                break
        if placed is None:
            return None
        words[j] = placed
    return Code.of((BitWord(words[i], r) for i in range(m)), r)


def _interchange_groups(dmat: DistanceMatrix) -> list[int | None]:
    """For each row, the previous row it may be swapped with harmlessly.

    Rows i and j are interchangeable when swapping them leaves the matrix
    unchanged, i.e. their rows agree everywhere outside columns {i, j}. Rows
    are grouped greedily into cliques of pairwise-interchangeable rows; the
    search may then insist on non-decreasing words inside each clique.
    """
    m = dmat.dim

    def interchangeable(i: int, j: int) -> bool:
        return all(
            dmat.entries[i][c] == dmat.entries[j][c]
            for c in range(m)
            if c != i and c != j
        )

    groups: list[list[int]] = []
    prev: list[int | None] = [None] * m
    for i in range(m):
        for g in groups:
            if all(interchangeable(i, j) for j in g):
                prev[i] = g[-1]
                g.append(i)
                break
        else:
            groups.append([i])
    return prev


class _Budget:
    def __init__(self, budget: SearchBudget):
        self.max_nodes = budget.max_nodes
        self.deadline = time.monotonic() + budget.time_limit
        self.nodes = 0
        self.exhausted = False

    def spend(self) -> bool:
        """Account one assignment; False when the budget just ran out."""
        self.nodes += 1
        if self.nodes >= self.max_nodes or (
            self.nodes % 4096 == 0 and time.monotonic() > self.deadline
        ):
            self.exhausted = True
        return not self.exhausted


def _assignment_search(
    dmat: DistanceMatrix,
    r: int,
    budget: _Budget,
    prev_in_group: list[int | None],
) -> list[int] | None:
    """Find word values for every row at length r, or None if impossible.

    Depth-first over rows in index order. The first row is pinned to the
    all-zero word: XOR-translating any satisfying code moves word 0 to zero
    without changing distances.
    """
    m = dmat.dim
    words = [0] * m

    def extend(i: int) -> bool:
        if i == m:
            return True
        row = dmat.entries[i]
        start = 0
        p = prev_in_group[i]
        if p is not None:
            start = words[p]
        for cand in range(start, 1 << r):
            ok = True
            for j in range(i):
                if (cand ^ words[j]).bit_count() < row[j]:
                    ok = False
                    break
            if not ok:
                continue
            if not budget.spend():
                return False
            words[i] = cand
            if extend(i + 1):
                return True
            if budget.exhausted:
                return False
        return False

    if m == 0:
        return []
    if not budget.spend():
        return None
    # row 0 = all zeros; its constraints against later rows are checked there
    if extend(1):
        return words
    return None


def exact_min_length(
    dmat: DistanceMatrix,
    budget: SearchBudget | None = None,
    *,
    use_row_symmetry: bool = False,
    trace: Callable[[str], None] | None = None,
) -> ExactLengthResult:
    """The smallest length admitting a code for the requirement matrix.

    Tries lengths upward from the averaging lower bound, running a complete
    backtracking search at each; the first satisfiable length is N(M, D).
    Budget exhaustion (nodes, wall clock, or the length cap) yields an
    unproven result whose value is still a valid lower bound on N.
    """
    if budget is None:
        budget = SearchBudget()
    m = dmat.dim
    if m <= 1:
        return ExactLengthResult(0, True, 0, Code.of([BitWord.zeros(0)] * m, 0))
    start = max(0, bounds.plotkin_irregular(dmat).integer_value)
    prev_in_group = (
        _interchange_groups(dmat) if use_row_symmetry else [None] * m
    )
    state = _Budget(budget)
    r = start
    while True:
        if r > budget.max_length:
            if trace:
                trace(f"length-cap r={r} nodes={state.nodes}")
            return ExactLengthResult(r, False, state.nodes, None)
        if trace:
            trace(f"try r={r} nodes={state.nodes}")
        found = _assignment_search(dmat, r, state, prev_in_group)
        if state.exhausted:
            if trace:
                trace(f"budget-exhausted r={r} nodes={state.nodes}")
            return ExactLengthResult(r, False, state.nodes, None)
        if found is not None:
            code = Code.of((BitWord(v, r) for v in found), r)
            ok, _ = satisfies_distance_matrix(code, dmat)
            assert ok, "search returned an invalid witness"
            if trace:
                trace(f"proven r={r} nodes={state.nodes}")
            return ExactLengthResult(r, True, state.nodes, code)
        r += 1


def hadamard_code(dist: int) -> Code | None:
    """Length-2D code with 4D words at min distance D, from a Sylvester matrix.

    Exists here exactly when 2D is a power of two: rows of the matrix (in the
    0/1 domain, H[i][j] = parity of popcount(i AND j)) plus their complements.
    The distance profile is checked before returning. None for other D.
    """
    if dist < 1:
        return None
    n = 2 * dist
    if n & (n - 1) != 0:
        return None
    rows = []
    for i in range(n):
        v = 0
        for j in range(n):
            v = (v << 1) | ((i & j).bit_count() & 1)
        rows.append(v)
    full = (1 << n) - 1
    words = [BitWord(v, n) for v in rows] + [BitWord(v ^ full, n) for v in rows]
    code = Code.of(words, n)
    ok, _ = satisfies_distance_matrix(code, DistanceMatrix.uniform(4 * dist, dist))
    if not ok:  # pragma: no cover - Sylvester construction always satisfies
        return None
    return code


def reed_muller_code(r_rm: int, m: int) -> Code:
    """All codewords of the Reed-Muller code RM(r_rm, m), length 2^m.

    Generator rows evaluate the monomials of degree <= r_rm over all 2^m
    points; rows are ordered by (degree, variable tuple) and codewords by the
    integer whose bit j selects row j. Min distance is 2^(m - r_rm).
    """
    if not 0 <= r_rm <= m:
        raise ValueError(f"need 0 <= order <= m, got ({r_rm}, {m})")
    n = 1 << m
    monomials: list[tuple[int, ...]] = []
    for size in range(r_rm + 1):
        monomials.extend(tuple(c) for c in combinations(range(m), size))
    gen_rows = []
    for s in monomials:
        v = 0
        for x in range(n):
            bit = 1
            for var in s:
                bit &= (x >> var) & 1
            v = (v << 1) | bit
        gen_rows.append(v)
    words = []
    for msg in range(1 << len(gen_rows)):
        v = 0
        for j, row in enumerate(gen_rows):
            if (msg >> j) & 1:
                v ^= row
        words.append(BitWord(v, n))
    return Code.of(words, n)


def even_weight_subcode(count: int, length: int) -> Code:
    """The first `count` even-weight words of a length, in lexicographic order.

    A subcode of the single parity check code, so min distance 2 whenever
    count >= 2. There are 2^(length-1) even-weight words in total.
    """
    if length < 1:
        raise ValueError(f"need length >= 1, got {length}")
    if count < 1:
        raise ValueError(f"need count >= 1, got {count}")
    if count > 1 << (length - 1):
        raise ValueError(
            f"only {1 << (length - 1)} even-weight words of length {length}, "
            f"asked for {count}"
        )
    words = []
    v = 0
    while len(words) < count:
        if v.bit_count() % 2 == 0:
            words.append(BitWord(v, length))
        v += 1
    return Code.of(words, length)


def replicate_bits(code: Code, factor: int) -> Code:
    """Repeat every bit of every word `factor` times in place.

    Scales every pairwise distance by exactly `factor`.
    """
    if factor < 1:
        raise ValueError(f"need factor >= 1, got {factor}")
    out = []
    for w in code:
        bits = []
        for b in w.bits():
            bits.extend([b] * factor)
        out.append(BitWord.from_bits(bits))
    return Code.of(out, code.length * factor)


def min_distance(code: Code) -> int:
    """Minimum pairwise Hamming distance over all distinct index pairs."""
    if code.size < 2:
        raise ValueError(f"need at least 2 words, got {code.size}")
    vals = [w.value for w in code.words]
    best = code.length
    for i in range(len(vals)):
        vi = vals[i]
        for j in range(i + 1, len(vals)):
            d = (vi ^ vals[j]).bit_count()
            if d < best:
                best = d
                if best == 0:
                    return 0
    return best
