#!/usr/bin/env python3
"""How tight are the Plotkin and greedy thresholds against exact search?

Samples random requirement matrices, computes the exact minimal length by
backtracking, and reports where it lands between the Plotkin ceiling and
the greedy (Gilbert-Varshamov style) threshold.

Usage:
    python scripts/bounds_vs_exact.py [--trials 200] [--max-dim 6]
        [--max-entry 4] [--seed 1] [--verbose]
"""

from __future__ import annotations

import argparse
import random
import sys
from collections import Counter

from fcodes import bounds, construct
from fcodes.bits import DistanceMatrix


def random_matrix(rng: random.Random, max_dim: int, max_entry: int) -> DistanceMatrix:
    m = rng.randint(2, max_dim)
    rows = [[0] * m for _ in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            rows[i][j] = rows[j][i] = rng.randint(0, max_entry)
    return DistanceMatrix.from_rows(rows)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--max-dim", type=int, default=6)
    ap.add_argument("--max-entry", type=int, default=4)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--max-nodes", type=int, default=20_000_000)
    ap.add_argument("--verbose", action="store_true")
    args = ap.parse_args()

    rng = random.Random(args.seed)
    budget = construct.SearchBudget(max_nodes=args.max_nodes, time_limit=300.0)
    lower_gap = Counter()  # exact - plotkin ceiling
    upper_gap = Counter()  # gv threshold - exact
    unproven = 0
    nodes_total = 0

    for trial in range(args.trials):
        dmat = random_matrix(rng, args.max_dim, args.max_entry)
        lo = bounds.plotkin_irregular(dmat).integer_value
        hi = bounds.gv_irregular_threshold(dmat)
        res = construct.exact_min_length(dmat, budget)
        nodes_total += res.nodes
        if not res.proven:
            unproven += 1
            if args.verbose:
                print(f"trial {trial}: unproven after {res.nodes} nodes, "
                      f"N >= {res.value}, matrix {dmat.entries}")
            continue
        assert lo <= res.value <= hi, (lo, res.value, hi, dmat.entries)
        lower_gap[res.value - lo] += 1
        upper_gap[hi - res.value] += 1
        if args.verbose:
            print(f"trial {trial}: dim {dmat.dim}, plotkin {lo} <= exact "
                  f"{res.value} <= gv {hi} ({res.nodes} nodes)")

    proven = args.trials - unproven
    print(f"{proven}/{args.trials} instances solved exactly "
          f"({nodes_total} search nodes total)")
    if proven:
        tight_lo = lower_gap[0]
        tight_hi = upper_gap[0]
        print(f"exact == plotkin ceiling: {tight_lo}/{proven}"
              f"   exact == gv threshold: {tight_hi}/{proven}")
        print(f"gap above plotkin: {dict(sorted(lower_gap.items()))}")
        print(f"gap below gv:      {dict(sorted(upper_gap.items()))}")
    if unproven:
        print(f"WARNING: {unproven} instances hit the search budget")
    return 0 if unproven == 0 else 2


if __name__ == "__main__":
    sys.exit(main())
