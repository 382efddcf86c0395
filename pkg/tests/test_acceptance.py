"""Acceptance gate: one seeded sweep per criterion, each printing a single PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``; the summary lines are written
straight to the terminal even without ``-s``.
"""
import json

import pytest

from fliplab.sweeps import DEFAULT_SEED, run_suite

CRITERIA = [
    (1, "sandwich", "scol <= sw+1 <= wcol and sw+1 <= scol_(2r-1), per order and exact", 180),
    (2, "identities", "sw_1 = degeneracy and sw_inf = tree-width", 180),
    (3, "sparsify", "deletion-set size, refinement deltas, edge distances, distance stretch", 300),
    (4, "mw", "flip sequences from orders validate and meet both width bounds", 120),
    (5, "pipeline", "order -> sequence -> normalise -> order meets the explicit constant", 300),
    (6, "copw", "monotone cop strategy certified against every robber", 300),
    (7, "fwcw", "copwidth_r <= 2 fw_3r t^2 on trees and unicyclic graphs", 300),
    (8, "frk", "flipper-rank bounds splitter-rank with the doubly exponential budget", 300),
    (9, "oracles", "separators, biclique search and flip laws against brute force", 120),
]


@pytest.mark.parametrize("number,suite,claim,budget", CRITERIA, ids=[f"criterion-{c[0]}-{c[1]}" for c in CRITERIA])
def test_criterion(number, suite, claim, budget, capsys):
    result = run_suite(suite, seed=DEFAULT_SEED)
    verdict = "PASS" if result.passed else "FAIL"
    line = (f"CRITERION {number}: {verdict} [{suite}] {claim}; cases={result.cases} "
            f"failures={len(result.failures)} time={result.elapsed:.1f}s/{budget}s stats={json.dumps(result.stats)}")
    with capsys.disabled():
        print("\n" + line)
    assert result.cases > 0
    assert result.passed, result.failures[:5]
