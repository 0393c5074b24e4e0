"""Basic performance regression tests."""

import time

from singcat.classify import decide_dg_equivalence, stabilize
from singcat.singularity import invariants

from .conftest import ADE_SUITE, make_germ


def test_ade_invariant_table_performance():
    start = time.perf_counter()
    table = {label: invariants(make_germ(text, variables)) for label, variables, text, _ in ADE_SUITE}
    duration = time.perf_counter() - start

    assert all(str(summary.ade) == label for label, summary in table.items())
    assert duration < 30.0


def test_parity_suite_performance():
    start = time.perf_counter()
    for _, variables, text, _ in ADE_SUITE:
        g = make_germ(text, variables)
        for squares in (1, 2):
            decide_dg_equivalence(g, stabilize(g, squares))
    duration = time.perf_counter() - start

    assert duration < 10.0
