import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from finkit.canon import Coloring, Front
from finkit.errors import OutOfRange
from finkit.finvec import BlockSequence, approximations, leq, unit_blocks
from finkit.pigeonhole import (
    SearchBudget,
    certify_homogeneous,
    find_homogeneous,
    naive_homogeneous,
    outcome_to_dict,
    search_homogeneous,
)
from finkit.results import Exhausted


def coloring(X, n, rule):
    return Coloring(Front.uniform(X, n), rule=rule)


def test_min_parity_k1():
    X = unit_blocks(1, 8)
    c = coloring(X, 1, "min-parity")
    Y = find_homogeneous(c, X, 1, SearchBudget(8, 3))
    assert Y.encode() == ["1:{0:1}", "1:{2:1}", "1:{4:1}"]
    assert certify_homogeneous(Y, c, 1)
    assert Y == naive_homogeneous(c, X, 1, 3)


def test_first_value_k2():
    X = unit_blocks(2, 6)
    c = coloring(X, 1, "first-value")
    out = search_homogeneous(c, X, 1, SearchBudget(6, 2))
    assert [str(t) for t in out.terms] == ["T^1x0 + x1", "T^1x2 + x3"]
    assert out.color == 1
    assert out.sequence == naive_homogeneous(c, X, 1, 2)


def test_certify_cases():
    X = unit_blocks(1, 4)
    c = coloring(X, 1, "min-parity")
    assert certify_homogeneous(BlockSequence(1, ()), c, 0)
    assert certify_homogeneous(BlockSequence(1, ()), coloring(X, 0, "constant"), 0)
    assert not certify_homogeneous(X, c, 1)
    assert certify_homogeneous(BlockSequence(1, (X[0],)), c, 1)


def test_target_zero_and_rank_checks():
    X = unit_blocks(1, 3)
    c = coloring(X, 1, "union")
    assert find_homogeneous(c, X, 1, SearchBudget(3, 1)) == BlockSequence(1, (X[0],))
    with pytest.raises(OutOfRange):
        find_homogeneous(c, X, 2, SearchBudget(3, 2))  # coloring lives on rank 1
    with pytest.raises(OutOfRange):
        SearchBudget(3, 4)
    c0 = coloring(X, 0, "constant")
    assert len(find_homogeneous(c0, X, 0, SearchBudget(3, 0))) == 0


def test_union_is_never_homogeneous():
    X = unit_blocks(1, 5)
    c = coloring(X, 1, "union")
    res = find_homogeneous(c, X, 1, SearchBudget(5, 2))
    assert isinstance(res, Exhausted) and not res
    assert res.reason == "exhausted"
    assert res.nodes == sum(res.depth_histogram.values())
    assert res.bounds["target_length"] == 2
    assert Exhausted.from_dict(res.to_dict()) == res


def test_node_limit():
    X = unit_blocks(1, 8)
    c = coloring(X, 1, "union")
    res = find_homogeneous(c, X, 1, SearchBudget(8, 3, node_limit=5))
    assert res.reason == "node_limit" and res.nodes == 5


def _table_coloring(X, n, seed, ncol):
    rng = random.Random(seed)
    return Coloring.tabulate(Front.uniform(X, n), lambda s: rng.randrange(ncol))


@settings(max_examples=25)
@given(
    st.sampled_from([(1, 5, 1, 3), (1, 6, 2, 3), (2, 4, 1, 2), (2, 5, 2, 2), (1, 6, 1, 3)]),
    st.integers(0, 10**6),
    st.integers(1, 3),
)
def test_least_witness_matches_naive(shape, seed, ncol):
    k, m, n, target = shape
    X = unit_blocks(k, m)
    c = _table_coloring(X, n, seed, ncol)
    got = find_homogeneous(c, X, n, SearchBudget(m, target))
    ref = naive_homogeneous(c, X, n, target)
    if ref is None:
        assert isinstance(got, Exhausted)
    else:
        assert got == ref
        assert certify_homogeneous(got, c, n)
        assert leq(got, X)


@settings(max_examples=15)
@given(st.integers(0, 10**6))
def test_pruned_partials_are_truly_dead(seed):
    X = unit_blocks(1, 5)
    c = _table_coloring(X, 1, seed, 2)
    out = search_homogeneous(c, X, 1, SearchBudget(5, 3), trace=True)
    for P in out.pruned:
        # a pruned partial already sees two colors, so no extension survives
        assert not certify_homogeneous(P, c, 1)


def test_parallel_matches_serial():
    X = unit_blocks(1, 7)
    c = _table_coloring(X, 2, 11, 2)
    budget = SearchBudget(7, 3)
    a = search_homogeneous(c, X, 2, budget, threads=1)
    b = search_homogeneous(c, X, 2, budget, threads=3)
    assert a.sequence == b.sequence
    assert (a.nodes, a.prunes) == (b.nodes, b.prunes)
    assert outcome_to_dict(a, X, 2, budget) == outcome_to_dict(b, X, 2, budget)


def test_outcome_dict_found():
    X = unit_blocks(1, 8)
    c = coloring(X, 1, "min-parity")
    budget = SearchBudget(8, 3)
    d = outcome_to_dict(search_homogeneous(c, X, 1, budget), X, 1, budget)
    assert d["status"] == "found" and d["color"] == 0
    assert d["terms"] == ["x0", "x2", "x4"]
    assert all(c(s) == 0 for s in approximations(BlockSequence.parse(" ".join(d["Y"]), 1), 1))
