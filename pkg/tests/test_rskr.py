from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from secdss.errors import BadParams
from secdss.rskr import layout, repair_plan, shared_index


def test_n4_placement():
    # v1..v4 store {Z,K1,K2}, {Z,K3,K4}, {K1,K3,K5}, {K2,K4,K5}
    lay = layout(4)
    assert [lay.symbols_of(v) for v in range(1, 5)] == [(1, 2, 3), (1, 4, 5), (2, 4, 6), (3, 5, 6)]


def test_n5_placement():
    lay = layout(5)
    assert lay.symbols_of(1) == (1, 2, 3, 4)
    assert lay.symbols_of(2) == (1, 5, 6, 7)
    assert lay.symbols_of(3) == (2, 5, 8, 9)
    assert lay.symbols_of(4) == (3, 6, 8, 10)
    assert lay.symbols_of(5) == (4, 7, 9, 10)


@given(st.integers(2, 14))
def test_every_index_on_exactly_two_nodes(n):
    lay = layout(n)
    assert lay.theta == n * (n - 1) // 2
    counts = {}
    for v in range(1, n + 1):
        assert len(lay.symbols_of(v)) == n - 1
        for i in lay.symbols_of(v):
            counts[i] = counts.get(i, 0) + 1
    assert counts == {i: 2 for i in range(1, lay.theta + 1)}


@given(st.integers(2, 14), st.data())
def test_pairs_share_exactly_one_index(n, data):
    lay = layout(n)
    i, j = data.draw(st.lists(st.integers(1, n), min_size=2, max_size=2, unique=True))
    common = set(lay.symbols_of(i)) & set(lay.symbols_of(j))
    assert common == {shared_index(lay, i, j)}
    assert lay.nodes_of(shared_index(lay, i, j)) == (min(i, j), max(i, j))


@given(st.integers(3, 10), st.data())
def test_k_nodes_see_the_bandwidth_limited_total(n, data):
    # any k nodes observe sum_{i=1}^k (n - i) distinct indices
    k = data.draw(st.integers(1, n - 1))
    nodes = data.draw(st.lists(st.integers(1, n), min_size=k, max_size=k, unique=True))
    assert len(layout(n).indices_of(nodes)) == sum(n - i for i in range(1, k + 1))


def test_repair_plan_recovers_the_lost_node():
    lay = layout(6)
    for v in range(1, 7):
        plan = repair_plan(lay, v)
        assert [h for h, _ in plan] == [h for h in range(1, 7) if h != v]
        assert sorted(i for _, i in plan) == sorted(lay.symbols_of(v))


def test_bad_inputs():
    with pytest.raises(BadParams):
        layout(1)
    lay = layout(4)
    with pytest.raises(BadParams):
        lay.symbols_of(5)
    with pytest.raises(BadParams):
        lay.nodes_of(7)
    with pytest.raises(BadParams):
        shared_index(lay, 2, 2)


def test_json_shape():
    doc = layout(3).to_json()
    assert doc == {"n": 3, "theta": 3, "nodes": {"1": [1, 2], "2": [1, 3], "3": [2, 3]}}
    assert all(len(set(a) & set(b)) == 1 for a, b in combinations(doc["nodes"].values(), 2))
