from itertools import combinations, product

import numpy as np
import pytest
from hypothesis import given, strategies as st

from secdss.capacity import DssParams, ThreatModel
from secdss.errors import AdversaryTooStrong, NotSupported, TooLarge
from secdss.mds import is_nested_mds
from secdss.secrecy import (
    encode_file, toy_generator, mutual_information, observed_indices, rnc_demo,
    secret_decode, secret_encode, secret_generator, verify_secrecy_bruteforce, verify_secrecy_rank,
)
from secdss.simulator import collect, compromise, fail_and_repair, init

P4 = DssParams.bandwidth_limited(4, 3)


def test_toy_generator_is_the_printed_one():
    gen = toy_generator()
    want = np.zeros((6, 6), dtype=np.int64)
    want[:, 0] = 1
    for i in range(5):
        want[i, i + 1] = 1
    assert np.array_equal(gen.g, want) and gen.key_dim == 5 and gen.q == 5
    assert is_nested_mds(gen)


def test_toy_codeword_is_z_then_keys():
    gen = toy_generator()
    pkg = secret_encode([3], P4, 2, None, 5, gen, keys=[1, 2, 3, 4, 0])
    # Z = S + sum K_i = 3 + 10 = 13 = 3 mod 5
    assert pkg.codeword.tolist() == [3, 1, 2, 3, 4, 0]


def _views_by_hand(gen, nodes):
    """Eve's observation for every message, from an explicit list of symbol
    positions written out from the placement table."""
    stored = {1: [0, 1, 2], 2: [0, 3, 4], 3: [1, 3, 5], 4: [2, 4, 5]}
    cols = sorted({c for v in nodes for c in stored[v]})
    msgs = np.array(list(product(range(5), repeat=6)), dtype=np.int64)
    return msgs[:, 5:], (msgs @ gen.g % 5)[:, cols]


@pytest.mark.parametrize("nodes", list(combinations(range(1, 5), 2)))
def test_toy_code_leaks_nothing_by_hand_count(nodes):
    gen = toy_generator()
    secrets, views = _views_by_hand(gen, nodes)
    # every view value is hit equally often by every secret
    for s in range(5):
        rows = views[secrets[:, 0] == s]
        _, counts = np.unique(rows, axis=0, return_counts=True)
        assert len(counts) == 5**5 and set(counts) == {1}


@given(st.integers(4, 6), st.data())
def test_vandermonde_coset_code_is_secure(n, data):
    k = data.draw(st.integers(2, n - 1))
    ell = data.draw(st.integers(0, k - 1))
    p = DssParams.bandwidth_limited(n, k)
    gen = secret_generator(p, ell, 257)
    assert gen.dim - gen.key_dim == sum(n - i for i in range(ell + 1, k + 1))
    assert verify_secrecy_rank(gen, p, ell, "stored")
    assert verify_secrecy_rank(gen, p, ell, "repair")


@given(st.integers(4, 6), st.data(), st.integers(0, 2**32))
def test_any_k_collector_decodes_after_repairs(n, data, seed):
    k = data.draw(st.integers(2, n - 1))
    ell = data.draw(st.integers(0, k - 1))
    p = DssParams.bandwidth_limited(n, k)
    rng = np.random.default_rng(seed)
    gen = secret_generator(p, ell, 257)
    secret = rng.integers(0, 257, gen.dim - gen.key_dim)
    s = init(p, secret_encode(secret, p, ell, rng, 257, gen).codeword, 257)
    for slot in data.draw(st.lists(st.integers(1, n), max_size=4)):
        fail_and_repair(s, slot)
    dc = data.draw(st.lists(st.integers(1, n), min_size=k, max_size=k, unique=True))
    assert np.array_equal(secret_decode(collect(s, dc), gen), secret)


def test_checkers_catch_a_leaky_layout():
    # identity generator stores S as x6, which v3 and v4 both hold
    from secdss.field import GF
    from secdss.mds import NestedGenerator

    gen = NestedGenerator(GF(5), np.eye(6, dtype=np.int64), 5)
    assert not verify_secrecy_rank(gen, P4, 2)
    assert verify_secrecy_bruteforce(gen, P4, 2) == pytest.approx(np.log(5))
    # v3 alone already holds x6
    assert verify_secrecy_bruteforce(gen, P4, 1) == pytest.approx(np.log(5))


def test_mutual_information_of_a_copy():
    s = np.arange(4).reshape(4, 1)
    assert mutual_information(s, s) == pytest.approx(np.log(4))
    assert mutual_information(s, np.zeros((4, 1), dtype=np.int64)) == 0.0


def test_observed_indices_modes():
    assert observed_indices(4, [1, 3]) == [1, 2, 3, 4, 6]
    assert observed_indices(4, [1], "repair") == [1, 2, 3]
    with pytest.raises(ValueError):
        observed_indices(4, [1], "psychic")


def test_bruteforce_size_limit():
    gen = secret_generator(DssParams.bandwidth_limited(5, 3), 1, 257)
    with pytest.raises(TooLarge):
        verify_secrecy_bruteforce(gen, DssParams.bandwidth_limited(5, 3), 1)


def test_model_errors():
    with pytest.raises(AdversaryTooStrong):
        secret_generator(P4, 3, 257)
    with pytest.raises(NotSupported):
        secret_generator(DssParams(5, 3, 3, 3, 1), 1, 257)


def test_encode_file_pads_and_keys_each_chunk():
    p = DssParams.bandwidth_limited(5, 3)
    rng = np.random.default_rng(4)
    pkgs = encode_file(range(12), p, 1, rng)
    r = pkgs[0].secret.size
    assert r == 5 and len(pkgs) == 3
    assert np.concatenate([k.secret for k in pkgs]).tolist() == list(range(12)) + [0] * 3
    assert not np.array_equal(pkgs[0].keys, pkgs[1].keys)


def test_eavesdropper_view_through_the_simulator_is_masked():
    # Eve reads v1 now and v3's replacement while it downloads
    gen = toy_generator()
    seen = set()
    for keys in product(range(5), repeat=5):
        st_ = init(P4, secret_encode([0], P4, 2, None, 5, gen, keys=keys).codeword, 5,
                   ThreatModel("passive", 2))
        compromise(st_, 1)
        compromise(st_, 3, on_repair=True)
        fail_and_repair(st_, 3)
        seen.add(tuple(int(v[0]) for rec in st_.records for v in rec.stored.values()))
    # with S fixed the keys already sweep every possible view of 5 symbols
    assert len(seen) == 5**5


def test_rnc_demo_leaks_the_file():
    demo = rnc_demo(seed=1)
    assert demo.eve_rank == 6 and demo.recovered and demo.secrecy_rate == 0
