"""Self-checks behind ``secdss verify``: quick versions of the module
invariants, each returning True on success."""

from __future__ import annotations

from itertools import combinations

import numpy as np

from . import capacity as cap
from .field import GF
from .flowgraph import chain_trace, build, two_repair_trace, min_cut
from .hashshield import secure_bit_decode_symbols, secure_bit_encode, secure_bit_generator
from .mds import is_nested_mds, puncture, vandermonde_nested
from .resilient import omniscient_decode, resilient_code, resilient_encode
from .rskr import layout, shared_index
from .secrecy import toy_generator, verify_secrecy_bruteforce, verify_secrecy_rank
from .simulator import Corrupt, collect, compromise, fail_and_repair, init


def field_axioms(seed: int) -> bool:
    rng = np.random.default_rng(seed)
    for q in (2, 5, 257):
        gf = GF(q)
        a, b, c = (int(x) for x in rng.integers(0, q, 3))
        if gf.mul(a, gf.add(b, c)) != gf.add(gf.mul(a, b), gf.mul(a, c)):
            return False
        if a and gf.mul(a, gf.inv(a)) != 1:
            return False
        m = gf.random(rng, (4, 6))
        if gf.rank(m) != gf.rank(m.T):
            return False
    return True


def nested_mds(exhaustive: bool) -> bool:
    top = 12 if exhaustive else 8
    for theta in range(2, top + 1):
        for dim in range(2, theta + 1):
            gen = vandermonde_nested(theta, dim, dim // 2, 257)
            if not is_nested_mds(gen):
                return False
            if theta - dim >= 1 and not is_nested_mds(puncture(gen, range(theta - dim))):
                return False
    return True


def rskr_layouts() -> bool:
    for n in range(2, 9):
        lay = layout(n)
        counts = sum(len(s) for s in lay.node_symbols)
        if counts != 2 * lay.theta:
            return False
        for i, j in combinations(range(1, n + 1), 2):
            common = set(lay.symbols_of(i)) & set(lay.symbols_of(j))
            if common != {shared_index(lay, i, j)}:
                return False
    return True


def capacity_monotone() -> bool:
    for n in range(4, 9):
        for k in range(2, n):
            p = cap.DssParams.bandwidth_limited(n, k)
            prev = None
            for ell in range(k):
                val = cap.upper_bound(p, cap.ThreatModel("passive", ell))
                if prev is not None and val > prev:
                    return False
                prev = val
    return True


def mincut_oracle() -> bool:
    for n in range(3, 6):
        for k in range(1, n):
            d = n - 1
            for alpha in (d, (d + 1) // 2):
                p = cap.DssParams(n, k, d, alpha, 1)
                fg = build(p, chain_trace(p))
                for ell in range(k):
                    want = sum(min(d - i + 1, alpha) for i in range(ell + 1, k + 1))
                    if min_cut(fg, "dc", [n + i for i in range(1, ell + 1)]) != want:
                        return False
    return min_cut(build(cap.DssParams(5, 3, 4, 4, 1), two_repair_trace()), "dc", [1]) == 5


def toy_secrecy(exhaustive: bool) -> bool:
    gen = toy_generator()
    p = cap.DssParams.bandwidth_limited(4, 3)
    if not verify_secrecy_rank(gen, p, 2):
        return False
    return not exhaustive or verify_secrecy_bruteforce(gen, p, 2) == 0.0


def omniscient_sweep() -> bool:
    p = cap.DssParams.bandwidth_limited(4, 3)
    code = resilient_code(p, 1, 2)
    word = resilient_encode([0], code)
    for slot in range(1, 5):
        idxs = layout(4).symbols_of(slot)
        for pattern in range(1, 8):
            errs = {i: (pattern >> r) & 1 for r, i in enumerate(idxs)}
            st = init(p, word, 2, cap.ThreatModel.omniscient(1, 3))
            compromise(st, slot, Corrupt(errs), control=True)
            for dc in combinations(range(1, 5), 3):
                if omniscient_decode(collect(st, dc), code).message[0] != 0:
                    return False
    return True


def secure_bit_zero(seed: int) -> bool:
    p = cap.DssParams.bandwidth_limited(5, 3)
    gen = secure_bit_generator(p, 1, 1, 17)
    rng = np.random.default_rng(seed)
    lay = layout(5)
    x = secure_bit_encode(np.zeros(200, dtype=np.int64), gen, rng)
    for slot in range(1, 6):
        bad = x.copy()
        for i in lay.symbols_of(slot):
            bad[i - 1] = (bad[i - 1] + rng.integers(0, 17, size=bad.shape[1])) % 17
        for dc in combinations(range(1, 6), 3):
            idxs = sorted(lay.indices_of(dc))
            if secure_bit_decode_symbols(idxs, bad[[i - 1 for i in idxs]], gen, lay, 1).any():
                return False
    return True


def run_all(seed: int = 0, exhaustive: bool = False) -> dict[str, bool]:
    return {
        "field_axioms": field_axioms(seed),
        "nested_mds": nested_mds(exhaustive),
        "rskr_layouts": rskr_layouts(),
        "capacity_monotone": capacity_monotone(),
        "mincut_oracle": mincut_oracle(),
        "toy_secrecy": toy_secrecy(exhaustive),
        "omniscient_sweep": omniscient_sweep(),
        "secure_bit_zero": secure_bit_zero(seed),
    }
