"""Coset coding against a passive eavesdropper on the RSKR placement.

A secret of R symbols is mixed with M - R uniform keys through a nested
MDS generator and stored with the RSKR repetition layout.  Coding here
runs at beta = 1; larger files are split into independently keyed
chunks by :func:`encode_file`.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .capacity import DssParams, ThreatModel, base_quantities
from .errors import AdversaryTooStrong, NotSupported, TooFewSymbols, TooLarge
from .field import GF
from .mds import NestedGenerator, encode, erasure_decode, vandermonde_nested
from .rskr import layout, repair_plan
from .simulator import CollectorView

BRUTE_FORCE_LIMIT = 10**6


@dataclass(frozen=True)
class SecretPackage:
    gen: NestedGenerator
    keys: np.ndarray
    secret: np.ndarray
    codeword: np.ndarray

    def to_json(self) -> dict:
        return {
            "generator": self.gen.to_json(),
            "keys": self.keys.tolist(),
            "secret": self.secret.tolist(),
            "codeword": self.codeword.tolist(),
        }


def _check_params(p: DssParams, ell: int):
    if ell >= p.k:
        raise AdversaryTooStrong(f"ell={ell} >= k={p.k}: secrecy capacity is zero")
    if p.d != p.n - 1 or p.alpha != p.n - 1 or p.beta != 1:
        raise NotSupported("coset scheme runs at d = n-1, alpha = n-1, beta = 1 (split larger beta into chunks)")


def secret_generator(p: DssParams, ell: int, q: int) -> NestedGenerator:
    _check_params(p, ell)
    bq = base_quantities(p, ThreatModel("passive", ell))
    return vandermonde_nested(bq.theta, bq.M, bq.M - bq.R, q)


def secret_encode(secret, p: DssParams, ell: int, rng: np.random.Generator, q: int = 257,
                  gen: NestedGenerator | None = None, keys=None) -> SecretPackage:
    """X = K G_K + S G_S with fresh uniform keys unless ``keys`` is given."""
    _check_params(p, ell)
    gen = gen or secret_generator(p, ell, q)
    gf = gen.gf
    secret = gf.array(secret)
    keys = gf.random(rng, (gen.key_dim,) + secret.shape[1:]) if keys is None else gf.array(keys)
    msg = np.concatenate([keys, secret])
    return SecretPackage(gen, keys, secret, encode(msg, gen))


def secret_decode(view: CollectorView, gen: NestedGenerator) -> np.ndarray:
    idxs, syms = view.distinct()
    if len(idxs) < gen.dim:
        raise TooFewSymbols(f"collector saw {len(idxs)} distinct indices, need {gen.dim}")
    if syms.ndim == 2 and syms.shape[1] == 1:
        syms = syms[:, 0]
    msg = erasure_decode([i - 1 for i in idxs], syms, gen)
    return msg[gen.key_dim :]


def encode_file(data, p: DssParams, ell: int, rng, q: int = 257) -> list[SecretPackage]:
    """Split ``data`` into R-symbol chunks (zero padded), each with its own keys."""
    gen = secret_generator(p, ell, q)
    r = gen.dim - gen.key_dim
    data = list(data)
    data += [0] * (-len(data) % r)
    return [secret_encode(data[i : i + r], p, ell, rng, q, gen) for i in range(0, len(data), r)]


def _patterns(n: int, ell: int):
    return list(combinations(range(1, n + 1), ell))


def observed_indices(n: int, nodes, mode: str = "stored") -> list[int]:
    """Symbol indices Eve sees on ``nodes``; in ``repair`` mode the indices of
    the messages each node downloads while being rebuilt."""
    lay = layout(n)
    seen: set[int] = set()
    for v in nodes:
        if mode == "repair":
            seen.update(idx for _, idx in repair_plan(lay, v))
        elif mode == "stored":
            seen.update(lay.symbols_of(v))
        else:
            raise ValueError(f"unknown mode {mode!r}")
    return sorted(seen)


def verify_secrecy_rank(gen: NestedGenerator, p: DssParams, ell: int, mode: str = "stored") -> bool:
    """Keys mask every ell-node view: rank G[:, J] == rank G_K[:, J]."""
    gf = gen.gf
    for nodes in _patterns(p.n, ell):
        cols = [i - 1 for i in observed_indices(p.n, nodes, mode)]
        if gf.rank(gen.g[:, cols]) != gf.rank(gen.g_key[:, cols]):
            return False
    return True


def mutual_information(secrets: np.ndarray, views: np.ndarray) -> float:
    """I(S; V) in nats from equally likely (secret, view) samples."""
    total = len(secrets)
    s_keys = [s.tobytes() for s in secrets]
    v_keys = [v.tobytes() for v in views]
    cs, cv = Counter(s_keys), Counter(v_keys)
    joint = Counter(zip(s_keys, v_keys))
    mi = 0.0
    for (s, v), c in joint.items():
        mi += c / total * math.log((c * total) / (cs[s] * cv[v]))
    return max(mi, 0.0)


def verify_secrecy_bruteforce(gen: NestedGenerator, p: DssParams, ell: int, mode: str = "stored") -> float:
    """Max over ell-node patterns of I(S; view), enumerating all q^M messages."""
    size = gen.q ** gen.dim
    if size > BRUTE_FORCE_LIMIT:
        raise TooLarge(f"q^M = {size} messages exceeds the brute-force limit {BRUTE_FORCE_LIMIT}")
    if ell == 0:
        return 0.0
    gf = gen.gf
    msgs = gf.elements(gen.dim)
    words = gf.matmul(msgs, gen.g)
    secrets = np.ascontiguousarray(msgs[:, gen.key_dim :])
    best = 0.0
    for nodes in _patterns(p.n, ell):
        cols = [i - 1 for i in observed_indices(p.n, nodes, mode)]
        best = max(best, mutual_information(secrets, np.ascontiguousarray(words[:, cols])))
    return best


def toy_generator() -> NestedGenerator:
    """The explicit GF(5) generator: G_K rows e0 + e_i, G_S = e0."""
    from .mds import import_generator

    g = np.zeros((6, 6), dtype=np.int64)
    for i in range(1, 6):
        g[i - 1, 0] = 1
        g[i - 1, i] = 1
    g[5, 0] = 1
    return import_generator(g, 5, 5)


@dataclass(frozen=True)
class RncDemo:
    q: int
    eve_rank: int
    recovered: bool
    secrecy_rate: int

    def to_json(self) -> dict:
        return {"q": self.q, "eve_rank": self.eve_rank, "recovered": self.recovered,
                "secrecy_rate": self.secrecy_rate}


def rnc_demo(seed: int, q: int = 257) -> RncDemo:
    """D(4,3,3) with random linear network coding: v4 -> v5 -> v6, Eve reads
    both replacements' downloads and tries to solve for the 6-symbol file."""
    gf = GF(q)
    rng = np.random.default_rng(seed)
    file = gf.random(rng, 6)
    coeffs = {v: gf.random(rng, (3, 6)) for v in (1, 2, 3, 4)}
    observed = []
    for new in (5, 6):
        rows = []
        for helper in (1, 2, 3):
            mix = gf.random(rng, 3)
            rows.append(gf.matmul(mix, coeffs[helper]))
        coeffs[new] = np.array(rows)
        observed.append(coeffs[new])
    a = np.vstack(observed)
    rank = gf.rank(a)
    recovered = False
    if rank == 6:
        recovered = bool(np.array_equal(gf.solve(a, gf.matmul(a, file)), file))
    # dimensions of the file that stay hidden from Eve
    return RncDemo(q, rank, recovered, 6 - rank)
