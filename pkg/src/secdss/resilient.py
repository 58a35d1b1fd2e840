"""Resilience against an omniscient adversary controlling up to b nodes.

A (theta, R) MDS outer code is stored with the RSKR layout.  The decoder
punctures the collector's (M, R) code at the indices held by each
candidate b-set of nodes and accepts the first puncture whose syndrome
vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from .capacity import DssParams, ThreatModel, base_quantities
from .errors import CapacityZero, ModelViolation, NotSupported, ShapeError
from .mds import NestedGenerator, encode, erasure_decode, vandermonde_nested
from .rskr import RskrLayout, layout
from .simulator import CollectorView


@dataclass(frozen=True)
class ResilientCode:
    gen: NestedGenerator
    params: DssParams
    b: int

    @property
    def R(self) -> int:
        return self.gen.dim

    @property
    def layout(self) -> RskrLayout:
        return layout(self.params.n)


@dataclass(frozen=True)
class DecodeOutcome:
    message: np.ndarray
    trusted_pattern: tuple[int, ...]
    corrupted_indices: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "message": self.message.tolist(),
            "trusted_pattern": list(self.trusted_pattern),
            "corrupted_indices": list(self.corrupted_indices),
        }


@lru_cache(maxsize=64)
def resilient_code(p: DssParams, b: int, q: int) -> ResilientCode:
    """Cached: the generator also memoises its puncture parities."""
    if 2 * b >= p.k:
        raise CapacityZero(f"2b = {2 * b} >= k = {p.k}: resiliency capacity is zero")
    if p.d != p.n - 1 or p.alpha != p.n - 1 or p.beta != 1:
        raise NotSupported("resilient scheme runs at d = n-1, alpha = n-1, beta = 1")
    bq = base_quantities(p, ThreatModel.omniscient(b, p.k))
    return ResilientCode(vandermonde_nested(bq.theta, bq.R, 0, q), p, b)


def resilient_encode(msg, code: ResilientCode) -> np.ndarray:
    m = code.gen.gf.array(msg)
    if m.shape[0] != code.R:
        raise ShapeError(f"message has {m.shape[0]} symbols, R = {code.R}")
    return encode(m, code.gen)


def _parity(gen: NestedGenerator, cols: tuple[int, ...]) -> np.ndarray:
    key = ("parity", cols)
    if key not in gen._cache:
        gen._cache[key] = gen.gf.nullspace(gen.g[:, list(cols)])
    return gen._cache[key]


def corrupted_rows(view: CollectorView, gen: NestedGenerator, message) -> tuple[int, ...]:
    """Indices where some observed copy differs from the re-encoded codeword."""
    word = encode(message, gen)
    if word.ndim == 1:
        word = word[:, None]
    bad = set()
    for (_, idx), sym in zip(view.rows, view.symbols):
        if not np.array_equal(np.atleast_1d(sym), word[idx - 1]):
            bad.add(idx)
    return tuple(sorted(bad))


def omniscient_decode(view: CollectorView, code: ResilientCode, order=None) -> DecodeOutcome:
    gen, lay = code.gen, code.layout
    gf = gen.gf
    idxs, y = view.distinct(order)
    if y.ndim == 1:
        y = y[:, None]
    pos = {idx: r for r, idx in enumerate(idxs)}
    for nodes in combinations(range(1, lay.n + 1), code.b):
        dropped = lay.indices_of(nodes)
        keep = tuple(i for i in idxs if i not in dropped)
        h = _parity(gen, tuple(i - 1 for i in keep))
        rows = y[[pos[i] for i in keep]]
        if h.size and gf.matmul(h, rows).any():
            continue
        msg = erasure_decode([i - 1 for i in keep], rows, gen)
        if msg.shape[1] == 1:
            msg = msg[:, 0]
        return DecodeOutcome(msg, nodes, corrupted_rows(view, gen, msg))
    raise ModelViolation("no b-set of nodes explains the observation")


def minimal_covers(edges, n: int, b: int) -> list[frozenset]:
    """Inclusion-minimal vertex covers of size <= b of a graph on 1..n."""
    edges = [tuple(e) for e in edges]
    covers: list[frozenset] = []
    for size in range(0, b + 1):
        for cand in combinations(range(1, n + 1), size):
            c = frozenset(cand)
            if any(prev <= c for prev in covers):
                continue
            if all(u in c or v in c for u, v in edges):
                covers.append(c)
    return covers


def expurgate(reports, lay: RskrLayout, b: int) -> list[int]:
    """Suspect nodes: union of the minimal covers of size <= b of the
    reported indices viewed as edges of K_n."""
    indices = set()
    for rep in reports:
        indices.update(rep)
    if not indices:
        return []
    edges = [lay.nodes_of(i) for i in sorted(indices)]
    out: set[int] = set()
    for c in minimal_covers(edges, lay.n, b):
        out |= c
    return sorted(out)
