"""Nested MDS generators, encoding, erasure decoding, puncturing and syndromes.

Codeword positions are 0-based array positions.  A message may be a
vector of base-field symbols or a ``(dim, w)`` matrix whose columns are
independent codewords; the latter is how packets over GF(q^v) are
carried (a base-field generator acts on each coordinate of a packet).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from itertools import combinations

import numpy as np

from .errors import FieldTooSmall, NotMds, PunctureTooDeep, ShapeError, TooFewSymbols
from .field import GF


@dataclass(frozen=True, eq=False)
class NestedGenerator:
    """A (theta, dim) generator whose first ``key_dim`` rows form G_K.

    ``key_dim == 0`` is a plain MDS code with no key rows.
    """

    gf: GF
    g: np.ndarray
    key_dim: int = 0
    eval_points: tuple[int, ...] | None = None
    _cache: dict = dc_field(default_factory=dict, repr=False)

    @property
    def q(self) -> int:
        return self.gf.q

    @property
    def dim(self) -> int:
        return self.g.shape[0]

    @property
    def theta(self) -> int:
        return self.g.shape[1]

    @property
    def g_key(self) -> np.ndarray:
        return self.g[: self.key_dim]

    @property
    def g_secret(self) -> np.ndarray:
        return self.g[self.key_dim :]

    @cached_property
    def parity(self) -> np.ndarray:
        return parity_check(self)

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "theta": self.theta,
            "dim": self.dim,
            "key_dim": self.key_dim,
            "entries": self.g.tolist(),
            "eval_points": list(self.eval_points) if self.eval_points else None,
        }

    @classmethod
    def from_json(cls, data: dict) -> "NestedGenerator":
        return import_generator(data["entries"], data.get("key_dim", 0), data["q"])


def vandermonde_nested(theta: int, dim: int, key_dim: int, q: int, points=None) -> NestedGenerator:
    """Row i is (a_j ** i); leading rows of a Vandermonde matrix stay MDS."""
    if not 0 <= key_dim < dim <= theta:
        raise ShapeError(f"need 0 <= key_dim < dim <= theta, got {key_dim}, {dim}, {theta}")
    gf = GF(q)
    if dim == 1:
        return NestedGenerator(gf, np.ones((1, theta), dtype=np.int64), key_dim)
    if points is None:
        if q <= theta:
            raise FieldTooSmall(f"GF({q}) has fewer than {theta} nonzero points")
        points = tuple(range(1, theta + 1))
    points = tuple(int(p) % q for p in points)
    if len(points) != theta or len(set(points)) != theta or 0 in points:
        raise FieldTooSmall("evaluation points must be theta distinct nonzero elements")
    pts = np.array(points, dtype=np.int64)
    g = np.ones((dim, theta), dtype=np.int64)
    for i in range(1, dim):
        g[i] = g[i - 1] * pts % q
    return NestedGenerator(gf, g, key_dim, points)


def _first_deficient(gf: GF, g: np.ndarray, size: int):
    for cols in combinations(range(g.shape[1]), size):
        if gf.rank(g[:, cols]) < size:
            return cols
    return None


def import_generator(g, key_dim: int, q: int) -> NestedGenerator:
    """Validate a user-supplied generator by exhaustive minor checks."""
    gf = GF(q)
    g = gf.array(g)
    if g.ndim != 2 or not 0 <= key_dim < g.shape[0] <= g.shape[1]:
        raise ShapeError(f"bad generator shape {g.shape} for key_dim {key_dim}")
    bad = _first_deficient(gf, g, g.shape[0])
    if bad is not None:
        raise NotMds(f"columns {bad} of G are dependent", bad)
    if key_dim:
        bad = _first_deficient(gf, g[:key_dim], key_dim)
        if bad is not None:
            raise NotMds(f"columns {bad} of G_K are dependent", bad)
    return NestedGenerator(gf, g, key_dim)


def is_mds(gen: NestedGenerator) -> bool:
    return _first_deficient(gen.gf, gen.g, gen.dim) is None


def is_nested_mds(gen: NestedGenerator) -> bool:
    if not is_mds(gen):
        return False
    return gen.key_dim == 0 or _first_deficient(gen.gf, gen.g_key, gen.key_dim) is None


def encode(msg, gen: NestedGenerator) -> np.ndarray:
    """Codeword msg . G; msg is ordered [keys | secret]."""
    m = gen.gf.array(msg)
    if m.shape[0] != gen.dim:
        raise ShapeError(f"message has {m.shape[0]} symbols, code dimension is {gen.dim}")
    if m.ndim == 1:
        return gen.gf.matmul(m, gen.g)
    return gen.gf.matmul(gen.g.T, m)


def erasure_decode(positions, values, gen: NestedGenerator) -> np.ndarray:
    """Recover the message from codeword symbols at the given positions."""
    positions = list(positions)
    values = gen.gf.array(values)
    if len(set(positions)) != len(positions):
        raise ShapeError("repeated positions")
    if values.shape[0] != len(positions):
        raise ShapeError("positions and values differ in length")
    if len(positions) < gen.dim:
        raise TooFewSymbols(f"{len(positions)} symbols observed, need {gen.dim}")
    return gen.gf.solve(gen.g[:, positions].T, values)


def puncture(gen: NestedGenerator, indices) -> NestedGenerator:
    """Delete the coordinates in ``indices``; MDS-ness survives while |I| < theta - dim + 1."""
    drop = sorted(set(int(i) for i in indices))
    if any(not 0 <= i < gen.theta for i in drop):
        raise ShapeError(f"puncture positions {drop} outside 0..{gen.theta - 1}")
    if len(drop) >= gen.theta - gen.dim + 1:
        raise PunctureTooDeep(f"cannot delete {len(drop)} of {gen.theta} positions from a dimension-{gen.dim} code")
    keep = [i for i in range(gen.theta) if i not in set(drop)]
    pts = tuple(gen.eval_points[i] for i in keep) if gen.eval_points else None
    return NestedGenerator(gen.gf, gen.g[:, keep], gen.key_dim, pts)


def restrict(gen: NestedGenerator, positions) -> NestedGenerator:
    """Keep only ``positions`` (in the given order); no depth check."""
    positions = list(positions)
    return NestedGenerator(gen.gf, gen.g[:, positions], gen.key_dim)


def parity_check(gen: NestedGenerator) -> np.ndarray:
    """H with H . G^T = 0 and rank theta - dim."""
    return gen.gf.nullspace(gen.g)


def syndrome(h: np.ndarray, y, gf: GF) -> np.ndarray:
    y = gf.array(y)
    if y.shape[0] != h.shape[1]:
        raise ShapeError(f"word of length {y.shape[0]} against parity matrix {h.shape}")
    return gf.matmul(h, y)


def min_distance(gen: NestedGenerator) -> int:
    """Minimum Hamming weight over all nonzero codewords, by enumeration."""
    msgs = gen.gf.elements(gen.dim)[1:]
    words = gen.gf.matmul(msgs, gen.g)
    return int(np.count_nonzero(words, axis=1).min())
