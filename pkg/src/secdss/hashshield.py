"""Resilience against a limited-knowledge adversary via inner-product hashes.

Data packets are length-v vectors over GF(q), encoded coordinate-wise
by a (theta, R) MDS code.  Alongside the data sits the hash table
``H = X X^T``.  The collector recomputes the table on what it observed,
compares, and erasure-decodes from a consistent trusted set.

The table itself is either an oracle-protected sidecar or, in ``c2``
mode, stored bit by bit with the one-bit coset scheme below on a
parallel sidecar system.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np
from sympy.ntheory import sqrt_mod

from .capacity import DssParams, ThreatModel, base_quantities, bl_capacity
from .errors import ModelViolation, NoSidecar, NoSolution, NotSupported, ShapeError
from .field import GF
from .mds import NestedGenerator, encode, erasure_decode, vandermonde_nested
from .rskr import RskrLayout, layout
from .simulator import CollectorView, Strategy

C2_Q = 2_147_483_647  # 2^31 - 1, field of the c2 hash-bit layer


# -- codes ------------------------------------------------------------------


@dataclass(frozen=True)
class ShieldCode:
    gen: NestedGenerator
    params: DssParams
    b: int
    ell: int
    v: int

    @property
    def R(self) -> int:
        return self.gen.dim

    @property
    def q(self) -> int:
        return self.gen.q

    @property
    def layout(self) -> RskrLayout:
        return layout(self.params.n)

    def overhead(self) -> float:
        """Hash symbols per information symbol: theta^2 / (R v)."""
        return self.gen.theta**2 / (self.R * self.v)


def _limited(p: DssParams, b: int, ell: int):
    if p.d != p.n - 1 or p.alpha != p.n - 1 or p.beta != 1:
        raise NotSupported("hash scheme runs at d = n-1, alpha = n-1, beta = 1")
    t = ThreatModel("limited", ell, b)
    bl_capacity(p, t)  # raises AdversaryOmniscient when E >= R
    return base_quantities(p, t)


def shield_code(p: DssParams, b: int, ell: int, q: int = 257, v: int = 16) -> ShieldCode:
    bq = _limited(p, b, ell)
    return ShieldCode(vandermonde_nested(bq.theta, bq.R, 0, q), p, b, ell, v)


def hash_table(x, gf: GF) -> np.ndarray:
    """h[i][j] = x_i . x_j over the rows of ``x``."""
    x = gf.array(x)
    return gf.matmul(x, x.T)


def shield_encode(msg, code: ShieldCode) -> tuple[np.ndarray, np.ndarray]:
    """Payload (theta, v) and its hash table."""
    m = code.gen.gf.array(msg)
    if m.shape != (code.R, code.v):
        raise ShapeError(f"message must have shape ({code.R}, {code.v}), got {m.shape}")
    x = encode(m, code.gen)
    return x, hash_table(x, code.gen.gf)


# -- comparison and decoding -------------------------------------------------


@dataclass(frozen=True)
class ComparisonTable:
    indices: tuple[int, ...]
    agree: np.ndarray

    def to_json(self) -> dict:
        return {"indices": list(self.indices), "agree": self.agree.astype(int).tolist()}


@dataclass(frozen=True)
class ShieldOutcome:
    message: np.ndarray
    trusted_pattern: tuple[int, ...]
    trusted_indices: tuple[int, ...]
    erased_indices: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "message": self.message.tolist(),
            "trusted_pattern": list(self.trusted_pattern),
            "trusted_indices": list(self.trusted_indices),
            "erased_indices": list(self.erased_indices),
        }


def compare(view: CollectorView, gf: GF, table=None) -> ComparisonTable:
    """agree[i][j] iff the recomputed hash of the observed pair matches H."""
    h = view.hash_table if table is None else table
    if h is None:
        raise NoSidecar("collector view carries no hash table")
    idxs, y = view.distinct()
    pos = [i - 1 for i in idxs]
    h_obs = hash_table(y, gf)
    return ComparisonTable(tuple(idxs), h_obs == np.asarray(h)[np.ix_(pos, pos)])


def shield_decode(view: CollectorView, code: ShieldCode, table=None) -> ShieldOutcome:
    """First b-set B (lexicographic) whose complement in the view is
    pairwise consistent and decodes without contradiction."""
    gf = code.gen.gf
    cmp = compare(view, gf, table)
    idxs, y = view.distinct()
    lay = code.layout
    for nodes in combinations(range(1, lay.n + 1), code.b):
        dropped = lay.indices_of(nodes)
        keep = [r for r, i in enumerate(idxs) if i not in dropped]
        if not cmp.agree[np.ix_(keep, keep)].all():
            continue
        try:
            msg = erasure_decode([idxs[r] - 1 for r in keep], y[keep], code.gen)
        except NoSolution:
            continue
        trusted = tuple(idxs[r] for r in keep)
        erased = tuple(i for i in idxs if i not in trusted)
        return ShieldOutcome(msg, nodes, trusted, erased)
    raise ModelViolation("no b-set of nodes leaves a consistent trusted set")


# -- Charlie's attack -------------------------------------------------------


def isotropic_in(basis: np.ndarray, gf: GF, rng: np.random.Generator, tries: int = 64):
    """A nonzero w in the row span of ``basis`` with w . w = 0, or None."""
    q = gf.q
    r = basis.shape[0]
    if r == 0:
        return None
    gram = gf.matmul(basis, basis.T)
    for _ in range(tries):
        u = gf.random(rng, r)
        z = gf.random(rng, r)
        if not z.any():
            continue
        qz = int(gf.matmul(gf.matmul(z, gram), z))
        if qz == 0:
            return gf.matmul(z, basis)
        qu = int(gf.matmul(gf.matmul(u, gram), u))
        buz = int(gf.matmul(gf.matmul(u, gram), z))
        disc = (buz * buz - qu * qz) % q
        root = sqrt_mod(disc, q) if disc else 0
        if root is None:
            continue
        t = (-buz + int(root)) * pow(qz, -1, q) % q
        w = gf.matmul((u + t * z) % q, basis)
        if w.any():
            return w
    return None


class CraftOrthogonal(Strategy):
    """Errors e_j = c_j w with w isotropic and orthogonal to every symbol
    Charlie has seen plus one random guess at a symbol he has not seen.
    Hashes among his own symbols stay consistent; a cross pair with an
    unseen symbol x agrees only if w . x = 0."""

    name = "craft"

    def __init__(self, rng: np.random.Generator, guess: bool = True):
        self.rng = rng
        self.guess = guess
        self.w = None

    def tamper(self, state, slot):
        gf = state.gf
        seen = [sym for rec in state.records for sym in rec.stored.values()]
        rows = np.array(seen, dtype=np.int64).reshape(-1, state.width)
        if self.guess:
            rows = np.vstack([rows, gf.random(self.rng, (1, state.width))])
        basis = gf.nullspace(rows)
        w = isotropic_in(basis, gf, self.rng)
        if w is None:
            w = basis[0] if len(basis) else gf.random(self.rng, state.width)
        self.w = w
        for idx in state.layout.symbols_of(slot):
            c = int(self.rng.integers(1, gf.q))
            state.overwrite(slot, idx, state.stored(slot, idx) + c * w)


# -- one secure bit (c2) -----------------------------------------------------


def secure_bit_generator(p: DssParams, b: int, ell: int, q: int = C2_Q) -> NestedGenerator:
    """(theta, M) nested code whose key rows span an E-dimensional subcode."""
    bq = _limited(p, b, ell)
    return vandermonde_nested(bq.theta, bq.M, bq.E, q)


def secure_bit_encode(bits, gen: NestedGenerator, rng: np.random.Generator) -> np.ndarray:
    """One codeword column per bit: K G_K for 0, K G_K + S G_S with random S for 1."""
    bits = np.atleast_1d(np.asarray(bits, dtype=np.int64))
    if not np.isin(bits, (0, 1)).all():
        raise ShapeError("bits must be 0 or 1")
    gf = gen.gf
    keys = gf.random(rng, (gen.key_dim, bits.size))
    secret = gf.random(rng, (gen.dim - gen.key_dim, bits.size)) * bits
    return encode(np.vstack([keys, secret]), gen)


def _bit_parities(gen: NestedGenerator, idxs: tuple[int, ...], lay: RskrLayout, b: int):
    key = ("bitpar", idxs, b)
    if key not in gen._cache:
        out = []
        for nodes in combinations(range(1, lay.n + 1), b):
            dropped = lay.indices_of(nodes)
            keep = [r for r, i in enumerate(idxs) if i not in dropped]
            h = gen.gf.nullspace(gen.g_key[:, [idxs[r] - 1 for r in keep]])
            out.append((keep, h))
        gen._cache[key] = out
    return gen._cache[key]


def secure_bit_decode_symbols(idxs, y, gen: NestedGenerator, lay: RskrLayout, b: int) -> np.ndarray:
    """Bits from distinct-index observations ``y`` of shape (M, w)."""
    y = gen.gf.array(y)
    if y.ndim == 1:
        y = y[:, None]
    zero = np.zeros(y.shape[1], dtype=bool)
    for keep, h in _bit_parities(gen, tuple(idxs), lay, b):
        zero |= ~gen.gf.matmul(h, y[keep]).any(axis=0)
    return (~zero).astype(np.int64)


def secure_bit_decode(view: CollectorView, gen: NestedGenerator, lay: RskrLayout, b: int) -> np.ndarray:
    """0 where some b-puncture of the view lies in the key code, else 1."""
    idxs, y = view.distinct()
    return secure_bit_decode_symbols(idxs, y, gen, lay, b)


# -- c2 hash table -----------------------------------------------------------


def table_bits(h: np.ndarray, q: int) -> np.ndarray:
    """Flatten an integer table to little-endian bits, ceil(log2 q) per entry."""
    width = max(1, (q - 1).bit_length())
    flat = np.asarray(h, dtype=np.int64).ravel()
    return ((flat[:, None] >> np.arange(width)) & 1).ravel()


def bits_table(bits: np.ndarray, theta: int, q: int) -> np.ndarray:
    width = max(1, (q - 1).bit_length())
    b = np.asarray(bits, dtype=np.int64).reshape(theta * theta, width)
    return (b << np.arange(width)).sum(axis=1).reshape(theta, theta)


def c2_encode_table(h: np.ndarray, code: ShieldCode, rng, q_bits: int = C2_Q):
    """Secure-bit codewords (theta, theta^2 ceil(log2 q)) for the hash table."""
    gen = secure_bit_generator(code.params, code.b, code.ell, q_bits)
    return gen, secure_bit_encode(table_bits(h, code.q), gen, rng)


def c2_decode_table(view: CollectorView, gen: NestedGenerator, code: ShieldCode) -> np.ndarray:
    idxs, y = view.distinct()
    bits = secure_bit_decode_symbols(idxs, y, gen, code.layout, code.b)
    return bits_table(bits, code.gen.theta, code.q)


def c2_overhead(code: ShieldCode) -> int:
    """Stored symbols spent on the table: theta^3 ceil(log2 q)."""
    return code.gen.theta**3 * max(1, (code.q - 1).bit_length())
