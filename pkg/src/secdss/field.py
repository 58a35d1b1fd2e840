"""Exact arithmetic over a prime field GF(q) and its extension GF(q^v).

Base-field vectors and matrices are plain ``numpy.int64`` arrays with
entries in ``[0, q)``; every routine reduces its output mod ``q``.
Extension elements are tuples of ``v`` base-field coefficients, lowest
degree first.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np
from sympy import Poly, isprime, symbols

from .errors import BadParams, DivideByZero, NoSolution, ShapeError

DEFAULT_Q = 257
DEFAULT_V = 16

# int64 headroom: q**2 times the inner dimension must stay below 2**63
_MAX_Q = 1 << 31

# Pinned moduli, low -> high coefficients.  x^16 - 3 is irreducible over
# GF(257) because 3 is a non-square and 257 = 1 mod 4.
_PINNED_MODULI = {
    (257, 16): (257 - 3,) + (0,) * 15 + (1,),
}


@dataclass(frozen=True)
class FieldCfg:
    q: int = DEFAULT_Q
    v: int = DEFAULT_V

    def __post_init__(self):
        if self.q < 2 or not isprime(self.q):
            raise BadParams(f"q={self.q} is not prime")
        if self.q >= _MAX_Q:
            raise BadParams(f"q={self.q} too large for int64 kernels")
        if self.v < 1:
            raise BadParams(f"v={self.v} must be >= 1")


class GF:
    """The prime field GF(q) with dense linear algebra helpers."""

    def __init__(self, q: int = DEFAULT_Q):
        FieldCfg(q, 1)
        self.q = q

    def __repr__(self):
        return f"GF({self.q})"

    def __eq__(self, other):
        return isinstance(other, GF) and other.q == self.q

    def __hash__(self):
        return hash(("GF", self.q))

    # -- scalars ---------------------------------------------------------

    def add(self, a, b):
        return (int(a) + int(b)) % self.q

    def sub(self, a, b):
        return (int(a) - int(b)) % self.q

    def mul(self, a, b):
        return (int(a) * int(b)) % self.q

    def neg(self, a):
        return (-int(a)) % self.q

    def inv(self, a):
        a = int(a) % self.q
        if a == 0:
            raise DivideByZero("inverse of zero")
        return pow(a, -1, self.q)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def arith(self, a, b, op: str):
        try:
            fn = {"add": self.add, "sub": self.sub, "mul": self.mul, "div": self.div}[op]
        except KeyError:
            raise BadParams(f"unknown op {op!r}") from None
        return fn(a, b)

    # -- vectors and matrices ---------------------------------------------

    def array(self, x) -> np.ndarray:
        return np.asarray(x, dtype=np.int64) % self.q

    def random(self, rng: np.random.Generator, shape) -> np.ndarray:
        return rng.integers(0, self.q, size=shape, dtype=np.int64)

    def inner(self, a, b) -> int:
        a = self.array(a)
        b = self.array(b)
        if a.shape != b.shape or a.ndim != 1:
            raise ShapeError(f"inner product of shapes {a.shape} and {b.shape}")
        return int(self.matmul(a, b))

    def matmul(self, a, b) -> np.ndarray:
        a = self.array(a)
        b = self.array(b)
        inner = a.shape[-1] if a.ndim else 1
        if a.ndim and b.ndim and inner != b.shape[0]:
            raise ShapeError(f"matmul of shapes {a.shape} and {b.shape}")
        if (self.q - 1) ** 2 * max(inner, 1) < (1 << 62):
            return (a @ b) % self.q
        return (a.astype(object) @ b.astype(object) % self.q).astype(np.int64)

    def rref(self, m) -> tuple[np.ndarray, list[int]]:
        """Reduced row echelon form and the list of pivot columns."""
        a = self.array(m).copy()
        if a.ndim != 2:
            raise ShapeError(f"expected a matrix, got shape {a.shape}")
        rows, cols = a.shape
        pivots: list[int] = []
        r = 0
        for c in range(cols):
            if r == rows:
                break
            nz = np.flatnonzero(a[r:, c])
            if nz.size == 0:
                continue
            p = r + int(nz[0])
            if p != r:
                a[[r, p]] = a[[p, r]]
            a[r] = a[r] * self.inv(a[r, c]) % self.q
            col = a[:, c].copy()
            col[r] = 0
            if col.any():
                a = (a - np.outer(col, a[r])) % self.q
            pivots.append(c)
            r += 1
        return a, pivots

    def rank(self, m) -> int:
        return len(self.rref(m)[1])

    def solve(self, m, rhs) -> np.ndarray:
        """One solution x of ``m @ x = rhs``; ``rhs`` may be a vector or a matrix."""
        a = self.array(m)
        b = self.array(rhs)
        vector = b.ndim == 1
        if vector:
            b = b[:, None]
        if a.ndim != 2 or b.shape[0] != a.shape[0]:
            raise ShapeError(f"cannot solve {a.shape} system with rhs {b.shape}")
        rows, cols = a.shape
        red, pivots = self.rref(np.hstack([a, b]))
        if any(p >= cols for p in pivots):
            raise NoSolution("inconsistent linear system")
        x = np.zeros((cols, b.shape[1]), dtype=np.int64)
        for r, c in enumerate(pivots):
            x[c] = red[r, cols:]
        return x[:, 0] if vector else x

    def inv_matrix(self, m) -> np.ndarray:
        a = self.array(m)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ShapeError(f"cannot invert shape {a.shape}")
        size = a.shape[0]
        red, pivots = self.rref(np.hstack([a, np.eye(size, dtype=np.int64)]))
        if pivots[:size] != list(range(size)):
            raise NoSolution("singular matrix")
        return red[:, size:]

    def nullspace(self, m) -> np.ndarray:
        """Rows spanning ``{x : m @ x = 0}``."""
        a = self.array(m)
        cols = a.shape[1]
        red, pivots = self.rref(a)
        free = [c for c in range(cols) if c not in pivots]
        basis = np.zeros((len(free), cols), dtype=np.int64)
        for i, f in enumerate(free):
            basis[i, f] = 1
            for r, p in enumerate(pivots):
                basis[i, p] = (-red[r, f]) % self.q
        return basis

    def elements(self, length: int):
        """Every vector of GF(q)^length, as an array of shape (q**length, length)."""
        return np.array(list(product(range(self.q), repeat=length)), dtype=np.int64).reshape(-1, length)


@lru_cache(maxsize=None)
def irreducible_modulus(q: int, v: int) -> tuple[int, ...]:
    """Monic irreducible polynomial of degree v over GF(q), low -> high.

    Pinned entries are used when present; otherwise the first irreducible
    ``x^v + a*x + b`` in lexicographic (a, b) order.
    """
    if (q, v) in _PINNED_MODULI:
        return _PINNED_MODULI[(q, v)]
    if v == 1:
        return (0, 1)
    x = symbols("x")
    for a in range(q):
        for b in range(1, q):
            if Poly(x**v + a * x + b, x, modulus=q).is_irreducible:
                return (b, a) + (0,) * (v - 2) + (1,)
    raise BadParams(f"no irreducible trinomial of degree {v} over GF({q})")


class ExtField:
    """GF(q^v) in the polynomial basis modulo a fixed irreducible polynomial."""

    def __init__(self, q: int = DEFAULT_Q, v: int = DEFAULT_V):
        FieldCfg(q, v)
        self.base = GF(q)
        self.q = q
        self.v = v
        self.modulus = irreducible_modulus(q, v)

    def __repr__(self):
        return f"GF({self.q}^{self.v})"

    def elem(self, coeffs) -> tuple[int, ...]:
        coeffs = [int(c) % self.q for c in coeffs]
        if len(coeffs) != self.v:
            raise ShapeError(f"extension element needs {self.v} coefficients, got {len(coeffs)}")
        return tuple(coeffs)

    @property
    def zero(self):
        return (0,) * self.v

    @property
    def one(self):
        return (1,) + (0,) * (self.v - 1)

    def add(self, a, b):
        return tuple((x + y) % self.q for x, y in zip(self.elem(a), self.elem(b)))

    def sub(self, a, b):
        return tuple((x - y) % self.q for x, y in zip(self.elem(a), self.elem(b)))

    def _reduce(self, coeffs: list[int]) -> tuple[int, ...]:
        mod = self.modulus
        coeffs = list(coeffs)
        for deg in range(len(coeffs) - 1, self.v - 1, -1):
            c = coeffs[deg] % self.q
            if c:
                shift = deg - self.v
                for i, m in enumerate(mod):
                    coeffs[shift + i] = (coeffs[shift + i] - c * m) % self.q
        return tuple(c % self.q for c in coeffs[: self.v])

    def mul(self, a, b):
        prod = np.convolve(np.array(self.elem(a), dtype=object), np.array(self.elem(b), dtype=object))
        return self._reduce([int(c) for c in prod])

    def pow(self, a, e: int):
        result = self.one
        base = self.elem(a)
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, a):
        if not any(self.elem(a)):
            raise DivideByZero("inverse of zero")
        return self.pow(a, self.q**self.v - 2)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def arith(self, a, b, op: str):
        try:
            fn = {"add": self.add, "sub": self.sub, "mul": self.mul, "div": self.div}[op]
        except KeyError:
            raise BadParams(f"unknown op {op!r}") from None
        return fn(a, b)

    def random(self, rng: np.random.Generator):
        return tuple(int(c) for c in rng.integers(0, self.q, size=self.v))
