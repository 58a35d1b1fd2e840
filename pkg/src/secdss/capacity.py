"""Closed-form capacity bounds for a DSS under the three intruder models.

All quantities are in symbols of the active base field.  ``beta`` and
``alpha`` may be ``Fraction`` for formula evaluation; the coding modules
require integers.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from fractions import Fraction
from numbers import Real

from .errors import AdversaryOmniscient, BadParams, BadThreat, NotSupported

KINDS = ("passive", "omniscient", "limited")


@dataclass(frozen=True)
class DssParams:
    n: int
    k: int
    d: int
    alpha: Real
    beta: Real = 1
    Gamma: Real | None = None

    def __post_init__(self):
        if not (self.n >= 2 and 1 <= self.k <= self.d <= self.n - 1):
            raise BadParams(f"need 1 <= k <= d <= n-1, got n={self.n}, k={self.k}, d={self.d}")
        if self.alpha <= 0 or self.beta <= 0:
            raise BadParams("alpha and beta must be positive")
        if self.Gamma is not None and self.Gamma <= 0:
            raise BadParams("Gamma must be positive")

    @property
    def gamma(self):
        return self.d * self.beta

    @classmethod
    def bandwidth_limited(cls, n: int, k: int, beta: Real = 1) -> "DssParams":
        """d = n-1 and alpha = Gamma = (n-1) beta."""
        return cls(n, k, n - 1, (n - 1) * beta, beta, (n - 1) * beta)

    def to_json(self) -> dict:
        return {key: _num(val) for key, val in asdict(self).items()}


@dataclass(frozen=True)
class ThreatModel:
    kind: str = "passive"
    ell: int = 0
    b: int = 0

    def check(self, k: int) -> None:
        if self.kind not in KINDS:
            raise BadThreat(f"unknown threat kind {self.kind!r}")
        if self.ell < 0 or self.b < 0:
            raise BadThreat("ell and b must be non-negative")
        if self.kind == "passive" and (self.b != 0 or self.ell >= k):
            raise BadThreat(f"passive model needs b = 0 and ell < k, got ell={self.ell}, b={self.b}")
        if self.kind == "omniscient" and self.ell != k:
            raise BadThreat(f"omniscient model sees everything: ell must equal k={k}")
        if self.kind == "limited" and self.b > self.ell:
            raise BadThreat(f"limited model needs b <= ell, got b={self.b}, ell={self.ell}")

    @classmethod
    def omniscient(cls, b: int, k: int) -> "ThreatModel":
        return cls("omniscient", k, b)

    @property
    def skip(self) -> int:
        """Number of leading terms dropped from the capacity sum."""
        return {"passive": self.ell, "omniscient": 2 * self.b, "limited": self.b}[self.kind]


def _term(p: DssParams, i: int):
    return min((p.d - i + 1) * p.beta, p.alpha)


def _sum_terms(p: DssParams, lo: int, hi: int):
    return sum((_term(p, i) for i in range(lo, hi + 1)), 0)


def _num(x):
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else float(x)
    return x


@dataclass(frozen=True)
class BaseQuantities:
    theta: int
    M: Real
    R: Real
    mu: Real
    E: Real


def base_quantities(p: DssParams, t: ThreatModel) -> BaseQuantities:
    t.check(p.k)
    M = _sum_terms(p, 1, p.k)
    R = upper_bound(p, t)
    E = _sum_terms(p, 1, min(t.ell, p.k))
    return BaseQuantities(p.n * (p.n - 1) // 2, M, R, M - R, E)


def upper_bound(p: DssParams, t: ThreatModel):
    t.check(p.k)
    s = t.skip
    if s >= p.k:
        return 0
    return _sum_terms(p, s + 1, p.k)


def bl_capacity(p: DssParams, t: ThreatModel):
    """Bandwidth-limited capacity sum_{i=s+1}^k (n-i) beta, with beta = Gamma/(n-1)."""
    t.check(p.k)
    if p.d != p.n - 1:
        raise NotSupported(f"bandwidth-limited capacity needs d = n-1, got d={p.d}")
    beta = Fraction(p.Gamma) / (p.n - 1) if p.Gamma is not None else p.beta
    if isinstance(beta, Fraction) and beta.denominator == 1:
        beta = int(beta)
    s = t.skip
    if t.kind == "limited":
        E = sum(((p.n - i) * beta for i in range(1, min(t.ell, p.k) + 1)), 0)
        R = sum(((p.n - i) * beta for i in range(t.b + 1, p.k + 1)), 0)
        if E >= R:
            raise AdversaryOmniscient(f"Eve's view E={E} is not below R={R}")
    if s >= p.k:
        return 0
    return sum(((p.n - i) * beta for i in range(s + 1, p.k + 1)), 0)


def asymptotic_ratio(t: ThreatModel, k: int) -> Fraction:
    t.check(k)
    return max(Fraction(k - t.skip, k), Fraction(0))


@dataclass(frozen=True)
class CapacityReport:
    upper_bound: Real
    bl_capacity: Real | None
    M: Real
    ratio: float | None
    asymptotic_ratio: float

    def to_json(self) -> dict:
        return {key: _num(val) for key, val in asdict(self).items()}


def report(p: DssParams, t: ThreatModel) -> CapacityReport:
    q = base_quantities(p, t)
    bl = bl_capacity(p, t) if p.d == p.n - 1 else None
    ratio = float(Fraction(bl) / Fraction(q.M)) if bl is not None else None
    return CapacityReport(q.R, bl, q.M, ratio, float(asymptotic_ratio(t, p.k)))
