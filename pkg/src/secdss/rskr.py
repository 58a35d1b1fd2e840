"""RSKR-repetition placement: coded symbols as edges of the complete graph K_n.

Node ids and symbol indices are 1-based throughout, as in the layouts
printed by the CLI.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import BadParams


@dataclass(frozen=True)
class RskrLayout:
    n: int
    node_symbols: tuple[tuple[int, ...], ...]
    index_nodes: tuple[tuple[int, int], ...]

    @property
    def theta(self) -> int:
        return self.n * (self.n - 1) // 2

    def symbols_of(self, node: int) -> tuple[int, ...]:
        self._check_node(node)
        return self.node_symbols[node - 1]

    def nodes_of(self, index: int) -> tuple[int, int]:
        if not 1 <= index <= self.theta:
            raise BadParams(f"symbol index {index} outside 1..{self.theta}")
        return self.index_nodes[index - 1]

    def indices_of(self, nodes) -> set[int]:
        out: set[int] = set()
        for node in nodes:
            out.update(self.symbols_of(node))
        return out

    def _check_node(self, node: int):
        if not 1 <= node <= self.n:
            raise BadParams(f"node {node} outside 1..{self.n}")

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "theta": self.theta,
            "nodes": {str(i + 1): list(s) for i, s in enumerate(self.node_symbols)},
        }


def layout(n: int) -> RskrLayout:
    """Enumerate K_n's edges lexicographically; node i stores its incident edges."""
    if n < 2:
        raise BadParams(f"need n >= 2, got {n}")
    edges = list(combinations(range(1, n + 1), 2))
    per_node: list[list[int]] = [[] for _ in range(n)]
    for idx, (i, j) in enumerate(edges, start=1):
        per_node[i - 1].append(idx)
        per_node[j - 1].append(idx)
    return RskrLayout(n, tuple(tuple(s) for s in per_node), tuple(edges))


def shared_index(lay: RskrLayout, i: int, j: int) -> int:
    lay._check_node(i)
    lay._check_node(j)
    if i == j:
        raise BadParams("a node shares no single index with itself")
    a, b = min(i, j), max(i, j)
    # position of edge (a, b) in lexicographic order
    n = lay.n
    return (a - 1) * n - (a - 1) * a // 2 + (b - a)


def repair_plan(lay: RskrLayout, failed: int) -> list[tuple[int, int]]:
    """(helper, index) pairs: each survivor sends the one symbol it shares with ``failed``."""
    lay._check_node(failed)
    return [(h, shared_index(lay, h, failed)) for h in range(1, lay.n + 1) if h != failed]
