"""Deterministic DSS simulator over the RSKR placement.

Each logical slot ``1..n`` holds one incarnation at a time.  Incarnation
ids: initial nodes are ``1..n`` and the i-th
replacement is ``n + i``.  A payload is a ``(theta, w)`` array: row
``j - 1`` is coded symbol ``x_j`` and ``w`` is the packet width (1 for
scalar codes).

Every stored copy carries an ``origin``: the incarnation that last
altered it (0 for an honest copy).  This is ground truth for tests;
decoders never see it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .capacity import DssParams, ThreatModel
from .errors import BadCollector, BudgetExceeded, ModelViolation, ShapeError
from .field import GF
from .rskr import RskrLayout, layout, repair_plan


# -- adversary strategies ---------------------------------------------------


class Strategy:
    """Base strategy: a passive recorder that leaves data untouched."""

    name = "record"

    def tamper(self, state: "SystemState", slot: int) -> None:
        pass

    def send(self, state: "SystemState", slot: int, index: int) -> np.ndarray:
        return state.stored(slot, index)


class Record(Strategy):
    pass


class Corrupt(Strategy):
    """Add ``errors[index]`` to stored symbols; on repair send the stored
    value plus ``repair_errors[index]`` (default: nothing extra)."""

    name = "corrupt"

    def __init__(self, errors: dict | None = None, repair_errors: dict | None = None):
        self.errors = errors or {}
        self.repair_errors = repair_errors or {}

    def tamper(self, state, slot):
        for idx, err in self.errors.items():
            if idx in state.layout.symbols_of(slot):
                state.overwrite(slot, idx, state.stored(slot, idx) + state.gf.array(err))

    def send(self, state, slot, index):
        val = state.stored(slot, index)
        if index in self.repair_errors:
            val = val + state.gf.array(self.repair_errors[index])
        return state.gf.array(val)


class SetTo(Corrupt):
    """Overwrite stored symbols with fixed values and send them on repair."""

    name = "set"

    def __init__(self, values: dict):
        super().__init__()
        self.values = values

    def tamper(self, state, slot):
        for idx, val in self.values.items():
            if idx in state.layout.symbols_of(slot):
                state.overwrite(slot, idx, val)


class Erase(Strategy):
    """Replace every stored symbol with a fixed value."""

    name = "erase"

    def __init__(self, value=0):
        self.value = value

    def tamper(self, state, slot):
        for idx in state.layout.symbols_of(slot):
            state.overwrite(slot, idx, np.full(state.width, self.value))


# -- views ------------------------------------------------------------------


@dataclass(frozen=True)
class CollectorView:
    slots: tuple[int, ...]
    rows: tuple[tuple[int, int], ...]
    symbols: np.ndarray
    hash_table: np.ndarray | None = None

    def distinct(self, order=None) -> tuple[list[int], np.ndarray]:
        """First occurrence of every index, scanning slots in ``order``."""
        order = list(order) if order is not None else list(self.slots)
        chosen: dict[int, int] = {}
        for pos in sorted(range(len(self.rows)), key=lambda r: order.index(self.rows[r][0])):
            idx = self.rows[pos][1]
            chosen.setdefault(idx, pos)
        idxs = sorted(chosen)
        return idxs, self.symbols[[chosen[i] for i in idxs]]

    def to_json(self) -> dict:
        return {
            "slots": list(self.slots),
            "rows": [
                {"slot": s, "index": i, "symbol": sym.tolist()}
                for (s, i), sym in zip(self.rows, self.symbols)
            ],
        }


@dataclass(frozen=True)
class EavesdropRecord:
    node: int
    slot: int
    stored: dict
    downloaded: dict | None


# -- state ------------------------------------------------------------------


@dataclass
class SystemState:
    params: DssParams
    threat: ThreatModel
    gf: GF
    layout: RskrLayout
    truth: np.ndarray
    data: list[np.ndarray]
    origin: list[np.ndarray]
    node_of: list[int]
    generation: list[int]
    hash_table: np.ndarray | None = None
    event_log: list[dict] = field(default_factory=list)
    eavesdrop: set[int] = field(default_factory=set)
    control: dict[int, Strategy] = field(default_factory=dict)
    ever_controlled: set[int] = field(default_factory=set)
    pending: dict[int, tuple[bool, Strategy | None]] = field(default_factory=dict)
    records: list[EavesdropRecord] = field(default_factory=list)
    slot_of: dict[int, int] = field(default_factory=dict)
    next_id: int = 0
    seed: int = 0

    @property
    def n(self) -> int:
        return self.layout.n

    @property
    def width(self) -> int:
        return self.truth.shape[1]

    def _row(self, slot: int, index: int) -> int:
        return self.layout.symbols_of(slot).index(index)

    def stored(self, slot: int, index: int) -> np.ndarray:
        return self.data[slot - 1][self._row(slot, index)].copy()

    def overwrite(self, slot: int, index: int, value) -> None:
        row = self._row(slot, index)
        value = self.gf.array(np.broadcast_to(value, (self.width,)))
        before = self.data[slot - 1][row].copy()
        self.data[slot - 1][row] = value
        if np.array_equal(value, self.truth[index - 1]):
            self.origin[slot - 1][row] = 0
        elif not np.array_equal(value, before):
            self.origin[slot - 1][row] = self.node_of[slot - 1]

    def pending_controls(self) -> list[int]:
        return [s for s, (c, _) in self.pending.items() if c]

    def controlled_slots(self) -> list[int]:
        return sorted(s for s in range(1, self.n + 1) if self.node_of[s - 1] in self.control)

    def corrupted(self) -> dict[int, set[int]]:
        """slot -> indices whose stored symbol differs from the truth."""
        out = {}
        for s in range(1, self.n + 1):
            bad = {
                idx for row, idx in enumerate(self.layout.symbols_of(s))
                if not np.array_equal(self.data[s - 1][row], self.truth[idx - 1])
            }
            if bad:
                out[s] = bad
        return out


def init(p: DssParams, payload, q: int, threat: ThreatModel | None = None,
         hash_table=None, seed: int = 0) -> SystemState:
    gf = GF(q)
    lay = layout(p.n)
    x = gf.array(payload)
    if x.ndim == 1:
        x = x[:, None]
    if x.shape[0] != lay.theta:
        raise ShapeError(f"payload has {x.shape[0]} symbols, layout needs {lay.theta}")
    if p.d != p.n - 1:
        raise ShapeError("RSKR placement needs d = n-1")
    threat = threat or ThreatModel()
    threat.check(p.k)
    data = [x[[i - 1 for i in lay.symbols_of(s)]].copy() for s in range(1, p.n + 1)]
    origin = [np.zeros(p.n - 1, dtype=np.int64) for _ in range(p.n)]
    return SystemState(
        p, threat, gf, lay, x, data, origin,
        node_of=list(range(1, p.n + 1)), generation=[0] * p.n,
        hash_table=None if hash_table is None else gf.array(hash_table),
        slot_of={s: s for s in range(1, p.n + 1)}, next_id=p.n + 1, seed=seed,
    )


def _check_budget(state: SystemState, control: bool):
    t = state.threat
    if control and t.kind == "passive":
        raise BudgetExceeded("a passive intruder controls no nodes")
    if control and len(state.ever_controlled) + len(state.pending_controls()) + 1 > t.b:
        raise BudgetExceeded(f"control budget b={t.b} exhausted")
    if t.kind != "omniscient" and len(state.eavesdrop) + len(state.pending) + 1 > t.ell:
        raise BudgetExceeded(f"eavesdrop budget ell={t.ell} exhausted")


def compromise(state: SystemState, slot: int, strategy: Strategy | None = None,
               control: bool = False, eavesdrop: bool = True, on_repair: bool = False) -> None:
    """Occupy the current incarnation of ``slot`` (or, with ``on_repair``, the
    incarnation created by its next repair, which also exposes D_i)."""
    state.layout._check_node(slot)
    if control and not eavesdrop and state.threat.kind == "limited":
        raise ModelViolation("Charlie can only control nodes he also eavesdrops")
    if control and strategy is None:
        strategy = Strategy()
    if on_repair:
        _check_budget(state, control)
        state.pending[slot] = (control, strategy if control else None)
        state.event_log.append({"event": "compromise", "slot": slot, "on_repair": True, "control": control})
        return
    _occupy(state, slot, control, strategy, eavesdrop, downloaded=None)


def _occupy(state, slot, control, strategy, eavesdrop, downloaded):
    node = state.node_of[slot - 1]
    if eavesdrop or control:
        _check_budget(state, control)
    if eavesdrop or (control and state.threat.kind != "omniscient"):
        state.eavesdrop.add(node)
        stored = {i: state.stored(slot, i) for i in state.layout.symbols_of(slot)}
        state.records.append(EavesdropRecord(node, slot, stored, downloaded))
    if downloaded is None:
        state.event_log.append({"event": "compromise", "slot": slot, "node": node, "control": control})
    if control:
        state.control[node] = strategy
        state.ever_controlled.add(node)
        strategy.tamper(state, slot)


def fail_and_repair(state: SystemState, slot: int) -> None:
    """Replace ``slot`` with a fresh incarnation holding what its helpers send."""
    state.layout._check_node(slot)
    old = state.node_of[slot - 1]
    state.control.pop(old, None)
    received = {}
    origins = {}
    for helper, idx in repair_plan(state.layout, slot):
        hnode = state.node_of[helper - 1]
        strat = state.control.get(hnode)
        val = strat.send(state, helper, idx) if strat else state.stored(helper, idx)
        received[idx] = state.gf.array(val)
        if np.array_equal(received[idx], state.truth[idx - 1]):
            origins[idx] = 0
        elif np.array_equal(received[idx], state.stored(helper, idx)):
            origins[idx] = state.origin[helper - 1][state._row(helper, idx)]
        else:
            origins[idx] = hnode
    new = state.next_id
    state.next_id += 1
    state.node_of[slot - 1] = new
    state.slot_of[new] = slot
    state.generation[slot - 1] += 1
    for row, idx in enumerate(state.layout.symbols_of(slot)):
        state.data[slot - 1][row] = received[idx]
        state.origin[slot - 1][row] = origins[idx]
    state.event_log.append({"event": "fail", "slot": slot, "node": old, "replacement": new})
    if slot in state.pending:
        control, strategy = state.pending.pop(slot)
        state.records.append(EavesdropRecord(new, slot, dict(received), dict(received)))
        state.eavesdrop.add(new)
        if control:
            state.control[new] = strategy
            state.ever_controlled.add(new)
            strategy.tamper(state, slot)


def collect(state: SystemState, slots, with_hash: bool = False) -> CollectorView:
    slots = tuple(int(s) for s in slots)
    if len(slots) != state.params.k or len(set(slots)) != len(slots):
        raise BadCollector(f"collector needs {state.params.k} distinct slots, got {slots}")
    for s in slots:
        if not 1 <= s <= state.n:
            raise BadCollector(f"slot {s} does not exist")
    rows, syms = [], []
    for s in slots:
        for row, idx in enumerate(state.layout.symbols_of(s)):
            rows.append((s, idx))
            syms.append(state.data[s - 1][row])
    h = state.hash_table if with_hash else None
    return CollectorView(slots, tuple(rows), np.array(syms, dtype=np.int64), h)


def eavesdrop_view(state: SystemState) -> list[EavesdropRecord]:
    return list(state.records)


def delivered_origins(state: SystemState, view: CollectorView) -> set[int]:
    """Incarnations that last altered a corrupted copy the collector received.
    ``state.slot_of`` maps them to slots."""
    out = set()
    for s, idx in view.rows:
        if not np.array_equal(state.stored(s, idx), state.truth[idx - 1]):
            out.add(int(state.origin[s - 1][state._row(s, idx)]))
    return out


def dump(state: SystemState) -> dict:
    return {
        "n": state.n,
        "slots": {
            str(s): {
                "node": state.node_of[s - 1],
                "generation": state.generation[s - 1],
                "symbols": {str(i): state.data[s - 1][r].tolist() for r, i in enumerate(state.layout.symbols_of(s))},
            }
            for s in range(1, state.n + 1)
        },
        "events": state.event_log,
        "eavesdrop": sorted(state.eavesdrop),
        "control": sorted(state.control),
    }
