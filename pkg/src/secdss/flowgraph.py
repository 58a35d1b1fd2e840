"""Information flow graph of a repair trace and its min-cuts.

Graph vertices are ``"s"``, ``"in:<v>"``, ``"out:<v>"`` and ``"dc:<id>"``.
Storage node ids are integers; initial nodes are ``1..n`` and
replacements take fresh ids.  Max-flow is delegated to networkx.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import networkx as nx

from .capacity import DssParams
from .errors import BadTrace


@dataclass(frozen=True)
class Fail:
    node: int


@dataclass(frozen=True)
class Repair:
    node: int
    helpers: tuple[int, ...]


@dataclass(frozen=True)
class Collect:
    collector: str
    nodes: tuple[int, ...]


def parse_trace(events) -> list:
    """Trace JSON: [{"event": "fail"|"repair"|"collect", ...}, ...]."""
    out = []
    for ev in events:
        kind = ev.get("event")
        try:
            if kind == "fail":
                out.append(Fail(int(ev["node"])))
            elif kind == "repair":
                out.append(Repair(int(ev["node"]), tuple(int(h) for h in ev["helpers"])))
            elif kind == "collect":
                out.append(Collect(str(ev.get("collector", "dc")), tuple(int(v) for v in ev["collector_nodes"])))
            else:
                raise BadTrace(f"unknown event {kind!r}")
        except (KeyError, TypeError, ValueError) as exc:
            raise BadTrace(f"malformed event {ev!r}: {exc}") from None
    return out


@dataclass
class FlowGraph:
    params: DssParams
    graph: nx.DiGraph
    active: set[int]
    collectors: dict[str, tuple[int, ...]] = field(default_factory=dict)
    inf: float = 0


def build(p: DssParams, trace) -> FlowGraph:
    trace = list(trace)
    inf = p.k * p.alpha + p.gamma * len(trace) + 1
    g = nx.DiGraph()
    g.add_node("s")
    active = set(range(1, p.n + 1))
    seen = set(active)
    for v in active:
        g.add_edge("s", f"in:{v}", capacity=inf)
        g.add_edge(f"in:{v}", f"out:{v}", capacity=p.alpha)
    fg = FlowGraph(p, g, active, {}, inf)
    pending = None
    for ev in trace:
        if pending is not None and not isinstance(ev, Repair):
            raise BadTrace(f"node {pending} failed without repair")
        if isinstance(ev, Fail):
            if ev.node not in active:
                raise BadTrace(f"node {ev.node} is not active")
            active.discard(ev.node)
            pending = ev.node
        elif isinstance(ev, Repair):
            if pending is None:
                raise BadTrace("repair without a preceding failure")
            if ev.node in seen:
                raise BadTrace(f"node id {ev.node} already used")
            helpers = set(ev.helpers)
            if len(helpers) != p.d or len(ev.helpers) != p.d:
                raise BadTrace(f"repair needs {p.d} distinct helpers, got {ev.helpers}")
            if not helpers <= active:
                raise BadTrace(f"helpers {sorted(helpers - active)} are not active")
            for h in ev.helpers:
                g.add_edge(f"out:{h}", f"in:{ev.node}", capacity=p.beta)
            g.add_edge(f"in:{ev.node}", f"out:{ev.node}", capacity=p.alpha)
            active.add(ev.node)
            seen.add(ev.node)
            pending = None
        elif isinstance(ev, Collect):
            nodes = set(ev.nodes)
            if len(nodes) != p.k or len(ev.nodes) != p.k or not nodes <= active:
                raise BadTrace(f"collector {ev.collector} needs {p.k} distinct active nodes, got {ev.nodes}")
            if ev.collector in fg.collectors:
                raise BadTrace(f"duplicate collector id {ev.collector}")
            for v in ev.nodes:
                g.add_edge(f"out:{v}", f"dc:{ev.collector}", capacity=inf)
            fg.collectors[ev.collector] = tuple(ev.nodes)
        else:
            raise BadTrace(f"unknown event {ev!r}")
    if pending is not None:
        raise BadTrace(f"node {pending} failed without repair")
    return fg


def min_cut(fg: FlowGraph, collector: str, deleted=()) -> int:
    if collector not in fg.collectors:
        raise BadTrace(f"no collector {collector!r}")
    g = fg.graph.copy()
    for v in deleted:
        g.remove_nodes_from([f"in:{v}", f"out:{v}"])
    sink = f"dc:{collector}"
    if not nx.has_path(g, "s", sink):
        return 0
    return nx.maximum_flow_value(g, "s", sink)


def chain_trace(p: DssParams) -> list:
    """v1..vk fail in turn; replacement n+i draws on earlier replacements, then
    surviving initial nodes; one collector "dc" reads the k replacements."""
    trace = []
    for i in range(1, p.k + 1):
        pool = [p.n + j for j in range(1, i)] + list(range(i + 1, p.n + 1))
        trace += [Fail(i), Repair(p.n + i, tuple(pool[: p.d]))]
    trace.append(Collect("dc", tuple(p.n + i for i in range(1, p.k + 1))))
    return trace


def single_repair_trace() -> list:
    """D(4,3,3): v3 fails, v5 repairs from v1, v2, v4; collector on v1, v2, v5."""
    return [Fail(3), Repair(5, (1, 2, 4)), Collect("dc", (1, 2, 5))]


def two_repair_trace() -> list:
    """D(5,3,4): v2 -> v6, v3 -> v7 with all survivors helping; collector on v1, v6, v7."""
    return [
        Fail(2), Repair(6, (1, 3, 4, 5)),
        Fail(3), Repair(7, (1, 4, 5, 6)),
        Collect("dc", (1, 6, 7)),
    ]
