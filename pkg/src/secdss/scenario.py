"""Scenario files: one JSON document describing a system, an intruder and
a trace, run end to end into a deterministic report.

Schema 1::

    {"schema": 1, "scheme": "secrecy" | "omniscient" | "limited",
     "params": {"n": 5, "k": 3}, "q": 257, "v": 16,
     "threat": {"kind": "limited", "ell": 1, "b": 1},
     "message": [...] | null, "hash_mode": "secure-sidecar" | "c2",
     "strategy": {"name": "craft", ...},
     "trace": [{"event": "compromise", "slot": 1, "control": true},
               {"event": "fail", "slot": 2},
               {"event": "collect", "slots": [1, 2, 3]}],
     "seed": 7, "trials": 1}
"""

from __future__ import annotations

import json
from fractions import Fraction
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import hashshield, resilient, secrecy
from .capacity import DssParams, ThreatModel, bl_capacity
from .errors import BadParams, BadTrace, DssError
from .simulator import (
    Corrupt, Erase, Record, SetTo, Strategy, SystemState, collect, compromise,
    delivered_origins, fail_and_repair, init,
)

SCHEMES = ("secrecy", "omniscient", "limited")
MAX_N = 12
MAX_B = 2


def load(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise BadParams(f"cannot read scenario {path}: {exc}") from None


def _need(doc: dict, key: str):
    if key not in doc:
        raise BadParams(f"scenario is missing {key!r}")
    return doc[key]


def parse(doc: dict) -> dict:
    """Validate and normalise a scenario document."""
    if not isinstance(doc, dict):
        raise BadParams("scenario must be a JSON object")
    if doc.get("schema") != 1:
        raise BadParams(f"unsupported scenario schema {doc.get('schema')!r}")
    scheme = _need(doc, "scheme")
    if scheme not in SCHEMES:
        raise BadParams(f"unknown scheme {scheme!r}")
    raw = _need(doc, "params")
    try:
        n, k = int(raw["n"]), int(raw["k"])
    except (KeyError, TypeError, ValueError):
        raise BadParams("params need integer n and k") from None
    if n > MAX_N:
        raise BadParams(f"n={n} exceeds the default limit {MAX_N}")
    th = doc.get("threat", {})
    kind = {"secrecy": "passive", "omniscient": "omniscient", "limited": "limited"}[scheme]
    b = int(th.get("b", 0))
    ell = k if kind == "omniscient" else int(th.get("ell", 0))
    if b > MAX_B:
        raise BadParams(f"b={b} exceeds the default limit {MAX_B}")
    out = {
        "scheme": scheme,
        "params": DssParams.bandwidth_limited(n, k),
        "threat": ThreatModel(kind, ell, b),
        "q": int(doc.get("q", 257)),
        "v": int(doc.get("v", 16 if scheme == "limited" else 1)),
        "message": doc.get("message"),
        "hash_mode": doc.get("hash_mode", "secure-sidecar"),
        "strategy": doc.get("strategy", {"name": "record"}),
        "trace": doc.get("trace", []),
        "seed": int(_need(doc, "seed")),
        "trials": int(doc.get("trials", 1)),
    }
    if out["hash_mode"] not in ("secure-sidecar", "c2"):
        raise BadParams(f"unknown hash_mode {out['hash_mode']!r}")
    if not isinstance(out["trace"], list):
        raise BadTrace("trace must be a list of events")
    return out


def make_strategy(spec: dict, state: SystemState, rng: np.random.Generator) -> Strategy:
    name = spec.get("name", "record")
    gf = state.gf
    if name == "record":
        return Record()
    if name == "corrupt":
        if spec.get("all", False):
            return _RandomCorrupt(rng, spec.get("lie", "consistent"))
        errs = {int(i): e for i, e in spec.get("errors", {}).items()}
        lies = {int(i): e for i, e in spec.get("repair_errors", {}).items()}
        return Corrupt(errs, lies)
    if name == "set":
        return SetTo({int(i): v for i, v in _need(spec, "values").items()})
    if name == "erase":
        return Erase(int(spec.get("value", 0)) % gf.q)
    if name == "craft":
        return hashshield.CraftOrthogonal(rng, bool(spec.get("guess", True)))
    raise BadParams(f"unknown strategy {name!r}")


class _RandomCorrupt(Corrupt):
    """Random nonzero error on every stored symbol; on repair either send
    the corrupted copy ("consistent") or a fresh random lie ("random")."""

    name = "corrupt-all"

    def __init__(self, rng, lie: str = "consistent"):
        super().__init__()
        if lie not in ("consistent", "random"):
            raise BadParams(f"unknown lie policy {lie!r}")
        self.rng = rng
        self.lie = lie

    def tamper(self, state, slot):
        for idx in state.layout.symbols_of(slot):
            err = self.rng.integers(1, state.gf.q, size=state.width)
            state.overwrite(slot, idx, state.stored(slot, idx) + err)

    def send(self, state, slot, index):
        if self.lie == "random":
            return state.stored(slot, index) + self.rng.integers(1, state.gf.q, size=state.width)
        return state.stored(slot, index)


def _message(sc: dict, rows: int, rng) -> np.ndarray:
    q, v = sc["q"], sc["v"]
    if sc["message"] is None:
        m = rng.integers(0, q, size=(rows, v))
    else:
        m = np.asarray(sc["message"], dtype=np.int64) % q
        m = m.reshape(rows, v) if m.size == rows * v else m
        if m.shape != (rows, v):
            raise BadParams(f"message must hold {rows} x {v} symbols")
    return m[:, 0] if v == 1 and sc["scheme"] != "limited" else m


def _error_count(state: SystemState, view) -> int:
    return int(sum(
        not np.array_equal(np.atleast_1d(sym), state.truth[idx - 1])
        for (_, idx), sym in zip(view.rows, view.symbols)
    ))


def run_trial(sc: dict, seed: int) -> dict:
    """Run one seeded trial and return its report fragment."""
    rng = np.random.default_rng(seed)
    p, t = sc["params"], sc["threat"]
    scheme = sc["scheme"]
    q = sc["q"]
    sidecar = sidecar_gen = None
    if scheme == "secrecy":
        gen = secrecy.secret_generator(p, t.ell, q)
        msg = _message(sc, gen.dim - gen.key_dim, rng)
        payload = secrecy.secret_encode(msg, p, t.ell, rng, q, gen).codeword
        state = init(p, payload, q, t, seed=seed)
    elif scheme == "omniscient":
        code = resilient.resilient_code(p, t.b, q)
        msg = _message(sc, code.R, rng)
        state = init(p, resilient.resilient_encode(msg, code), q, t, seed=seed)
    else:
        code = hashshield.shield_code(p, t.b, t.ell, q, sc["v"])
        msg = _message(sc, code.R, rng)
        payload, table = hashshield.shield_encode(msg, code)
        if sc["hash_mode"] == "c2":
            sidecar_gen, bits = hashshield.c2_encode_table(table, code, rng)
            state = init(p, payload, q, t, seed=seed)
            sidecar = init(p, bits, sidecar_gen.q, t, seed=seed)
        else:
            state = init(p, payload, q, t, hash_table=table, seed=seed)

    decoder = gen if scheme == "secrecy" else code
    outcomes = []
    for ev in sc["trace"]:
        kind = ev.get("event") if isinstance(ev, dict) else None
        try:
            if kind == "compromise":
                slot = int(ev["slot"])
                control = bool(ev.get("control", False))
                on_repair = bool(ev.get("on_repair", False))
                strat = make_strategy(ev.get("strategy", sc["strategy"]), state, rng) if control else None
                compromise(state, slot, strat, control=control, on_repair=on_repair)
                if sidecar is not None:
                    side = _RandomCorrupt(rng) if control else None
                    compromise(sidecar, slot, side, control=control, on_repair=on_repair)
            elif kind == "fail":
                fail_and_repair(state, int(ev["slot"]))
                if sidecar is not None:
                    fail_and_repair(sidecar, int(ev["slot"]))
            elif kind == "collect":
                slots = tuple(int(s) for s in ev["slots"])
                outcomes.append(_collect(sc, state, slots, decoder, msg, sidecar, sidecar_gen))
            else:
                raise BadTrace(f"unknown event {ev!r}")
        except DssError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise BadTrace(f"malformed event {ev!r}: {exc}") from None

    report = {"seed": seed, "collectors": outcomes,
              "failures": sum(not o["correct"] for o in outcomes)}
    culprits = set()
    for o in outcomes:
        culprits |= set(o.pop("_culprits"))
    if scheme == "omniscient":
        report["suspects"] = resilient.expurgate(
            [o["corrupted_indices"] for o in outcomes], state.layout, t.b)
        report["culprits"] = sorted({state.slot_of[c] for c in culprits})
        report["culprit_nodes"] = sorted(culprits)
    return report


def _collect(sc, state, slots, decoder, msg, sidecar, sidecar_gen) -> dict:
    scheme = sc["scheme"]
    with_hash = scheme == "limited" and sidecar is None
    view = collect(state, slots, with_hash=with_hash)
    out = {"slots": list(slots), "erroneous_symbols": _error_count(state, view),
           "_culprits": sorted(delivered_origins(state, view))}
    if scheme == "secrecy":
        got = secrecy.secret_decode(view, decoder)
    elif scheme == "omniscient":
        res = resilient.omniscient_decode(view, decoder)
        got = res.message
        out["trusted_pattern"] = list(res.trusted_pattern)
        out["corrupted_indices"] = list(res.corrupted_indices)
    else:
        table = None
        if sidecar is not None:
            table = hashshield.c2_decode_table(collect(sidecar, slots), sidecar_gen, decoder)
            out["table_intact"] = bool(np.array_equal(table, hashshield.hash_table(state.truth, state.gf)))
        res = hashshield.shield_decode(view, decoder, table)
        got = res.message
        out["trusted_pattern"] = list(res.trusted_pattern)
        out["erased_indices"] = list(res.erased_indices)
    out["message"] = np.asarray(got).tolist()
    out["correct"] = bool(np.array_equal(got, msg))
    return out


def trial_seeds(seed: int, trials: int) -> list[int]:
    if trials == 1:
        return [seed]
    return [int(c.generate_state(1)[0]) for c in np.random.SeedSequence(seed).spawn(trials)]


def _run_one(args):
    sc, seed = args
    return run_trial(sc, seed)


def run(doc: dict, jobs: int = 1) -> dict:
    """Full report for a scenario document; identical for identical input."""
    sc = parse(doc)
    p, t = sc["params"], sc["threat"]
    seeds = trial_seeds(sc["seed"], sc["trials"])
    if jobs > 1 and len(seeds) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            trials = list(pool.map(_run_one, [(sc, s) for s in seeds], chunksize=max(1, len(seeds) // (4 * jobs))))
    else:
        trials = [run_trial(sc, s) for s in seeds]
    achieved = {
        "secrecy": lambda: (lambda g: g.dim - g.key_dim)(secrecy.secret_generator(p, t.ell, sc["q"])),
        "omniscient": lambda: resilient.resilient_code(p, t.b, sc["q"]).R,
        "limited": lambda: hashshield.shield_code(p, t.b, t.ell, sc["q"], sc["v"]).R,
    }[sc["scheme"]]()
    bound = bl_capacity(p, t)
    report = {
        "inputs": doc,
        "capacity": {"formula": bound, "achieved": achieved, "within_bound": achieved <= bound},
        "trials": len(trials),
        "failures": sum(tr["failures"] for tr in trials),
    }
    if len(trials) == 1:
        report.update({k: v for k, v in trials[0].items() if k != "failures"})
    else:
        report["failed_seeds"] = [tr["seed"] for tr in trials if tr["failures"]]
        if sc["scheme"] == "omniscient":
            report["max_suspects"] = max(len(tr["suspects"]) for tr in trials)
            report["missed_culprits"] = sum(not set(tr["culprits"]) <= set(tr["suspects"]) for tr in trials)
    return report


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, default=_jsonable)


def _jsonable(x):
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else float(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    raise TypeError(f"cannot serialise {type(x).__name__}")
