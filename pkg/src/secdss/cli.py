"""``secdss`` command line.

Exit codes: 0 success, 1 a ``verify`` check failed, 2 malformed input,
3 the requested configuration violates the intruder model.
"""

from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction

import numpy as np

from . import capacity as cap
from . import flowgraph, scenario, secrecy, verify
from .errors import BadParams, DssError, ModelError
from .mds import import_generator
from .rskr import layout
from .simulator import collect, init


def _num(text: str):
    value = Fraction(text)
    return int(value) if value.denominator == 1 else value


def _params(a) -> cap.DssParams:
    d = a.d if a.d is not None else a.n - 1
    alpha = a.alpha if a.alpha is not None else d * a.beta
    return cap.DssParams(a.n, a.k, d, alpha, a.beta, a.Gamma)


def _threat(a) -> cap.ThreatModel:
    if a.model == "omniscient":
        return cap.ThreatModel.omniscient(a.b, a.k)
    return cap.ThreatModel(a.model, a.ell, a.b)


def cmd_capacity(a):
    p, t = _params(a), _threat(a)
    bq = cap.base_quantities(p, t)
    rep = cap.report(p, t)
    return {
        "params": p.to_json(),
        "threat": {"kind": t.kind, "ell": t.ell, "b": t.b},
        "theta": bq.theta, "M": bq.M, "R": bq.R, "mu": bq.mu, "E": bq.E,
        **rep.to_json(),
    }


def cmd_layout(a):
    return layout(a.n).to_json()


_PRESETS = {
    "single-repair": ((4, 3, 3, 3, 1), flowgraph.single_repair_trace),
    "two-repair": ((5, 3, 4, 4, 1), flowgraph.two_repair_trace),
}


def cmd_mincut(a):
    if a.preset in _PRESETS and a.n is None:
        p = cap.DssParams(*_PRESETS[a.preset][0])
    else:
        if a.n is None or a.k is None:
            raise BadParams("--n and --k are required")
        p = _params(a)
    if a.trace:
        trace = flowgraph.parse_trace(scenario.load(a.trace))
    elif a.preset == "chain":
        trace = flowgraph.chain_trace(p)
    elif a.preset in _PRESETS:
        trace = _PRESETS[a.preset][1]()
    else:
        raise BadParams("give --trace FILE or --preset")
    fg = flowgraph.build(p, trace)
    deleted = [int(v) for v in a.delete]
    return {"params": p.to_json(), "collector": a.collector, "deleted": deleted,
            "min_cut": flowgraph.min_cut(fg, a.collector, deleted)}


def _seed(a) -> int:
    if a.seed is None:
        raise BadParams("--seed is required for randomized commands")
    return a.seed


def cmd_encode_secret(a):
    _seed(a)
    p = cap.DssParams.bandwidth_limited(a.n, a.k)
    rng = np.random.default_rng(a.seed)
    gen = secrecy.secret_generator(p, a.ell, a.q)
    secret = a.secret if a.secret is not None else rng.integers(0, a.q, gen.dim - gen.key_dim).tolist()
    pkg = secrecy.secret_encode(secret, p, a.ell, rng, a.q, gen)
    lay = layout(a.n)
    return {
        "n": a.n, "k": a.k, "ell": a.ell, "seed": a.seed,
        **pkg.to_json(),
        "nodes": {str(s): [int(pkg.codeword[i - 1]) for i in lay.symbols_of(s)] for s in range(1, a.n + 1)},
    }


def cmd_decode_secret(a):
    doc = scenario.load(a.package)
    try:
        g = doc["generator"]
        gen = import_generator(g["entries"], g["key_dim"], g["q"])
        p = cap.DssParams.bandwidth_limited(int(doc["n"]), int(doc["k"]))
        state = init(p, doc["codeword"], gen.q)
    except (KeyError, TypeError) as exc:
        raise BadParams(f"malformed package: {exc}") from None
    slots = a.collector or list(range(1, p.k + 1))
    return {"collector": slots, "secret": secrecy.secret_decode(collect(state, slots), gen).tolist()}


def _attack(a, scheme: str):
    doc = scenario.load(a.scenario)
    if doc.get("scheme") != scheme:
        raise BadParams(f"scenario scheme must be {scheme!r}, got {doc.get('scheme')!r}")
    if a.seed is not None:
        doc = {**doc, "seed": a.seed}
    return scenario.run(doc, jobs=a.jobs)


def cmd_verify(a):
    checks = verify.run_all(a.seed or 0, a.exhaustive)
    return {"checks": checks, "ok": all(checks.values())}


def cmd_rnc_demo(a):
    return secrecy.rnc_demo(_seed(a), a.q).to_json()


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--jobs", type=int, default=1, help="worker processes for multi-trial runs")
    common.add_argument("--out", help="also write the JSON report here")
    common.add_argument("--exhaustive", action="store_true", help="enable brute-force checks")
    common.add_argument("--timing", action="store_true", help="add wall-clock seconds to the report")

    ap = argparse.ArgumentParser(prog="secdss", description="Secure distributed storage under repair.")
    sub = ap.add_subparsers(dest="command", required=True)

    def shape(p, required=True):
        p.add_argument("--n", type=int, required=required)
        p.add_argument("--k", type=int, required=required)
        p.add_argument("--d", type=int)
        p.add_argument("--alpha", type=_num)
        p.add_argument("--beta", type=_num, default=1)
        p.add_argument("--Gamma", type=_num)

    p = sub.add_parser("capacity", parents=[common], help="capacity bounds as JSON")
    shape(p)
    p.add_argument("--model", choices=cap.KINDS, default="passive")
    p.add_argument("--ell", type=int, default=0)
    p.add_argument("--b", type=int, default=0)
    p.set_defaults(fn=cmd_capacity)

    p = sub.add_parser("layout", parents=[common], help="RSKR node -> index map")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(fn=cmd_layout)

    p = sub.add_parser("mincut", parents=[common], help="min-cut of a repair trace")
    shape(p, required=False)
    p.add_argument("--trace", help="trace JSON file")
    p.add_argument("--preset", choices=["chain", "single-repair", "two-repair"])
    p.add_argument("--collector", default="dc")
    p.add_argument("--delete", nargs="*", default=[])
    p.set_defaults(fn=cmd_mincut)

    p = sub.add_parser("encode-secret", parents=[common], help="coset-encode a secret")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--q", type=int, default=257)
    p.add_argument("--secret", type=int, nargs="+")
    p.set_defaults(fn=cmd_encode_secret)

    p = sub.add_parser("decode-secret", parents=[common], help="decode a package from k nodes")
    p.add_argument("--package", required=True)
    p.add_argument("--collector", type=int, nargs="+")
    p.set_defaults(fn=cmd_decode_secret)

    for name, scheme in (("attack-omniscient", "omniscient"), ("attack-limited", "limited")):
        p = sub.add_parser(name, parents=[common], help=f"run a {scheme} scenario file")
        p.add_argument("scenario")
        p.set_defaults(fn=lambda a, s=scheme: _attack(a, s))

    p = sub.add_parser("verify", parents=[common], help="run the invariant self-checks")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("rnc-demo", parents=[common], help="random network coding leaks everything")
    p.add_argument("--q", type=int, default=257)
    p.set_defaults(fn=cmd_rnc_demo)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        report = args.fn(args)
    except ModelError as exc:
        print(f"secdss: model violation: {exc}", file=sys.stderr)
        return 3
    except DssError as exc:
        print(f"secdss: {exc}", file=sys.stderr)
        return 2
    if args.timing:
        report["wall_clock_s"] = round(time.perf_counter() - start, 3)
    text = scenario.dumps(report)
    print(text)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    if args.command == "verify" and not report["ok"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
