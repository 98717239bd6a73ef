"""Command-line front end.

Subcommands map onto the library operations; a network argument is either a
registered scenario name or a path to a JSON network file.  Exit codes:
0 success, 1 domain/validation error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .capacity import cut_bound_oracle, lambda_dag, sparse_support
from .errors import DagcastError, StructuralError
from .graph import Network, is_dag
from .scenarios import scenario, scenario_names
from .sim import (
    ArrivalProcess,
    multiclass_fraction_curve,
    run,
    sweep,
    write_fraction_csv,
    write_sweep_csv,
)
from .trees import count_arborescences, max_disjoint_packing


def load_network(path: str) -> Network:
    """Parse the JSON network format, anchoring errors to the file."""
    if not os.path.exists(path):
        raise StructuralError(f"{path}: no such file")
    with open(path) as f:
        try:
            doc = json.load(f)
        except json.JSONDecodeError as exc:
            raise StructuralError(f"{path}:{exc.lineno}: {exc.msg}") from exc
    try:
        return Network.from_dict(doc)
    except DagcastError as exc:
        raise StructuralError(f"{path}: {exc}") from exc


def _resolve(name: str) -> Network:
    if name in scenario_names():
        return scenario(name)
    return load_network(name)


def _cmd_capacity(args):
    net = _resolve(args.net)
    if is_dag(net):
        res = sparse_support(lambda_dag(net, max_edges=args.max_edges))
        print(f"lambda = {res.lam:.6g}")
        for act, p in res.support:
            print(f"  p = {p:.6g}  edges = {list(act.edge_ids)}")
    else:
        bound = cut_bound_oracle(net, max_edges=args.max_edges)
        print(f"cyclic network; cut-set capacity bound = {bound:.6g}")
    return 0


def _cmd_treepack(args):
    net = _resolve(args.net)
    packing = max_disjoint_packing(net)
    print(f"disjoint arborescences: {len(packing.trees)}")
    for k, tree in enumerate(packing.trees):
        print(f"  tree {k}: edges = {tree.serialize()}")
    return 0


def _cmd_treecount(args):
    net = _resolve(args.net)
    print(count_arborescences(net))
    return 0


def _cmd_simulate(args):
    net = _resolve(args.net)
    arrivals = ArrivalProcess("bernoulli-batch", args.lam, args.seed)
    m = run(net, args.policy, arrivals, args.slots, args.seed)
    print(f"policy = {args.policy}  lambda = {args.lam:.6g}  slots = {m.horizon}")
    print(f"throughput = {m.throughput:.6g}")
    print(f"mean_delay = {m.mean_delay:.6g}")
    print(f"undelivered = {m.undelivered}")
    print(f"instability_slope = {m.instability_slope:.6g}")
    print(f"stable = {not m.unstable}")
    return 0


def _cmd_sweep(args):
    net = _resolve(args.net)
    records = sweep(net, args.policies, args.lambdas, args.slots, args.seeds)
    write_sweep_csv(records, args.out)
    failed = [r for r in records if r.error]
    print(f"wrote {len(records)} rows to {args.out} ({len(failed)} failed)")
    for r in failed:
        print(f"  failed: {r.policy} lambda={r.lam} seed={r.seed}: {r.error}")
    return 0


def _cmd_multiclass_curve(args):
    net = _resolve(args.net)
    rows = multiclass_fraction_curve(
        net, range(1, args.kmax + 1), args.seeds, max_edges=args.max_edges
    )
    write_fraction_csv(rows, args.out, network_name=args.net)
    for K, frac in rows:
        print(f"K = {K}  fraction = {frac:.6g}")
    return 0


def _cmd_trace(args):
    net = _resolve(args.net)
    arrivals = ArrivalProcess("bernoulli-batch", args.lam, args.seed)
    out = open(args.out, "w") if args.out else sys.stdout
    try:
        run(
            net,
            args.policy,
            arrivals,
            args.slots,
            args.seed,
            trace=lambda rec: print(json.dumps(rec), file=out),
        )
    finally:
        if args.out:
            out.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="dagcast",
        description="broadcast capacity analysis and policy simulation",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def net_arg(sp):
        sp.add_argument("net", help="scenario name or JSON network file")

    sp = sub.add_parser("capacity", help="broadcast capacity and time shares")
    net_arg(sp)
    sp.add_argument("--max-edges", type=int, default=64)
    sp.set_defaults(fn=_cmd_capacity)

    sp = sub.add_parser("treepack", help="maximum edge-disjoint arborescence packing")
    net_arg(sp)
    sp.set_defaults(fn=_cmd_treepack)

    sp = sub.add_parser("treecount", help="number of spanning arborescences")
    net_arg(sp)
    sp.set_defaults(fn=_cmd_treecount)

    sp = sub.add_parser("simulate", help="single simulation run")
    net_arg(sp)
    sp.add_argument("--policy", default="pi_star")
    sp.add_argument("--lambda", dest="lam", type=float, required=True)
    sp.add_argument("--slots", type=int, default=100000)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(fn=_cmd_simulate)

    sp = sub.add_parser("sweep", help="policy x rate x seed grid, CSV output")
    net_arg(sp)
    sp.add_argument("--policies", nargs="+", required=True)
    sp.add_argument("--lambdas", nargs="+", type=float, required=True)
    sp.add_argument("--slots", type=int, default=100000)
    sp.add_argument("--seeds", nargs="+", type=int, default=[0])
    sp.add_argument("--out", required=True)
    sp.set_defaults(fn=_cmd_sweep)

    sp = sub.add_parser(
        "multiclass-curve", help="achievable fraction of capacity vs class count"
    )
    net_arg(sp)
    sp.add_argument("--kmax", type=int, required=True)
    sp.add_argument("--seeds", nargs="+", type=int, default=[0])
    sp.add_argument("--out", required=True)
    sp.add_argument("--max-edges", type=int, default=64)
    sp.set_defaults(fn=_cmd_multiclass_curve)

    sp = sub.add_parser("trace", help="per-slot JSON-lines decision trace")
    net_arg(sp)
    sp.add_argument("--policy", default="pi_star")
    sp.add_argument("--lambda", dest="lam", type=float, required=True)
    sp.add_argument("--slots", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", default=None)
    sp.set_defaults(fn=_cmd_trace)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except DagcastError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
