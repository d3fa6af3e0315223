"""Command-line entry point.

Exit codes: 0 success, 1 domain error (named error on stderr), 2 usage
error (argparse).  Identical (argv, input files, seed) produce
byte-identical output; wall-clock timings appear only under --timings.
"""

from __future__ import annotations

import argparse
import sys
import time
from typing import List, Optional

from . import io
from .complexes import Filtration
from .engine import WakeSleepDriver
from .errors import TopomemoError, Unreachable
from .homology import betti_numbers, homology_basis, persistence_barcode
from .parity import parity_profile
from .search import (
    GraphView,
    NavigationTask,
    RunConfig,
    dp_lookup,
    run_experiment,
    savitch_search,
)
from .sheaf import glue_sections, sheaf_cohomology
from .traces import decompose_trace, extract_backbone, semanticize


def _emit(payload) -> None:
    sys.stdout.write(io.dumps(payload) + "\n")


def _cmd_homology(args) -> int:
    complex = io.load_complex(args.complex)
    betti = betti_numbers(complex)
    bases = {}
    for k in range(complex.max_dim + 1):
        basis = homology_basis(complex, k)
        bases[str(k)] = {
            "cycles": len(basis.Z_basis),
            "boundaries": len(basis.B_basis),
            "reps": [sorted(r.support) for r in basis.reps],
        }
    _emit({"betti": betti, "bases": bases})
    return 0


def _cmd_parity(args) -> int:
    _emit(parity_profile(io.load_complex(args.complex)).to_payload())
    return 0


def _cmd_persistence(args) -> int:
    complex = io.load_complex(args.complex)
    barcode = persistence_barcode(Filtration(complex), args.dim)
    _emit(barcode.to_payload())
    return 0


def _cmd_decompose(args) -> int:
    complex = io.load_complex(args.complex)
    raw_traces = io.load_traces(args.traces)
    basis = homology_basis(complex, 1)
    chains = [complex.chain(1, ids) for ids in raw_traces]
    bundle = extract_backbone(chains, basis)
    out = {"backbone": list(bundle.backbone), "traces": []}
    for chain in chains:
        trace = decompose_trace(chain, bundle)
        out["traces"].append({
            "edges": sorted(chain.support),
            "sigma": list(trace.sigma_coeffs),
            "a": list(trace.a_coeffs),
            "noise": sorted(trace.noise.support),
        })
    _emit(out)
    return 0


def _cmd_semanticize(args) -> int:
    complex = io.load_complex(args.complex)
    cycle = complex.chain(1, io.load_edge_ids(args.cycle))
    result = semanticize(complex, cycle)
    payload = io.complex_to_payload(result)
    payload["betti"] = betti_numbers(result)
    _emit(payload)
    return 0


def _cmd_sheaf(args) -> int:
    sheaf = io.load_sheaf(args.sheaf)
    h0, h1 = sheaf_cohomology(sheaf)
    out = {"h0": h0, "h1": h1}
    if args.glue:
        sections = io.load_sections(args.glue)
        result = glue_sections(sheaf, sections)
        out["gluing"] = {
            "gluable": result.gluable,
            "obstruction_dim": result.obstruction_dim,
            "kept": list(result.kept),
            "global_section": (
                None
                if result.global_section is None
                else {str(v): x for v, x in sorted(result.global_section.items())}
            ),
        }
    _emit(out)
    return 0


def _cmd_navigate(args) -> int:
    graph = io.load_graph(args.graph)
    started = time.perf_counter()
    if args.mode == "dp":
        if not args.state:
            raise Unreachable("dp mode needs --state from a prior wakesleep run")
        scaffold = io.load_scaffold(args.state)
        traj = dp_lookup(scaffold, args.source, args.target)
    else:
        task = NavigationTask(graph, args.source, args.target)
        traj = savitch_search(task, args.k)
    if traj is None:
        raise Unreachable(f"no stored or discoverable path {args.source} -> {args.target}")
    payload = {
        "mode": args.mode,
        "source": args.source,
        "target": args.target,
        "vertices": list(traj.vertices),
        "edges": list(traj.edges),
        "cost": traj.cost,
        "expansions": traj.expansions,
    }
    if args.timings:
        payload["seconds"] = round(time.perf_counter() - started, 6)
    _emit(payload)
    return 0


def _cmd_wakesleep(args) -> int:
    import json

    with open(args.config) as fh:
        config = RunConfig.from_dict(json.load(fh))
    started = time.perf_counter()
    result = run_experiment(config)
    for record in result["epochs"]:
        _emit(record)
    for line in result["csv"]:
        sys.stdout.write(line + "\n")
    if args.timings:
        sys.stdout.write(f"# wall_seconds={time.perf_counter() - started:.6f}\n")
    if args.save_state:
        driver: WakeSleepDriver = result["driver"]
        io.save_state(args.save_state, driver.working, driver.store, driver.scaffold)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="topomemo",
        description="Homology, parity metrics, sheaf gluing, and memoized navigation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("homology", help="Betti numbers and basis summary")
    p.add_argument("complex")
    p.set_defaults(func=_cmd_homology)

    p = sub.add_parser("parity", help="parity profile of a complex")
    p.add_argument("complex")
    p.set_defaults(func=_cmd_parity)

    p = sub.add_parser("persistence", help="persistence barcode")
    p.add_argument("complex")
    p.add_argument("--dim", type=int, default=0)
    p.set_defaults(func=_cmd_persistence)

    p = sub.add_parser("decompose", help="trace decomposition over a bundle")
    p.add_argument("complex")
    p.add_argument("traces")
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("semanticize", help="contract a nontrivial cycle")
    p.add_argument("complex")
    p.add_argument("cycle")
    p.set_defaults(func=_cmd_semanticize)

    p = sub.add_parser("sheaf", help="sheaf cohomology and optional gluing")
    p.add_argument("sheaf")
    p.add_argument("--glue", default=None)
    p.set_defaults(func=_cmd_sheaf)

    p = sub.add_parser("navigate", help="answer one reachability query")
    p.add_argument("graph")
    p.add_argument("source", type=int)
    p.add_argument("target", type=int)
    p.add_argument("--mode", choices=("savitch", "dp"), default="savitch")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--state", default=None)
    p.add_argument("--timings", action="store_true")
    p.set_defaults(func=_cmd_navigate)

    p = sub.add_parser("wakesleep", help="run a wake/sleep experiment")
    p.add_argument("--config", required=True)
    p.add_argument("--save-state", default=None)
    p.add_argument("--timings", action="store_true")
    p.set_defaults(func=_cmd_wakesleep)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TopomemoError as exc:
        sys.stderr.write(f"{exc.name}: {exc}\n")
        return 1
    except FileNotFoundError as exc:
        sys.stderr.write(f"FileNotFound: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
