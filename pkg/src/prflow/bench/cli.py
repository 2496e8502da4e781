"""Command-line entry point: ``prflow {maxflow,match,verify,costmodel}``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import replace
from pathlib import Path
from typing import Sequence

from ..engine import AUTO, EngineConfig, MaxFlowResult, max_flow, reference_max_flow
from ..ingest import GraphFile, GraphFormat, IngestError, load_network, parse_konect_bipartite
from ..matching import build_matching_network, extract_matching
from ..network import FlowNetwork
from .costmodel import CostModelParams, cost_model_estimate, read_assignment
from .trace import workload_stats

SCHEMA = 1
VARIANTS = [(v, r) for v in ("tc", "vc") for r in ("rcsr", "bcsr")]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _cycles(text: str):
    if text == AUTO:
        return AUTO
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer or 'auto', got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError("cycles must be positive")
    return value


def _engine_flags(p: argparse.ArgumentParser, default_format: str | None = None) -> None:
    p.add_argument("--input", required=True, type=Path)
    p.add_argument("--format", choices=[f.value for f in GraphFormat], default=default_format)
    p.add_argument("--algo", choices=["tc", "vc"], default="vc")
    p.add_argument("--repr", choices=["rcsr", "bcsr"], default="bcsr")
    p.add_argument("--tile-size", type=int, default=32)
    p.add_argument("--cycles", type=_cycles, default=AUTO)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--executor", choices=["serial", "threads"], default="serial")
    p.add_argument("--seed", type=int, default=0, help="seed for source/sink pair selection")
    p.add_argument("--pairs", type=int, default=20, help="source/sink pairs for SNAP input")
    p.add_argument("--trace", type=Path, help="write a per-worker workload trace CSV here")
    p.add_argument("--output", choices=["json", "csv"], default="json")
    p.add_argument("--out", type=Path, help="write the result here instead of stdout")
    p.add_argument("--no-timings", action="store_true", help="omit wall-clock fields for reproducible output")
    p.add_argument("--validate", action="store_true", help="check invariants at every barrier")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="prflow", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    _engine_flags(sub.add_parser("maxflow", help="maximum flow / minimum cut of one network"))
    _engine_flags(sub.add_parser("match", help="maximum bipartite matching of a KONECT file"), default_format="konect")

    p = sub.add_parser("verify", help="run all four kernel/layout combinations against the oracle")
    _engine_flags(p)
    p.add_argument("--bench", action="store_true", help="also report TC/VC time ratios (machine-specific)")

    p = sub.add_parser("costmodel", help="evaluate the per-iteration cost model")
    p.add_argument("--k", type=float, required=True, help="time per neighbour scanned")
    p.add_argument("--push", type=float, required=True, help="push cost")
    p.add_argument("--relabel", type=float, required=True, help="relabel cost")
    p.add_argument("--assignment", type=Path, required=True, help="CSV with vertex,worker,degree,lambda")
    p.add_argument("--output", choices=["json", "csv"], default="json")
    p.add_argument("--out", type=Path)
    return parser


def _config(args, variant=None, representation=None) -> EngineConfig:
    return EngineConfig(
        variant=variant or args.algo,
        representation=representation or args.repr,
        tile_size=args.tile_size,
        cycles_per_kernel=args.cycles,
        worker_count=args.workers,
        executor=args.executor,
        validate=args.validate,
    )


def _network(args) -> FlowNetwork:
    return load_network(args.input, args.format, pairs=args.pairs, seed=args.seed)


def _run(net: FlowNetwork, config: EngineConfig, trace_path: Path | None):
    """Untraced run for the reported numbers; a second traced run if asked."""
    result = max_flow(net, config)
    trace_summary = None
    if trace_path is not None:
        traced = max_flow(net, replace(config, trace=True))
        traced.trace.write_csv(trace_path)
        st = workload_stats(traced.trace)
        trace_summary = {"mean_ns": st.mean, "stddev_ns": st.stddev, "normalized_stddev": st.normalized_stddev}
    if result.violations:
        raise RuntimeError(f"{len(result.violations)} invariant violations, first: {result.violations[0]}")
    return result, trace_summary


def _result_doc(command, args, net: FlowNetwork, result: MaxFlowResult, trace_summary) -> dict:
    st = result.stats
    doc = {
        "schema": SCHEMA,
        "command": command,
        "input": str(args.input),
        "flow": result.flow,
        "variant": result.config.variant,
        "representation": result.config.representation,
        "config": {
            "tile_size": result.config.tile_size,
            "cycles": result.config.cycles_per_kernel,
            "workers": result.config.worker_count,
            "executor": result.config.executor,
            "seed": args.seed,
            "pairs": args.pairs,
        },
        "graph": {"n": net.n, "m": net.m, "source": net.source, "sink": net.sink},
        "pushes": st.pushes,
        "relabels": st.relabels,
        "counts": {
            "outer_iterations": st.outer_iterations,
            "kernel_invocations": st.kernel_invocations,
            "sweeps": st.sweeps,
            "vertices_processed": st.vertices_processed,
            "global_relabels": st.global_relabels,
        },
        "cut": {"source_side": len(result.source_side), "capacity": net.cut_capacity(result.source_side)},
        "timings": None,
        "trace": str(args.trace) if args.trace else None,
    }
    if not args.no_timings:
        doc["timings"] = {"wall_ns": st.wall_time_ns, "kernel_ns": st.kernel_time_ns, "workload": trace_summary}
    return doc


def _emit(args, text: str) -> None:
    if args.out:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)


def _csv(rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _json(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def cmd_maxflow(args) -> int:
    net = _network(args)
    result, trace_summary = _run(net, _config(args), args.trace)
    doc = _result_doc("maxflow", args, net, result, trace_summary)
    if args.output == "json":
        _emit(args, _json(doc))
    else:
        header = ["variant", "representation", "flow", "pushes", "relabels", "outer_iterations", "wall_ns", "kernel_ns"]
        t = doc["timings"] or {}
        row = [doc["variant"], doc["representation"], doc["flow"], doc["pushes"], doc["relabels"],
               doc["counts"]["outer_iterations"], t.get("wall_ns", ""), t.get("kernel_ns", "")]
        _emit(args, _csv([header, row]))
    return 0


def cmd_match(args) -> int:
    gf = GraphFile.open(args.input, args.format)
    if gf.format is not GraphFormat.KONECT_BIPARTITE:
        raise UsageError("match needs a KONECT bipartite file (--format konect)")
    b = parse_konect_bipartite(gf.read_text())
    net = build_matching_network(b)
    result, trace_summary = _run(net, _config(args), args.trace)
    pairs = extract_matching(b, result)
    if args.output == "json":
        doc = _result_doc("match", args, net, result, trace_summary)
        doc["bipartite"] = {"left": b.left_count, "right": b.right_count, "edges": len(b.edges)}
        doc["matching_size"] = len(pairs)
        doc["pairs"] = [[l + 1, r + 1] for l, r in pairs]
        _emit(args, _json(doc))
    else:
        _emit(args, _csv([["left", "right"], *[[l + 1, r + 1] for l, r in pairs]]))
    return 0


def cmd_verify(args) -> int:
    net = _network(args)
    flows: dict[str, int] = {}
    times: dict[str, int] = {}
    for variant, representation in VARIANTS:
        config = _config(args, variant, representation)
        result, _ = _run(net, config, None)
        flows[config.label] = result.flow
        times[config.label] = result.stats.kernel_time_ns
        if net.cut_capacity(result.source_side) != result.flow:
            flows[config.label + " cut"] = net.cut_capacity(result.source_side)
    t0 = time.perf_counter_ns()
    flows["reference"] = reference_max_flow(net)
    times["reference"] = time.perf_counter_ns() - t0
    agree = len(set(flows.values())) == 1
    doc = {"schema": SCHEMA, "command": "verify", "input": str(args.input), "flows": flows, "agree": agree}
    if args.bench:
        doc["bench"] = {
            "machine_specific": True,
            "kernel_ns": times,
            "speedup_tc_over_vc": {
                r.upper(): times[f"TC+{r.upper()}"] / max(times[f"VC+{r.upper()}"], 1) for r in ("rcsr", "bcsr")
            },
        }
    if args.output == "json":
        _emit(args, _json(doc))
    else:
        _emit(args, _csv([["config", "flow"], *flows.items()]))
    if not agree:
        print(f"prflow verify: disagreement {flows}", file=sys.stderr)
        return 2
    return 0


def cmd_costmodel(args) -> int:
    assignment, degrees, lambdas = read_assignment(args.assignment)
    params = CostModelParams(args.k, args.push, args.relabel, assignment, lambdas)
    estimate = cost_model_estimate(degrees, params)
    if args.output == "json":
        _emit(args, _json({"schema": SCHEMA, "command": "costmodel", "estimate": estimate}))
    else:
        _emit(args, _csv([["estimate"], [estimate]]))
    return 0


COMMANDS = {"maxflow": cmd_maxflow, "match": cmd_match, "verify": cmd_verify, "costmodel": cmd_costmodel}


def run(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (IngestError, UsageError, ValueError, OSError, RuntimeError) as exc:
        print(f"prflow {args.command}: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
