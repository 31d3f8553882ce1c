"""Command line harness: generate | analyze | sweep | closed-form | simulate | validate."""
from __future__ import annotations

import argparse
import asyncio
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
import json
import logging
import os
import sys
import time
from typing import List, Optional

import numpy as np

from .__version__ import __version__
from .closed_forms import closed_form_table
from .coherence import CoherenceReport, analyze, coherence_lower_bound, coherence_upper_bound
from .const import (
    BOUND_SLACK,
    EXIT_DATA,
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_USAGE,
    FAMILIES,
    FLOAT_DIGITS,
    ITERATED_FAMILIES,
    MANIFEST_SUFFIX,
    SCHEME_EXACT,
    SCHEMES,
    SIM_DEFAULT_REPLICAS,
    SIM_DEFAULT_SAMPLES,
)
from .exceptions import NetCoherenceError, NetCoherenceUsageError
from .generators import FAMILY_PARAMS, GenSpec
from .graph import (
    average_path_length,
    is_connected,
    is_tree,
    largest_connected_component,
    read_edge_list,
    require_connected,
    to_edge_list,
)
from .runner import SWEEP_COLUMNS, ExperimentRunner
from .simulation import SimConfig
from .spectral import foster_residual, resistance_matrix, spectrum, sum_rule_residual

_LOGGER = logging.getLogger(__name__)

RESIDUAL_LIMIT = 1e-8


@dataclass
class RunManifest:
    """Provenance of one command; timestamps live only here."""

    command: List[str]
    version: str = __version__
    metadata: dict = field(default_factory=dict)
    seeds: List[int] = field(default_factory=list)
    started: str = ""
    elapsed_seconds: float = 0.0

    def write(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fptr:
            json.dump(asdict(self), fptr, indent=2, default=str)
            fptr.write("\n")


class _Parser(argparse.ArgumentParser):
    """Usage errors become exit code 1 instead of argparse's 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise NetCoherenceUsageError(message)


def _fmt(value) -> str:
    return f"{value:.{FLOAT_DIGITS}g}"


def _round(value: float) -> float:
    return float(_fmt(value))


def _int_list(text: str) -> List[int]:
    try:
        return [int(item) for item in text.split(",") if item.strip()]
    except ValueError as ex:
        raise NetCoherenceUsageError(f"expected comma separated integers, got {text!r}") from ex


def _manifest_path(out: str) -> Optional[str]:
    return None if out == "-" else out + MANIFEST_SUFFIX


def _manifest_ref(out: str) -> str:
    path = _manifest_path(out)
    return os.path.basename(path) if path else "none"


@contextmanager
def _output(out: str):
    if out == "-":
        yield sys.stdout
    else:
        with open(out, "w", encoding="utf-8") as fptr:
            yield fptr


def _finish(manifest: RunManifest, out: str, started: float) -> None:
    manifest.elapsed_seconds = round(time.monotonic() - started, 3)
    path = _manifest_path(out)
    if path:
        manifest.write(path)


def _gen_spec(args) -> GenSpec:
    if args.family not in FAMILY_PARAMS:
        raise NetCoherenceUsageError(f"unknown family {args.family!r}")
    required, optional = FAMILY_PARAMS[args.family]
    params = {
        name: getattr(args, name)
        for name in required + optional
        if getattr(args, name, None) is not None
    }
    return GenSpec(args.family, params, args.seed)


def cmd_generate(args, manifest: RunManifest) -> int:
    spec = _gen_spec(args)
    graph = spec.build()
    manifest.metadata = spec.to_dict()
    manifest.seeds = [spec.seed] if spec.seed is not None else []
    header = spec.header() + [f"n: {graph.n} m: {graph.m}", f"manifest: {_manifest_ref(args.out)}"]
    with _output(args.out) as fptr:
        fptr.write(to_edge_list(graph, header))
    _LOGGER.info("Generated %s: N=%s M=%s", spec.family, graph.n, graph.m)
    return EXIT_OK


def cmd_analyze(args, manifest: RunManifest) -> int:
    graph, header = read_edge_list(args.input)
    lcc = largest_connected_component(graph)
    dropped = sorted(set(graph.labels.tolist()) - set(lcc.labels.tolist()))
    manifest.metadata = {
        "input": args.input,
        "input_header": list(header),
        "input_n": graph.n,
        "input_m": graph.m,
        "dropped_vertices": len(dropped),
        "dropped_labels": dropped,
    }
    report = analyze(lcc)
    with _output(args.out) as fptr:
        if args.format == "json":
            fptr.write(report.to_json(manifest=_manifest_ref(args.out)) + "\n")
        else:
            fptr.write(f"# manifest: {_manifest_ref(args.out)}\n")
            fptr.write(CoherenceReport.csv_header() + "\n")
            fptr.write(report.to_csv_row() + "\n")
    return EXIT_OK


def cmd_sweep(args, manifest: RunManifest) -> int:
    params = _int_list(args.param) if args.param else [None]
    sizes = _int_list(args.sizes)
    manifest.metadata = {
        "family": args.family,
        "params": params,
        "sizes": sizes,
        "replicas": args.replicas,
    }
    manifest.seeds = [args.seed]

    async def _run():
        async with ExperimentRunner(args.workers) as runner:
            return await runner.sweep(args.family, params, sizes, args.replicas, args.seed)

    rows = asyncio.run(_run())
    with _output(args.out) as fptr:
        fptr.write(f"# manifest: {_manifest_ref(args.out)}\n")
        fptr.write(",".join(SWEEP_COLUMNS) + "\n")
        for row in rows:
            fptr.write(row.to_csv_row() + "\n")
    return EXIT_OK


def cmd_closed_form(args, manifest: RunManifest) -> int:
    rows = closed_form_table(args.family, args.g_max)
    manifest.metadata = {"family": args.family, "g_max": args.g_max}

    def optional(value):
        return None if value is None else _round(value.float_view)

    with _output(args.out) as fptr:
        if args.format == "json":
            data = [
                {
                    "g": row.g,
                    "n": row.n,
                    "m": row.m,
                    "r": _round(row.r.float_view),
                    "r_mul": optional(row.r_mul),
                    "r_add": optional(row.r_add),
                    "h_fo": _round(row.h_fo.float_view),
                    "limit": _round(float(row.limit)),
                    "gap": _round(float(row.gap)),
                    "r_exact": str(row.r),
                    "h_fo_exact": str(row.h_fo),
                }
                for row in rows
            ]
            json.dump({"rows": data, "manifest": _manifest_ref(args.out)}, fptr, indent=2)
            fptr.write("\n")
        else:
            fptr.write(f"# manifest: {_manifest_ref(args.out)}\n")
            fptr.write("g,n,m,r,r_mul,r_add,h_fo,limit,gap\n")
            for row in rows:
                values = [
                    str(row.g), str(row.n), str(row.m), _fmt(row.r.float_view),
                    "" if row.r_mul is None else _fmt(row.r_mul.float_view),
                    "" if row.r_add is None else _fmt(row.r_add.float_view),
                    _fmt(row.h_fo.float_view), _fmt(float(row.limit)), _fmt(float(row.gap)),
                ]
                fptr.write(",".join(values) + "\n")
    return EXIT_OK


def cmd_simulate(args, manifest: RunManifest) -> int:
    graph, header = read_edge_list(args.input)
    cfg = SimConfig(
        dt=args.dt,
        burn_in_steps=args.burn_in_steps,
        sample_steps=args.sample_steps,
        replicas=args.replicas,
        seed=args.seed,
        scheme=args.scheme,
    )
    metadata = {"input": args.input, "input_header": list(header)}
    manifest.metadata = metadata
    manifest.seeds = [args.seed]

    async def _run():
        async with ExperimentRunner(args.workers) as runner:
            return await runner.simulate(graph, cfg, metadata)

    estimate = asyncio.run(_run())
    with _output(args.out) as fptr:
        fptr.write(estimate.to_json(manifest=_manifest_ref(args.out)) + "\n")
    return EXIT_OK


def cmd_validate(args, manifest: RunManifest) -> int:
    graph, header = read_edge_list(args.input)
    require_connected(graph)
    manifest.metadata = {"input": args.input, "input_header": list(header)}
    manifest.seeds = [args.seed]

    spec = spectrum(graph)
    omega = resistance_matrix(graph)
    rng = np.random.default_rng(args.seed)
    sum_rule = []
    if graph.n >= 2:
        for _ in range(args.pairs):
            i, j = rng.choice(graph.n, size=2, replace=False)
            sum_rule.append(sum_rule_residual(graph, int(i), int(j), omega))

    h_fo = float(np.sum(1.0 / spec.eigenvalues[1:])) / (2.0 * graph.n)
    upper = coherence_upper_bound(graph, average_path_length(graph))
    lower = coherence_lower_bound(graph.n, graph.m)
    slack = BOUND_SLACK * max(1.0, upper)
    diagnostics = {
        "n": graph.n,
        "m": graph.m,
        "connected": is_connected(graph),
        "zero_eigenvalues": spec.zero_count,
        "spectrum_sum_residual": abs(float(spec.eigenvalues.sum()) - 2.0 * graph.m),
        "foster_residual": foster_residual(graph, omega),
        "sum_rule_max_residual": max(sum_rule, default=0.0),
        "sum_rule_pairs": len(sum_rule),
        "h_fo": h_fo,
        "lower_exact": lower.exact,
        "upper": upper,
        "lower_holds": lower.exact <= h_fo + slack,
        "upper_holds": h_fo <= upper + slack,
        "is_tree": is_tree(graph),
        "upper_equality": abs(h_fo - upper) <= slack,
        "lower_equality": abs(h_fo - lower.exact) <= slack,
    }
    passed = (
        diagnostics["spectrum_sum_residual"] <= RESIDUAL_LIMIT * max(graph.m, 1)
        and diagnostics["foster_residual"] <= RESIDUAL_LIMIT
        and diagnostics["sum_rule_max_residual"] <= RESIDUAL_LIMIT
        and diagnostics["lower_holds"]
        and diagnostics["upper_holds"]
    )
    diagnostics["passed"] = passed
    diagnostics["manifest"] = _manifest_ref(args.out)
    with _output(args.out) as fptr:
        json.dump(
            {k: _round(v) if isinstance(v, float) else v for k, v in diagnostics.items()},
            fptr,
            indent=2,
        )
        fptr.write("\n")
    return EXIT_OK if passed else EXIT_NUMERICAL


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="netcoherence", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a generated graph as an edge list")
    gen.add_argument("--family", required=True, choices=FAMILIES)
    gen.add_argument("--n", type=int)
    gen.add_argument("--m", type=int)
    gen.add_argument("--d", type=int, help="HDRAN or torus dimension")
    gen.add_argument("--g", type=int, help="iteration of the deterministic families")
    gen.add_argument("--k", type=int, help="ring lattice degree")
    gen.add_argument("--side", type=int, help="torus side")
    gen.add_argument("--seed-size", dest="seed_size", type=int, help="BA seed clique size")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", default="-")
    gen.set_defaults(handler=cmd_generate)

    ana = sub.add_parser("analyze", help="coherence report of the largest component")
    ana.add_argument("input")
    ana.add_argument("--format", choices=("json", "csv"), default="json")
    ana.add_argument("--out", default="-")
    ana.set_defaults(handler=cmd_analyze)

    swp = sub.add_parser("sweep", help="long format coherence sweep over a grid")
    swp.add_argument("--family", required=True, choices=FAMILIES)
    swp.add_argument("--param", help="comma separated m (ba), d (hdran, torus) or k (ring_lattice)")
    swp.add_argument("--sizes", required=True, help="comma separated N, g or torus side")
    swp.add_argument("--replicas", type=int, default=1)
    swp.add_argument("--seed", type=int, default=0)
    swp.add_argument("--workers", type=int, default=None)
    swp.add_argument("--out", default="-")
    swp.set_defaults(handler=cmd_sweep)

    cfm = sub.add_parser("closed-form", help="exact Kirchhoff indices and coherence")
    cfm.add_argument("--family", required=True, choices=ITERATED_FAMILIES)
    cfm.add_argument("--g-max", dest="g_max", type=int, required=True)
    cfm.add_argument("--format", choices=("json", "csv"), default="csv")
    cfm.add_argument("--out", default="-")
    cfm.set_defaults(handler=cmd_closed_form)

    sim = sub.add_parser("simulate", help="Monte Carlo coherence of the noisy consensus SDE")
    sim.add_argument("input")
    sim.add_argument("--dt", type=float)
    sim.add_argument("--burn-in-steps", dest="burn_in_steps", type=int)
    sim.add_argument("--sample-steps", dest="sample_steps", type=int, default=SIM_DEFAULT_SAMPLES)
    sim.add_argument("--replicas", type=int, default=SIM_DEFAULT_REPLICAS)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--scheme", choices=SCHEMES, default=SCHEME_EXACT)
    sim.add_argument("--workers", type=int, default=None)
    sim.add_argument("--out", default="-")
    sim.set_defaults(handler=cmd_simulate)

    val = sub.add_parser("validate", help="Foster, sum rule, spectrum and bound diagnostics")
    val.add_argument("input")
    val.add_argument("--pairs", type=int, default=50)
    val.add_argument("--seed", type=int, default=0)
    val.add_argument("--out", default="-")
    val.set_defaults(handler=cmd_validate)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Run one subcommand and return its exit code."""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except NetCoherenceUsageError as ex:
        print(f"netcoherence: {ex}", file=sys.stderr)
        return EXIT_USAGE

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    manifest = RunManifest(
        command=["netcoherence", *argv],
        started=datetime.now(timezone.utc).isoformat(),
    )
    started = time.monotonic()
    try:
        code = args.handler(args, manifest)
    except NetCoherenceError as ex:
        _LOGGER.error("%s failed: %s", args.command, ex.message)
        print(f"netcoherence: {ex.message}", file=sys.stderr)
        return ex.status
    except OSError as ex:
        print(f"netcoherence: {ex}", file=sys.stderr)
        return EXIT_DATA
    _finish(manifest, args.out, started)
    return code
