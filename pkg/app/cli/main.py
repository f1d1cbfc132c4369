"""
gapbench command line.

Reports go to stdout as JSON, instances to the files named by --output, logs
to stderr. Exit codes: 0 success, 1 property mismatch, 2 usage or input
error, 3 verification timeout.
"""

import argparse
import json
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional

from app.expander.families import ExpanderSpec, power, to_fraction
from app.expander.rotation import emit_rotation, parse_rotation
from app.harness.runner import run_suite
from app.harness.suites import SUITE_ALIASES, SUITES
from app.instances.dimacs import (
    emit_cnf,
    emit_graph,
    emit_setcover,
    parse_cnf,
    parse_graph,
    parse_lin3,
    parse_setcover,
)
from app.instances.graph import build_partition
from app.models.schemas import SolveResult, rational_str
from app.oracles.assignments import max_lin, max_sat, min_sat
from app.oracles.bipartite import max_induced_bipartite
from app.oracles.clique import max_clique, max_independent_set, min_vertex_cover, subexp_approx_is
from app.oracles.domination import min_dominating_set_bounded, min_set_cover
from app.product.amplification import (
    amplify_gap,
    certificate,
    check_amplification,
    select_amplification_params,
)
from app.product.walk_graph import derandomized_product
from app.reductions.bipartite import is_to_cb
from app.reductions.dominating import ds_to_setcover, is_to_ds
from app.reductions.grouping import GroupingParams, max3sat_to_is
from app.reductions.linear import lin3_to_vc, vc_to_minsat
from app.spectral.eigen import verify_expander
from app.utils.exceptions import GapBenchException, VerificationTimeoutException
from app.utils.logger import logger

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_TIMEOUT = 0, 1, 2, 3

FAMILIES = {"gg": "gabber_galil", "complete": "complete", "external": "external"}
REDUCTIONS = ["max3sat-to-is", "is-to-ds", "ds-to-setcover", "is-to-cb", "lin3-to-vc", "vc-to-minsat"]
PROBLEMS = ["is", "clique", "ds", "vc", "mibs", "maxsat", "minsat", "maxlin", "setcover", "subexp-is"]


def _emit(payload) -> None:
    sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def _write(path: str, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def _write_json(path: str, payload) -> None:
    _write(path, json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n")


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise GapBenchException(f"Cannot read {path}: {e}")


def _solve_json(result: SolveResult, timings: bool) -> dict:
    exclude = None if timings else {"elapsed"}
    return result.model_dump(exclude=exclude)


def cmd_build_expander(args) -> int:
    family = FAMILIES[args.family]
    size = args.k if family == "gabber_galil" else args.n
    if size is None:
        raise GapBenchException(f"--{'k' if family == 'gabber_galil' else 'n'} is required for {args.family}")
    spec = ExpanderSpec(family=family, size=size, power=args.power)
    h = spec.build()
    _write(args.output, emit_rotation(h))
    report = {
        "family": family,
        "n": h.n,
        "d": h.d,
        "power": args.power,
        "alpha_bound": spec.alpha_bound_float,
        "verification": None,
    }
    code = EXIT_OK
    if args.verify:
        verdict = verify_expander(h, spec.alpha_bound_float)
        report["verification"] = verdict.model_dump()
        code = EXIT_OK if verdict.passed else EXIT_MISMATCH
    _emit(report)
    return code


def cmd_power(args) -> int:
    h = parse_rotation(_read(args.input))
    powered = power(h, args.power)
    _write(args.output, emit_rotation(powered))
    report = {"n": powered.n, "d": powered.d, "power": args.power, "verification": None}
    code = EXIT_OK
    if args.verify:
        if args.alpha is None:
            raise GapBenchException("--verify needs --alpha, the claimed expansion of the input graph")
        claim = float(to_fraction(args.alpha)) ** args.power
        verdict = verify_expander(powered, claim)
        report["verification"] = verdict.model_dump()
        code = EXIT_OK if verdict.passed else EXIT_MISMATCH
    _emit(report)
    return code


def cmd_product(args) -> int:
    g = parse_graph(_read(args.graph))
    h = parse_rotation(_read(args.expander))
    walks = derandomized_product(g, h, args.t)
    _write(args.output, emit_graph(walks.graph))
    if args.walks:
        _write_json(args.walks, [w.model_dump() for w in walks.walk_table()])
    _emit({"n": g.n, "d": h.d, "t": args.t, "N": walks.N, "edges": walks.graph.m})
    return EXIT_OK


def cmd_amplify(args) -> int:
    g = parse_graph(_read(args.input))
    family = FAMILIES[args.family]
    external = parse_rotation(_read(args.expander)) if args.expander else None
    params = select_amplification_params(
        args.a, args.b, args.ratio, family=family, n=g.n,
        external=external, alpha_claim=args.alpha, allow_blowup=not args.no_blowup,
    )
    result = amplify_gap(g, params, external=external)
    _write(args.output, emit_graph(result.graph))
    check = check_amplification(g, result) if args.check else None
    _emit(certificate(result, check=check).model_dump())
    if check is not None and check["holds"] is False:
        return EXIT_MISMATCH
    return EXIT_OK


def _partition_for(graph, path: Optional[str]):
    """Clique partition from a JSON sidecar {"blocks": [[...], ...]}; singletons otherwise."""
    if path is None:
        return build_partition(graph, [[v] for v in range(graph.n)])
    try:
        blocks = json.loads(_read(path))["blocks"]
    except (json.JSONDecodeError, KeyError, TypeError) as e:
        raise GapBenchException(f"Partition file {path} is malformed: {e}")
    return build_partition(graph, blocks)


def cmd_reduce(args) -> int:
    name = args.name
    summary: Dict[str, object] = {"reduction": name}
    if name == "max3sat-to-is":
        f = parse_cnf(_read(args.input))
        params = GroupingParams.balanced(f.m, args.K, to_fraction(args.lam))
        grouped = max3sat_to_is(f, params)
        _write(args.output, emit_graph(grouped.graph))
        sidecar = {
            "blocks": [list(b) for b in grouped.partition.blocks],
            "lambda": rational_str(params.lam),
            "vertices": grouped.payload_json(),
        }
        summary.update(vertices=grouped.graph.n, K=params.K)
    elif name == "is-to-ds":
        g = parse_graph(_read(args.input))
        gadget = is_to_ds(_partition_for(g, args.partition))
        _write(args.output, emit_graph(gadget.graph))
        sidecar = {"K": gadget.K, "roles": gadget.roles_json()}
        summary.update(vertices=gadget.graph.n, K=gadget.K)
    elif name == "ds-to-setcover":
        g = parse_graph(_read(args.input))
        _write(args.output, emit_setcover(ds_to_setcover(g)))
        sidecar = None
        summary.update(ground_size=g.n)
    elif name == "is-to-cb":
        g = parse_graph(_read(args.input))
        doubled = is_to_cb(g)
        _write(args.output, emit_graph(doubled))
        sidecar = None
        summary.update(vertices=doubled.n)
    elif name == "lin3-to-vc":
        lin = lin3_to_vc(parse_lin3(_read(args.input)))
        _write(args.output, emit_graph(lin.graph))
        sidecar = {"vertices": lin.payload_json()}
        summary.update(vertices=lin.graph.n)
    else:
        reduction = vc_to_minsat(parse_graph(_read(args.input)))
        _write(args.output, emit_cnf(reduction.formula))
        sidecar = reduction.maps_json()
        summary.update(variables=reduction.formula.var_count, clauses=reduction.formula.m)
    if sidecar is not None:
        path = args.payload or f"{args.output}.json"
        _write_json(path, sidecar)
        summary["payload"] = path
    _emit(summary)
    return EXIT_OK


def _solvers(args) -> Dict[str, Callable[[], SolveResult]]:
    text = _read(args.input)
    return {
        "is": lambda: max_independent_set(parse_graph(text)),
        "clique": lambda: max_clique(parse_graph(text)),
        "ds": lambda: min_dominating_set_bounded(parse_graph(text), size_cap=args.size_cap),
        "vc": lambda: min_vertex_cover(parse_graph(text)),
        "mibs": lambda: max_induced_bipartite(parse_graph(text)),
        "maxsat": lambda: max_sat(parse_cnf(text)),
        "minsat": lambda: min_sat(parse_cnf(text)),
        "maxlin": lambda: max_lin(parse_lin3(text)),
        "setcover": lambda: min_set_cover(parse_setcover(text), size_cap=args.size_cap),
        "subexp-is": lambda: subexp_approx_is(parse_graph(text), args.cap),
    }


def cmd_solve(args) -> int:
    if args.problem == "subexp-is" and args.cap is None:
        raise GapBenchException("subexp-is needs --cap")
    result = _solvers(args)[args.problem]()
    _emit(_solve_json(result, args.timings))
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        report = run_suite(
            args.suite, args.trials, args.seed, max_n=args.max_n,
            timeout=args.timeout, workers=args.workers, timings=args.timings,
        )
    except VerificationTimeoutException as e:
        if e.partial is not None:
            _emit(e.partial.model_dump())
        logger.error(str(e))
        return EXIT_TIMEOUT
    _emit(report.model_dump())
    return EXIT_OK if report.passed else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gapbench", description="Gap amplification and reduction workbench")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-expander", help="Build a Gabber-Galil or complete-graph expander")
    p.add_argument("--family", choices=["gg", "complete"], required=True)
    p.add_argument("--k", type=int, help="side of Z_k x Z_k for gg")
    p.add_argument("--n", type=int, help="vertex count for complete")
    p.add_argument("--power", type=int, default=1)
    p.add_argument("--verify", action="store_true", help="fail unless lambda_hat meets the alpha bound")
    p.add_argument("-o", "--output", required=True, help="rotation-map JSON file")
    p.set_defaults(handler=cmd_build_expander)

    p = sub.add_parser("power", help="Raise a rotation graph to a power")
    p.add_argument("input")
    p.add_argument("--power", type=int, required=True)
    p.add_argument("--verify", action="store_true")
    p.add_argument("--alpha", help="claimed expansion of the input graph")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(handler=cmd_power)

    p = sub.add_parser("product", help="Derandomized graph product G'_t")
    p.add_argument("graph", help="DIMACS graph")
    p.add_argument("expander", help="rotation-map JSON on the same vertex count")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--walks", help="walk table JSON sidecar")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(handler=cmd_product)

    p = sub.add_parser("amplify", help="Linear-size clique gap amplification")
    p.add_argument("input", help="DIMACS graph")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--ratio", required=True)
    p.add_argument("--family", choices=sorted(FAMILIES), default="complete")
    p.add_argument("--expander", help="rotation-map JSON for --family external")
    p.add_argument("--alpha", help="claimed expansion for --family external")
    p.add_argument("--no-blowup", action="store_true", help="pad with isolated vertices only")
    p.add_argument("--check", action="store_true", help="confirm the applicable bound with exact clique numbers")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(handler=cmd_amplify)

    p = sub.add_parser("reduce", help="Apply a reduction")
    p.add_argument("name", choices=REDUCTIONS)
    p.add_argument("input")
    p.add_argument("--K", type=int, default=2, help="clause groups for max3sat-to-is")
    p.add_argument("--lam", default="1", help="threshold parameter for max3sat-to-is")
    p.add_argument("--partition", help="JSON {\"blocks\": [...]} for is-to-ds")
    p.add_argument("--payload", help="sidecar path (default: <output>.json)")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(handler=cmd_reduce)

    p = sub.add_parser("solve", help="Exact desk-scale solvers")
    p.add_argument("problem", choices=PROBLEMS)
    p.add_argument("input")
    p.add_argument("--cap", type=int, help="subset size for subexp-is")
    p.add_argument("--size-cap", type=int, help="largest solution searched for ds and setcover")
    p.add_argument("--timings", action="store_true")
    p.set_defaults(handler=cmd_solve)

    p = sub.add_parser("verify", help="Run a seeded verification suite")
    p.add_argument("suite", choices=sorted(set(SUITES) | set(SUITE_ALIASES)))
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-n", type=int)
    p.add_argument("--timeout", type=float)
    p.add_argument("--workers", type=int)
    p.add_argument("--timings", action="store_true", help="include runtimes (reports stop being byte-stable)")
    p.set_defaults(handler=cmd_verify)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except GapBenchException as e:
        logger.error(f"{args.command}: {e}")
        sys.stderr.write(f"error: {e}\n")
        return EXIT_USAGE
    except ValueError as e:
        # pydantic validation errors and unparseable rationals
        logger.error(f"{args.command}: {e}")
        sys.stderr.write(f"error: {e}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
