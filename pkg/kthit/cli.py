import argparse
import json
import os
import sys

import numpy as np
import pandas as pd
from tqdm import tqdm

from kthit.blocking import verify_mmbs_bounds
from kthit.corpus import connected_graphs, random_graphs
from kthit.decomposition import bed_at_most, bed_value, compute_bed_root
from kthit.errors import CapExceeded, FormulaError, GraphError, InvariantBroken, ParseError, PreconditionViolated
from kthit.graph import Graph
from kthit.harness import selftest
from kthit.io import InstanceDocument, format_graph, parse_cnf, parse_family, parse_graph, to_dot
from kthit.kernel import Kernelizer, ModulatorInstance
from kthit.oracle import brute_bed_plus, brute_opt_ekt, brute_opt_pattern, brute_ved_plus, mmbs_graph, timed
from kthit.reduction.cnf import reduce_cnf_td, reduce_cnf_ved
from kthit.solver import EktSolver, ExtendedInstance, SolveBudget, conflict_positive, solve_ekt
from kthit.utils import parse_ids

EXIT_YES, EXIT_NO, EXIT_USAGE, EXIT_PRECONDITION = 0, 1, 2, 3


def _read(path):
    if path == "-":
        return sys.stdin.read()
    with open(path) as f:
        return f.read()


def _write(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as f:
            f.write(text)


def _emit(args, result, lines):
    if args.json:
        print(json.dumps(result, sort_keys=True))
    else:
        for line in lines:
            print(line)


def cmd_bed(args):
    g = parse_graph(_read(args.graph))
    result = bed_value(g, args.t, lambda_cap=args.lambda_cap)
    if args.lam is None:
        _emit(args, {"bed": result.value, "trace": result.trace}, [f"bed+: {result.value}"])
        return EXIT_YES
    decision = bed_at_most(g, args.t, args.lam)
    _emit(
        args,
        {"bed": result.value, "decision": decision, "trace": result.trace},
        [f"bed+ <= {args.lam}: {'yes' if decision else 'no'}", f"bed+: {result.value}"],
    )
    return EXIT_YES if decision else EXIT_NO


def cmd_root(args):
    g = parse_graph(_read(args.graph))
    dec = compute_bed_root(g, args.t, args.lam)
    pending = {str(v): list(dec.pending[v]) for v in dec.root_vertices}
    _emit(
        args,
        {"roots": [list(root) for root in dec.roots], "pending": pending},
        [f"Root: {list(root)}" for root in dec.roots] + [f"C({v}): {comp}" for v, comp in pending.items()],
    )
    return EXIT_YES


def cmd_solve(args):
    g = parse_graph(_read(args.graph))
    family = parse_family(_read(args.family)) if args.family else []
    inst = ExtendedInstance(g, tuple(tuple(z) for z in family), args.t)
    solution = solve_ekt(inst, SolveBudget(args.lam, args.kappa), memoize=args.memoize)
    _emit(args, {"size": len(solution), "solution": list(solution)}, [f"Size: {len(solution):<4}   Solution: {list(solution)}"])
    return EXIT_YES


def cmd_conflict(args):
    g = parse_graph(_read(args.graph))
    positive = conflict_positive(g, parse_ids(args.s1), parse_ids(args.s2), args.t, args.lam, EktSolver(g, args.t))
    _emit(args, {"conflict": positive}, [f"Conflict: {'positive' if positive else 'zero'}"])
    return EXIT_YES if positive else EXIT_NO


def _kernel_input(args):
    text = _read(args.instance)
    if text.lstrip().startswith("{"):
        doc = InstanceDocument.from_json(text)
        return ModulatorInstance(doc.graph, tuple(doc.x), doc.k, doc.t, doc.lam), False
    missing = [flag for flag, value in (("--t", args.t), ("--lambda", args.lam), ("--k", args.k)) if value is None]
    if missing:
        raise ParseError(0, f"a graph file needs {', '.join(missing)}")
    return ModulatorInstance(parse_graph(text), parse_ids(args.modulator), args.k, args.t, args.lam), True


def cmd_kernelize(args):
    inst, from_graph = _kernel_input(args)
    kernelizer = Kernelizer(chunk_cap=args.chunk_cap, check_invariants=not args.no_checks, memoize=args.memoize)
    result = kernelizer.kernelize(inst)
    if args.trace:
        result.trace_frame().to_csv(args.trace, index=False)
    if result.decision is not None:
        _emit(
            args,
            {"decision": result.decision, "guarantee": result.guarantee, "trace": result.trace},
            [f"Decision: {'yes' if result.decision else 'no'}   Guarantee: {result.guarantee}"],
        )
        return EXIT_YES if result.decision else EXIT_NO
    out = InstanceDocument.from_instance(result.instance, {"guarantee": result.guarantee, "trace": result.trace})
    if args.json or args.output:
        _write(args.output, out.to_json())
    graph_output = args.graph_output
    if graph_output is None and from_graph and args.output:
        graph_output = os.path.splitext(args.output)[0] + ".graph"
    if graph_output:
        _write(graph_output, format_graph(result.instance.graph))
    if not args.json:
        print(
            f"Vertices: {result.instance.graph.n:<5}   " f"Modulator: {len(result.instance.modulator):<4}   "
            f"Budget: {result.instance.budget:<4}   " f"Guarantee: {result.guarantee}"
        )
    return EXIT_YES


def cmd_reduce(args):
    h = parse_graph(_read(args.h))
    phi = parse_cnf(_read(args.cnf))
    reduce = reduce_cnf_ved if args.variant == "ved" else reduce_cnf_td
    out = reduce(phi, h)
    if args.audit:
        out.audit()
    if args.output:
        _write(args.output, format_graph(out.graph))
    if args.sidecar:
        _write(args.sidecar, json.dumps(out.to_dict(), sort_keys=True, indent=2) + "\n")
    if args.dot:
        _write(args.dot, to_dot(out.graph, out.role_tags))
    if args.json:
        print(json.dumps(dict(out.to_dict(), graph=format_graph(out.graph)), sort_keys=True))
    else:
        if not args.output:
            sys.stdout.write(format_graph(out.graph))
        if not args.quiet:
            print(f"c vertices {out.graph.n} modulator {len(out.modulator)} budget {out.budget}")
    return EXIT_YES


def cmd_verify_bounds(args):
    rng = np.random.RandomState(args.seed)
    if args.graph:
        graphs = [(args.graph, parse_graph(_read(args.graph)))]
    elif args.random:
        graphs = list(enumerate(random_graphs(args.random, args.max_n, rng)))
    else:
        graphs = list(enumerate(connected_graphs(args.max_n)))
    rows = []
    bar = tqdm(graphs, disable=args.quiet or args.json)
    for graph_id, g in bar:
        bar.set_description("Verifying mmbs bounds.")
        rows.append(dict({"graph-id": graph_id}, **verify_mmbs_bounds(g, args.t, ground_cap=args.ground_cap)))
    frame = pd.DataFrame(rows)
    passed = bool(frame["passed"].all()) if rows else True
    if args.json:
        print(json.dumps({"passed": passed, "rows": rows}, sort_keys=True, default=int))
    else:
        _write(args.output, frame.to_csv(index=False))
    return EXIT_YES if passed else EXIT_NO


def cmd_oracle(args):
    g = parse_graph(_read(args.graph))
    if args.what == "bed":
        value, elapsed = timed(brute_bed_plus, g, args.t)
        result = {"bed": value}
    elif args.what == "opt":
        family = parse_family(_read(args.family)) if args.family else []
        (value, witness), elapsed = timed(brute_opt_ekt, ExtendedInstance(g, tuple(tuple(z) for z in family), args.t))
        result = {"opt": value, "witness": list(witness)}
    elif args.what == "pattern":
        h = parse_graph(_read(args.h)) if args.h else Graph.complete(args.t)
        (value, witness), elapsed = timed(brute_opt_pattern, g, h, args.induced)
        result = {"opt": value, "witness": list(witness)}
    elif args.what == "ved":
        h = parse_graph(_read(args.h)) if args.h else Graph.complete(args.t)
        value, elapsed = timed(brute_ved_plus, g, h, args.induced)
        result = {"ved": value}
    else:
        mmbs, elapsed = timed(mmbs_graph, g, args.t)
        result = {"mmbs": mmbs.value, "blocking": [list(z) for z in mmbs.blocking], "lower_bound": mmbs.lower_bound}
    lines = [f"{key}: {value}" for key, value in result.items()]
    if not args.quiet:
        lines.append(f"Time: {elapsed:.3f}s")
    _emit(args, result, lines)
    return EXIT_YES


def cmd_selftest(args):
    harness = selftest(args.scale, seed=args.seed, log_dir=args.log_dir, quiet=args.quiet or args.json)
    frame = harness.frame()
    if args.json:
        print(json.dumps({"passed": harness.ok, "checks": frame.to_dict(orient="records")}, sort_keys=True, default=int))
    else:
        print(frame.to_string(index=False))
    return EXIT_YES if harness.ok else EXIT_NO


def build_parser():
    parser = argparse.ArgumentParser(prog="kthit", description="K_t-subgraph hitting kernelization toolkit.")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--json", action="store_true")
    parser.add_argument("--quiet", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bed", help="bed+ value with its decomposition trace")
    p.add_argument("graph")
    p.add_argument("--t", type=int, default=3)
    p.add_argument("--lambda_cap", type=int, default=8)
    p.add_argument("--lambda", "--lam", dest="lam", type=int, default=None, help="also decide bed+ <= lambda")
    p.set_defaults(fn=cmd_bed)

    p = sub.add_parser("root", help="a bed+-root and its pending components")
    p.add_argument("graph")
    p.add_argument("--t", type=int, default=3)
    p.add_argument("--lambda", "--lam", dest="lam", type=int, required=True)
    p.set_defaults(fn=cmd_root)

    p = sub.add_parser("solve", help="extended K_t-subgraph hitting")
    p.add_argument("graph")
    p.add_argument("--family", type=str, default=None, help="JSON list of cliques")
    p.add_argument("--t", type=int, default=3)
    p.add_argument("--lambda", "--lam", dest="lam", type=int, required=True)
    p.add_argument("--kappa", type=int, default=0)
    p.add_argument("--memoize", action="store_true")
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("conflict", help="whether conf(S1, S2) is positive")
    p.add_argument("graph")
    p.add_argument("--s1", type=str, required=True)
    p.add_argument("--s2", type=str, required=True)
    p.add_argument("--t", type=int, default=3)
    p.add_argument("--lambda", "--lam", dest="lam", type=int, required=True)
    p.set_defaults(fn=cmd_conflict)

    p = sub.add_parser("kernelize", help="kernelize a JSON instance document or a graph file")
    p.add_argument("instance")
    p.add_argument("--t", type=int, default=None)
    p.add_argument("--lambda", "--lam", dest="lam", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--modulator", type=str, default="", help="comma separated ids of X")
    p.add_argument("--output", type=str, default=None, help="JSON sidecar path")
    p.add_argument("--graph_output", type=str, default=None, help="graph format path of the output instance")
    p.add_argument("--trace", type=str, default=None, help="CSV path for the kernel trace")
    p.add_argument("--chunk_cap", "--chunk-cap", dest="chunk_cap", type=int, default=16)
    p.add_argument("--no_checks", action="store_true")
    p.add_argument("--memoize", action="store_true")
    p.set_defaults(fn=cmd_kernelize)

    p = sub.add_parser("reduce", help="CNF-SAT to H-subgraph hitting")
    p.add_argument("cnf")
    p.add_argument("--h", type=str, required=True)
    p.add_argument("--variant", choices=("ved", "td"), default="ved")
    p.add_argument("--output", type=str, default=None)
    p.add_argument("--sidecar", type=str, default=None)
    p.add_argument("--dot", type=str, default=None)
    p.add_argument("--audit", action="store_true")
    p.set_defaults(fn=cmd_reduce)

    p = sub.add_parser("verify-bounds", help="mmbs against its bed+ and treedepth bounds")
    p.add_argument("graph", nargs="?", default=None)
    p.add_argument("--t", type=int, default=3)
    p.add_argument("--max_n", "--exhaustive", dest="max_n", type=int, default=5)
    p.add_argument("--random", type=int, default=0, help="number of random graphs instead of the atlas")
    p.add_argument("--ground_cap", type=int, default=18)
    p.add_argument("--output", type=str, default=None)
    p.set_defaults(fn=cmd_verify_bounds)

    p = sub.add_parser("oracle", help="brute-force reference values")
    p.add_argument("what", choices=("bed", "opt", "pattern", "ved", "mmbs"))
    p.add_argument("graph")
    p.add_argument("--t", type=int, default=3)
    p.add_argument("--h", type=str, default=None)
    p.add_argument("--family", type=str, default=None)
    p.add_argument("--induced", action="store_true")
    p.set_defaults(fn=cmd_oracle)

    p = sub.add_parser("selftest", help="acceptance checks on seeded corpora")
    p.add_argument("--scale", choices=("quick", "full"), default="quick")
    p.add_argument("--log_dir", type=str, default=None)
    p.set_defaults(fn=cmd_selftest)
    return parser


def run(args):
    try:
        return args.fn(args)
    except (ParseError, GraphError, FormulaError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (CapExceeded, PreconditionViolated, InvariantBroken) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_PRECONDITION


def main(argv=None):
    args = build_parser().parse_args(argv)
    return run(args)
