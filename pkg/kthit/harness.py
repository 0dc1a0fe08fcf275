import math
import os
from dataclasses import replace
from datetime import timedelta
from itertools import combinations
from time import time

import numpy as np
import pandas as pd
from tqdm import tqdm

from kthit.blocking import verify_mmbs_bounds
from kthit.corpus import (
    cnf_corpus,
    connected_graphs,
    diamond,
    disjoint_cliques,
    random_extended_instance,
    random_graphs,
    random_modulator_instance,
    triangle_chain,
)
from kthit.decomposition import bed_value
from kthit.graph import Graph, enumerate_t_cliques, pattern_copies, treedepth_exact
from kthit.kernel import base_kernel, kernelize, replay_trace
from kthit.oracle import brute_bed_plus, brute_opt_ekt, brute_opt_pattern, brute_ved_plus, is_blocking_set, mmbs_graph
from kthit.reduction.cnf import reduce_cnf_td, reduce_cnf_ved, satisfiable
from kthit.reduction.gadget import build_ab_gadget
from kthit.solver import ExtendedInstance, SolveBudget, solve_ekt
from kthit.utils import hits_all

# Corpus sizes per scale.
SCALES = {
    "quick": {
        "atlas_n": 5,
        "random_bed": 50,
        "random_solver": 100,
        "random_kernel": 20,
        "random_base": 20,
        "cnf": (2, 2, 2),
    },
    "full": {
        "atlas_n": 7,
        "random_bed": 500,
        "random_solver": 1000,
        "random_kernel": 200,
        "random_base": 100,
        "cnf": (3, 3, 3),
    },
}


class Harness:
    """
    Runs a check over a corpus, with a progress bar and a CSV log of the outcomes.
    """

    def __init__(self, name, log_dir=None, quiet=False):
        self.name = name
        self.quiet = quiet
        self.log = {"check": [], "cases": [], "passed": [], "failed": [], "first_failure": [], "seconds": []}
        self.csv_path = None if log_dir is None else os.path.join(log_dir, f"{name}.csv")
        if log_dir is not None and not os.path.exists(log_dir):
            os.makedirs(log_dir)
        self.start_time = time()

    def run(self, check, cases, fn):
        start = time()
        passed, failed, first_failure = 0, 0, ""
        bar = tqdm(list(cases), disable=self.quiet, leave=False)
        for i, case in enumerate(bar):
            bar.set_description(f"{check}")
            if fn(case):
                passed += 1
            else:
                failed += 1
                if not first_failure:
                    first_failure = f"case {i}"

        self.log["check"].append(check)
        self.log["cases"].append(passed + failed)
        self.log["passed"].append(passed)
        self.log["failed"].append(failed)
        self.log["first_failure"].append(first_failure)
        self.log["seconds"].append(round(time() - start, 3))
        if self.csv_path is not None:
            pd.DataFrame(self.log).to_csv(self.csv_path, index=False)
        if not self.quiet:
            print(f"Check: {check:<22}   " f"Cases: {passed + failed:<6}   " f"Failed: {failed:<4}   " f"Time: {self.time}")
        return failed == 0

    @property
    def ok(self):
        return not any(self.log["failed"])

    def frame(self):
        return pd.DataFrame(self.log)

    @property
    def time(self):
        return str(timedelta(seconds=int(time() - self.start_time)))


def _bed_agrees(case):
    g, t = case
    return bed_value(g, t, lambda_cap=g.n).value == brute_bed_plus(g, t)


def _solver_agrees(inst):
    g, t = inst.graph, inst.t
    opt, _ = brute_opt_ekt(inst)
    opt_g, _ = brute_opt_ekt(ExtendedInstance(g, (), t))
    lam = brute_bed_plus(g, t)
    sets = enumerate_t_cliques(g, t) + list(inst.family)
    solution = solve_ekt(inst, SolveBudget(lam, opt - opt_g))
    # No promise at all: the answer must still be a solution.
    loose = solve_ekt(inst, SolveBudget(max(lam - 1, 0), 0))
    return len(solution) == opt and hits_all(solution, sets) and hits_all(loose, sets)


def _kernel_safe(inst):
    opt, _ = brute_opt_ekt(ExtendedInstance(inst.graph, (), inst.t))
    result = kernelize(inst)
    if result.decision is not None:
        return result.decision == (opt <= inst.budget)
    out = result.instance
    out_opt, _ = brute_opt_pattern(out.graph, Graph.complete(out.t), cap=256)
    return (out_opt <= out.budget) == (opt <= inst.budget)


def _mmbs_bounded(g):
    return verify_mmbs_bounds(g, 3)["passed"]


def _witness_values(_):
    cliques_ok = all(mmbs_graph(Graph.complete(t), t).value == t for t in (3, 4))
    g, tops = triangle_chain(3)
    inst = ExtendedInstance(g, tuple(g.edges), 4)
    blocking = [(x,) for x in tops]
    minimal = all(not is_blocking_set(inst, blocking[:i] + blocking[i + 1 :]) for i in range(len(blocking)))
    return cliques_ok and is_blocking_set(inst, blocking) and minimal


def _reduction_ved(phi):
    h = diamond()
    out = reduce_cnf_ved(phi, h)
    opt, _ = brute_opt_pattern(out.graph, h)
    rest, _ = out.graph.remove(out.modulator)
    ved = brute_ved_plus(rest, h)
    # Unit clauses get no clause copies, so G - X can be H-free.
    wide = any(len(clause) >= 2 for clause in phi.clauses)
    return (
        (satisfiable(phi) is not None) == (opt <= out.budget)
        and ved <= 1
        and (ved == 1) == wide
        and len(out.modulator) == h.n * phi.num_vars
    )


def _reduction_td(phi):
    h = diamond()
    out = reduce_cnf_td(phi, h)
    opt, _ = brute_opt_pattern(out.graph, h)
    rest, _ = out.graph.remove(out.modulator)
    td_h, _ = treedepth_exact(h)
    td_rest, _ = treedepth_exact(rest)
    return (
        (satisfiable(phi) is not None) == (opt <= out.budget)
        and td_rest <= 2 * td_h + h.n
        and len(out.modulator) == h.n * phi.num_vars
    )


def _gadget_optimum(_):
    h = diamond()
    gadget = build_ab_gadget(h, (0,), (1,))
    copies = pattern_copies(h, gadget.graph)
    opt, _ = brute_opt_pattern(gadget.graph, h)
    optimal = [c for c in combinations(gadget.graph.vertices, opt) if hits_all(c, copies)]
    return sorted(optimal) == sorted([tuple(gadget.a_vertices), tuple(gadget.b_vertices)])


def _base_kernel_bounded(case):
    g, k, t = case
    base = base_kernel(g, k, t)
    return base.decision is not None or base.hyperedges <= t * math.factorial(t) * k**t


def _disjoint_cliques_rejected(case):
    k, t = case
    return base_kernel(disjoint_cliques(k + 1, t), k, t).decision is False


def _deterministic(inst):
    first, second = kernelize(inst), kernelize(inst)
    if first.trace != second.trace:
        return False
    replayed = replay_trace(inst, first)
    if first.decision is not None:
        return replayed == first.decision
    return replayed.graph == first.instance.graph and replayed.budget == first.instance.budget


def _kernel_cases(rng, count):
    cases = []
    for _ in range(count):
        inst = random_modulator_instance(rng, max_n=12, max_x=5, t=3, lam=1, budget=0)
        opt, _ = brute_opt_ekt(ExtendedInstance(inst.graph, (), 3))
        for k in (opt - 1, opt, opt + 1):
            if k >= 0:
                cases.append(replace(inst, budget=k))
    return cases


def selftest(scale="quick", seed=0, log_dir=None, quiet=False):
    """
    The acceptance checks on seeded corpora; returns the harness with one log row per check.
    """
    sizes = SCALES[scale]
    rng = np.random.RandomState(seed)
    harness = Harness(f"selftest-{scale}", log_dir=log_dir, quiet=quiet)

    atlas = [(g, 3) for g in connected_graphs(sizes["atlas_n"])]
    randoms = [(g, int(rng.choice((3, 4)))) for g in random_graphs(sizes["random_bed"], 9, rng)]
    harness.run("bed-agreement", atlas + randoms, _bed_agrees)

    instances = [random_extended_instance(rng) for _ in range(sizes["random_solver"])]
    harness.run("solver-agreement", instances, _solver_agrees)

    kernel_cases = _kernel_cases(rng, sizes["random_kernel"])
    harness.run("kernel-safeness", kernel_cases, _kernel_safe)

    harness.run("mmbs-bounds", list(connected_graphs(sizes["atlas_n"])), _mmbs_bounded)
    harness.run("witness-values", [None], _witness_values)

    formulas = cnf_corpus(*sizes["cnf"])
    harness.run("reduction-ved", formulas, _reduction_ved)
    harness.run("reduction-td", formulas, _reduction_td)
    harness.run("gadget-optimum", [None], _gadget_optimum)

    cliques = [(k, t) for k in range(4) for t in (3, 4)]
    harness.run("base-kernel-no", cliques, _disjoint_cliques_rejected)
    base_cases = [(g, int(rng.randint(0, 4)), int(rng.choice((3, 4)))) for g in random_graphs(sizes["random_base"], 10, rng)]
    harness.run("base-kernel-size", base_cases, _base_kernel_bounded)

    harness.run("determinism", kernel_cases[: max(1, len(kernel_cases) // 4)], _deterministic)
    return harness
