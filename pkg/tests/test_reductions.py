from itertools import combinations

import pytest

from kthit.corpus import cnf_corpus
from kthit.errors import FormulaError, IsClique, PreconditionViolated
from kthit.graph import Graph, pattern_copies, treedepth_exact
from kthit.oracle import brute_opt_pattern, brute_ved_plus
from kthit.reduction import (
    CnfFormula,
    build_ab_gadget,
    find_anticomplete_pair,
    has_stable_cutset,
    reduce_cnf_td,
    reduce_cnf_ved,
    satisfiable,
)
from kthit.utils import hits_all

OR2 = CnfFormula(2, ((1, 2),))
CONTRADICTION = CnfFormula(1, ((1,), (-1,)))


def test_formula_validation():
    with pytest.raises(FormulaError):
        CnfFormula(1, ((),))
    with pytest.raises(FormulaError):
        CnfFormula(1, ((2,),))
    with pytest.raises(FormulaError):
        CnfFormula(1, ((0,),))
    assert OR2.num_clauses == 1
    assert OR2.evaluate((False, True))
    assert not OR2.evaluate((False, False))
    assert OR2.satisfied_literal((1, 2), (False, True)) == 1


def test_satisfiable():
    assert satisfiable(OR2) == (False, True)
    assert satisfiable(CONTRADICTION) is None
    assert satisfiable(CnfFormula(0, ())) == ()


def test_find_anticomplete_pair(diamond):
    assert find_anticomplete_pair(diamond) == ((0,), (1,))
    assert find_anticomplete_pair(Graph.cycle(5)) == ((0, 1), (3,))
    with pytest.raises(IsClique):
        find_anticomplete_pair(Graph.complete(4))


def test_has_stable_cutset(diamond):
    assert not has_stable_cutset(diamond)
    assert has_stable_cutset(Graph.path(3))
    assert has_stable_cutset(Graph.cycle(4))
    assert not has_stable_cutset(Graph.complete(4))


def test_gadget_optimum(diamond):
    gadget = build_ab_gadget(diamond, (0,), (1,))
    copies = pattern_copies(diamond, gadget.graph)
    opt, _ = brute_opt_pattern(gadget.graph, diamond)
    optimal = [c for c in combinations(gadget.graph.vertices, opt) if hits_all(c, copies)]
    assert opt == 1
    assert sorted(optimal) == sorted([tuple(gadget.a_vertices), tuple(gadget.b_vertices)])


def test_gadget_rejects_adjacent_sets(diamond):
    with pytest.raises(PreconditionViolated):
        build_ab_gadget(diamond, (0,), (2,))
    with pytest.raises(PreconditionViolated):
        build_ab_gadget(diamond, (0,), (0,))


def test_ved_reduction_counts(diamond):
    out = reduce_cnf_ved(OR2, diamond)
    assert out.budget == 3
    assert len(out.modulator) == 8
    assert len(out.tagged_copies("transversal")) == 2
    assert len(out.disjoint_copies()) == 3
    assert out.audit()
    rest, _ = out.graph.remove(out.modulator)
    assert brute_ved_plus(rest, diamond) == 1


def test_ved_reduction_of_contradiction(diamond):
    out = reduce_cnf_ved(CONTRADICTION, diamond)
    assert out.budget == 1
    assert brute_opt_pattern(out.graph, diamond)[0] > 1


def test_ved_reduction_preserves_satisfiability(diamond):
    for phi in cnf_corpus(2, 2, 2):
        out = reduce_cnf_ved(phi, diamond)
        opt, _ = brute_opt_pattern(out.graph, diamond)
        assignment = satisfiable(phi)
        assert (assignment is not None) == (opt <= out.budget)
        if assignment is not None:
            witness = out.witness_solution(phi, assignment)
            assert len(witness) == out.budget
            assert hits_all(witness, pattern_copies(diamond, out.graph))


def test_td_reduction(diamond):
    out = reduce_cnf_td(OR2, diamond)
    assert out.budget == 3
    assert out.audit()
    rest, _ = out.graph.remove(out.modulator)
    assert treedepth_exact(rest, cap=16)[0] <= 2 * treedepth_exact(diamond)[0] + diamond.n


def test_td_reduction_preserves_satisfiability(diamond):
    for phi in cnf_corpus(2, 2, 2):
        out = reduce_cnf_td(phi, diamond)
        opt, _ = brute_opt_pattern(out.graph, diamond)
        assert (satisfiable(phi) is not None) == (opt <= out.budget)


def test_witness_needs_a_satisfying_assignment(diamond):
    out = reduce_cnf_ved(OR2, diamond)
    with pytest.raises(PreconditionViolated):
        out.witness_solution(OR2, (False, False))


def test_reduction_preconditions():
    with pytest.raises(PreconditionViolated):
        reduce_cnf_ved(OR2, Graph.complete(4))
    with pytest.raises(PreconditionViolated):
        reduce_cnf_ved(OR2, Graph.path(3))
    with pytest.raises(PreconditionViolated):
        reduce_cnf_td(OR2, Graph.cycle(4))
    with pytest.raises(PreconditionViolated):
        reduce_cnf_td(OR2, Graph.complete(4))


def test_unit_clauses_leave_a_pattern_free_remainder(diamond):
    out = reduce_cnf_ved(CONTRADICTION, diamond)
    rest, _ = out.graph.remove(out.modulator)
    assert brute_ved_plus(rest, diamond) == 0


def test_reductions_agree_on_induced_copies(diamond):
    for phi in cnf_corpus(2, 2, 2):
        for reduce in (reduce_cnf_ved, reduce_cnf_td):
            out = reduce(phi, diamond)
            opt, _ = brute_opt_pattern(out.graph, diamond)
            induced, _ = brute_opt_pattern(out.graph, diamond, induced=True)
            assert (opt <= out.budget) == (induced <= out.budget)
    out = reduce_cnf_ved(OR2, diamond)
    rest, _ = out.graph.remove(out.modulator)
    assert brute_ved_plus(rest, diamond, induced=True) == 1
