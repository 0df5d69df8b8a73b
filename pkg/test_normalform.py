#!/usr/bin/env python3
"""
Tests for NNF, distributive CNF/DNF, Tseitin, prenex, Skolem and clause forms.

Semantic checks run against the truth-table and finite-model oracles.

Run with: pytest test_normalform.py -v
"""

import sys

import pytest

from conftest import all_props, random_monadic_sentence, random_prop, random_sentence
from vlogic.errors import (
    CapExceededError, FormulaTooLargeError, NotPropositionalError, NotSentenceError,
)
from vlogic.formula import (
    And, Atom, Const, Forall, Func, Not, Or, Quantifier, Var, atoms, free_vars, to_text, walk,
)
from vlogic.normalform import (
    Clause, ClauseSet, Literal, clausify, cnf_distributive, dnf_distributive, is_horn, is_nnf,
    nnf, parse_dimacs, prenex, skolemize, to_dimacs, tseitin,
)
from vlogic.parser import parse
from vlogic.sat import dpll, enumerate_models
from vlogic.semantics import (
    equiv_finite, eval_fol, find_model, find_monadic_model, truth_table, tt_equivalent,
)


def _is_cnf(f) -> bool:
    if isinstance(f, And):
        return _is_cnf(f.left) and _is_cnf(f.right)
    return _is_clause(f)


def _is_clause(f) -> bool:
    if isinstance(f, Or):
        return _is_clause(f.left) and _is_clause(f.right)
    return isinstance(f, Atom) or (isinstance(f, Not) and isinstance(f.body, Atom)) \
        or f == parse("true") or f == parse("false")


def _is_prenex(f) -> bool:
    while isinstance(f, Quantifier):
        f = f.body
    return not any(isinstance(n, Quantifier) for n in walk(f))


# ─────────────────────────────────────────────────────────────────────────────
# NNF
# ─────────────────────────────────────────────────────────────────────────────

def test_nnf_pushes_negation_to_atoms():
    assert nnf(parse("~(p -> q)")) == parse("p & ~q")
    assert nnf(parse("~(p | ~q)")) == parse("~p & q")
    assert nnf(parse("~forall x. exists y. R(x, y)")) == parse("exists x. forall y. ~R(x, y)")


def test_nnf_expands_iff():
    assert nnf(parse("p <-> q")) == parse("(~p | q) & (~q | p)")


def test_nnf_of_the_one_variable_sentence():
    f1 = parse("~forall t. ((C(t) | B(t)) & S(t) -> T(t))")
    assert nnf(f1) == parse("exists t. ((C(t) | B(t)) & S(t) & ~T(t))")


def test_nnf_preserves_meaning(rng):
    for _ in range(200):
        f = random_prop(rng, 4)
        g = nnf(f)
        assert is_nnf(g)
        assert tt_equivalent(f, g)


def test_nnf_preserves_first_order_meaning(rng):
    for _ in range(30):
        f = random_sentence(rng, 3)
        assert is_nnf(nnf(f))
        assert equiv_finite(f, nnf(f), 2)


# ─────────────────────────────────────────────────────────────────────────────
# Distributive CNF / DNF
# ─────────────────────────────────────────────────────────────────────────────

def test_cnf_distributes_or_over_and():
    assert cnf_distributive(parse("p | q & r")) == parse("(p | q) & (p | r)")


def test_dnf_distributes_and_over_or():
    assert dnf_distributive(parse("p & (q | r)")) == parse("p & q | p & r")


def test_cnf_removes_duplicate_literals():
    assert cnf_distributive(parse("p | p")) == parse("p")


def test_cnf_is_equivalent(rng):
    for _ in range(200):
        f = random_prop(rng, 4)
        g = cnf_distributive(f)
        assert _is_cnf(g), str(g)
        assert tt_equivalent(f, g)


def test_dnf_is_equivalent(rng):
    for _ in range(200):
        f = random_prop(rng, 4)
        assert tt_equivalent(f, dnf_distributive(f))


def test_every_depth_one_formula():
    for f in all_props(1):
        assert tt_equivalent(f, cnf_distributive(f)), str(f)
        assert tt_equivalent(f, dnf_distributive(f)), str(f)
        assert tt_equivalent(f, nnf(f)), str(f)
        assert bool(dpll(tseitin(f))) == truth_table(f).is_satisfiable(), str(f)


def test_cnf_node_guard():
    f = parse(" | ".join(f"(a{i} & b{i})" for i in range(12)))
    with pytest.raises(FormulaTooLargeError):
        cnf_distributive(f, max_nodes=100)


def test_cnf_needs_propositional_input():
    with pytest.raises(NotPropositionalError):
        cnf_distributive(parse("forall x. P(x)"))


# ─────────────────────────────────────────────────────────────────────────────
# Tseitin
# ─────────────────────────────────────────────────────────────────────────────

def test_tseitin_names_aux_atoms_in_post_order():
    cs = tseitin(parse("(p & q) | r"))
    assert cs.fresh.tseitin_atoms == ("_t1", "_t2")
    assert Clause.of(Literal(True, "_t2")) in cs.clauses
    assert Clause.of(Literal(False, "_t1"), Literal(True, "p")) in cs.clauses


def test_tseitin_is_equisatisfiable(rng):
    for _ in range(150):
        f = random_prop(rng, 4)
        assert bool(dpll(tseitin(f))) == truth_table(f).is_satisfiable(), str(f)


def test_tseitin_models_extend_source_models(rng):
    for _ in range(50):
        f = random_prop(rng, 4)
        result = dpll(tseitin(f))
        if result:
            source = {a: result.model.get(a, False) for a in atoms(f)}
            table = truth_table(f)
            assert source in table.models()


def test_tseitin_size_is_linear():
    f = parse(" & ".join(f"(a{i} | b{i})" for i in range(40)))
    cs = tseitin(f)
    assert len(cs.fresh.tseitin_atoms) == 79
    assert len(cs) <= 4 * 79 + 1


# ─────────────────────────────────────────────────────────────────────────────
# Prenex and Skolem
# ─────────────────────────────────────────────────────────────────────────────

def test_prenex_renames_apart():
    f = parse("(forall x. P(x)) & (exists x. Q(x))")
    assert prenex(f) == parse("forall x. exists x1. (P(x) & Q(x1))")


def test_prenex_is_equivalent(rng):
    for _ in range(30):
        f = random_sentence(rng, 3)
        g = prenex(f)
        assert _is_prenex(g)
        assert equiv_finite(f, g, 2)


def test_skolem_constant_and_function():
    f = parse("exists x. forall y. exists z. R(x, f(y, z))")
    g = skolemize(f)
    assert g == Forall("y", Atom("R", (Const("_c1"), Func("f", (Var("y"), Func("_f1", (Var("y"),)))))))


def test_skolemize_rejects_free_variables():
    with pytest.raises(NotSentenceError):
        skolemize(parse("P(x)", ["x"]))


def test_skolem_form_is_universal():
    g = skolemize(parse("forall x. exists y. R(x, y)"))
    assert g == Forall("x", Atom("R", (Var("x"), Func("_f1", (Var("x"),)))))
    assert not free_vars(g)


def test_skolemize_preserves_satisfiability_on_monadic_sentences(rng):
    unsat = checked = 0
    while checked < 300:
        f = random_monadic_sentence(rng, 4)
        try:
            source = find_monadic_model(f, cap=5000)
            skolem = find_monadic_model(skolemize(f), cap=5000)
        except CapExceededError:
            continue
        checked += 1
        assert (source is None) == (skolem is None), to_text(f)
        if source is None:
            unsat += 1
            assert find_model(f, 2) is None
        else:
            assert eval_fol(f, source)
    assert 0 < unsat < checked


# ─────────────────────────────────────────────────────────────────────────────
# Clauses
# ─────────────────────────────────────────────────────────────────────────────

def test_clausify_one_variable_sentence():
    cs = clausify(parse("exists t. (S(t) & ~T(t) & (C(t) | B(t)))"))
    assert len(cs) == 3
    assert cs.fresh.skolem_constants == ("_c1",)
    c = (Const("_c1"),)
    assert Clause.of(Literal(True, "S", c)) in cs.clauses
    assert Clause.of(Literal(False, "T", c)) in cs.clauses
    assert Clause.of(Literal(True, "C", c), Literal(True, "B", c)) in cs.clauses


def test_clausify_renames_clauses_apart():
    cs = clausify(parse("forall x. (P(x) & Q(x))"))
    first, second = cs.clauses
    assert first.variables() == {"x"}
    assert second.variables() == {"x1"}


def test_clausify_drops_tautologies():
    assert len(clausify(parse("p | ~p"))) == 0


def test_horn():
    assert is_horn(clausify(parse("(p & q -> r) & p")))
    assert not is_horn(clausify(parse("p | q")))


def test_dimacs_export_and_import():
    cs = ClauseSet.from_lists([["p", "~q"], ["q", "r"], ["~r"]])
    text = to_dimacs(cs)
    lines = text.splitlines()
    assert lines[:4] == ["c 1 p", "c 2 q", "c 3 r", "p cnf 3 3"]
    assert lines[4] == "1 -2 0"
    assert parse_dimacs(text).clauses == cs.clauses


def test_dimacs_without_names():
    cs = parse_dimacs("p cnf 2 2\n1 -2 0\n2 0\n")
    assert cs.atoms() == ["x1", "x2"]


def test_dimacs_contradiction_and_empty_set():
    assert to_dimacs(ClauseSet.from_lists([["p"], ["~p"]])) == "c 1 p\np cnf 1 2\n1 0\n-1 0\n"
    assert to_dimacs(ClauseSet()) == "p cnf 0 0\n"


def test_tseitin_fresh_atoms_for_two_clauses():
    cs = tseitin(parse("(p | q) & (r -> s)"))
    assert cs.fresh.tseitin_atoms == ("_t1", "_t2", "_t3")
    assert len(cs) == 10
    assert to_dimacs(cs).splitlines()[7] == "p cnf 7 10"


def _random_clause_set(rng) -> ClauseSet:
    lists = []
    for _ in range(rng.randint(1, 12)):
        width = rng.randint(1, 3)
        lists.append([("~" if rng.random() < 0.5 else "") + rng.choice("pqrst") for _ in range(width)])
    return ClauseSet.from_lists(lists)


def test_dimacs_round_trip_keeps_models(rng):
    for _ in range(100):
        cs = _random_clause_set(rng)
        again = parse_dimacs(to_dimacs(cs))
        assert bool(dpll(again)) == bool(dpll(cs))
        models = {frozenset(m.items()) for m in enumerate_models(cs, 64)}
        assert {frozenset(m.items()) for m in enumerate_models(again, 64)} == models


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
