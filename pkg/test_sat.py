#!/usr/bin/env python3
"""
Tests for the DPLL solver and model enumeration.

Run with: pytest test_sat.py -v
"""

import sys

import pytest

from conftest import random_prop
from vlogic.errors import NotPropositionalError
from vlogic.normalform import ClauseSet, clausify, dimacs_variables, parse_dimacs, tseitin
from vlogic.parser import parse
from vlogic.sat import (
    Sat, Unsat, check_model, dpll, enumerate_models, model_lines, solve_formula, solve_int,
)
from vlogic.semantics import eval_prop, truth_table


def test_trivial_instances():
    assert isinstance(dpll(ClauseSet()), Sat)
    assert isinstance(dpll(ClauseSet.from_lists([[]])), Unsat)


def test_unit_propagation_chain():
    cs = ClauseSet.from_lists([["p"], ["~p", "q"], ["~q", "r"]])
    result = dpll(cs)
    assert result.model == {"p": True, "q": True, "r": True}


def test_unsat_pigeonhole_three_into_two():
    # pigeon i sits in hole j: x<i><j>
    clauses = [[f"x{i}{j}" for j in (1, 2)] for i in (1, 2, 3)]
    for j in (1, 2):
        for a in (1, 2, 3):
            for b in range(a + 1, 4):
                clauses.append([f"~x{a}{j}", f"~x{b}{j}"])
    assert not dpll(ClauseSet.from_lists(clauses))


def test_model_is_total_and_checks():
    cs = ClauseSet.from_lists([["p", "q"], ["~p", "r"], ["s", "~s"]])
    result = dpll(cs)
    assert set(result.model) == {"p", "q", "r", "s"}
    assert check_model(cs, result.model)


def test_solve_int_returns_none_on_conflict():
    assert solve_int([frozenset({1}), frozenset({-1})]) is None
    assert solve_int([frozenset({1, 2}), frozenset({-1})]) == {1: False, 2: True}


def test_agrees_with_truth_table(rng):
    for _ in range(200):
        f = random_prop(rng, 5)
        result = solve_formula(f)
        assert bool(result) == truth_table(f).is_satisfiable(), str(f)
        if result:
            assert eval_prop(f, result.model)


def test_enumerate_models_counts(rng):
    for _ in range(60):
        f = random_prop(rng, 4)
        table = truth_table(f)
        cs = tseitin(f)
        source = sorted(table.atoms)
        models = enumerate_models(cs, 64)
        restricted = {tuple(m.get(a, False) for a in source) for m in models}
        assert len(restricted) == len(models)
        # atoms missing from the clause set are free, so each found model stands for 2^missing rows
        missing = len(set(source) - set(cs.atoms()))
        assert len(models) * (1 << missing) == table.model_count


def test_enumerate_models_respects_limit():
    cs = ClauseSet.from_lists([["p", "q", "r"]])
    assert len(enumerate_models(cs, 3)) == 3
    assert len(enumerate_models(cs, 100)) == 7
    with pytest.raises(ValueError):
        enumerate_models(cs, 0)


def test_distinct_models():
    models = enumerate_models(ClauseSet.from_lists([["p", "q"]]), 10)
    assert sorted(tuple(sorted(m.items())) for m in models) == [
        (("p", False), ("q", True)),
        (("p", True), ("q", False)),
        (("p", True), ("q", True)),
    ]


def test_dimacs_input():
    result = dpll(parse_dimacs("p cnf 2 3\n1 2 0\n-1 0\n-2 0\n"))
    assert isinstance(result, Unsat)


def test_first_order_clauses_are_rejected():
    with pytest.raises(NotPropositionalError):
        dpll(clausify(parse("forall x. P(x)")))


def test_model_lines():
    index = {f"x{i}": i for i in range(1, 13)}
    model = {name: i % 2 == 1 for name, i in index.items()}
    assert model_lines(model, index) == ["v 1 -2 3 -4 5 -6 7 -8 9 -10", "v 11 -12 0"]
    assert model_lines({}, {}) == ["v 0"]


def test_declared_variables_follow_header():
    text = "c 2 wet\np cnf 3 1\n2 0\n"
    assert dimacs_variables(text) == {"x1": 1, "wet": 2, "x3": 3}
    assert parse_dimacs(text).atoms() == ["wet"]


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
