#!/usr/bin/env python3
"""
Tests for Datalog parsing, fixpoint evaluation and closed-world queries.

Run with: pytest test_datalog.py -v
"""

import sys
from collections import deque
from pathlib import Path
from typing import Dict, List, Set, Tuple

import pytest

from vlogic.datalog import (
    DatalogProgram, FunctionSymbolError, RangeRestrictionError, UnknownPredicateError,
    cwa_complement, fixpoint, format_binding, herbrand_interpretation, load_program,
    naive_fixpoint, parse_program, parse_query, query,
)
from vlogic.errors import ArityError, FormulaSyntaxError
from vlogic.formula import Atom, Const
from vlogic.normalform import is_horn
from vlogic.semantics import eval_fol

REACH = Path(__file__).parent / "vlogic" / "data" / "reach.dl"


@pytest.fixture
def reach() -> DatalogProgram:
    return load_program(REACH)


def _chain(n: int) -> DatalogProgram:
    edges = "".join(f"edge(n{i}, n{i + 1}).\n" for i in range(n))
    return parse_program(edges + "path(X, Y) :- edge(X, Y).\n"
                                 "path(X, Y) :- edge(X, Z), path(Z, Y).\n")


def test_reachability_fixpoint(reach):
    facts = fixpoint(reach)
    assert facts.relation("path") == {("a", "b"), ("b", "c"), ("a", "c")}
    assert len(facts) == 5
    assert Atom("path", (Const("a"), Const("c"))) in facts
    assert "path(a, c)." in facts.to_text()


def test_query_bindings(reach):
    assert query(reach, parse_query("path(a, Y)")) == [{"Y": "b"}, {"Y": "c"}]
    assert query(reach, parse_query("path(X, c)?")) == [{"X": "a"}, {"X": "b"}]
    assert len(query(reach, parse_query("path(X, Y)"))) == 3


def test_ground_queries(reach):
    assert query(reach, parse_query("path(a, c)")) == [{}]
    assert query(reach, parse_query("path(c, a)")) == []


def test_repeated_query_variable(reach):
    assert query(reach, parse_query("path(X, X)")) == []


def test_semi_naive_matches_naive():
    program = _chain(30)
    semi = fixpoint(program)
    assert semi == naive_fixpoint(program)
    assert len(semi.relation("path")) == 30 * 31 // 2


def _random_dag(rng) -> Tuple[int, List[Tuple[int, int]]]:
    n = rng.randint(2, 50)
    edges = [(0, 1)] + [(i, j) for i in range(n) for j in range(i + 1, n)
                        if (i, j) != (0, 1) and rng.random() < 2 / n]
    return n, edges


def _reachable(n: int, edges: List[Tuple[int, int]]) -> Set[Tuple[str, str]]:
    succ: Dict[int, List[int]] = {i: [] for i in range(n)}
    for i, j in edges:
        succ[i].append(j)
    pairs = set()
    for start in range(n):
        seen: Set[int] = set()
        todo = deque(succ[start])
        while todo:
            node = todo.popleft()
            if node not in seen:
                seen.add(node)
                todo.extend(succ[node])
        pairs |= {(f"n{start}", f"n{node}") for node in seen}
    return pairs


def test_closure_matches_breadth_first_search(rng):
    for _ in range(50):
        n, edges = _random_dag(rng)
        text = "".join(f"edge(n{i}, n{j}).\n" for i, j in edges)
        program = parse_program(text + "path(X, Y) :- edge(X, Y).\n"
                                       "path(X, Y) :- edge(X, Z), path(Z, Y).\n")
        semi = fixpoint(program)
        assert semi.relation("path") == _reachable(n, edges)
        assert semi.to_text() == naive_fixpoint(program).to_text()


def test_cwa_complement(reach):
    missing = cwa_complement(reach, "path")
    assert len(missing) == 9 - 3
    assert Atom("path", (Const("c"), Const("a"))) in missing
    assert Atom("path", (Const("a"), Const("b"))) not in missing


def test_propositional_program():
    program = parse_program("rain.\nwet :- rain.\nslippery :- wet, cold.\n")
    assert query(program, parse_query("wet")) == [{}]
    assert query(program, parse_query("slippery")) == []


def test_constants_in_rule_bodies(reach):
    program = parse_program(str(reach) + "\nfrom_a(X) :- path(a, X).\n")
    assert query(program, parse_query("from_a(X)")) == [{"X": "b"}, {"X": "c"}]


def test_with_facts(reach):
    bigger = reach.with_facts([Atom("edge", (Const("c"), Const("d")))])
    assert query(bigger, parse_query("path(a, d)")) == [{}]
    assert query(reach, parse_query("path(a, d)")) == []


def test_format_binding():
    assert format_binding({}) == "true"
    assert format_binding({"Y": "b", "X": "a"}) == "X = a, Y = b"


def test_rules_hold_in_the_fixpoint_model(reach):
    facts = fixpoint(reach)
    model = herbrand_interpretation(reach, facts)
    assert model.domain_size == 3
    for rule in reach.rules:
        assert eval_fol(rule.to_formula(), model)
    assert is_horn(reach.to_clause_set())


def test_range_restriction():
    with pytest.raises(RangeRestrictionError):
        parse_program("p(X) :- q(Y).\nq(a).\n")
    with pytest.raises(RangeRestrictionError):
        parse_program("p(X).\n")


def test_function_symbols_rejected():
    with pytest.raises(FunctionSymbolError):
        parse_program("p(f(a)).\n")
    with pytest.raises(FunctionSymbolError):
        parse_query("p(f(X))")


def test_arity_clash():
    with pytest.raises(ArityError):
        parse_program("p(a).\np(a, b).\n")


def test_query_guards(reach):
    with pytest.raises(UnknownPredicateError) as exc:
        query(reach, parse_query("ancestor(X, Y)"))
    assert exc.value.pred == "ancestor"
    with pytest.raises(ArityError):
        query(reach, parse_query("path(X)"))
    with pytest.raises(UnknownPredicateError):
        cwa_complement(reach, "nope")


def test_syntax_error():
    with pytest.raises(FormulaSyntaxError):
        parse_program("edge(a b).\n")
    with pytest.raises(FormulaSyntaxError):
        parse_program("edge(a, b)\n")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
