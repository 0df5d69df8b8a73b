#!/usr/bin/env python3
"""
Tests for the reduced ordered BDD manager.

Run with: pytest test_bdd.py -v
"""

import sys
from itertools import product

import pytest

from conftest import all_props, random_prop
from vlogic.bdd import (
    AtomNotInOrderError, BddManager, BddOp, ManagerMismatchError, apply, build,
    exists_quantify, restrict, satcount,
)
from vlogic.errors import NotPropositionalError
from vlogic.formula import atoms
from vlogic.parser import parse
from vlogic.semantics import eval_prop, truth_table, tt_equivalent

ORDER = ["p", "q", "r"]


def _evaluate(mgr, u, assignment) -> bool:
    while not u.is_terminal:
        name, low, high = mgr.node(u)
        u = high if assignment[name] else low
    return u == mgr.true


def _assignments(names):
    for bits in product((False, True), repeat=len(names)):
        yield dict(zip(names, bits))


def test_terminals_and_variables():
    mgr = BddManager(ORDER)
    assert mgr.node_count(mgr.false) == 1
    assert mgr.node_count(mgr.true) == 1
    p = mgr.var("p")
    assert mgr.node(p) == ("p", mgr.false, mgr.true)
    assert mgr.var("p") == p


def test_equivalent_formulas_share_a_node():
    mgr = BddManager(ORDER)
    assert mgr.build(parse("~(p & q)")) == mgr.build(parse("~p | ~q"))
    assert mgr.build(parse("p -> q")) == mgr.build(parse("~q -> ~p"))
    assert mgr.build(parse("p | ~p")) == mgr.true
    assert mgr.build(parse("q & ~q")) == mgr.false


def test_canonicity_matches_truth_tables(rng):
    mgr = BddManager(ORDER)
    pool = [random_prop(rng, 3) for _ in range(40)]
    built = [mgr.build(f) for f in pool]
    for i, f in enumerate(pool):
        for j in range(i + 1, len(pool)):
            assert (built[i] == built[j]) == tt_equivalent(f, pool[j]), f"{f} / {pool[j]}"
    assert mgr.check_invariants() == []


def test_canonicity_over_every_depth_one_formula():
    mgr = BddManager(ORDER)
    rows = list(_assignments(ORDER))
    by_node = {}
    for f in all_props(1):
        by_node.setdefault(mgr.build(f), set()).add(tuple(eval_prop(f, a) for a in rows))
    assert all(len(columns) == 1 for columns in by_node.values())
    assert len({next(iter(c)) for c in by_node.values()}) == len(by_node)


def test_diagram_evaluates_like_formula(rng):
    mgr = BddManager(ORDER)
    for _ in range(50):
        f = random_prop(rng, 4)
        u = mgr.build(f)
        for assignment in _assignments(ORDER):
            assert _evaluate(mgr, u, assignment) == eval_prop(f, assignment)


def test_satcount_matches_model_count(rng):
    mgr = BddManager(ORDER)
    for _ in range(100):
        f = random_prop(rng, 4)
        scale = 1 << (len(ORDER) - len(atoms(f)))
        assert mgr.satcount(mgr.build(f)) == truth_table(f).model_count * scale


def test_satcount_skips_levels():
    mgr = BddManager(["a", "b", "c", "d"])
    assert mgr.satcount(mgr.var("c")) == 8
    assert mgr.satcount(mgr.true) == 16
    assert mgr.satcount(mgr.false) == 0
    assert satcount(mgr.build(parse("a & d"))) == 4


def test_apply_operations():
    mgr = BddManager(ORDER)
    p, q = mgr.var("p"), mgr.var("q")
    assert apply(BddOp.AND, p, q) == mgr.build(parse("p & q"))
    assert apply(BddOp.IMP, p, q) == mgr.build(parse("p -> q"))
    assert apply(BddOp.IFF, p, q) == mgr.build(parse("p <-> q"))
    assert (p ^ q) == mgr.build(parse("~(p <-> q)"))
    assert (p | q) == mgr.build(parse("q | p"))
    assert ~~p == p


def test_restrict_and_quantify():
    mgr = BddManager(ORDER)
    u = mgr.build(parse("(p -> q) & (q -> r)"))
    assert restrict(u, "q", True) == mgr.build(parse("r"))
    assert restrict(u, "q", False) == mgr.build(parse("~p"))
    assert exists_quantify(u, "q") == mgr.build(parse("p -> r"))
    assert restrict(u, "r", True) == mgr.build(parse("p -> q"))


def test_restrict_agrees_with_evaluation(rng):
    mgr = BddManager(ORDER)
    for _ in range(40):
        f = random_prop(rng, 4)
        u = mgr.build(f)
        for value in (False, True):
            v = mgr.restrict(u, "q", value)
            for assignment in _assignments(ORDER):
                fixed = dict(assignment, q=value)
                assert _evaluate(mgr, v, assignment) == eval_prop(f, fixed)


def test_variable_order_changes_size():
    f = parse("x1 & y1 | x2 & y2 | x3 & y3")
    good = build(f, ["x1", "y1", "x2", "y2", "x3", "y3"])
    bad = build(f, ["x1", "x2", "x3", "y1", "y2", "y3"])
    assert good.manager.node_count(good) == 8
    assert bad.manager.node_count(bad) == 16
    assert satcount(good) == satcount(bad)


def test_default_order_is_sorted_atoms():
    u = build(parse("q & p"))
    assert u.manager.order == ["p", "q"]


def test_to_dot():
    mgr = BddManager(ORDER)
    text = mgr.to_dot(mgr.build(parse("p & q")))
    assert "digraph" in text
    assert "dashed" in text
    assert "solid" in text


def test_errors():
    with pytest.raises(ValueError):
        BddManager(["p", "p"])
    mgr = BddManager(["p"])
    with pytest.raises(AtomNotInOrderError) as exc:
        mgr.build(parse("p & q"))
    assert exc.value.missing == ["q"]
    with pytest.raises(NotPropositionalError):
        mgr.build(parse("forall x. P(x)"))
    other = BddManager(["p"])
    with pytest.raises(ManagerMismatchError):
        apply(BddOp.AND, mgr.var("p"), other.var("p"))
    with pytest.raises(ValueError):
        build(parse("p"), ["p", "q"], mgr)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
