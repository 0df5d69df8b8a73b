#!/usr/bin/env python3
"""
Tests for unification, the given-clause prover and the validity/equivalence wrappers.

Run with: pytest test_resolution.py -v
"""

import sys

import pytest

from conftest import random_prop
from vlogic.errors import NotPropositionalError, NotSentenceError
from vlogic.formula import Const, Func, Var
from vlogic.normalform import Clause, ClauseSet, Literal, clausify
from vlogic.parser import parse, parse_term
from vlogic.resolution import (
    Equivalent, FailureKind, Input, ProverLimits, Proved, Refuted, ResourceOut, Resolvent,
    Saturated, Unknown, UnifyFailure, apply_subst, prove_equiv, prove_valid, resolve_fol,
    resolve_prop, subsumes, unify,
)
from vlogic.semantics import truth_table

x = Var("x")
a, b = Const("a"), Const("b")


# ─────────────────────────────────────────────────────────────────────────────
# Unification
# ─────────────────────────────────────────────────────────────────────────────

def test_unify_binds_both_sides():
    sigma = unify(parse_term("f(x, b)", ["x"]), parse_term("f(a, y)", ["y"]))
    assert sigma == {"x": a, "y": b}


def test_unifier_is_idempotent():
    t1 = parse_term("g(x, f(y))", ["x", "y"])
    t2 = parse_term("g(f(z), x)", ["x", "z"])
    sigma = unify(t1, t2)
    assert not isinstance(sigma, UnifyFailure)
    assert apply_subst(t1, sigma) == apply_subst(t2, sigma)
    for t in sigma.values():
        assert apply_subst(t, sigma) == t


def test_unify_identical_terms_gives_empty_substitution():
    assert unify(x, x) == {}
    assert not isinstance(unify(a, a), UnifyFailure)


def test_unify_clash():
    result = unify(parse_term("f(a)"), parse_term("g(a)"))
    assert isinstance(result, UnifyFailure)
    assert result.kind is FailureKind.CLASH
    assert isinstance(unify(a, b), UnifyFailure)


def test_unify_occurs_check():
    result = unify(x, Func("f", (x,)))
    assert isinstance(result, UnifyFailure)
    assert result.kind is FailureKind.OCCURS_CHECK


FUNCTIONS = (("f", 1), ("g", 2))
TERM_VARS = ("x", "y", "z")


def _random_term(rng, depth, variables=TERM_VARS):
    if depth == 0 or rng.random() < 0.3:
        if variables and rng.random() < 0.6:
            return Var(rng.choice(variables))
        return Const(rng.choice(("a", "b")))
    name, arity = rng.choice(FUNCTIONS)
    return Func(name, tuple(_random_term(rng, depth - 1, variables) for _ in range(arity)))


def _generalize(rng, t, prefix, counter):
    """t with random subterms replaced by distinct fresh variables prefix1, prefix2, ..."""
    if rng.random() < 0.25:
        counter[0] += 1
        return Var(f"{prefix}{counter[0]}")
    if isinstance(t, Func):
        return Func(t.name, tuple(_generalize(rng, arg, prefix, counter) for arg in t.args))
    return t


def _containing(rng, v, depth):
    """A compound term with v somewhere below the root."""
    name, arity = rng.choice(FUNCTIONS)
    args = [_random_term(rng, depth - 1) for _ in range(arity)]
    slot = rng.randrange(arity)
    args[slot] = v if depth <= 1 or rng.random() < 0.5 else _containing(rng, v, depth - 1)
    return Func(name, tuple(args))


def _cyclic_pair(rng, shape):
    v = Var(rng.choice(TERM_VARS))
    if shape == 0:
        return v, _containing(rng, v, 3)
    if shape == 1:
        w = Var(rng.choice([n for n in TERM_VARS if n != v.name]))
        return Func("g", (v, v)), Func("g", (w, _containing(rng, w, 3)))
    k = _random_term(rng, 2, ())
    return Func("h", (k, v)), Func("h", (k, _containing(rng, v, 3)))


def test_generated_unifiable_pairs(rng):
    for _ in range(1000):
        t = _random_term(rng, 4)
        t1 = _generalize(rng, t, "u", [0])
        t2 = _generalize(rng, t, "w", [0])
        sigma = unify(t1, t2)
        assert not isinstance(sigma, UnifyFailure), f"{t1} / {t2}"
        assert apply_subst(t1, sigma) == apply_subst(t2, sigma)
        for value in sigma.values():
            assert apply_subst(value, sigma) == value


def test_generated_cyclic_pairs_fail_occurs_check(rng):
    for i in range(200):
        t1, t2 = _cyclic_pair(rng, i % 3)
        result = unify(t1, t2)
        assert isinstance(result, UnifyFailure), f"{t1} / {t2}"
        assert result.kind is FailureKind.OCCURS_CHECK


def test_subsumption():
    c = Clause.of(Literal(True, "P", (x,)))
    d = Clause.of(Literal(True, "P", (a,)), Literal(False, "Q", (b,)))
    assert subsumes(c, d)
    assert not subsumes(d, c)
    two = Clause.of(Literal(True, "R", (x, x)))
    assert not subsumes(two, Clause.of(Literal(True, "R", (a, b))))


# ─────────────────────────────────────────────────────────────────────────────
# Prover
# ─────────────────────────────────────────────────────────────────────────────

def test_propositional_refutation():
    cs = ClauseSet.from_lists([["p", "q"], ["~p", "q"], ["p", "~q"], ["~p", "~q"]])
    result = resolve_prop(cs)
    assert isinstance(result, Refuted)
    proof = result.proof
    assert proof.steps[-1].clause.is_empty()
    assert proof.replay(cs.clauses)


def test_propositional_saturation_means_satisfiable():
    result = resolve_prop(ClauseSet.from_lists([["p", "q"], ["~p"]]))
    assert isinstance(result, Saturated)
    assert not result


def test_resolve_prop_rejects_first_order():
    with pytest.raises(NotPropositionalError):
        resolve_prop(clausify(parse("forall x. P(x)")))


def test_resolve_prop_agrees_with_truth_table(rng):
    for _ in range(400):
        f = random_prop(rng, 3, ("p", "q", "r", "s"))
        cs = clausify(f)
        result = resolve_prop(cs)
        assert isinstance(result, (Refuted, Saturated)), str(f)
        assert isinstance(result, Refuted) == (not truth_table(f).is_satisfiable()), str(f)
        if isinstance(result, Refuted):
            assert result.proof.replay(cs.clauses)


def test_first_order_refutation_with_unifier():
    cs = clausify(parse("(forall x. (P(x) -> Q(x))) & P(a) & ~Q(a)"))
    result = resolve_fol(cs)
    assert isinstance(result, Refuted)
    assert result.proof.replay()
    resolvents = [s.justification for s in result.proof.steps if isinstance(s.justification, Resolvent)]
    assert any(j.unifier for j in resolvents)


def test_proof_render_format():
    cs = ClauseSet.from_lists([["p"], ["~p"]])
    proof = resolve_prop(cs).proof
    assert proof.render().splitlines() == ["1. {p} [input]", "2. {~p} [input]", "3. {} [res 2,1 {}]"]
    assert proof.resolution_steps == 1


def test_tampered_proof_fails_replay():
    cs = ClauseSet.from_lists([["p", "q"], ["~p"], ["~q"]])
    proof = resolve_prop(cs).proof
    assert proof.replay()
    assert not proof.replay([Clause.of(Literal(True, "p"))])
    proof.steps[1].clause = Clause.of(Literal(False, "r"))
    assert not proof.replay()


def test_factoring_is_needed():
    # {P(x), P(y)} and {~P(u), ~P(v)} only refute after factoring
    cs = ClauseSet.from_lists([["P(x)", "P(y)"], ["~P(u)", "~P(v)"]], ["x", "y", "u", "v"])
    result = resolve_fol(cs)
    assert isinstance(result, Refuted)
    assert result.proof.replay()


def test_step_limit_gives_resource_out():
    # an infinite chain of successors never saturates
    cs = clausify(parse("P(a) & (forall x. (P(x) -> P(f(x)))) & ~P(b)"))
    result = resolve_fol(cs, ProverLimits(max_steps=200, max_clause_length=12, max_term_depth=50))
    assert isinstance(result, ResourceOut)


def test_term_depth_limit_gives_resource_out():
    cs = clausify(parse("P(a) & (forall x. (P(x) -> P(f(x)))) & ~P(b)"))
    result = resolve_fol(cs, ProverLimits(max_steps=100_000, max_clause_length=12, max_term_depth=3))
    assert isinstance(result, ResourceOut)
    assert "limit" in result.reason


def test_limits_validate():
    with pytest.raises(ValueError):
        ProverLimits(max_steps=0)


def test_limits_from_settings(isolated_config):
    isolated_config.settings.max_steps = 77
    assert ProverLimits.from_settings().max_steps == 77


# ─────────────────────────────────────────────────────────────────────────────
# Validity and equivalence
# ─────────────────────────────────────────────────────────────────────────────

def test_prove_valid_classic_syllogism():
    f = parse("(forall x. (H(x) -> M(x))) & H(s) -> M(s)")
    result = prove_valid(f)
    assert isinstance(result, Proved)
    assert isinstance(result.proof.steps[0].justification, Input)


def test_prove_valid_quantifier_swap():
    assert prove_valid(parse("(exists x. forall y. R(x, y)) -> forall y. exists x. R(x, y)"))


def test_invalid_formula_saturates():
    result = prove_valid(parse("(forall y. exists x. R(x, y)) -> exists x. forall y. R(x, y)"),
                         ProverLimits(max_steps=2000, max_clause_length=6, max_term_depth=3))
    assert isinstance(result, Unknown)


def test_invalid_propositional_formula_is_saturated():
    result = prove_valid(parse("p -> q"))
    assert isinstance(result, Unknown)
    assert result.status == "saturated"


def test_prove_valid_needs_a_sentence():
    with pytest.raises(NotSentenceError):
        prove_valid(parse("P(x)", ["x"]))


def test_prove_equiv_de_morgan_for_quantifiers():
    result = prove_equiv(parse("~forall x. P(x)"), parse("exists x. ~P(x)"))
    assert isinstance(result, Equivalent)
    assert result.forward.replay()
    assert result.backward.replay()


def test_prove_equiv_reports_failing_direction():
    result = prove_equiv(parse("forall x. P(x)"), parse("exists x. P(x)"))
    assert isinstance(result, Unknown)
    assert result.detail.startswith("second implies first")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
