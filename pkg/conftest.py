"""
Shared pytest fixtures - isolated settings and seeded formula generators.
"""

import random
from typing import List

import pytest

from vlogic.config_manager import ConfigManager, set_config
from vlogic.formula import (
    And, Atom, Bottom, Const, Exists, Forall, Formula, Func, Iff, Imp, Not, Or, Term, Top, Var,
)

PROP_ATOMS = ("p", "q", "r")
BINARY = (And, Or, Imp, Iff)
MONADIC_PREDICATES = ("P", "Q", "R")


@pytest.fixture(autouse=True)
def isolated_config(tmp_path):
    """Every test runs on default settings, never on ~/.velocilogic."""
    config = ConfigManager(str(tmp_path / "config"))
    config.load()
    set_config(config)
    yield config
    set_config(None)


def random_prop(rng: random.Random, depth: int, names=PROP_ATOMS) -> Formula:
    if depth == 0 or rng.random() < 0.25:
        roll = rng.random()
        if roll < 0.05:
            return Top()
        if roll < 0.1:
            return Bottom()
        return Atom(rng.choice(names))
    if rng.random() < 0.2:
        return Not(random_prop(rng, depth - 1, names))
    cls = rng.choice(BINARY)
    return cls(random_prop(rng, depth - 1, names), random_prop(rng, depth - 1, names))


def all_props(depth: int, names=PROP_ATOMS) -> List[Formula]:
    """Every formula over names with connective nesting at most depth."""
    level: List[Formula] = [Top(), Bottom()] + [Atom(n) for n in names]
    for _ in range(depth):
        level = level + [Not(f) for f in level] + [
            cls(a, b) for cls in BINARY for a in level for b in level
        ]
        level = list(dict.fromkeys(level))
    return level


def _random_term(rng: random.Random, depth: int, bound) -> Term:
    roll = rng.random()
    if depth > 0 and roll < 0.2:
        return Func("f", (_random_term(rng, depth - 1, bound),))
    if bound and roll < 0.7:
        return Var(rng.choice(sorted(bound)))
    return Const(rng.choice(("a", "b")))


def random_sentence(rng: random.Random, depth: int, bound=frozenset()) -> Formula:
    """First-order sentence over P/1, R/2, f/1 and constants a, b; binders are x and y."""
    if depth == 0 or rng.random() < 0.2:
        if rng.random() < 0.5:
            return Atom("P", (_random_term(rng, 1, bound),))
        return Atom("R", (_random_term(rng, 1, bound), _random_term(rng, 1, bound)))
    roll = rng.random()
    if roll < 0.3:
        var = rng.choice(("x", "y"))
        cls = Forall if rng.random() < 0.5 else Exists
        return cls(var, random_sentence(rng, depth - 1, bound | {var}))
    if roll < 0.45:
        return Not(random_sentence(rng, depth - 1, bound))
    cls = rng.choice(BINARY)
    return cls(random_sentence(rng, depth - 1, bound), random_sentence(rng, depth - 1, bound))


def random_monadic_sentence(rng: random.Random, depth: int, preds=MONADIC_PREDICATES,
                            quantifiers: int = 2) -> Formula:
    """Constant-free sentence over unary predicates with at most `quantifiers` binders."""
    budget = [quantifiers]

    def build(d: int, bound: frozenset) -> Formula:
        if not bound or (budget[0] and d > 0 and rng.random() < 0.3):
            budget[0] -= 1
            var = rng.choice(("x", "y"))
            cls = Forall if rng.random() < 0.5 else Exists
            return cls(var, build(d - 1, bound | {var}))
        if d <= 0 or rng.random() < 0.25:
            return Atom(rng.choice(preds), (Var(rng.choice(sorted(bound))),))
        if rng.random() < 0.2:
            return Not(build(d - 1, bound))
        cls = rng.choice(BINARY)
        return cls(build(d - 1, bound), build(d - 1, bound))

    return build(depth, frozenset())


@pytest.fixture
def rng():
    return random.Random(20241019)
