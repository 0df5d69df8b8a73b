"""
Formula - Term and formula ASTs, printing, variable bookkeeping, substitution.

All nodes are immutable frozen dataclasses, so formulas hash, compare
structurally and can be shared freely. And/Or/Imp/Iff stay binary; nothing
in this module flattens or reorders operands.
"""

import re
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, Mapping, Optional, Set, Tuple, Union

from .errors import ArityError


# ─────────────────────────────────────────────────────────────────────────────
# Terms
# ─────────────────────────────────────────────────────────────────────────────

@dataclass(frozen=True, slots=True)
class Var:
    """Variable occurrence."""
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class Const:
    """Constant symbol."""
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class Func:
    """Function application, arity >= 1."""
    name: str
    args: Tuple['Term', ...]

    def __str__(self) -> str:
        return f"{self.name}({', '.join(str(a) for a in self.args)})"


Term = Union[Var, Const, Func]


def term_vars(t: Term) -> Set[str]:
    """Names of the variables occurring in a term."""
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, Func):
        out: Set[str] = set()
        for a in t.args:
            out |= term_vars(a)
        return out
    return set()


def term_depth(t: Term) -> int:
    """Nesting depth of function applications (variables and constants are 0)."""
    if isinstance(t, Func):
        return 1 + max(term_depth(a) for a in t.args)
    return 0


def subst_term(t: Term, mapping: Mapping[str, Term]) -> Term:
    """Apply a variable mapping to a term simultaneously."""
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    if isinstance(t, Func):
        return Func(t.name, tuple(subst_term(a, mapping) for a in t.args))
    return t


# ─────────────────────────────────────────────────────────────────────────────
# Formulas
# ─────────────────────────────────────────────────────────────────────────────

class Formula:
    """Base of every formula node; adds operator sugar and text rendering."""
    __slots__ = ()

    def __str__(self) -> str:
        return to_text(self)

    def __and__(self, other: 'Formula') -> 'Formula':
        return And(self, other)

    def __or__(self, other: 'Formula') -> 'Formula':
        return Or(self, other)

    def __invert__(self) -> 'Formula':
        return Not(self)

    def __rshift__(self, other: 'Formula') -> 'Formula':
        return Imp(self, other)


@dataclass(frozen=True, slots=True)
class Top(Formula):
    pass


@dataclass(frozen=True, slots=True)
class Bottom(Formula):
    pass


@dataclass(frozen=True, slots=True)
class Atom(Formula):
    """Predicate applied to terms; propositional atoms have no args."""
    pred: str
    args: Tuple[Term, ...] = ()


@dataclass(frozen=True, slots=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True, slots=True)
class BinaryFormula(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class And(BinaryFormula):
    pass


@dataclass(frozen=True, slots=True)
class Or(BinaryFormula):
    pass


@dataclass(frozen=True, slots=True)
class Imp(BinaryFormula):
    pass


@dataclass(frozen=True, slots=True)
class Iff(BinaryFormula):
    pass


@dataclass(frozen=True, slots=True)
class Quantifier(Formula):
    var: str
    body: Formula


@dataclass(frozen=True, slots=True)
class Forall(Quantifier):
    pass


@dataclass(frozen=True, slots=True)
class Exists(Quantifier):
    pass


TOP = Top()
BOTTOM = Bottom()


def prop(name: str) -> Atom:
    """Propositional atom shorthand."""
    return Atom(name)


def conjoin(formulas: Iterable[Formula]) -> Formula:
    """Left-nested conjunction; empty input gives true."""
    out: Optional[Formula] = None
    for f in formulas:
        out = f if out is None else And(out, f)
    return TOP if out is None else out


def disjoin(formulas: Iterable[Formula]) -> Formula:
    """Left-nested disjunction; empty input gives false."""
    out: Optional[Formula] = None
    for f in formulas:
        out = f if out is None else Or(out, f)
    return BOTTOM if out is None else out


# ─────────────────────────────────────────────────────────────────────────────
# Signature
# ─────────────────────────────────────────────────────────────────────────────

@dataclass
class Signature:
    """Predicate/function arities and constant names of a formula set."""
    predicates: Dict[str, int] = field(default_factory=dict)
    functions: Dict[str, int] = field(default_factory=dict)
    constants: Set[str] = field(default_factory=set)

    def add_predicate(self, name: str, arity: int):
        known = self.predicates.setdefault(name, arity)
        if known != arity:
            raise ArityError(name, known, arity)

    def add_function(self, name: str, arity: int):
        if name in self.constants:
            raise ArityError(name, 0, arity)
        known = self.functions.setdefault(name, arity)
        if known != arity:
            raise ArityError(name, known, arity)

    def add_constant(self, name: str):
        if name in self.functions:
            raise ArityError(name, self.functions[name], 0)
        self.constants.add(name)

    def merge(self, other: 'Signature') -> 'Signature':
        """Union of two signatures; conflicting arities raise ArityError."""
        out = Signature(dict(self.predicates), dict(self.functions), set(self.constants))
        for name, arity in other.predicates.items():
            out.add_predicate(name, arity)
        for name, arity in other.functions.items():
            out.add_function(name, arity)
        for name in other.constants:
            out.add_constant(name)
        return out

    def symbols(self) -> Set[str]:
        return set(self.predicates) | set(self.functions) | self.constants

    def __str__(self) -> str:
        parts = [f"{p}/{a}" for p, a in sorted(self.predicates.items())]
        parts += [f"{g}/{a}" for g, a in sorted(self.functions.items())]
        parts += sorted(self.constants)
        return ", ".join(parts)


def _collect_term(t: Term, sig: Signature):
    if isinstance(t, Const):
        sig.add_constant(t.name)
    elif isinstance(t, Func):
        sig.add_function(t.name, len(t.args))
        for a in t.args:
            _collect_term(a, sig)


def signature_of(*formulas: Formula) -> Signature:
    """Extract the signature, checking that every symbol keeps one arity."""
    sig = Signature()
    for f in formulas:
        for node in walk(f):
            if isinstance(node, Atom):
                sig.add_predicate(node.pred, len(node.args))
                for a in node.args:
                    _collect_term(a, sig)
    return sig


# ─────────────────────────────────────────────────────────────────────────────
# Traversal and variable bookkeeping
# ─────────────────────────────────────────────────────────────────────────────

def walk(f: Formula) -> Iterator[Formula]:
    """Pre-order iteration over every subformula."""
    stack = [f]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, BinaryFormula):
            stack.append(node.right)
            stack.append(node.left)
        elif isinstance(node, (Not, Quantifier)):
            stack.append(node.body)


def free_vars(f: Formula) -> FrozenSet[str]:
    """Variables with at least one occurrence not bound by a quantifier."""
    if isinstance(f, Atom):
        out: Set[str] = set()
        for a in f.args:
            out |= term_vars(a)
        return frozenset(out)
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, BinaryFormula):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, Quantifier):
        return free_vars(f.body) - {f.var}
    return frozenset()


def is_sentence(f: Formula) -> bool:
    return not free_vars(f)


def is_propositional(f: Formula) -> bool:
    """No quantifiers and every atom 0-ary."""
    for node in walk(f):
        if isinstance(node, Quantifier):
            return False
        if isinstance(node, Atom) and node.args:
            return False
    return True


def atoms(f: Formula) -> Set[str]:
    """Names of the 0-ary atoms of a formula."""
    return {n.pred for n in walk(f) if isinstance(n, Atom) and not n.args}


def names_in(f: Formula) -> Set[str]:
    """Every identifier used as a variable, binder or term symbol."""
    out: Set[str] = set()

    def visit_term(t: Term):
        out.add(t.name)
        if isinstance(t, Func):
            for a in t.args:
                visit_term(a)

    for node in walk(f):
        if isinstance(node, Atom):
            for a in node.args:
                visit_term(a)
        elif isinstance(node, Quantifier):
            out.add(node.var)
    return out


_TRAILING_DIGITS = re.compile(r"\d+$")


def fresh_name(base: str, used: Iterable[str]) -> str:
    """Smallest positive integer suffix on base that is not already used (y -> y1)."""
    used = set(used)
    root = _TRAILING_DIGITS.sub("", base) or base
    i = 1
    while f"{root}{i}" in used:
        i += 1
    return f"{root}{i}"


# ─────────────────────────────────────────────────────────────────────────────
# Substitution
# ─────────────────────────────────────────────────────────────────────────────

def substitute(f: Formula, v: str, t: Term) -> Formula:
    """Replace free occurrences of v by t, renaming binders that would capture."""
    return substitute_many(f, {v: t})


def substitute_many(f: Formula, mapping: Mapping[str, Term]) -> Formula:
    """Simultaneous capture-avoiding substitution."""
    live = {v: t for v, t in mapping.items() if v in free_vars(f)}
    if not live:
        return f
    if isinstance(f, Atom):
        return Atom(f.pred, tuple(subst_term(a, live) for a in f.args))
    if isinstance(f, Not):
        return Not(substitute_many(f.body, live))
    if isinstance(f, BinaryFormula):
        return type(f)(substitute_many(f.left, live), substitute_many(f.right, live))
    if isinstance(f, Quantifier):
        live.pop(f.var, None)
        if not live:
            return f
        incoming: Set[str] = set()
        for t in live.values():
            incoming |= term_vars(t)
        if f.var not in incoming:
            return type(f)(f.var, substitute_many(f.body, live))
        renamed = fresh_name(f.var, names_in(f.body) | incoming | set(live))
        inner = dict(live)
        inner[f.var] = Var(renamed)
        return type(f)(renamed, substitute_many(f.body, inner))
    return f


# ─────────────────────────────────────────────────────────────────────────────
# Printing
# ─────────────────────────────────────────────────────────────────────────────

_SYMBOLS = {And: "&", Or: "|", Imp: "->", Iff: "<->"}

# Binding strength and the minimum strength required of (left, right) operands
_PREC = {Iff: 1, Imp: 2, Or: 3, And: 4}
_OPERAND_PREC = {Iff: (1, 2), Imp: (3, 2), Or: (3, 4), And: (4, 5)}
_UNARY_PREC = 5
_ATOMIC_PREC = 6


def _atom_text(a: Atom) -> str:
    if not a.args:
        return a.pred
    return f"{a.pred}({', '.join(str(t) for t in a.args)})"


def _render(f: Formula, min_prec: int, followed: bool) -> str:
    """
    Render f inside a context that needs at least min_prec binding strength.

    followed is true when more formula text comes after f in its context; a
    quantifier body extends as far right as possible, so a followed
    quantifier needs parentheses.
    """
    if isinstance(f, Atom):
        return _atom_text(f)
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bottom):
        return "false"
    if isinstance(f, Not):
        return "~" + _render(f.body, _UNARY_PREC, followed)
    if isinstance(f, Quantifier):
        word = "forall" if isinstance(f, Forall) else "exists"
        text = f"{word} {f.var}. {_render(f.body, 1, False)}"
        return f"({text})" if followed else text
    if isinstance(f, BinaryFormula):
        kind = type(f)
        prec = _PREC[kind]
        wrap = prec < min_prec
        left_min, right_min = _OPERAND_PREC[kind]
        left = _render(f.left, left_min, True)
        right = _render(f.right, right_min, followed and not wrap)
        text = f"{left} {_SYMBOLS[kind]} {right}"
        return f"({text})" if wrap else text
    raise TypeError(f"not a formula: {f!r}")


def to_text(f: Formula) -> str:
    """Minimal-parenthesis ASCII rendering; parse(to_text(f)) == f."""
    return _render(f, 1, False)


def structure(f: Formula) -> str:
    """Constructor-style rendering, e.g. Not(Forall(t, Imp(...)))."""
    if isinstance(f, Atom):
        return _atom_text(f)
    if isinstance(f, Top):
        return "Top"
    if isinstance(f, Bottom):
        return "Bottom"
    if isinstance(f, Not):
        return f"Not({structure(f.body)})"
    if isinstance(f, Quantifier):
        return f"{type(f).__name__}({f.var}, {structure(f.body)})"
    if isinstance(f, BinaryFormula):
        return f"{type(f).__name__}({structure(f.left)}, {structure(f.right)})"
    raise TypeError(f"not a formula: {f!r}")
