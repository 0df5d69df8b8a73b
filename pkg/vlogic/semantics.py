"""
Semantics - Truth tables for propositional formulas, finite models for FOL.

These evaluators are the brute-force oracle the other modules are checked
against. Truth tables are evaluated column-wise with numpy; first-order
formulas are compiled once into closures and then run against many
interpretations.
"""

import itertools
import logging
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from .config_manager import settings
from .errors import (
    CapExceededError, EvaluationError, MissingAtomError, NotPropositionalError,
    TooManyAtomsError, UncoveredSymbolError,
)
from .formula import (
    And, Atom, Bottom, Const, Exists, Forall, Formula, Iff, Imp, Not, Or,
    Signature, Term, Top, Var, atoms, free_vars, is_propositional, signature_of, to_text,
)

logger = logging.getLogger(__name__)

Assignment = Dict[str, bool]
Environment = Dict[str, int]


# ─────────────────────────────────────────────────────────────────────────────
# Propositional semantics
# ─────────────────────────────────────────────────────────────────────────────

def eval_prop(f: Formula, a: Assignment) -> bool:
    """Two-valued evaluation of a propositional formula."""
    if isinstance(f, Atom):
        if f.args:
            raise NotPropositionalError(f"atom {to_text(f)} has arguments")
        if f.pred not in a:
            raise MissingAtomError(f.pred)
        return bool(a[f.pred])
    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Not):
        return not eval_prop(f.body, a)
    if isinstance(f, And):
        return eval_prop(f.left, a) and eval_prop(f.right, a)
    if isinstance(f, Or):
        return eval_prop(f.left, a) or eval_prop(f.right, a)
    if isinstance(f, Imp):
        return (not eval_prop(f.left, a)) or eval_prop(f.right, a)
    if isinstance(f, Iff):
        return eval_prop(f.left, a) == eval_prop(f.right, a)
    raise NotPropositionalError(f"quantifier in {to_text(f)}")


def _eval_columns(f: Formula, columns: Dict[str, np.ndarray], rows: int) -> np.ndarray:
    if isinstance(f, Atom):
        return columns[f.pred]
    if isinstance(f, Top):
        return np.ones(rows, dtype=bool)
    if isinstance(f, Bottom):
        return np.zeros(rows, dtype=bool)
    if isinstance(f, Not):
        return ~_eval_columns(f.body, columns, rows)
    left = _eval_columns(f.left, columns, rows)
    right = _eval_columns(f.right, columns, rows)
    if isinstance(f, And):
        return left & right
    if isinstance(f, Or):
        return left | right
    if isinstance(f, Imp):
        return ~left | right
    return left == right


@dataclass
class TruthTable:
    """All 2^k rows of a formula, atoms sorted, false before true."""
    formula: Formula
    atoms: Tuple[str, ...]
    results: np.ndarray

    def __len__(self) -> int:
        return len(self.results)

    def assignment(self, row: int) -> Assignment:
        k = len(self.atoms)
        return {name: bool((row >> (k - 1 - j)) & 1) for j, name in enumerate(self.atoms)}

    def __iter__(self) -> Iterator[Tuple[Assignment, bool]]:
        for row, value in enumerate(self.results):
            yield self.assignment(row), bool(value)

    @property
    def model_count(self) -> int:
        return int(np.count_nonzero(self.results))

    def is_tautology(self) -> bool:
        return bool(self.results.all())

    def is_satisfiable(self) -> bool:
        return bool(self.results.any())

    def models(self) -> List[Assignment]:
        return [self.assignment(int(r)) for r in np.flatnonzero(self.results)]

    def render(self) -> str:
        header = list(self.atoms) + [to_text(self.formula)]
        widths = [max(len(h), 1) for h in header]
        lines = [" | ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip(),
                 "-+-".join("-" * w for w in widths)]
        for a, value in self:
            cells = ["T" if a[name] else "F" for name in self.atoms] + ["T" if value else "F"]
            lines.append(" | ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip())
        return "\n".join(lines)


def truth_table(f: Formula, max_atoms: Optional[int] = None) -> TruthTable:
    """
    Evaluate f on every assignment of its atoms.

    Raises:
        NotPropositionalError: f has quantifiers or predicate arguments
        TooManyAtomsError: more atoms than the configured guard
    """
    if not is_propositional(f):
        raise NotPropositionalError(f"not propositional: {to_text(f)}")
    limit = settings().max_table_atoms if max_atoms is None else max_atoms
    names = tuple(sorted(atoms(f)))
    k = len(names)
    if k > limit:
        raise TooManyAtomsError(k, limit)
    rows = 1 << k
    index = np.arange(rows, dtype=np.int64)
    columns = {name: ((index >> (k - 1 - j)) & 1).astype(bool) for j, name in enumerate(names)}
    results = _eval_columns(f, columns, rows)
    return TruthTable(f, names, np.asarray(results, dtype=bool))


def tt_equivalent(f: Formula, g: Formula) -> bool:
    """Propositional equivalence by truth table over the union of atoms."""
    return truth_table(Iff(f, g)).is_tautology()


# ─────────────────────────────────────────────────────────────────────────────
# First-order interpretations
# ─────────────────────────────────────────────────────────────────────────────

def _fmt_tuple(t: Tuple[int, ...]) -> str:
    if len(t) == 1:
        return str(t[0])
    return "(" + ", ".join(str(x) for x in t) + ")"


@dataclass
class Interpretation:
    """Finite model over the domain {0..n-1}."""
    domain_size: int
    predicates: Dict[str, FrozenSet[Tuple[int, ...]]] = field(default_factory=dict)
    functions: Dict[str, Dict[Tuple[int, ...], int]] = field(default_factory=dict)
    constants: Dict[str, int] = field(default_factory=dict)
    arities: Dict[str, int] = field(default_factory=dict)

    @property
    def domain(self) -> range:
        return range(self.domain_size)

    def render(self, env: Optional[Environment] = None) -> str:
        """Text form: "n=2, P = {0}, f = {0↦1, 1↦0}, c = 0, x↦1"."""
        parts = [f"n={self.domain_size}"]
        for name in sorted(self.predicates):
            ext = self.predicates[name]
            if ext == {()} or (not ext and self.arities.get(name) == 0):
                parts.append(f"{name} = {'T' if ext else 'F'}")
                continue
            items = ", ".join(_fmt_tuple(t) for t in sorted(ext))
            parts.append(f"{name} = {{{items}}}")
        for name in sorted(self.functions):
            table = self.functions[name]
            items = ", ".join(f"{_fmt_tuple(k)}↦{v}" for k, v in sorted(table.items()))
            parts.append(f"{name} = {{{items}}}")
        for name in sorted(self.constants):
            parts.append(f"{name} = {self.constants[name]}")
        for var in sorted(env or {}):
            parts.append(f"{var}↦{env[var]}")
        return ", ".join(parts)

    def __str__(self) -> str:
        return self.render()

    @classmethod
    def from_dict(cls, data: dict, sig: Optional[Signature] = None) -> 'Interpretation':
        """
        Build from a YAML-style mapping:

            domain: 2
            predicates: {P: [0], R: [[0, 1]], p: true}
            functions: {f: {0: 1, 1: 0}, g: [[0, 0, 1], [0, 1, 0], ...]}
            constants: {c: 0}
        """
        try:
            n = int(data["domain"])
        except (KeyError, TypeError, ValueError):
            raise EvaluationError("model needs an integer 'domain' size")
        if n < 1:
            raise EvaluationError("domain size must be at least 1")

        preds: Dict[str, FrozenSet[Tuple[int, ...]]] = {}
        arities: Dict[str, int] = dict(sig.predicates) if sig is not None else {}
        for name, ext in (data.get("predicates") or {}).items():
            if isinstance(ext, bool):
                preds[str(name)] = frozenset({()}) if ext else frozenset()
                arities[str(name)] = 0
                continue
            preds[str(name)] = frozenset(
                tuple(int(x) for x in e) if isinstance(e, (list, tuple)) else (int(e),)
                for e in ext or ()
            )

        funcs: Dict[str, Dict[Tuple[int, ...], int]] = {}
        for name, table in (data.get("functions") or {}).items():
            rows: Dict[Tuple[int, ...], int] = {}
            if isinstance(table, dict):
                for k, v in table.items():
                    key = tuple(int(x) for x in k) if isinstance(k, (list, tuple)) else (int(k),)
                    rows[key] = int(v)
            else:
                for row in table:
                    rows[tuple(int(x) for x in row[:-1])] = int(row[-1])
            funcs[str(name)] = rows

        consts = {str(k): int(v) for k, v in (data.get("constants") or {}).items()}
        m = cls(n, preds, funcs, consts, arities)
        m.validate(sig)
        return m

    def validate(self, sig: Optional[Signature] = None):
        """Check element ranges, tuple widths and function totality."""
        n = self.domain_size
        for name, ext in self.predicates.items():
            widths = {len(t) for t in ext}
            if sig is not None and name in sig.predicates:
                widths.add(sig.predicates[name])
            if len(widths) > 1:
                raise EvaluationError(f"predicate '{name}' has tuples of mixed width")
            if any(not 0 <= x < n for t in ext for x in t):
                raise EvaluationError(f"predicate '{name}' mentions an element outside 0..{n - 1}")
        for name, table in self.functions.items():
            widths = {len(k) for k in table}
            if len(widths) != 1:
                raise EvaluationError(f"function '{name}' has an empty or mixed-width table")
            (arity,) = widths
            if len(table) != n ** arity:
                raise EvaluationError(f"function '{name}' is not total over the domain")
            if any(not 0 <= v < n for v in table.values()):
                raise EvaluationError(f"function '{name}' maps outside 0..{n - 1}")
        for name, value in self.constants.items():
            if not 0 <= value < n:
                raise EvaluationError(f"constant '{name}' denotes {value}, outside 0..{n - 1}")


# ─────────────────────────────────────────────────────────────────────────────
# First-order evaluation
# ─────────────────────────────────────────────────────────────────────────────

_Eval = Callable[[Interpretation, Environment], bool]
_TermEval = Callable[[Interpretation, Environment], int]


def _compile_term(t: Term) -> _TermEval:
    if isinstance(t, Var):
        name = t.name
        return lambda m, env: env[name]
    if isinstance(t, Const):
        name = t.name
        return lambda m, env: m.constants[name]
    args = [_compile_term(a) for a in t.args]
    name = t.name
    return lambda m, env: m.functions[name][tuple(a(m, env) for a in args)]


def compile_formula(f: Formula) -> _Eval:
    """Turn f into a closure evaluated against (interpretation, environment)."""
    if isinstance(f, Atom):
        pred = f.pred
        args = [_compile_term(a) for a in f.args]
        if not args:
            return lambda m, env: () in m.predicates[pred]
        return lambda m, env: tuple(a(m, env) for a in args) in m.predicates[pred]
    if isinstance(f, Top):
        return lambda m, env: True
    if isinstance(f, Bottom):
        return lambda m, env: False
    if isinstance(f, Not):
        body = compile_formula(f.body)
        return lambda m, env: not body(m, env)
    if isinstance(f, (Forall, Exists)):
        body = compile_formula(f.body)
        var = f.var
        test = all if isinstance(f, Forall) else any

        def quantified(m: Interpretation, env: Environment) -> bool:
            inner = dict(env)

            def holds(d: int) -> bool:
                inner[var] = d
                return body(m, inner)

            return test(holds(d) for d in range(m.domain_size))
        return quantified
    left = compile_formula(f.left)
    right = compile_formula(f.right)
    if isinstance(f, And):
        return lambda m, env: left(m, env) and right(m, env)
    if isinstance(f, Or):
        return lambda m, env: left(m, env) or right(m, env)
    if isinstance(f, Imp):
        return lambda m, env: (not left(m, env)) or right(m, env)
    return lambda m, env: left(m, env) == right(m, env)


def check_coverage(f: Formula, m: Interpretation, env: Environment):
    """Raise UncoveredSymbolError unless m and env interpret every symbol of f."""
    sig = signature_of(f)
    for name in sorted(sig.predicates):
        if name not in m.predicates:
            raise UncoveredSymbolError("predicate", name)
    for name in sorted(sig.functions):
        if name not in m.functions:
            raise UncoveredSymbolError("function", name)
    for name in sorted(sig.constants):
        if name not in m.constants:
            raise UncoveredSymbolError("constant", name)
    for name in sorted(free_vars(f)):
        if name not in env:
            raise UncoveredSymbolError("variable", name)


def eval_fol(f: Formula, m: Interpretation, env: Optional[Environment] = None) -> bool:
    """Tarskian truth of f in m under env; quantifiers range over 0..n-1."""
    env = dict(env or {})
    check_coverage(f, m, env)
    return compile_formula(f)(m, env)


# ─────────────────────────────────────────────────────────────────────────────
# Enumeration
# ─────────────────────────────────────────────────────────────────────────────

def interpretation_count(sig: Signature, n: int) -> int:
    """2^(sum n^arity) * prod n^(n^arity) * n^#constants."""
    count = 2 ** sum(n ** a for a in sig.predicates.values())
    for a in sig.functions.values():
        count *= n ** (n ** a)
    return count * n ** len(sig.constants)


def enumerate_interpretations(sig: Signature, n: int,
                              cap: Optional[int] = None) -> Iterator[Interpretation]:
    """
    Every interpretation of sig over {0..n-1}, in a fixed order.

    Predicate extensions count in binary over tuples in lexicographic order
    (first tuple least significant), followed by function tables and constant
    values, so the empty model comes first.

    Raises:
        CapExceededError: more interpretations than the cap (default 2^24)
    """
    if n < 1:
        raise ValueError("domain size must be at least 1")
    cap = settings().max_interpretations if cap is None else cap
    total = interpretation_count(sig, n)
    if total > cap:
        raise CapExceededError(total, cap)

    slots: List[Tuple[str, str, Tuple[int, ...]]] = []
    radices: List[int] = []
    for name in sorted(sig.predicates):
        for args in itertools.product(range(n), repeat=sig.predicates[name]):
            slots.append(("pred", name, args))
            radices.append(2)
    for name in sorted(sig.functions):
        for args in itertools.product(range(n), repeat=sig.functions[name]):
            slots.append(("func", name, args))
            radices.append(n)
    for name in sorted(sig.constants):
        slots.append(("const", name, ()))
        radices.append(n)

    logger.debug("enumerating %d interpretations at n=%d", total, n)
    for digits in itertools.product(*(range(r) for r in reversed(radices))):
        values = digits[::-1]
        preds: Dict[str, set] = {name: set() for name in sig.predicates}
        funcs: Dict[str, Dict[Tuple[int, ...], int]] = {name: {} for name in sig.functions}
        consts: Dict[str, int] = {}
        for (kind, name, args), value in zip(slots, values):
            if kind == "pred":
                if value:
                    preds[name].add(args)
            elif kind == "func":
                funcs[name][args] = value
            else:
                consts[name] = value
        yield Interpretation(n, {k: frozenset(v) for k, v in preds.items()}, funcs, consts,
                             dict(sig.predicates))


def enumerate_environments(variables: Sequence[str], n: int) -> Iterator[Environment]:
    names = sorted(variables)
    for values in itertools.product(range(n), repeat=len(names)):
        yield dict(zip(names, values))


@dataclass
class EquivalentUpToN:
    """No disagreement on any domain of size 1..max_n."""
    max_n: int

    def __bool__(self) -> bool:
        return True

    def render(self) -> str:
        return f"equivalent on all domains of size <= {self.max_n}"


@dataclass
class Countermodel:
    """An interpretation (plus environment) on which two formulas differ."""
    interpretation: Interpretation
    environment: Environment = field(default_factory=dict)

    def __bool__(self) -> bool:
        return False

    def render(self) -> str:
        return self.interpretation.render(self.environment)


def equiv_finite(f1: Formula, f2: Formula, max_n: Optional[int] = None,
                 cap: Optional[int] = None) -> Union[EquivalentUpToN, Countermodel]:
    """Compare f1 and f2 on every interpretation with domain size up to max_n."""
    max_n = settings().default_max_domain if max_n is None else max_n
    sig = signature_of(f1, f2)
    free = sorted(free_vars(f1) | free_vars(f2))
    e1, e2 = compile_formula(f1), compile_formula(f2)
    for n in range(1, max_n + 1):
        for m in enumerate_interpretations(sig, n, cap):
            for env in enumerate_environments(free, n):
                if e1(m, env) != e2(m, env):
                    logger.debug("countermodel at n=%d: %s", n, m.render(env))
                    return Countermodel(m, env)
    return EquivalentUpToN(max_n)


def find_model(f: Formula, max_n: Optional[int] = None,
               cap: Optional[int] = None) -> Optional[Interpretation]:
    """First interpretation (smallest domain first) satisfying the sentence f."""
    max_n = settings().default_max_domain if max_n is None else max_n
    sig = signature_of(f)
    test = compile_formula(f)
    for n in range(1, max_n + 1):
        for m in enumerate_interpretations(sig, n, cap):
            if test(m, {}):
                return m
    return None


def canonical_monadic_models(predicates: Sequence[str]) -> Iterator[Interpretation]:
    """
    One model per non-empty set of inhabited predicate types.

    A type is a subset of the unary predicates; each model has one element
    per inhabited type. Two models with the same inhabited types satisfy the
    same monadic sentences without constants, so this stream is complete for
    that fragment. Models are ordered by size, then lexicographically.
    """
    preds = list(predicates)
    k = len(preds)
    types = range(1 << k)
    for size in range(1, (1 << k) + 1):
        for chosen in itertools.combinations(types, size):
            ext = {
                p: frozenset((d,) for d, t in enumerate(chosen) if (t >> i) & 1)
                for i, p in enumerate(preds)
            }
            yield Interpretation(size, ext, arities={p: 1 for p in preds})


def _table_count(sig: Signature, n: int) -> int:
    count = n ** len(sig.constants)
    for a in sig.functions.values():
        count *= n ** (n ** a)
    return count


def find_monadic_model(f: Formula, cap: Optional[int] = None) -> Optional[Interpretation]:
    """
    Model search for a sentence whose predicates are all unary.

    Predicates range over canonical_monadic_models (at most 2^k elements for
    k predicates); on each, every table for the constants and function
    symbols is tried. Complete for function-free monadic sentences, and for
    the Skolem form of one: a Skolem form has a model over every model of
    the sentence it came from.

    Raises:
        ValueError: a predicate of arity other than 1
        CapExceededError: more candidate models than the cap
    """
    sig = signature_of(f)
    if any(a != 1 for a in sig.predicates.values()):
        raise ValueError(f"not monadic: {sig}")
    preds = sorted(sig.predicates)
    tables = Signature(functions=dict(sig.functions), constants=set(sig.constants))
    types = 1 << len(preds)
    cap = settings().max_interpretations if cap is None else cap
    total = sum(math.comb(types, s) * _table_count(tables, s) for s in range(1, types + 1))
    if total > cap:
        raise CapExceededError(total, cap)

    test = compile_formula(f)
    for base in canonical_monadic_models(preds):
        for extra in enumerate_interpretations(tables, base.domain_size, cap):
            m = replace(base, functions=extra.functions, constants=extra.constants)
            if test(m, {}):
                return m
    return None
