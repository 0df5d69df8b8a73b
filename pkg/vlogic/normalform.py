"""
Normal Forms - NNF, distributive CNF/DNF, Tseitin, prenex, Skolem, clauses.

Clause-level types (Literal, Clause, ClauseSet) live here as well and are
shared by the SAT solver, the resolution prover and the puzzle encoders.
Fresh symbols start with '_', which the formula parser never accepts, so
they cannot collide with user symbols.
"""

import logging
import re
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from .config_manager import settings
from .errors import FormulaSyntaxError, FormulaTooLargeError, NotPropositionalError, NotSentenceError
from .formula import (
    And, Atom, BinaryFormula, Bottom, Const, Exists, Forall, Formula, Func, Iff, Imp, Not, Or,
    Quantifier, Term, Top, Var, atoms, conjoin, disjoin, fresh_name, free_vars,
    is_propositional, names_in, signature_of, subst_term, substitute, substitute_many, term_vars, to_text,
)
from .parser import parse

logger = logging.getLogger(__name__)


# ─────────────────────────────────────────────────────────────────────────────
# Clause types
# ─────────────────────────────────────────────────────────────────────────────

@dataclass(frozen=True, slots=True)
class Literal:
    """Possibly negated atom."""
    positive: bool
    pred: str
    args: Tuple[Term, ...] = ()

    @classmethod
    def from_formula(cls, f: Formula) -> 'Literal':
        if isinstance(f, Atom):
            return cls(True, f.pred, f.args)
        if isinstance(f, Not) and isinstance(f.body, Atom):
            return cls(False, f.body.pred, f.body.args)
        raise ValueError(f"not a literal: {to_text(f)}")

    def negate(self) -> 'Literal':
        return Literal(not self.positive, self.pred, self.args)

    def atom(self) -> Atom:
        return Atom(self.pred, self.args)

    def to_formula(self) -> Formula:
        return self.atom() if self.positive else Not(self.atom())

    def substitute(self, mapping: Dict[str, Term]) -> 'Literal':
        if not mapping or not self.args:
            return self
        return Literal(self.positive, self.pred, tuple(subst_term(a, mapping) for a in self.args))

    def variables(self) -> Set[str]:
        out: Set[str] = set()
        for a in self.args:
            out |= term_vars(a)
        return out

    @property
    def sort_key(self) -> Tuple:
        return (self.pred, tuple(str(a) for a in self.args), not self.positive)

    def __str__(self) -> str:
        text = to_text(self.atom())
        return text if self.positive else "~" + text


@dataclass(frozen=True, slots=True)
class Clause:
    """Disjunction of literals with set semantics."""
    literals: FrozenSet[Literal] = frozenset()

    @classmethod
    def of(cls, *literals: Literal) -> 'Clause':
        return cls(frozenset(literals))

    def __len__(self) -> int:
        return len(self.literals)

    def __iter__(self) -> Iterator[Literal]:
        return iter(self.sorted())

    def sorted(self) -> List[Literal]:
        return sorted(self.literals, key=lambda lit: lit.sort_key)

    def is_empty(self) -> bool:
        return not self.literals

    def is_tautology(self) -> bool:
        return any(lit.negate() in self.literals for lit in self.literals)

    @property
    def positive_count(self) -> int:
        return sum(1 for lit in self.literals if lit.positive)

    def variables(self) -> Set[str]:
        out: Set[str] = set()
        for lit in self.literals:
            out |= lit.variables()
        return out

    def substitute(self, mapping: Dict[str, Term]) -> 'Clause':
        return Clause(frozenset(lit.substitute(mapping) for lit in self.literals))

    def to_formula(self) -> Formula:
        return disjoin(lit.to_formula() for lit in self.sorted())

    def __str__(self) -> str:
        return "{" + ", ".join(str(lit) for lit in self.sorted()) + "}"


@dataclass(frozen=True)
class FreshSymbols:
    """Symbols introduced by a transformation."""
    tseitin_atoms: Tuple[str, ...] = ()
    skolem_constants: Tuple[str, ...] = ()
    skolem_functions: Tuple[Tuple[str, int], ...] = ()

    def names(self) -> Set[str]:
        return (set(self.tseitin_atoms) | set(self.skolem_constants)
                | {name for name, _ in self.skolem_functions})


@dataclass
class ClauseSet:
    """Ordered, duplicate-free collection of clauses plus fresh-symbol provenance."""
    clauses: Tuple[Clause, ...] = ()
    fresh: FreshSymbols = field(default_factory=FreshSymbols)

    def __post_init__(self):
        self.clauses = tuple(dict.fromkeys(self.clauses))

    def __len__(self) -> int:
        return len(self.clauses)

    def __iter__(self) -> Iterator[Clause]:
        return iter(self.clauses)

    def atoms(self) -> List[str]:
        """Sorted names of the predicates occurring in the clauses."""
        return sorted({lit.pred for c in self.clauses for lit in c.literals})

    def is_propositional(self) -> bool:
        return all(not lit.args for c in self.clauses for lit in c.literals)

    def with_clauses(self, extra: Iterable[Clause]) -> 'ClauseSet':
        return ClauseSet(self.clauses + tuple(extra), self.fresh)

    def to_formula(self) -> Formula:
        return conjoin(c.to_formula() for c in self.clauses)

    @classmethod
    def from_lists(cls, lists: Iterable[Iterable[str]], variables: Iterable[str] = ()) -> 'ClauseSet':
        """Build from literal texts, e.g. [["p", "~q"], ["~P(x)"]]."""
        variables = tuple(variables)
        clauses = []
        for lits in lists:
            clauses.append(Clause(frozenset(
                Literal.from_formula(parse(text, variables)) for text in lits
            )))
        return cls(tuple(clauses))

    def __str__(self) -> str:
        return "\n".join(str(c) for c in self.clauses)


# ─────────────────────────────────────────────────────────────────────────────
# NNF
# ─────────────────────────────────────────────────────────────────────────────

def nnf(f: Formula) -> Formula:
    """
    Negation normal form.

    Iff is expanded to (a -> b) & (b -> a) first, then a -> b becomes ~a | b.
    Operand order and binary shape are kept; true/false stay in place.
    """
    if isinstance(f, (Atom, Top, Bottom)):
        return f
    if isinstance(f, Not):
        return _negated_nnf(f.body)
    if isinstance(f, (And, Or)):
        return type(f)(nnf(f.left), nnf(f.right))
    if isinstance(f, Imp):
        return Or(_negated_nnf(f.left), nnf(f.right))
    if isinstance(f, Iff):
        return nnf(And(Imp(f.left, f.right), Imp(f.right, f.left)))
    if isinstance(f, Quantifier):
        return type(f)(f.var, nnf(f.body))
    raise TypeError(f"not a formula: {f!r}")


def _negated_nnf(f: Formula) -> Formula:
    """NNF of ~f."""
    if isinstance(f, Atom):
        return Not(f)
    if isinstance(f, Top):
        return Bottom()
    if isinstance(f, Bottom):
        return Top()
    if isinstance(f, Not):
        return nnf(f.body)
    if isinstance(f, And):
        return Or(_negated_nnf(f.left), _negated_nnf(f.right))
    if isinstance(f, Or):
        return And(_negated_nnf(f.left), _negated_nnf(f.right))
    if isinstance(f, Imp):
        return And(nnf(f.left), _negated_nnf(f.right))
    if isinstance(f, Iff):
        return _negated_nnf(And(Imp(f.left, f.right), Imp(f.right, f.left)))
    if isinstance(f, Forall):
        return Exists(f.var, _negated_nnf(f.body))
    if isinstance(f, Exists):
        return Forall(f.var, _negated_nnf(f.body))
    raise TypeError(f"not a formula: {f!r}")


def is_nnf(f: Formula) -> bool:
    if isinstance(f, (Atom, Top, Bottom)):
        return True
    if isinstance(f, Not):
        return isinstance(f.body, Atom)
    if isinstance(f, (And, Or)):
        return is_nnf(f.left) and is_nnf(f.right)
    if isinstance(f, Quantifier):
        return is_nnf(f.body)
    return False


# ─────────────────────────────────────────────────────────────────────────────
# Distributive CNF / DNF
# ─────────────────────────────────────────────────────────────────────────────

class _Distributor:
    """Distributes `inner` over `outer` on an NNF tree, counting built nodes."""

    def __init__(self, outer: type, inner: type, max_nodes: int):
        self.outer = outer
        self.inner = inner
        self.max_nodes = max_nodes
        self.nodes = 0

    def _make(self, cls: type, left: Formula, right: Formula) -> Formula:
        self.nodes += 1
        if self.nodes > self.max_nodes:
            raise FormulaTooLargeError(self.max_nodes)
        return cls(left, right)

    def run(self, f: Formula) -> Formula:
        if isinstance(f, self.outer):
            return self._make(self.outer, self.run(f.left), self.run(f.right))
        if isinstance(f, self.inner):
            return self._spread(self.run(f.left), self.run(f.right))
        return f

    def _spread(self, a: Formula, b: Formula) -> Formula:
        if isinstance(a, self.outer):
            return self._make(self.outer, self._spread(a.left, b), self._spread(a.right, b))
        if isinstance(b, self.outer):
            return self._make(self.outer, self._spread(a, b.left), self._spread(a, b.right))
        return self._make(self.inner, a, b)


def _split(f: Formula, cls: type) -> List[Formula]:
    """Operands of a left/right nested chain of cls, in order."""
    if isinstance(f, cls):
        return _split(f.left, cls) + _split(f.right, cls)
    return [f]


def _dedupe_inner(f: Formula, outer: type, inner: type) -> Formula:
    if isinstance(f, outer):
        return outer(_dedupe_inner(f.left, outer, inner), _dedupe_inner(f.right, outer, inner))
    parts = _split(f, inner)
    unique = list(dict.fromkeys(parts))
    if len(unique) == len(parts):
        return f
    out = unique[0]
    for p in unique[1:]:
        out = inner(out, p)
    return out


def _distribute(f: Formula, outer: type, inner: type, max_nodes: Optional[int]) -> Formula:
    limit = settings().max_cnf_nodes if max_nodes is None else max_nodes
    result = _Distributor(outer, inner, limit).run(nnf(f))
    return _dedupe_inner(result, outer, inner)


def cnf_distributive(f: Formula, max_nodes: Optional[int] = None) -> Formula:
    """Equivalent CNF by NNF plus distribution; duplicate literals in a disjunct are removed."""
    if not is_propositional(f):
        raise NotPropositionalError(f"cnf_distributive needs a propositional formula: {to_text(f)}")
    return _distribute(f, And, Or, max_nodes)


def dnf_distributive(f: Formula, max_nodes: Optional[int] = None) -> Formula:
    """Equivalent DNF, the dual of cnf_distributive."""
    if not is_propositional(f):
        raise NotPropositionalError(f"dnf_distributive needs a propositional formula: {to_text(f)}")
    return _distribute(f, Or, And, max_nodes)


# ─────────────────────────────────────────────────────────────────────────────
# Tseitin
# ─────────────────────────────────────────────────────────────────────────────

class _FreshCounter:
    """Hands out prefix+k names, skipping anything already used."""

    def __init__(self, prefix: str, used: Iterable[str]):
        self.prefix = prefix
        self.used = set(used)
        self.k = 0
        self.issued: List[str] = []

    def next(self) -> str:
        self.k += 1
        while f"{self.prefix}{self.k}" in self.used:
            self.k += 1
        name = f"{self.prefix}{self.k}"
        self.used.add(name)
        self.issued.append(name)
        return name


def _pos(name: str) -> Literal:
    return Literal(True, name)


def tseitin(f: Formula) -> ClauseSet:
    """
    Equisatisfiable clause set with one fresh atom per non-literal node.

    Auxiliary atoms are named _t1, _t2, ... in post-order; the root is
    asserted by a unit clause. Tautological clauses are dropped.
    """
    if not is_propositional(f):
        raise NotPropositionalError(f"tseitin needs a propositional formula: {to_text(f)}")
    fresh = _FreshCounter("_t", atoms(f))
    clauses: List[Clause] = []

    def emit(*lits: Literal):
        clause = Clause(frozenset(lits))
        if not clause.is_tautology():
            clauses.append(clause)

    def encode(g: Formula) -> Literal:
        if isinstance(g, Atom):
            return _pos(g.pred)
        if isinstance(g, Not) and isinstance(g.body, Atom):
            return Literal(False, g.body.pred)
        if isinstance(g, Not):
            a = encode(g.body)
            x = _pos(fresh.next())
            emit(x.negate(), a.negate())
            emit(x, a)
            return x
        if isinstance(g, (Top, Bottom)):
            x = _pos(fresh.next())
            emit(x if isinstance(g, Top) else x.negate())
            return x
        a, b = encode(g.left), encode(g.right)
        x = _pos(fresh.next())
        nx, na, nb = x.negate(), a.negate(), b.negate()
        if isinstance(g, And):
            emit(nx, a)
            emit(nx, b)
            emit(x, na, nb)
        elif isinstance(g, Or):
            emit(nx, a, b)
            emit(x, na)
            emit(x, nb)
        elif isinstance(g, Imp):
            emit(nx, na, b)
            emit(x, a)
            emit(x, nb)
        else:
            emit(nx, na, b)
            emit(nx, a, nb)
            emit(x, a, b)
            emit(x, na, nb)
        return x

    root = encode(f)
    emit(root)
    logger.debug("tseitin: %d aux atoms, %d clauses", len(fresh.issued), len(clauses))
    return ClauseSet(tuple(clauses), FreshSymbols(tseitin_atoms=tuple(fresh.issued)))


# ─────────────────────────────────────────────────────────────────────────────
# Prenex and Skolem forms
# ─────────────────────────────────────────────────────────────────────────────

def _used_names(f: Formula) -> Set[str]:
    sig = signature_of(f)
    return set(free_vars(f)) | sig.constants | set(sig.functions)


def rename_bound_apart(f: Formula, used: Optional[Set[str]] = None) -> Formula:
    """Give every binder a distinct name, visiting binders in pre-order, left first."""
    used = _used_names(f) if used is None else used

    def visit(g: Formula) -> Formula:
        if isinstance(g, Quantifier):
            name = g.var
            body = g.body
            if name in used:
                name = fresh_name(g.var, used | names_in(body))
                body = substitute(body, g.var, Var(name))
            used.add(name)
            return type(g)(name, visit(body))
        if isinstance(g, Not):
            return Not(visit(g.body))
        if isinstance(g, BinaryFormula):
            left = visit(g.left)
            return type(g)(left, visit(g.right))
        return g

    return visit(f)


def _hoist(f: Formula) -> Tuple[List[Tuple[type, str]], Formula]:
    if isinstance(f, Quantifier):
        prefix, matrix = _hoist(f.body)
        return [(type(f), f.var)] + prefix, matrix
    if isinstance(f, (And, Or)):
        lp, lm = _hoist(f.left)
        rp, rm = _hoist(f.right)
        return lp + rp, type(f)(lm, rm)
    return [], f


def _wrap(prefix: Sequence[Tuple[type, str]], matrix: Formula) -> Formula:
    out = matrix
    for cls, var in reversed(prefix):
        out = cls(var, out)
    return out


def prenex(f: Formula) -> Formula:
    """
    Prenex form of nnf(f).

    Binders are renamed apart with the fresh-name scheme; at a binary node
    the left operand's quantifiers are pulled out first.
    """
    prefix, matrix = _hoist(rename_bound_apart(nnf(f)))
    return _wrap(prefix, matrix)


def _skolem_parts(f: Formula) -> Tuple[List[str], Formula, FreshSymbols]:
    """Universal prefix, Skolemized matrix and the symbols introduced."""
    free = free_vars(f)
    if free:
        raise NotSentenceError(free)
    p = prenex(f)
    prefix, matrix = _hoist(p)
    used = _used_names(p) | {var for _, var in prefix}
    consts = _FreshCounter("_c", used)
    funcs = _FreshCounter("_f", used)
    universals: List[str] = []
    mapping: Dict[str, Term] = {}
    skolem_functions: List[Tuple[str, int]] = []
    for cls, var in prefix:
        if cls is Forall:
            universals.append(var)
        elif universals:
            name = funcs.next()
            skolem_functions.append((name, len(universals)))
            mapping[var] = Func(name, tuple(Var(u) for u in universals))
        else:
            mapping[var] = Const(consts.next())
    matrix = substitute_many(matrix, mapping)
    fresh = FreshSymbols(skolem_constants=tuple(consts.issued),
                         skolem_functions=tuple(skolem_functions))
    return universals, matrix, fresh


def skolemize(f: Formula) -> Formula:
    """
    Equisatisfiable universal prenex form of the sentence f.

    Existentials become _c1, _c2, ... when no universal precedes them and
    _f1(x, ...), _f2(...) applied to the preceding universals otherwise.
    """
    universals, matrix, _ = _skolem_parts(f)
    return _wrap([(Forall, u) for u in universals], matrix)


# ─────────────────────────────────────────────────────────────────────────────
# Clausal form
# ─────────────────────────────────────────────────────────────────────────────

def _extract_clauses(cnf: Formula) -> List[Clause]:
    out: List[Clause] = []
    for disjunct in _split(cnf, And):
        if isinstance(disjunct, Top):
            continue
        lits: Set[Literal] = set()
        tautology = False
        for part in _split(disjunct, Or):
            if isinstance(part, Top):
                tautology = True
            elif isinstance(part, Bottom):
                continue
            else:
                lits.add(Literal.from_formula(part))
        clause = Clause(frozenset(lits))
        if tautology or clause.is_tautology():
            continue
        out.append(clause)
    return out


def _rename_clauses_apart(clauses: Sequence[Clause]) -> List[Clause]:
    used: Set[str] = set()
    out: List[Clause] = []
    for clause in clauses:
        mapping: Dict[str, Term] = {}
        for name in sorted(clause.variables()):
            if name in used:
                fresh = fresh_name(name, used | clause.variables() | {v.name for v in mapping.values()})
                mapping[name] = Var(fresh)
        renamed = clause.substitute(mapping)
        used |= renamed.variables()
        out.append(renamed)
    return out


def clausify(f: Formula, max_nodes: Optional[int] = None) -> ClauseSet:
    """
    Clause set of a sentence: nnf, prenex, skolemize, drop universals,
    distribute, extract. Clauses are variable-disjoint; the first clause
    keeps its variable names.
    """
    _, matrix, fresh = _skolem_parts(f)
    cnf = _distribute(matrix, And, Or, max_nodes)
    clauses = _rename_clauses_apart(list(dict.fromkeys(_extract_clauses(cnf))))
    logger.debug("clausify: %d clauses from %s", len(clauses), to_text(f))
    return ClauseSet(tuple(clauses), fresh)


def is_horn(cs: ClauseSet) -> bool:
    """Every clause has at most one positive literal."""
    return all(c.positive_count <= 1 for c in cs)


# ─────────────────────────────────────────────────────────────────────────────
# DIMACS
# ─────────────────────────────────────────────────────────────────────────────

def dimacs_index(cs: ClauseSet) -> Dict[str, int]:
    """Atom -> 1-based DIMACS variable, atoms sorted by name."""
    return {name: i for i, name in enumerate(cs.atoms(), start=1)}


def to_dimacs(cs: ClauseSet) -> str:
    """DIMACS CNF text; 'c <index> <atom>' comment lines record the mapping."""
    if not cs.is_propositional():
        raise NotPropositionalError("DIMACS export needs a propositional clause set")
    index = dimacs_index(cs)
    lines = [f"c {i} {name}" for name, i in index.items()]
    lines.append(f"p cnf {len(index)} {len(cs)}")
    for clause in cs:
        nums = sorted((index[lit.pred] if lit.positive else -index[lit.pred]
                       for lit in clause.literals), key=lambda n: (abs(n), n))
        lines.append(" ".join(str(n) for n in nums + [0]))
    return "\n".join(lines) + "\n"


_DIMACS_NAME = re.compile(r"^c\s+(\d+)\s+([A-Za-z_][A-Za-z0-9_]*)\s*$")
_DIMACS_HEADER = re.compile(r"^p\s+cnf\s+(\d+)\s+(\d+)\s*$")


def looks_like_dimacs(text: str) -> bool:
    return any(_DIMACS_HEADER.match(line.strip()) for line in text.splitlines())


def dimacs_variables(text: str) -> Dict[str, int]:
    """Every variable the 'p cnf' header declares, named as parse_dimacs names it."""
    names: Dict[int, str] = {}
    count = 0
    for raw in text.splitlines():
        line = raw.strip()
        m = _DIMACS_NAME.match(line)
        if m:
            names[int(m.group(1))] = m.group(2)
            continue
        m = _DIMACS_HEADER.match(line)
        if m:
            count = int(m.group(1))
    return {names.get(i, f"x{i}"): i for i in range(1, count + 1)}


def parse_dimacs(text: str) -> ClauseSet:
    """
    Read DIMACS CNF. Mapping comments written by to_dimacs restore atom
    names; other variables are called x<index>.
    """
    names: Dict[int, str] = {}
    header: Optional[Tuple[int, int]] = None
    clauses: List[Clause] = []
    current: List[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        if line.startswith("c"):
            m = _DIMACS_NAME.match(line)
            if m:
                names[int(m.group(1))] = m.group(2)
            continue
        if line.startswith("p"):
            m = _DIMACS_HEADER.match(line)
            if not m or header is not None:
                raise FormulaSyntaxError("bad DIMACS header", lineno, 1)
            header = (int(m.group(1)), int(m.group(2)))
            continue
        if header is None:
            raise FormulaSyntaxError("clause before 'p cnf' header", lineno, 1)
        for token in line.split():
            try:
                n = int(token)
            except ValueError:
                raise FormulaSyntaxError(f"bad DIMACS literal '{token}'", lineno, 1)
            if abs(n) > header[0]:
                raise FormulaSyntaxError(f"variable {abs(n)} exceeds declared {header[0]}", lineno, 1)
            if n == 0:
                clauses.append(_dimacs_clause(current, names))
                current = []
            else:
                current.append(n)
    if header is None:
        raise FormulaSyntaxError("missing 'p cnf' header", 1, 1)
    if current:
        clauses.append(_dimacs_clause(current, names))
    return ClauseSet(tuple(clauses))


def _dimacs_clause(nums: List[int], names: Dict[int, str]) -> Clause:
    return Clause(frozenset(
        Literal(n > 0, names.get(abs(n), f"x{abs(n)}")) for n in nums
    ))
