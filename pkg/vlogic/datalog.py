"""
Datalog - Function-free Horn programs, bottom-up fixpoint, closed-world queries.

Program text:

    edge(a, b).                      % facts end with '.'
    path(X, Y) :- edge(X, Y).
    path(X, Y) :- edge(X, Z), path(Z, Y).

Identifiers starting with an uppercase letter are variables, everything
else is a constant. Comments start with '%' or '#'. Evaluation is
semi-naive: every round joins at least one body atom against the facts
derived in the previous round.
"""

import itertools
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Set, Tuple, Union

from lark import Lark, Tree
from lark.exceptions import UnexpectedEOF, UnexpectedInput

from .errors import ArityError, FormulaSyntaxError, LogicError
from .formula import Atom, Const, Forall, Formula, Func, Imp, Term, Var, conjoin, to_text
from .normalform import Clause, ClauseSet, Literal
from .semantics import Interpretation

logger = logging.getLogger(__name__)

Row = Tuple[str, ...]
Binding = Dict[str, str]


class DatalogError(LogicError):
    """Base class for Datalog program errors."""
    pass


class RangeRestrictionError(DatalogError):
    """A head variable does not occur in the rule body."""
    pass


class FunctionSymbolError(DatalogError):
    """Datalog terms are constants and variables only."""
    pass


class UnknownPredicateError(DatalogError):
    """Query or complement over a predicate the program never mentions."""

    def __init__(self, pred: str):
        self.pred = pred
        super().__init__(f"unknown predicate '{pred}'")


# ─────────────────────────────────────────────────────────────────────────────
# Grammar
# ─────────────────────────────────────────────────────────────────────────────

DATALOG_GRAMMAR = r"""
    program: clause*

    clause: atom "."                          -> fact
          | atom ":-" atom ("," atom)* "."    -> rule

    atom: NAME "(" term ("," term)* ")"
        | NAME

    ?term: NAME "(" term ("," term)* ")"      -> func_term
         | NAME                               -> name_term

    NAME: /[A-Za-z0-9][A-Za-z0-9_]*/
    COMMENT: /[%#][^\n]*/

    %import common.WS
    %ignore WS
    %ignore COMMENT
"""

_parser = Lark(DATALOG_GRAMMAR, parser="lalr", start=["program", "atom"])


def _term(tree: Tree) -> Term:
    if tree.data == "func_term":
        name, *args = tree.children
        return Func(str(name), tuple(_term(a) for a in args))
    name = str(tree.children[0])
    return Var(name) if name[0].isupper() else Const(name)


def _atom(tree: Tree) -> Atom:
    name, *args = tree.children
    return Atom(str(name), tuple(_term(a) for a in args))


def _syntax_error(err: UnexpectedInput) -> FormulaSyntaxError:
    if isinstance(err, UnexpectedEOF):
        return FormulaSyntaxError("unexpected end of input")
    return FormulaSyntaxError("unexpected input", err.line, err.column)


# ─────────────────────────────────────────────────────────────────────────────
# Program
# ─────────────────────────────────────────────────────────────────────────────

def _is_ground(a: Atom) -> bool:
    return all(isinstance(t, Const) for t in a.args)


def _atom_vars(a: Atom) -> Set[str]:
    return {t.name for t in a.args if isinstance(t, Var)}


@dataclass(frozen=True)
class DatalogRule:
    head: Atom
    body: Tuple[Atom, ...] = ()

    def variables(self) -> List[str]:
        seen: Dict[str, None] = {}
        for a in (self.head,) + self.body:
            for t in a.args:
                if isinstance(t, Var):
                    seen.setdefault(t.name)
        return list(seen)

    def to_formula(self) -> Formula:
        """Universal closure of body -> head."""
        f: Formula = Imp(conjoin(self.body), self.head) if self.body else self.head
        for name in reversed(self.variables()):
            f = Forall(name, f)
        return f

    def __str__(self) -> str:
        if not self.body:
            return f"{to_text(self.head)}."
        return f"{to_text(self.head)} :- {', '.join(to_text(b) for b in self.body)}."


@dataclass
class DatalogProgram:
    """
    Ground facts plus range-restricted rules.

    Raises on construction:
        FunctionSymbolError: a term is a function application
        RangeRestrictionError: a head variable is missing from the body
        ArityError: a predicate used with two arities
    """
    facts: FrozenSet[Atom] = frozenset()
    rules: Tuple[DatalogRule, ...] = ()
    arities: Dict[str, int] = field(init=False, default_factory=dict)

    def __post_init__(self):
        self.facts = frozenset(self.facts)
        self.rules = tuple(self.rules)
        for a in self._all_atoms():
            if any(isinstance(t, Func) for t in a.args):
                raise FunctionSymbolError(f"function symbol in {to_text(a)}")
            known = self.arities.setdefault(a.pred, len(a.args))
            if known != len(a.args):
                raise ArityError(a.pred, known, len(a.args))
        for a in self.facts:
            if not _is_ground(a):
                raise RangeRestrictionError(f"fact {to_text(a)} is not ground")
        for r in self.rules:
            body_vars: Set[str] = set()
            for b in r.body:
                body_vars |= _atom_vars(b)
            loose = _atom_vars(r.head) - body_vars
            if loose:
                raise RangeRestrictionError(
                    f"head variables {', '.join(sorted(loose))} not in the body of: {r}"
                )

    def _all_atoms(self) -> Iterator[Atom]:
        yield from self.facts
        for r in self.rules:
            yield r.head
            yield from r.body

    @property
    def predicates(self) -> List[str]:
        return sorted(self.arities)

    def constants(self) -> List[str]:
        """Active domain: every constant in facts and rules, sorted."""
        return sorted({t.name for a in self._all_atoms() for t in a.args if isinstance(t, Const)})

    def with_facts(self, extra: Iterable[Atom]) -> 'DatalogProgram':
        return DatalogProgram(self.facts | frozenset(extra), self.rules)

    def to_clause_set(self) -> ClauseSet:
        """Horn clauses: one unit per fact, {head, ~body...} per rule."""
        clauses = [Clause.of(Literal(True, a.pred, a.args)) for a in sorted(self.facts, key=to_text)]
        for r in self.rules:
            lits = [Literal(True, r.head.pred, r.head.args)]
            lits += [Literal(False, b.pred, b.args) for b in r.body]
            clauses.append(Clause(frozenset(lits)))
        return ClauseSet(tuple(clauses))

    def __str__(self) -> str:
        lines = [f"{to_text(a)}." for a in sorted(self.facts, key=to_text)]
        lines += [str(r) for r in self.rules]
        return "\n".join(lines)


def parse_program(text: str) -> DatalogProgram:
    try:
        tree = _parser.parse(text, start="program")
    except UnexpectedInput as e:
        raise _syntax_error(e) from None
    facts: List[Atom] = []
    rules: List[DatalogRule] = []
    for clause in tree.children:
        atoms = [_atom(a) for a in clause.children]
        if clause.data == "fact":
            facts.append(atoms[0])
        else:
            rules.append(DatalogRule(atoms[0], tuple(atoms[1:])))
    return DatalogProgram(frozenset(facts), tuple(rules))


def parse_query(text: str) -> Atom:
    try:
        tree = _parser.parse(text.strip().rstrip("?.").strip(), start="atom")
    except UnexpectedInput as e:
        raise _syntax_error(e) from None
    a = _atom(tree)
    if any(isinstance(t, Func) for t in a.args):
        raise FunctionSymbolError(f"function symbol in {to_text(a)}")
    return a


def load_program(path: Union[str, Path]) -> DatalogProgram:
    return parse_program(Path(path).read_text())


# ─────────────────────────────────────────────────────────────────────────────
# Fact base
# ─────────────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class FactBase:
    """Least fixpoint, stored as one relation per predicate."""
    relations: Tuple[Tuple[str, FrozenSet[Row]], ...]

    @classmethod
    def from_relations(cls, rel: Dict[str, Set[Row]]) -> 'FactBase':
        return cls(tuple((p, frozenset(rows)) for p, rows in sorted(rel.items())))

    def relation(self, pred: str) -> FrozenSet[Row]:
        for p, rows in self.relations:
            if p == pred:
                return rows
        return frozenset()

    def atoms(self) -> List[Atom]:
        return [Atom(p, tuple(Const(c) for c in row))
                for p, rows in self.relations for row in sorted(rows)]

    def __contains__(self, a: Atom) -> bool:
        if not _is_ground(a):
            return False
        return tuple(t.name for t in a.args) in self.relation(a.pred)

    def __len__(self) -> int:
        return sum(len(rows) for _, rows in self.relations)

    def to_text(self) -> str:
        return "".join(f"{to_text(a)}.\n" for a in self.atoms())


def _match(a: Atom, row: Row, theta: Binding) -> Optional[Binding]:
    out = theta
    for t, value in zip(a.args, row):
        if isinstance(t, Const):
            if t.name != value:
                return None
        else:
            bound = out.get(t.name)
            if bound is None:
                if out is theta:
                    out = dict(theta)
                out[t.name] = value
            elif bound != value:
                return None
    return out


def _join(body: Tuple[Atom, ...], sources: List[Iterable[Row]], theta: Binding) -> Iterator[Binding]:
    if not body:
        yield theta
        return
    first, rest = body[0], body[1:]
    for row in sources[0]:
        extended = _match(first, row, theta)
        if extended is not None:
            yield from _join(rest, sources[1:], extended)


def _instantiate(a: Atom, theta: Binding) -> Row:
    return tuple(t.name if isinstance(t, Const) else theta[t.name] for t in a.args)


def _initial(p: DatalogProgram) -> Dict[str, Set[Row]]:
    rel: Dict[str, Set[Row]] = {name: set() for name in p.arities}
    for a in p.facts:
        rel[a.pred].add(tuple(t.name for t in a.args))
    for r in p.rules:
        if not r.body:
            rel[r.head.pred].add(_instantiate(r.head, {}))
    return rel


def fixpoint(p: DatalogProgram) -> FactBase:
    """Least Herbrand model by semi-naive evaluation."""
    total = _initial(p)
    delta = {name: set(rows) for name, rows in total.items()}
    rules = [r for r in p.rules if r.body]
    rounds = 0
    while any(delta.values()):
        rounds += 1
        new: Dict[str, Set[Row]] = {name: set() for name in total}
        for r in rules:
            for i, b in enumerate(r.body):
                if not delta[b.pred]:
                    continue
                sources = [delta[b.pred] if j == i else total[c.pred] for j, c in enumerate(r.body)]
                for theta in _join(r.body, sources, {}):
                    row = _instantiate(r.head, theta)
                    if row not in total[r.head.pred]:
                        new[r.head.pred].add(row)
        for name, rows in new.items():
            total[name] |= rows
        delta = new
        logger.debug("datalog: round %d derived %d facts", rounds, sum(len(v) for v in new.values()))
    return FactBase.from_relations(total)


def naive_fixpoint(p: DatalogProgram) -> FactBase:
    """Least Herbrand model by re-firing every rule until nothing changes."""
    total = _initial(p)
    rules = [r for r in p.rules if r.body]
    changed = True
    while changed:
        changed = False
        for r in rules:
            sources = [list(total[b.pred]) for b in r.body]
            for theta in list(_join(r.body, sources, {})):
                row = _instantiate(r.head, theta)
                if row not in total[r.head.pred]:
                    total[r.head.pred].add(row)
                    changed = True
    return FactBase.from_relations(total)


# ─────────────────────────────────────────────────────────────────────────────
# Queries
# ─────────────────────────────────────────────────────────────────────────────

def _known(p: DatalogProgram, pred: str, arity: Optional[int] = None):
    if pred not in p.arities:
        raise UnknownPredicateError(pred)
    if arity is not None and p.arities[pred] != arity:
        raise ArityError(pred, p.arities[pred], arity)


def query(p: DatalogProgram, q: Atom, facts: Optional[FactBase] = None) -> List[Binding]:
    """
    Substitutions grounding q into the fixpoint, sorted and duplicate-free.

    A ground query yields [{}] when true and [] when false.
    """
    _known(p, q.pred, len(q.args))
    if any(isinstance(t, Func) for t in q.args):
        raise FunctionSymbolError(f"function symbol in {to_text(q)}")
    facts = fixpoint(p) if facts is None else facts
    names = sorted(_atom_vars(q))
    answers: Set[Tuple[str, ...]] = set()
    for row in facts.relation(q.pred):
        theta = _match(q, row, {})
        if theta is not None:
            answers.add(tuple(theta[n] for n in names))
    return [dict(zip(names, values)) for values in sorted(answers)]


def format_binding(theta: Binding) -> str:
    if not theta:
        return "true"
    return ", ".join(f"{v} = {theta[v]}" for v in sorted(theta))


def cwa_complement(p: DatalogProgram, pred: str, facts: Optional[FactBase] = None) -> List[Atom]:
    """Ground atoms of pred over the active domain that the fixpoint leaves false."""
    _known(p, pred)
    facts = fixpoint(p) if facts is None else facts
    present = facts.relation(pred)
    return [
        Atom(pred, tuple(Const(c) for c in row))
        for row in itertools.product(p.constants(), repeat=p.arities[pred])
        if row not in present
    ]


def herbrand_interpretation(p: DatalogProgram, facts: FactBase) -> Interpretation:
    """Finite model whose elements are the program constants (in sorted order)."""
    consts = p.constants()
    index = {c: i for i, c in enumerate(consts)}
    preds = {
        name: frozenset(tuple(index[c] for c in row) for row in facts.relation(name))
        for name in p.arities
    }
    return Interpretation(max(1, len(consts)), preds, {}, dict(index), dict(p.arities))
