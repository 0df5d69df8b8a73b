"""
Resolution - Unification, binary resolution with factoring, refutation proofs.

The prover runs a given-clause loop: the shortest unprocessed clause (ties
by insertion order) is resolved against every processed clause, including a
renamed copy of itself, and factored. New clauses are dropped when they are
tautologies or forward-subsumed by a kept clause. Clauses over the length or
term-depth limits are dropped too, which turns a would-be Saturated into
ResourceOut.
"""

import heapq
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union

from .config_manager import settings
from .errors import NotPropositionalError, NotSentenceError
from .formula import (
    Formula, Func, Imp, Not, Term, Var, fresh_name, free_vars, signature_of,
    subst_term, term_depth,
)
from .normalform import Clause, ClauseSet, Literal, clausify

logger = logging.getLogger(__name__)

Substitution = Dict[str, Term]


# ─────────────────────────────────────────────────────────────────────────────
# Unification
# ─────────────────────────────────────────────────────────────────────────────

class FailureKind(Enum):
    CLASH = "clash"
    OCCURS_CHECK = "occurs check"


@dataclass(frozen=True)
class UnifyFailure:
    """The two terms have no unifier."""
    kind: FailureKind

    def __bool__(self) -> bool:
        return False


def _deref(t: Term, sigma: Substitution) -> Term:
    while isinstance(t, Var) and t.name in sigma:
        t = sigma[t.name]
    return t


def _occurs(name: str, t: Term, sigma: Substitution) -> bool:
    t = _deref(t, sigma)
    if isinstance(t, Var):
        return t.name == name
    if isinstance(t, Func):
        return any(_occurs(name, a, sigma) for a in t.args)
    return False


def _resolve(t: Term, sigma: Substitution) -> Term:
    t = _deref(t, sigma)
    if isinstance(t, Func):
        return Func(t.name, tuple(_resolve(a, sigma) for a in t.args))
    return t


def unify_pairs(pairs: Iterable[Tuple[Term, Term]],
                subst: Optional[Substitution] = None) -> Union[Substitution, UnifyFailure]:
    """Most general unifier of all pairs at once, extending subst."""
    sigma: Substitution = dict(subst or {})
    stack = list(pairs)
    stack.reverse()
    while stack:
        a, b = stack.pop()
        a, b = _deref(a, sigma), _deref(b, sigma)
        if a == b:
            continue
        if isinstance(a, Var) or isinstance(b, Var):
            var, other = (a, b) if isinstance(a, Var) else (b, a)
            if _occurs(var.name, other, sigma):
                return UnifyFailure(FailureKind.OCCURS_CHECK)
            sigma[var.name] = other
            continue
        if isinstance(a, Func) and isinstance(b, Func) \
                and a.name == b.name and len(a.args) == len(b.args):
            stack.extend(reversed(list(zip(a.args, b.args))))
            continue
        return UnifyFailure(FailureKind.CLASH)
    return {name: _resolve(t, sigma) for name, t in sigma.items()}


def unify(t1: Term, t2: Term, subst: Optional[Substitution] = None) -> Union[Substitution, UnifyFailure]:
    """
    Robinson unification with occurs check.

    The result is idempotent and fully resolved, e.g. unify(f(x, b), f(a, y))
    gives {x: a, y: b}. A variable on either side is bound to the other term.
    """
    return unify_pairs([(t1, t2)], subst)


def apply_subst(t: Term, sigma: Substitution) -> Term:
    return subst_term(t, sigma)


def match(pattern: Sequence[Term], target: Sequence[Term],
          theta: Substitution) -> Optional[Substitution]:
    """One-way matching: bind pattern variables only."""
    theta = dict(theta)
    stack = list(zip(pattern, target))
    while stack:
        p, t = stack.pop()
        if isinstance(p, Var):
            bound = theta.get(p.name)
            if bound is None:
                theta[p.name] = t
            elif bound != t:
                return None
        elif isinstance(p, Func):
            if not isinstance(t, Func) or p.name != t.name or len(p.args) != len(t.args):
                return None
            stack.extend(zip(p.args, t.args))
        elif p != t:
            return None
    return theta


def subsumes(c: Clause, d: Clause) -> bool:
    """Some substitution maps every literal of c into d."""
    if len(c) > len(d):
        return False
    lits = c.sorted()
    targets = d.sorted()

    def search(i: int, theta: Substitution) -> bool:
        if i == len(lits):
            return True
        lit = lits[i]
        for cand in targets:
            if cand.positive != lit.positive or cand.pred != lit.pred or len(cand.args) != len(lit.args):
                continue
            extended = match(lit.args, cand.args, theta)
            if extended is not None and search(i + 1, extended):
                return True
        return False

    return search(0, {})


def format_subst(sigma: Substitution) -> str:
    return "{" + ", ".join(f"{v}↦{sigma[v]}" for v in sorted(sigma)) + "}"


def rename_apart(c: Clause, avoid: Set[str]) -> Tuple[Clause, Substitution]:
    """Rename the variables of c that occur in avoid."""
    mapping: Substitution = {}
    taken = set(avoid) | c.variables()
    for name in sorted(c.variables()):
        if name in avoid:
            new = fresh_name(name, taken)
            taken.add(new)
            mapping[name] = Var(new)
    return c.substitute(mapping), mapping


# ─────────────────────────────────────────────────────────────────────────────
# Proof objects
# ─────────────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class Input:
    def render(self) -> str:
        return "input"


@dataclass(frozen=True)
class Resolvent:
    """Resolved literal `literals[0]` of parents[0] against `literals[1]` of
    the renamed parents[1]."""
    parents: Tuple[int, int]
    literals: Tuple[Literal, Literal]
    renaming: Substitution
    unifier: Substitution

    def render(self) -> str:
        return f"res {self.parents[0]},{self.parents[1]} {format_subst(self.unifier)}"


@dataclass(frozen=True)
class Factor:
    parent: int
    literals: Tuple[Literal, Literal]
    unifier: Substitution

    def render(self) -> str:
        return f"factor {self.parent} {format_subst(self.unifier)}"


Justification = Union[Input, Resolvent, Factor]


@dataclass
class ProofStep:
    clause: Clause
    justification: Justification


@dataclass
class RefutationProof:
    """Numbered derivation (1-based) ending in the empty clause."""
    steps: List[ProofStep]

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def resolution_steps(self) -> int:
        return sum(1 for s in self.steps if isinstance(s.justification, Resolvent))

    def render(self) -> str:
        return "\n".join(
            f"{n}. {step.clause} [{step.justification.render()}]"
            for n, step in enumerate(self.steps, start=1)
        )

    def __str__(self) -> str:
        return self.render()

    def replay(self, inputs: Optional[Iterable[Clause]] = None) -> bool:
        """Re-derive every step from its justification; true iff all check."""
        allowed = set(inputs) if inputs is not None else None
        for n, step in enumerate(self.steps, start=1):
            j = step.justification
            if isinstance(j, Input):
                if allowed is not None and step.clause not in allowed:
                    return False
                continue
            if isinstance(j, Resolvent):
                i, k = j.parents
                if not (1 <= i < n and 1 <= k < n):
                    return False
                left = self.steps[i - 1].clause
                right = self.steps[k - 1].clause.substitute(j.renaming)
                a, b = j.literals
                if a not in left.literals or b not in right.literals:
                    return False
                if a.positive == b.positive or a.pred != b.pred or len(a.args) != len(b.args):
                    return False
                if a.substitute(j.unifier).args != b.substitute(j.unifier).args:
                    return False
                rest = (left.literals - {a}) | (right.literals - {b})
                if Clause(frozenset(rest)).substitute(j.unifier) != step.clause:
                    return False
                continue
            i = j.parent
            if not 1 <= i < n:
                return False
            parent = self.steps[i - 1].clause
            a, b = j.literals
            if a not in parent.literals or b not in parent.literals or a.positive != b.positive:
                return False
            if a.substitute(j.unifier) != b.substitute(j.unifier):
                return False
            if parent.substitute(j.unifier) != step.clause:
                return False
        return bool(self.steps) and self.steps[-1].clause.is_empty()


@dataclass
class ProverLimits:
    """Guards on the given-clause loop."""
    max_steps: int = 50_000
    max_clause_length: int = 12
    max_term_depth: int = 8

    def __post_init__(self):
        for name in ("max_steps", "max_clause_length", "max_term_depth"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")

    @classmethod
    def from_settings(cls) -> 'ProverLimits':
        s = settings()
        return cls(s.max_steps, s.max_clause_length, s.max_term_depth)


@dataclass
class Refuted:
    proof: RefutationProof

    def __bool__(self) -> bool:
        return True


@dataclass
class Saturated:
    """Closure computed within the limits without deriving the empty clause."""
    kept: int

    def __bool__(self) -> bool:
        return False


@dataclass
class ResourceOut:
    reason: str

    def __bool__(self) -> bool:
        return False


SearchResult = Union[Refuted, Saturated, ResourceOut]


# ─────────────────────────────────────────────────────────────────────────────
# Given-clause loop
# ─────────────────────────────────────────────────────────────────────────────

def _max_depth(c: Clause) -> int:
    return max((term_depth(a) for lit in c.literals for a in lit.args), default=0)


class _Prover:
    """One saturation run; state is private to the run."""

    def __init__(self, limits: ProverLimits):
        self.limits = limits
        self.steps: List[ProofStep] = []
        self.kept: List[int] = []
        self.processed: List[int] = []
        self.queue: List[Tuple[int, int]] = []
        self.inferences = 0
        self.incomplete = False

    def _record(self, clause: Clause, just: Justification) -> int:
        self.steps.append(ProofStep(clause, just))
        return len(self.steps)

    def _admit(self, clause: Clause, just: Justification) -> Optional[int]:
        """Keep clause unless it is redundant or over the limits; returns its step id."""
        if clause.is_empty():
            return self._record(clause, just)
        if clause.is_tautology():
            return None
        if len(clause) > self.limits.max_clause_length or _max_depth(clause) > self.limits.max_term_depth:
            self.incomplete = True
            return None
        for sid in self.kept:
            if subsumes(self.steps[sid - 1].clause, clause):
                return None
        sid = self._record(clause, just)
        self.kept.append(sid)
        heapq.heappush(self.queue, (len(clause), sid))
        return sid

    def _resolvents(self, gid: int, oid: int) -> Iterable[Tuple[Clause, Resolvent]]:
        given = self.steps[gid - 1].clause
        other, renaming = rename_apart(self.steps[oid - 1].clause, given.variables())
        for a in given.sorted():
            for b in other.sorted():
                if a.positive == b.positive or a.pred != b.pred or len(a.args) != len(b.args):
                    continue
                sigma = unify_pairs(zip(a.args, b.args))
                if isinstance(sigma, UnifyFailure):
                    continue
                rest = (given.literals - {a}) | (other.literals - {b})
                resolvent = Clause(frozenset(rest)).substitute(sigma)
                yield resolvent, Resolvent((gid, oid), (a, b), renaming, sigma)

    def _factors(self, gid: int) -> Iterable[Tuple[Clause, Factor]]:
        given = self.steps[gid - 1].clause
        lits = given.sorted()
        for i, a in enumerate(lits):
            for b in lits[i + 1:]:
                if a.positive != b.positive or a.pred != b.pred or len(a.args) != len(b.args):
                    continue
                sigma = unify_pairs(zip(a.args, b.args))
                if isinstance(sigma, UnifyFailure):
                    continue
                yield given.substitute(sigma), Factor(gid, (a, b), sigma)

    def _proof(self, empty_id: int) -> RefutationProof:
        needed: Set[int] = set()
        todo = [empty_id]
        while todo:
            sid = todo.pop()
            if sid in needed:
                continue
            needed.add(sid)
            j = self.steps[sid - 1].justification
            if isinstance(j, Resolvent):
                todo.extend(j.parents)
            elif isinstance(j, Factor):
                todo.append(j.parent)
        order = sorted(needed)
        renumber = {old: new for new, old in enumerate(order, start=1)}
        out: List[ProofStep] = []
        for sid in order:
            step = self.steps[sid - 1]
            j = step.justification
            if isinstance(j, Resolvent):
                j = Resolvent((renumber[j.parents[0]], renumber[j.parents[1]]),
                              j.literals, j.renaming, j.unifier)
            elif isinstance(j, Factor):
                j = Factor(renumber[j.parent], j.literals, j.unifier)
            out.append(ProofStep(step.clause, j))
        return RefutationProof(out)

    def run(self, cs: ClauseSet) -> SearchResult:
        for clause in cs:
            sid = self._admit(clause, Input())
            if sid is not None and clause.is_empty():
                return Refuted(self._proof(sid))

        while self.queue:
            _, gid = heapq.heappop(self.queue)
            self.processed.append(gid)
            candidates: List[Tuple[Clause, Justification]] = list(self._factors(gid))
            for oid in list(self.processed):
                candidates.extend(self._resolvents(gid, oid))
            for clause, just in candidates:
                self.inferences += 1
                if self.inferences > self.limits.max_steps:
                    logger.debug("resolution: step limit %d reached", self.limits.max_steps)
                    return ResourceOut(f"step limit {self.limits.max_steps} reached")
                sid = self._admit(clause, just)
                if sid is not None and clause.is_empty():
                    logger.debug("resolution: refuted after %d inferences, %d kept",
                                 self.inferences, len(self.kept))
                    return Refuted(self._proof(sid))

        logger.debug("resolution: closure after %d inferences, %d kept (incomplete=%s)",
                     self.inferences, len(self.kept), self.incomplete)
        if self.incomplete:
            return ResourceOut("clause length or term depth limit discarded clauses")
        return Saturated(len(self.kept))


def resolve_fol(cs: ClauseSet, lim: Optional[ProverLimits] = None) -> SearchResult:
    """Binary resolution with factoring; Refuted is always sound."""
    renamed: List[Clause] = []
    used: Set[str] = set()
    for clause in cs:
        clause, _ = rename_apart(clause, used)
        used |= clause.variables()
        renamed.append(clause)
    return _Prover(lim or ProverLimits.from_settings()).run(ClauseSet(tuple(renamed), cs.fresh))


def resolve_prop(cs: ClauseSet, lim: Optional[ProverLimits] = None) -> SearchResult:
    """Propositional resolution; Saturated means satisfiable."""
    if not cs.is_propositional():
        raise NotPropositionalError("resolve_prop needs a propositional clause set")
    return _Prover(lim or ProverLimits.from_settings()).run(cs)


# ─────────────────────────────────────────────────────────────────────────────
# Validity and equivalence
# ─────────────────────────────────────────────────────────────────────────────

@dataclass
class Proved:
    proof: RefutationProof

    def __bool__(self) -> bool:
        return True


@dataclass
class Unknown:
    """No refutation found; status is 'saturated' or 'resource-out'."""
    status: str
    detail: str = ""

    def __bool__(self) -> bool:
        return False


@dataclass
class Equivalent:
    forward: RefutationProof
    backward: RefutationProof

    def __bool__(self) -> bool:
        return True


def _status(result: SearchResult) -> Unknown:
    if isinstance(result, Saturated):
        return Unknown("saturated", f"{result.kept} clauses kept")
    return Unknown("resource-out", result.reason)


def prove_valid(f: Formula, lim: Optional[ProverLimits] = None) -> Union[Proved, Unknown]:
    """Proved iff resolution refutes the clausal form of ~f."""
    free = free_vars(f)
    if free:
        raise NotSentenceError(free)
    result = resolve_fol(clausify(Not(f)), lim)
    if isinstance(result, Refuted):
        return Proved(result.proof)
    return _status(result)


def prove_equiv(f1: Formula, f2: Formula,
                lim: Optional[ProverLimits] = None) -> Union[Equivalent, Unknown]:
    """Prove f1 -> f2 and f2 -> f1 separately; both refutations are returned."""
    for f in (f1, f2):
        free = free_vars(f)
        if free:
            raise NotSentenceError(free)
    s1, s2 = signature_of(f1), signature_of(f2)
    if s1 != s2:
        logger.warning("equivalence check over different signatures: [%s] vs [%s]", s1, s2)
    forward = prove_valid(Imp(f1, f2), lim)
    if not isinstance(forward, Proved):
        return Unknown(forward.status, f"first implies second: {forward.detail}")
    backward = prove_valid(Imp(f2, f1), lim)
    if not isinstance(backward, Proved):
        return Unknown(backward.status, f"second implies first: {backward.detail}")
    return Equivalent(forward.proof, backward.proof)
