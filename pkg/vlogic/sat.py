"""
SAT - DPLL decision procedure and model enumeration for propositional clause sets.

Clauses are lowered to frozensets of signed integers (atoms numbered by
sorted name, as in DIMACS). The search is plain DPLL: unit propagation to a
fixpoint, pure-literal elimination, then branching on the lowest-numbered
atom still occurring in the clauses, true first, with chronological
backtracking on an explicit stack.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Tuple, Union

from .errors import NotPropositionalError
from .formula import Formula, atoms
from .normalform import ClauseSet, tseitin

logger = logging.getLogger(__name__)

IntClause = FrozenSet[int]


@dataclass
class Sat:
    """Satisfiable; model is total over the clause-set atoms."""
    model: Dict[str, bool] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return True


@dataclass
class Unsat:
    """No model exists."""

    def __bool__(self) -> bool:
        return False


SatResult = Union[Sat, Unsat]


# ─────────────────────────────────────────────────────────────────────────────
# Integer-clause core
# ─────────────────────────────────────────────────────────────────────────────

def _simplify(clauses: List[IntClause], true_lits: FrozenSet[int]) -> List[IntClause]:
    """Drop satisfied clauses and falsified literals."""
    false_lits = frozenset(-lit for lit in true_lits)
    out = []
    for c in clauses:
        if c & true_lits:
            continue
        out.append(c - false_lits if c & false_lits else c)
    return out


def _propagate(clauses: List[IntClause],
               assign: Dict[int, bool]) -> Optional[Tuple[List[IntClause], Dict[int, bool]]]:
    """Unit propagation then pure literals, repeated to a fixpoint; None on conflict."""
    while True:
        if any(not c for c in clauses):
            return None
        units = {next(iter(c)) for c in clauses if len(c) == 1}
        if units:
            if any(-lit in units for lit in units):
                return None
            for lit in units:
                assign[abs(lit)] = lit > 0
            clauses = _simplify(clauses, frozenset(units))
            continue
        polarity = set()
        for c in clauses:
            polarity |= c
        pure = frozenset(lit for lit in polarity if -lit not in polarity)
        if not pure:
            return clauses, assign
        for lit in pure:
            assign[abs(lit)] = lit > 0
        clauses = _simplify(clauses, pure)


def solve_int(clauses: List[IntClause]) -> Optional[Dict[int, bool]]:
    """DPLL over integer clauses; returns a partial model or None."""
    stack: List[Tuple[List[IntClause], Dict[int, bool]]] = [(list(clauses), {})]
    decisions = 0
    while stack:
        current, assign = stack.pop()
        state = _propagate(current, assign)
        if state is None:
            continue
        current, assign = state
        if not current:
            logger.debug("dpll: SAT after %d decisions", decisions)
            return assign
        var = min(abs(lit) for c in current for lit in c)
        decisions += 1
        stack.append((_simplify(current, frozenset({-var})), {**assign, var: False}))
        stack.append((_simplify(current, frozenset({var})), {**assign, var: True}))
    logger.debug("dpll: UNSAT after %d decisions", decisions)
    return None


class _Encoding:
    """Atom name <-> DIMACS index for one clause set."""

    def __init__(self, cs: ClauseSet):
        if not cs.is_propositional():
            raise NotPropositionalError("SAT solving needs a propositional clause set")
        self.names = cs.atoms()
        self.index = {name: i for i, name in enumerate(self.names, start=1)}
        self.clauses: List[IntClause] = [
            frozenset(self.index[lit.pred] if lit.positive else -self.index[lit.pred]
                      for lit in c.literals)
            for c in cs
        ]

    def decode(self, assign: Dict[int, bool]) -> Dict[str, bool]:
        return {name: assign.get(i, False) for i, name in enumerate(self.names, start=1)}

    def blocking(self, model: Dict[str, bool]) -> IntClause:
        return frozenset(-self.index[n] if v else self.index[n] for n, v in model.items())


# ─────────────────────────────────────────────────────────────────────────────
# Public API
# ─────────────────────────────────────────────────────────────────────────────

def dpll(cs: ClauseSet) -> SatResult:
    """Decide satisfiability; unconstrained atoms are set false in the model."""
    enc = _Encoding(cs)
    assign = solve_int(enc.clauses)
    if assign is None:
        return Unsat()
    return Sat(enc.decode(assign))


def enumerate_models(cs: ClauseSet, limit: int) -> List[Dict[str, bool]]:
    """Up to limit distinct total models, each found after blocking the previous ones."""
    if limit < 1:
        raise ValueError("limit must be at least 1")
    enc = _Encoding(cs)
    clauses = list(enc.clauses)
    models: List[Dict[str, bool]] = []
    while len(models) < limit:
        assign = solve_int(clauses)
        if assign is None:
            break
        model = enc.decode(assign)
        models.append(model)
        clauses.append(enc.blocking(model))
    return models


def check_model(cs: ClauseSet, model: Dict[str, bool]) -> bool:
    """Every clause has a literal made true by model."""
    return all(any(model.get(lit.pred, False) == lit.positive for lit in c.literals) for c in cs)


def solve_formula(f: Formula) -> SatResult:
    """Satisfiability of a propositional formula via its Tseitin encoding."""
    result = dpll(tseitin(f))
    if isinstance(result, Unsat):
        return result
    return Sat({name: result.model.get(name, False) for name in sorted(atoms(f))})


def model_lines(model: Dict[str, bool], index: Dict[str, int],
                per_line: int = 10) -> List[str]:
    """Solver-style 'v' lines: signed DIMACS indices in order, terminated by 0."""
    lits = [i if model.get(name, False) else -i
            for name, i in sorted(index.items(), key=lambda item: item[1])]
    lits.append(0)
    return ["v " + " ".join(str(n) for n in lits[k:k + per_line])
            for k in range(0, len(lits), per_line)]
