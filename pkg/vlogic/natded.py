"""
Natural Deduction - Fitch-style proof format and checker (classical).

Proof text, one line per step:

    goal: p & q |- q & p          # optional header, premises split by ';'
    1 | p & q      premise
    2 | q          andE2 1
    3 | p          andE1 1
    4 | q & p      andI 2, 3

The number of '|' bars is the subproof depth (top level is one bar). Refs
are line numbers or 'a-b' subproof ranges. The checker validates, it never
searches; the first offending line is reported with a reason code.
"""

import re
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .errors import FormulaSyntaxError, LogicError
from .formula import (
    And, Atom, BinaryFormula, Bottom, Const, Exists, Forall, Formula, Func, Iff, Imp, Not, Or,
    Quantifier, Term, Var, free_vars, substitute, to_text, walk,
)
from .parser import parse

PROOF_DIR = Path(__file__).parent / "data" / "proofs"


class ProofSyntaxError(LogicError):
    """Proof text is malformed."""

    def __init__(self, message: str, line: int, column: int = 1):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


# ─────────────────────────────────────────────────────────────────────────────
# Data Classes
# ─────────────────────────────────────────────────────────────────────────────

class Rule(Enum):
    PREMISE = "premise"
    ASSUMPTION = "assumption"
    REIT = "reit"
    AND_I = "andI"
    AND_E1 = "andE1"
    AND_E2 = "andE2"
    OR_I1 = "orI1"
    OR_I2 = "orI2"
    OR_E = "orE"
    IMP_I = "impI"
    IMP_E = "impE"
    NOT_I = "notI"
    NOT_E = "notE"
    BOT_E = "botE"
    DNE = "dne"
    IFF_I = "iffI"
    IFF_E1 = "iffE1"
    IFF_E2 = "iffE2"
    FORALL_I = "forallI"
    FORALL_E = "forallE"
    EXISTS_I = "existsI"
    EXISTS_E = "existsE"

    @classmethod
    def lookup(cls, name: str) -> Optional['Rule']:
        return _RULES_BY_NAME.get(name.lower())


_RULES_BY_NAME = {r.value.lower(): r for r in Rule}


class Reason(Enum):
    BAD_STRUCTURE = "bad subproof structure"
    BAD_REFERENCE = "bad reference"
    WRONG_REF_COUNT = "wrong reference count"
    NOT_APPLICABLE = "rule not applicable"
    CONCLUSION_MISMATCH = "conclusion mismatch"
    EIGENVARIABLE = "eigenvariable violation"
    UNDECLARED_PREMISE = "undeclared premise"
    GOAL_MISMATCH = "goal mismatch"


@dataclass(frozen=True)
class LineRange:
    """Subproof reference 'start-end'."""
    start: int
    end: int

    def __str__(self) -> str:
        return f"{self.start}-{self.end}"


Ref = Union[int, LineRange]


@dataclass(frozen=True)
class Sequent:
    premises: Tuple[Formula, ...]
    conclusion: Formula

    def __str__(self) -> str:
        return "; ".join(to_text(p) for p in self.premises) + " |- " + to_text(self.conclusion)


@dataclass
class ProofLine:
    number: int
    formula: Formula
    rule: Rule
    refs: Tuple[Ref, ...] = ()
    depth: int = 1


@dataclass
class Proof:
    goal: Sequent
    lines: List[ProofLine] = field(default_factory=list)

    def to_text(self) -> str:
        out = [f"goal: {self.goal}"]
        width = len(str(len(self.lines)))
        for line in self.lines:
            refs = ", ".join(str(r) for r in line.refs)
            bars = "| " * line.depth
            text = f"{str(line.number).ljust(width)} {bars}{to_text(line.formula)}  {line.rule.value}"
            out.append(f"{text} {refs}".rstrip())
        return "\n".join(out) + "\n"


@dataclass
class Valid:
    def __bool__(self) -> bool:
        return True


@dataclass
class Invalid:
    line: int
    reason: Reason
    detail: str = ""

    def __bool__(self) -> bool:
        return False

    def render(self) -> str:
        text = f"line {self.line}: {self.reason.value}"
        return f"{text} ({self.detail})" if self.detail else text


CheckResult = Union[Valid, Invalid]


# ─────────────────────────────────────────────────────────────────────────────
# Parsing
# ─────────────────────────────────────────────────────────────────────────────

_LINE = re.compile(r"^\s*(\d+)\s+((?:\|\s*)+)(.*)$")
_TAIL = re.compile(r"^(.*\S)\s+([A-Za-z][A-Za-z0-9]*)((?:\s+[\d\s,\-]+)?)\s*$")
_REF = re.compile(r"^(\d+)(?:\s*-\s*(\d+))?$")


def _parse_refs(text: str, lineno: int, column: int) -> Tuple[Ref, ...]:
    text = text.strip()
    if not text:
        return ()
    refs: List[Ref] = []
    for part in re.split(r"\s*,\s*|\s+(?=\d)", text):
        m = _REF.match(part.strip())
        if not m:
            raise ProofSyntaxError(f"bad reference '{part}'", lineno, column)
        if m.group(2) is None:
            refs.append(int(m.group(1)))
        else:
            refs.append(LineRange(int(m.group(1)), int(m.group(2))))
    return tuple(refs)


def _parse_formula(text: str, lineno: int, column: int) -> Formula:
    try:
        return parse(text)
    except FormulaSyntaxError as e:
        col = column + (e.column - 1 if e.column else 0)
        raise ProofSyntaxError(f"formula: {e}", lineno, col) from None
    except LogicError as e:
        raise ProofSyntaxError(f"formula: {e}", lineno, column) from None


def parse_proof(text: str) -> Proof:
    """
    Parse proof text.

    Raises:
        ProofSyntaxError: malformed line, non-dense numbering, zero bars,
            unknown rule, bad formula, or a depth increase that is not an
            assumption
    """
    goal: Optional[Sequent] = None
    lines: List[ProofLine] = []
    depth = 1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        if stripped.lower().startswith("goal:"):
            if goal is not None or lines:
                raise ProofSyntaxError("goal header must come first", lineno)
            body = stripped[5:]
            if "|-" not in body:
                raise ProofSyntaxError("goal needs '|-'", lineno)
            left, right = body.rsplit("|-", 1)
            premises = tuple(_parse_formula(p, lineno, 1) for p in left.split(";") if p.strip())
            goal = Sequent(premises, _parse_formula(right, lineno, 1))
            continue

        m = _LINE.match(line)
        if not m:
            if re.match(r"^\s*\d+\s", line):
                raise ProofSyntaxError("line has no '|' depth bars", lineno, 1)
            raise ProofSyntaxError("expected '<number> <bars> <formula> <rule> [refs]'", lineno, 1)
        number = int(m.group(1))
        if number != len(lines) + 1:
            raise ProofSyntaxError(f"expected line number {len(lines) + 1}, got {number}", lineno, 1)
        bars = m.group(2).count("|")
        rest = m.group(3)
        rest_col = m.start(3) + 1
        tail = _TAIL.match(rest)
        if not tail:
            raise ProofSyntaxError("missing rule name", lineno, rest_col)
        rule = Rule.lookup(tail.group(2))
        if rule is None:
            raise ProofSyntaxError(f"unknown rule '{tail.group(2)}'", lineno, rest_col + tail.start(2))
        if bars > depth and rule is not Rule.ASSUMPTION:
            raise ProofSyntaxError("subproof opened without an assumption", lineno, m.start(2) + 1)
        if bars > depth + 1:
            raise ProofSyntaxError("depth increases by more than one", lineno, m.start(2) + 1)
        formula = _parse_formula(tail.group(1), lineno, rest_col)
        refs = _parse_refs(tail.group(3), lineno, rest_col + tail.start(3))
        lines.append(ProofLine(number, formula, rule, refs, bars))
        depth = bars

    if not lines:
        raise ProofSyntaxError("proof has no lines", 1)
    if goal is None:
        premises = tuple(l.formula for l in lines if l.rule is Rule.PREMISE)
        goal = Sequent(premises, lines[-1].formula)
    return Proof(goal, lines)


def load_proof(path: Union[str, Path]) -> Proof:
    return parse_proof(Path(path).read_text())


def bundled_proofs() -> Dict[str, Path]:
    """Name -> path of the proofs shipped in vlogic/data/proofs."""
    return {p.stem: p for p in sorted(PROOF_DIR.glob("*.proof"))}


# ─────────────────────────────────────────────────────────────────────────────
# Instance matching for quantifier rules
# ─────────────────────────────────────────────────────────────────────────────

_NO_TERM = object()


def _match_term(p: Term, t: Term, var: str, found: list) -> bool:
    if isinstance(p, Var) and p.name == var:
        if found:
            return found[0] == t
        found.append(t)
        return True
    if isinstance(p, Func):
        return (isinstance(t, Func) and p.name == t.name and len(p.args) == len(t.args)
                and all(_match_term(a, b, var, found) for a, b in zip(p.args, t.args)))
    return p == t


def _match_formula(p: Formula, t: Formula, var: str, found: list) -> bool:
    if type(p) is not type(t):
        return False
    if isinstance(p, Atom):
        return (p.pred == t.pred and len(p.args) == len(t.args)
                and all(_match_term(a, b, var, found) for a, b in zip(p.args, t.args)))
    if isinstance(p, Not):
        return _match_formula(p.body, t.body, var, found)
    if isinstance(p, BinaryFormula):
        return _match_formula(p.left, t.left, var, found) and _match_formula(p.right, t.right, var, found)
    if isinstance(p, Quantifier):
        if p.var != t.var:
            return False
        if p.var == var:
            return p == t
        return _match_formula(p.body, t.body, var, found)
    return True


def instance_term(body: Formula, var: str, target: Formula):
    """
    The term t with substitute(body, var, t) == target.

    Returns _NO_TERM when var is not free in body and target equals body,
    None when target is not an instance.
    """
    found: list = []
    if not _match_formula(body, target, var, found):
        return None
    if not found:
        return _NO_TERM if body == target else None
    if substitute(body, var, found[0]) != target:
        return None
    return found[0]


def _mentions(f: Formula, sym: Term) -> bool:
    """Does the eigen symbol occur in f?"""
    if isinstance(sym, Var):
        return sym.name in free_vars(f)

    def in_term(t: Term) -> bool:
        if t == sym:
            return True
        return isinstance(t, Func) and any(in_term(a) for a in t.args)

    return any(isinstance(n, Atom) and any(in_term(a) for a in n.args) for n in walk(f))


# ─────────────────────────────────────────────────────────────────────────────
# Checker
# ─────────────────────────────────────────────────────────────────────────────

class _Fail(Exception):
    def __init__(self, reason: Reason, detail: str = ""):
        self.reason = reason
        self.detail = detail


class _Checker:
    """Single pass over the lines; scope contexts are stacks of open assumption lines."""

    def __init__(self, proof: Proof):
        self.proof = proof
        self.by_number: Dict[int, ProofLine] = {}
        self.context: Dict[int, Tuple[int, ...]] = {}
        self.closed: Dict[int, int] = {}
        self.stack: List[int] = []

    # ── scopes ──────────────────────────────────────────────────

    def _close_to(self, size: int, current: int):
        while len(self.stack) > size:
            start = self.stack.pop()
            self.closed[start] = current - 1

    def _enter(self, line: ProofLine):
        d = line.depth
        if d < 1:
            raise _Fail(Reason.BAD_STRUCTURE, "depth below one")
        if line.rule is Rule.ASSUMPTION:
            if d < 2 or d > len(self.stack) + 2:
                raise _Fail(Reason.BAD_STRUCTURE, "assumption must open a subproof")
            self._close_to(d - 2, line.number)
            self.stack.append(line.number)
        else:
            if d > len(self.stack) + 1:
                raise _Fail(Reason.BAD_STRUCTURE, "subproof opened without an assumption")
            self._close_to(d - 1, line.number)
        self.context[line.number] = tuple(self.stack)

    def _line(self, ref: Ref, at: ProofLine) -> Formula:
        if isinstance(ref, LineRange):
            raise _Fail(Reason.BAD_REFERENCE, f"expected a line, got range {ref}")
        if not 1 <= ref < at.number:
            raise _Fail(Reason.BAD_REFERENCE, f"line {ref} does not precede line {at.number}")
        ctx, here = self.context[ref], self.context[at.number]
        if here[:len(ctx)] != ctx:
            raise _Fail(Reason.BAD_REFERENCE, f"line {ref} is not in scope")
        return self.by_number[ref].formula

    def _range(self, ref: Ref, at: ProofLine) -> Tuple[Formula, Formula]:
        if not isinstance(ref, LineRange):
            raise _Fail(Reason.BAD_REFERENCE, f"expected a subproof range, got line {ref}")
        start, end = ref.start, ref.end
        if start not in self.closed or self.closed[start] != end or end >= at.number:
            raise _Fail(Reason.BAD_REFERENCE, f"{ref} is not a closed subproof")
        parent, here = self.context[start][:-1], self.context[at.number]
        if here[:len(parent)] != parent or start in here:
            raise _Fail(Reason.BAD_REFERENCE, f"subproof {ref} is not in scope")
        return self.by_number[start].formula, self.by_number[end].formula

    def _open_assumptions(self, at: ProofLine) -> List[Formula]:
        return [self.by_number[n].formula for n in self.context[at.number] if n != at.number]

    # ── rules ───────────────────────────────────────────────────

    @staticmethod
    def _count(line: ProofLine, n: int):
        if len(line.refs) != n:
            raise _Fail(Reason.WRONG_REF_COUNT, f"{line.rule.value} takes {n}, got {len(line.refs)}")

    @staticmethod
    def _expect(actual: Formula, expected: Formula):
        if actual != expected:
            raise _Fail(Reason.CONCLUSION_MISMATCH, f"expected {to_text(expected)}")

    @staticmethod
    def _shape(f: Formula, cls: type, what: str):
        if not isinstance(f, cls):
            raise _Fail(Reason.NOT_APPLICABLE, f"{to_text(f)} is not {what}")

    def _eigen(self, sym: Term, line: ProofLine, also: Sequence[Formula]):
        if not isinstance(sym, (Const, Var)):
            raise _Fail(Reason.EIGENVARIABLE, f"{sym} is not a single symbol")
        scope = list(self.proof.goal.premises) + self._open_assumptions(line) + list(also)
        for f in scope:
            if _mentions(f, sym):
                raise _Fail(Reason.EIGENVARIABLE, f"{sym} occurs in {to_text(f)}")

    def apply(self, line: ProofLine):
        rule, f, refs = line.rule, line.formula, line.refs

        if rule is Rule.PREMISE:
            self._count(line, 0)
            if line.depth != 1:
                raise _Fail(Reason.BAD_STRUCTURE, "premise inside a subproof")
            if f not in self.proof.goal.premises:
                raise _Fail(Reason.UNDECLARED_PREMISE, to_text(f))
        elif rule is Rule.ASSUMPTION:
            self._count(line, 0)
        elif rule is Rule.REIT:
            self._count(line, 1)
            self._expect(f, self._line(refs[0], line))
        elif rule is Rule.AND_I:
            self._count(line, 2)
            self._expect(f, And(self._line(refs[0], line), self._line(refs[1], line)))
        elif rule in (Rule.AND_E1, Rule.AND_E2):
            self._count(line, 1)
            g = self._line(refs[0], line)
            self._shape(g, And, "a conjunction")
            self._expect(f, g.left if rule is Rule.AND_E1 else g.right)
        elif rule in (Rule.OR_I1, Rule.OR_I2):
            self._count(line, 1)
            g = self._line(refs[0], line)
            if not isinstance(f, Or):
                raise _Fail(Reason.CONCLUSION_MISMATCH, "expected a disjunction")
            self._expect(f.left if rule is Rule.OR_I1 else f.right, g)
        elif rule is Rule.OR_E:
            self._count(line, 3)
            g = self._line(refs[0], line)
            (a1, c1), (a2, c2) = self._range(refs[1], line), self._range(refs[2], line)
            self._shape(g, Or, "a disjunction")
            if a1 != g.left or a2 != g.right:
                raise _Fail(Reason.NOT_APPLICABLE, "subproof assumptions do not match the disjuncts")
            self._expect(c1, f)
            self._expect(c2, f)
        elif rule is Rule.IMP_I:
            self._count(line, 1)
            a, c = self._range(refs[0], line)
            self._expect(f, Imp(a, c))
        elif rule is Rule.IMP_E:
            self._count(line, 2)
            g, h = self._line(refs[0], line), self._line(refs[1], line)
            self._shape(g, Imp, "an implication")
            if h != g.left:
                raise _Fail(Reason.NOT_APPLICABLE, "second reference is not the antecedent")
            self._expect(f, g.right)
        elif rule is Rule.NOT_I:
            self._count(line, 1)
            a, c = self._range(refs[0], line)
            if not isinstance(c, Bottom):
                raise _Fail(Reason.NOT_APPLICABLE, "subproof does not end in false")
            self._expect(f, Not(a))
        elif rule is Rule.NOT_E:
            self._count(line, 2)
            g, h = self._line(refs[0], line), self._line(refs[1], line)
            if h != Not(g):
                raise _Fail(Reason.NOT_APPLICABLE, "second reference is not the negation of the first")
            self._expect(f, Bottom())
        elif rule is Rule.BOT_E:
            self._count(line, 1)
            self._shape(self._line(refs[0], line), Bottom, "false")
        elif rule is Rule.DNE:
            self._count(line, 1)
            g = self._line(refs[0], line)
            if not (isinstance(g, Not) and isinstance(g.body, Not)):
                raise _Fail(Reason.NOT_APPLICABLE, f"{to_text(g)} is not a double negation")
            self._expect(f, g.body.body)
        elif rule is Rule.IFF_I:
            self._count(line, 2)
            (a1, c1), (a2, c2) = self._range(refs[0], line), self._range(refs[1], line)
            if a1 != c2 or a2 != c1:
                raise _Fail(Reason.NOT_APPLICABLE, "subproofs are not converse")
            self._expect(f, Iff(a1, c1))
        elif rule in (Rule.IFF_E1, Rule.IFF_E2):
            self._count(line, 2)
            g, h = self._line(refs[0], line), self._line(refs[1], line)
            self._shape(g, Iff, "a biconditional")
            given, result = (g.left, g.right) if rule is Rule.IFF_E1 else (g.right, g.left)
            if h != given:
                raise _Fail(Reason.NOT_APPLICABLE, "second reference does not match the biconditional")
            self._expect(f, result)
        elif rule is Rule.FORALL_E:
            self._count(line, 1)
            g = self._line(refs[0], line)
            self._shape(g, Forall, "a universal")
            if instance_term(g.body, g.var, f) is None:
                raise _Fail(Reason.CONCLUSION_MISMATCH, f"not an instance of {to_text(g)}")
        elif rule is Rule.EXISTS_I:
            self._count(line, 1)
            g = self._line(refs[0], line)
            if not isinstance(f, Exists):
                raise _Fail(Reason.CONCLUSION_MISMATCH, "expected an existential")
            if instance_term(f.body, f.var, g) is None:
                raise _Fail(Reason.CONCLUSION_MISMATCH, f"{to_text(g)} is not an instance")
        elif rule is Rule.FORALL_I:
            self._count(line, 1)
            g = self._line(refs[0], line)
            if not isinstance(f, Forall):
                raise _Fail(Reason.CONCLUSION_MISMATCH, "expected a universal")
            sym = instance_term(f.body, f.var, g)
            if sym is None:
                raise _Fail(Reason.CONCLUSION_MISMATCH, f"{to_text(g)} is not an instance")
            if sym is not _NO_TERM:
                self._eigen(sym, line, [f])
        elif rule is Rule.EXISTS_E:
            self._count(line, 2)
            g = self._line(refs[0], line)
            a, c = self._range(refs[1], line)
            self._shape(g, Exists, "an existential")
            sym = instance_term(g.body, g.var, a)
            if sym is None:
                raise _Fail(Reason.NOT_APPLICABLE, "assumption is not an instance of the existential")
            self._expect(f, c)
            if sym is not _NO_TERM:
                self._eigen(sym, line, [g, f])

    def run(self) -> CheckResult:
        lines = self.proof.lines
        if not lines:
            return Invalid(0, Reason.GOAL_MISMATCH, "empty proof")
        for expected, line in enumerate(lines, start=1):
            try:
                if line.number != expected:
                    raise _Fail(Reason.BAD_STRUCTURE, f"expected line number {expected}")
                self.by_number[line.number] = line
                self._enter(line)
                self.apply(line)
            except _Fail as e:
                return Invalid(line.number, e.reason, e.detail)
        last = lines[-1]
        if last.depth != 1:
            return Invalid(last.number, Reason.BAD_STRUCTURE, "proof ends inside a subproof")
        if last.formula != self.proof.goal.conclusion:
            return Invalid(last.number, Reason.GOAL_MISMATCH,
                           f"proved {to_text(last.formula)}, goal is {to_text(self.proof.goal.conclusion)}")
        return Valid()


def check(p: Proof) -> CheckResult:
    """Valid iff every line follows by its rule and the last top-level line is the goal."""
    return _Checker(p).run()


def with_rule(p: Proof, number: int, rule: Rule) -> Proof:
    """Copy of p with one line's rule replaced."""
    lines = [replace(l, rule=rule) if l.number == number else l for l in p.lines]
    return Proof(p.goal, lines)


def with_refs(p: Proof, number: int, refs: Tuple[Ref, ...]) -> Proof:
    """Copy of p with one line's references replaced."""
    lines = [replace(l, refs=refs) if l.number == number else l for l in p.lines]
    return Proof(p.goal, lines)
