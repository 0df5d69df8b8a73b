"""
Worked Example - The two-sentence equivalence exercise, checked end to end.

Sentence (1): "not for every interval t: if there is no communication or the
battery is low at t, and a package must be sent, then a package is in the
buffer at t". Sentence (2): "at some interval t a package must be sent, none
is buffered, and there is no communication or the battery is low".

Both formalisations (one-variable f1/f2, two-variable g1/g2) are proved
equivalent by resolution and on every model with at most two elements, and
each rewrite step of the hand proofs is checked the same way.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional

from .formula import Formula, to_text
from .normalform import nnf
from .parser import parse
from .resolution import Equivalent, ProverLimits, prove_equiv
from .semantics import equiv_finite

logger = logging.getLogger(__name__)

F1_TEXT = "~forall t. ((C(t) | B(t)) & S(t) -> T(t))"
F2_TEXT = "exists t. (S(t) & ~T(t) & (C(t) | B(t)))"
G1_TEXT = "~forall t. exists p. ((C(t) | B(t)) & S(p, t) -> T(p, t))"
G2_TEXT = "exists t. forall p. (S(p, t) & ~T(p, t) & (C(t) | B(t)))"

CHAIN_ONE = (
    F1_TEXT,
    "exists t. ~((C(t) | B(t)) & S(t) -> T(t))",
    "exists t. ~(~((C(t) | B(t)) & S(t)) | T(t))",
    "exists t. ((C(t) | B(t)) & S(t) & ~T(t))",
    F2_TEXT,
)

CHAIN_TWO = (
    G2_TEXT,
    "~forall t. ~forall p. (S(p, t) & ~T(p, t) & (C(t) | B(t)))",
    "~forall t. exists p. ~(S(p, t) & ~T(p, t) & (C(t) | B(t)))",
    "~forall t. exists p. (~S(p, t) | T(p, t) | ~(C(t) | B(t)))",
    "~forall t. exists p. (~S(p, t) | ~(C(t) | B(t)) | T(p, t))",
    "~forall t. exists p. (~(S(p, t) & (C(t) | B(t))) | T(p, t))",
    "~forall t. exists p. (S(p, t) & (C(t) | B(t)) -> T(p, t))",
)

DOMAIN_BOUND = 2


@dataclass
class Fixtures:
    f1: Formula
    f2: Formula
    g1: Formula
    g2: Formula
    chain_one: List[Formula]
    chain_two: List[Formula]

    @classmethod
    def load(cls) -> 'Fixtures':
        return cls(parse(F1_TEXT), parse(F2_TEXT), parse(G1_TEXT), parse(G2_TEXT),
                   [parse(t) for t in CHAIN_ONE], [parse(t) for t in CHAIN_TWO])


@dataclass
class Check:
    description: str
    passed: bool
    detail: str = ""

    def render(self) -> str:
        mark = "ok  " if self.passed else "FAIL"
        text = f"[{mark}] {self.description}"
        return f"{text}  ({self.detail})" if self.detail and not self.passed else text


@dataclass
class Report:
    checks: List[Check] = field(default_factory=list)
    proofs: List[Equivalent] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def render(self, with_proofs: bool = False) -> str:
        lines = [c.render() for c in self.checks]
        if with_proofs:
            for eq in self.proofs:
                lines += ["", "forward:", eq.forward.render(), "", "backward:", eq.backward.render()]
        ok = sum(1 for c in self.checks if c.passed)
        lines.append(f"{ok}/{len(self.checks)} checks passed")
        return "\n".join(lines)


def _resolution_check(report: Report, label: str, a: Formula, b: Formula, lim: ProverLimits):
    result = prove_equiv(a, b, lim)
    if isinstance(result, Equivalent):
        report.proofs.append(result)
        steps = result.forward.resolution_steps + result.backward.resolution_steps
        report.checks.append(Check(f"{label}: equivalent by resolution ({steps} resolution steps)", True))
    else:
        report.checks.append(Check(f"{label}: equivalent by resolution", False,
                                   f"{result.status}: {result.detail}"))


def _finite_check(report: Report, label: str, a: Formula, b: Formula):
    result = equiv_finite(a, b, DOMAIN_BOUND)
    report.checks.append(Check(f"{label}: equivalent on domains of size <= {DOMAIN_BOUND}",
                               bool(result), "" if result else result.render()))


def _chain_checks(report: Report, name: str, chain: List[Formula]):
    for i in range(1, len(chain)):
        _finite_check(report, f"{name} step {i}", chain[i - 1], chain[i])


def verify_worked_example(lim: Optional[ProverLimits] = None) -> Report:
    """Run every check; failures are recorded in the report, never raised."""
    lim = lim or ProverLimits.from_settings()
    fx = Fixtures.load()
    report = Report()

    _resolution_check(report, "f1 vs f2", fx.f1, fx.f2, lim)
    _resolution_check(report, "g1 vs g2", fx.g1, fx.g2, lim)
    _finite_check(report, "f1 vs f2", fx.f1, fx.f2)
    _finite_check(report, "g1 vs g2", fx.g1, fx.g2)

    _chain_checks(report, "chain one", fx.chain_one)
    report.checks.append(Check("chain one runs from f1 to f2",
                               fx.chain_one[0] == fx.f1 and fx.chain_one[-1] == fx.f2))
    lowered = nnf(fx.chain_one[0])
    report.checks.append(Check("chain one: NNF of f1 is line 4", lowered == fx.chain_one[3],
                               f"nnf gives {to_text(lowered)}"))

    _chain_checks(report, "chain two", fx.chain_two)
    report.checks.append(Check("chain two starts at g2", fx.chain_two[0] == fx.g2))
    _finite_check(report, "chain two end vs g1", fx.chain_two[-1], fx.g1)

    logger.debug("worked example: %d checks, passed=%s", len(report.checks), report.passed)
    return report
