"""
Syllogisms - Categorical syllogisms as monadic first-order arguments.

A syllogism is a figure (1-4) and three moods (A, E, I, O) for the major
premise, the minor premise and the conclusion, over the predicates S, M and
P. Validity is decided on canonical monadic models (one element per
inhabited S/M/P type, so at most eight elements), which is complete for
this fragment.
"""

import itertools
import logging
import re
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Tuple, Union

from .config_manager import settings
from .errors import LogicError
from .formula import And, Atom, Exists, Forall, Formula, Imp, Not, Var, conjoin
from .resolution import Proved, prove_valid
from .semantics import Countermodel, canonical_monadic_models, compile_formula

logger = logging.getLogger(__name__)

MOODS = "AEIO"
TERMS = ("S", "M", "P")

# (major premise, minor premise) as (subject, predicate) pairs
FIGURES: Dict[int, Tuple[Tuple[str, str], Tuple[str, str]]] = {
    1: (("M", "P"), ("S", "M")),
    2: (("P", "M"), ("S", "M")),
    3: (("M", "P"), ("M", "S")),
    4: (("P", "M"), ("M", "S")),
}

TRADITIONAL_NAMES: Dict[str, str] = {
    "Barbara": "AAA-1", "Celarent": "EAE-1", "Darii": "AII-1", "Ferio": "EIO-1",
    "Barbari": "AAI-1", "Celaront": "EAO-1",
    "Cesare": "EAE-2", "Camestres": "AEE-2", "Festino": "EIO-2", "Baroco": "AOO-2",
    "Cesaro": "EAO-2", "Camestros": "AEO-2",
    "Darapti": "AAI-3", "Disamis": "IAI-3", "Datisi": "AII-3", "Felapton": "EAO-3",
    "Bocardo": "OAO-3", "Ferison": "EIO-3",
    "Bramantip": "AAI-4", "Camenes": "AEE-4", "Dimaris": "IAI-4", "Fesapo": "EAO-4",
    "Fresison": "EIO-4", "Camenos": "AEO-4",
}

ALIASES: Dict[str, str] = {
    "Bamalip": "Bramantip", "Calemes": "Camenes", "Dimatis": "Dimaris", "Calemos": "Camenos",
}

_CODE = re.compile(r"^\s*([AEIOaeio]{3})\s*-\s*([1-4])\s*$")


class SyllogismError(LogicError):
    """Malformed figure/mood or unknown traditional name."""
    pass


@dataclass(frozen=True)
class Syllogism:
    figure: int
    moods: str

    def __post_init__(self):
        if self.figure not in FIGURES:
            raise SyllogismError(f"figure must be 1..4, got {self.figure}")
        if len(self.moods) != 3 or any(m not in MOODS for m in self.moods):
            raise SyllogismError(f"moods must be three of A, E, I, O, got '{self.moods}'")

    @classmethod
    def parse(cls, text: str) -> 'Syllogism':
        """'AAA-1' or a traditional name such as 'Barbara' (case-insensitive)."""
        m = _CODE.match(text)
        if m:
            return cls(int(m.group(2)), m.group(1).upper())
        wanted = text.strip().lower()
        for name in list(TRADITIONAL_NAMES) + list(ALIASES):
            if name.lower() == wanted:
                name = ALIASES.get(name, name)
                return cls.parse(TRADITIONAL_NAMES[name])
        raise SyllogismError(f"not a syllogism: '{text}' (expected e.g. AAA-1 or Barbara)")

    @property
    def code(self) -> str:
        return f"{self.moods}-{self.figure}"

    @property
    def name(self) -> Optional[str]:
        return _NAMES_BY_CODE.get(self.code)

    def terms(self) -> List[Tuple[str, str]]:
        """(subject, predicate) of major premise, minor premise, conclusion."""
        major, minor = FIGURES[self.figure]
        return [major, minor, ("S", "P")]

    def __str__(self) -> str:
        return f"{self.code} ({self.name})" if self.name else self.code


_NAMES_BY_CODE = {code: name for name, code in TRADITIONAL_NAMES.items()}


def all_syllogisms() -> Iterator[Syllogism]:
    """The 256 combinations, figure by figure, moods in AEIO order."""
    for figure in sorted(FIGURES):
        for moods in itertools.product(MOODS, repeat=3):
            yield Syllogism(figure, "".join(moods))


# ─────────────────────────────────────────────────────────────────────────────
# Translation
# ─────────────────────────────────────────────────────────────────────────────

_X = Var("x")


def _pred(name: str) -> Atom:
    return Atom(name, (_X,))


def categorical(mood: str, subject: str, predicate: str) -> Formula:
    """A: all S are P, E: no S are P, I: some S are P, O: some S are not P."""
    s, p = _pred(subject), _pred(predicate)
    if mood == "A":
        return Forall("x", Imp(s, p))
    if mood == "E":
        return Forall("x", Imp(s, Not(p)))
    if mood == "I":
        return Exists("x", And(s, p))
    if mood == "O":
        return Exists("x", And(s, Not(p)))
    raise SyllogismError(f"unknown mood '{mood}'")


def syllogism_to_fol(s: Syllogism, existential_import: bool = False) -> Tuple[List[Formula], Formula]:
    """
    Premises and conclusion as monadic sentences.

    With existential import the premises also state that the subject of
    every A/E premise and the subject of the conclusion are non-empty.
    """
    terms = s.terms()
    premises = [categorical(mood, subj, pred) for mood, (subj, pred) in zip(s.moods[:2], terms[:2])]
    conclusion = categorical(s.moods[2], *terms[2])
    if existential_import:
        inhabited: List[str] = []
        for mood, (subj, _) in zip(s.moods[:2], terms[:2]):
            if mood in "AE" and subj not in inhabited:
                inhabited.append(subj)
        if terms[2][0] not in inhabited:
            inhabited.append(terms[2][0])
        premises += [Exists("x", _pred(t)) for t in inhabited]
    return premises, conclusion


# ─────────────────────────────────────────────────────────────────────────────
# Decision
# ─────────────────────────────────────────────────────────────────────────────

@dataclass
class ValidArgument:
    """No countermodel exists; proof is set when resolution certified it."""
    proof: Optional[Proved] = None

    def __bool__(self) -> bool:
        return True


SyllogismResult = Union[ValidArgument, Countermodel]


def check_syllogism(s: Syllogism, existential_import: bool = False,
                    certify: bool = False, max_domain: Optional[int] = None) -> SyllogismResult:
    """Search the canonical monadic models for premises true, conclusion false."""
    max_domain = settings().syllogism_max_domain if max_domain is None else max_domain
    premises, conclusion = syllogism_to_fol(s, existential_import)
    tests = [compile_formula(p) for p in premises]
    goal = compile_formula(conclusion)
    for m in canonical_monadic_models(TERMS):
        if m.domain_size > max_domain:
            break
        if all(t(m, {}) for t in tests) and not goal(m, {}):
            logger.debug("syllogism %s: countermodel %s", s.code, m.render())
            return Countermodel(m)
    if not certify:
        return ValidArgument()
    result = prove_valid(Imp(conjoin(premises), conclusion))
    if isinstance(result, Proved):
        return ValidArgument(result)
    logger.warning("syllogism %s: resolution did not certify validity (%s)", s.code, result.status)
    return ValidArgument()


@dataclass
class SweepRow:
    syllogism: Syllogism
    valid: bool

    def render(self) -> str:
        verdict = "valid" if self.valid else "invalid"
        name = self.syllogism.name or ""
        return f"{self.syllogism.code}  {verdict:<7}  {name}".rstrip()


def sweep(existential_import: bool = False) -> List[SweepRow]:
    return [SweepRow(s, bool(check_syllogism(s, existential_import))) for s in all_syllogisms()]


def count_valid_syllogisms(existential_import: bool = False) -> int:
    return sum(1 for row in sweep(existential_import) if row.valid)
