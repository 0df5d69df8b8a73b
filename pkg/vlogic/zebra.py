"""
Zebra - Einstein-style house puzzles encoded as propositional clause sets.

Spec file format (one statement per line, '#' comments):

    category color: red green white yellow blue
    clue same: brit red           # same house
    clue neighbor: blends water   # adjacent houses
    clue leftof: green white      # green is immediately left of white
    clue rightof: white green     # white is immediately right of green
    clue at: norwegian 1          # house number, 1-based
    ask: fish nationality         # which nationality lives with the fish

Variable 'color_red_3' means house 3 is red. Every category has one value
per house, and every value names exactly one category.
"""

import logging
import re
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .errors import LogicError
from .normalform import Clause, ClauseSet, Literal
from .sat import enumerate_models

logger = logging.getLogger(__name__)

CLASSIC_SPEC = Path(__file__).parent / "data" / "einstein.zebra"

_IDENT = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")


class ZebraSpecError(LogicError):
    """Puzzle spec is malformed."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class MalformedClueError(ZebraSpecError):
    """Clue has an unknown kind, unknown values or a bad house number."""
    pass


class ClueKind(Enum):
    SAME = "same"
    NEIGHBOR = "neighbor"
    LEFT_OF = "leftof"
    RIGHT_OF = "rightof"
    AT = "at"


@dataclass(frozen=True)
class Clue:
    kind: ClueKind
    first: str
    second: Union[str, int]

    def __str__(self) -> str:
        return f"{self.kind.value}: {self.first} {self.second}"


@dataclass
class ZebraSpec:
    categories: Dict[str, Tuple[str, ...]] = field(default_factory=dict)
    clues: List[Clue] = field(default_factory=list)
    ask: Optional[Tuple[str, str]] = None

    @property
    def houses(self) -> int:
        sizes = {len(v) for v in self.categories.values()}
        return sizes.pop() if len(sizes) == 1 else 0

    def category_of(self, value: str) -> str:
        for cat, values in self.categories.items():
            if value in values:
                return cat
        raise MalformedClueError(f"unknown value '{value}'")

    def validate(self):
        """
        Raises:
            ZebraSpecError: no categories, uneven sizes, repeated values, bad names
            MalformedClueError: clue refers to unknown values or houses
        """
        if not self.categories:
            raise ZebraSpecError("spec has no categories")
        sizes = {len(v) for v in self.categories.values()}
        if len(sizes) != 1 or 0 in sizes:
            raise ZebraSpecError("every category needs the same, non-zero number of values")
        seen: Dict[str, str] = {}
        for cat, values in self.categories.items():
            for name in (cat,) + values:
                if not _IDENT.match(name):
                    raise ZebraSpecError(f"'{name}' is not an identifier")
            for v in values:
                if v in seen:
                    raise ZebraSpecError(f"value '{v}' appears in '{seen[v]}' and '{cat}'")
                seen[v] = cat
        n = self.houses
        for clue in self.clues:
            self.category_of(clue.first)
            if clue.kind is ClueKind.AT:
                if not isinstance(clue.second, int) or not 1 <= clue.second <= n:
                    raise MalformedClueError(f"house must be 1..{n} in '{clue}'")
            else:
                self.category_of(str(clue.second))
        if self.ask is not None:
            value, cat = self.ask
            self.category_of(value)
            if cat not in self.categories:
                raise ZebraSpecError(f"ask names unknown category '{cat}'")


def parse_spec(text: str) -> ZebraSpec:
    spec = ZebraSpec()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, body = line.partition(":")
        if not sep:
            raise ZebraSpecError("expected '<statement>: ...'", lineno)
        words = head.split()
        args = body.split()
        if words[0] == "category" and len(words) == 2:
            if words[1] in spec.categories:
                raise ZebraSpecError(f"category '{words[1]}' declared twice", lineno)
            spec.categories[words[1]] = tuple(args)
        elif words[0] == "clue" and len(words) == 2:
            try:
                kind = ClueKind(words[1])
            except ValueError:
                raise MalformedClueError(f"unknown clue kind '{words[1]}'", lineno) from None
            if len(args) != 2:
                raise MalformedClueError("a clue takes two arguments", lineno)
            second: Union[str, int] = args[1]
            if kind is ClueKind.AT:
                if not args[1].isdigit():
                    raise MalformedClueError(f"house number expected, got '{args[1]}'", lineno)
                second = int(args[1])
            spec.clues.append(Clue(kind, args[0], second))
        elif words == ["ask"] and len(args) == 2:
            spec.ask = (args[0], args[1])
        else:
            raise ZebraSpecError(f"unknown statement '{head}'", lineno)
    spec.validate()
    return spec


def load_spec(path: Union[str, Path, None] = None) -> ZebraSpec:
    return parse_spec(Path(path or CLASSIC_SPEC).read_text())


# ─────────────────────────────────────────────────────────────────────────────
# Encoding
# ─────────────────────────────────────────────────────────────────────────────

def var_name(category: str, value: str, house: int) -> str:
    return f"{category}_{value}_{house}"


def exactly_one(names: Sequence[str]) -> List[Clause]:
    """One at-least-one clause plus the pairwise at-most-one clauses."""
    clauses = [Clause(frozenset(Literal(True, n) for n in names))]
    for a, b in combinations(names, 2):
        clauses.append(Clause.of(Literal(False, a), Literal(False, b)))
    return clauses


def _clue_clauses(z: ZebraSpec, clue: Clue) -> List[Clause]:
    n = z.houses

    def lit(value: str, house: int, positive: bool = True) -> Literal:
        return Literal(positive, var_name(z.category_of(value), value, house))

    a = clue.first
    if clue.kind is ClueKind.AT:
        return [Clause.of(lit(a, clue.second))]
    b = str(clue.second)
    if clue.kind is ClueKind.RIGHT_OF:
        a, b = b, a
    out: List[Clause] = []
    for h in range(1, n + 1):
        if clue.kind is ClueKind.SAME:
            out.append(Clause.of(lit(a, h, False), lit(b, h)))
            out.append(Clause.of(lit(b, h, False), lit(a, h)))
        elif clue.kind is ClueKind.NEIGHBOR:
            near = [lit(b, k) for k in (h - 1, h + 1) if 1 <= k <= n]
            out.append(Clause.of(lit(a, h, False), *near))
        else:
            # a sits at h exactly when b sits at h + 1
            right = [lit(b, h + 1)] if h < n else []
            out.append(Clause.of(lit(a, h, False), *right))
            left = [lit(a, h - 1)] if h > 1 else []
            out.append(Clause.of(lit(b, h, False), *left))
    return out


def encode_zebra(z: ZebraSpec) -> ClauseSet:
    """Exactly-one blocks per value and per house, then one clause group per clue."""
    z.validate()
    n = z.houses
    clauses: List[Clause] = []
    for cat, values in z.categories.items():
        for v in values:
            clauses += exactly_one([var_name(cat, v, h) for h in range(1, n + 1)])
        for h in range(1, n + 1):
            clauses += exactly_one([var_name(cat, v, h) for v in values])
    for clue in z.clues:
        clauses += _clue_clauses(z, clue)
    cs = ClauseSet(tuple(clauses))
    logger.debug("zebra: %d variables, %d clauses", len(cs.atoms()), len(cs))
    return cs


# ─────────────────────────────────────────────────────────────────────────────
# Solving
# ─────────────────────────────────────────────────────────────────────────────

@dataclass
class ZebraSolution:
    """grid[house][category] = value, houses numbered from 1."""
    spec: ZebraSpec
    grid: Dict[int, Dict[str, str]]

    def __bool__(self) -> bool:
        return True

    def house_of(self, value: str) -> int:
        cat = self.spec.category_of(value)
        for h, row in self.grid.items():
            if row[cat] == value:
                return h
        raise KeyError(value)

    def answer(self) -> Optional[str]:
        """Value of the asked category in the house holding the asked value."""
        if self.spec.ask is None:
            return None
        value, cat = self.spec.ask
        return self.grid[self.house_of(value)][cat]

    def render(self) -> str:
        cats = list(self.spec.categories)
        rows = [["house"] + cats] + [[str(h)] + [self.grid[h][c] for c in cats] for h in sorted(self.grid)]
        widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
        lines = [" | ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in rows]
        lines.insert(1, "-+-".join("-" * w for w in widths))
        if self.spec.ask is not None:
            value, cat = self.spec.ask
            lines.append(f"{value}: {cat} {self.answer()}")
        return "\n".join(lines)


@dataclass
class Unsatisfiable:
    def __bool__(self) -> bool:
        return False


@dataclass
class NotUnique:
    """At least count models exist."""
    count: int

    def __bool__(self) -> bool:
        return False


ZebraResult = Union[ZebraSolution, Unsatisfiable, NotUnique]


def decode(z: ZebraSpec, model: Dict[str, bool]) -> Dict[int, Dict[str, str]]:
    grid: Dict[int, Dict[str, str]] = {h: {} for h in range(1, z.houses + 1)}
    for cat, values in z.categories.items():
        for v in values:
            for h in grid:
                if model.get(var_name(cat, v, h)):
                    grid[h][cat] = v
    return grid


def solve_zebra(z: ZebraSpec) -> ZebraResult:
    """Unique solution, or why there is none (blocking-clause enumeration, limit 2)."""
    models = enumerate_models(encode_zebra(z), 2)
    if not models:
        return Unsatisfiable()
    if len(models) > 1:
        return NotUnique(len(models))
    return ZebraSolution(z, decode(z, models[0]))


def verify_solution(z: ZebraSpec, grid: Dict[int, Dict[str, str]]) -> List[str]:
    """Re-check a grid against the categories and every clue; returns the violations."""
    problems: List[str] = []
    n = z.houses
    if sorted(grid) != list(range(1, n + 1)):
        return [f"houses must be 1..{n}"]
    for cat, values in z.categories.items():
        placed = [grid[h].get(cat) for h in range(1, n + 1)]
        if sorted(p or "" for p in placed) != sorted(values):
            problems.append(f"category {cat} is not a permutation of its values")
    if problems:
        return problems

    where = {grid[h][cat]: h for h in grid for cat in z.categories}
    for clue in z.clues:
        ha = where[clue.first]
        if clue.kind is ClueKind.AT:
            ok = ha == clue.second
        else:
            hb = where[str(clue.second)]
            ok = {
                ClueKind.SAME: ha == hb,
                ClueKind.NEIGHBOR: abs(ha - hb) == 1,
                ClueKind.LEFT_OF: ha + 1 == hb,
                ClueKind.RIGHT_OF: ha == hb + 1,
            }[clue.kind]
        if not ok:
            problems.append(f"clue violated: {clue}")
    return problems
