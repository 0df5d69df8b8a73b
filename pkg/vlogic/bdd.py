"""
BDD - Reduced ordered binary decision diagrams over a fixed atom order.

A BddManager owns an append-only node store. Node ids 0 and 1 are the false
and true terminals; every other node is a (level, low, high) triple kept
unique by a hash table, so two formulas with the same atoms are equivalent
exactly when they build to the same node id. Negation is XOR with true; there
are no complemented edges and no garbage collection.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import pydot

from .errors import LogicError, NotPropositionalError
from .formula import And, Atom, Bottom, Formula, Iff, Imp, Not, Or, Top, atoms, is_propositional, to_text

logger = logging.getLogger(__name__)

FALSE_ID = 0
TRUE_ID = 1


class BddError(LogicError):
    """Base class for diagram errors."""
    pass


class AtomNotInOrderError(BddError):
    """An atom of the formula is missing from the variable order."""

    def __init__(self, missing: Iterable[str]):
        self.missing = sorted(missing)
        super().__init__(f"atoms not in variable order: {', '.join(self.missing)}")


class ManagerMismatchError(BddError):
    """Two diagrams from different managers were combined."""
    pass


class BddOp(Enum):
    AND = "and"
    OR = "or"
    XOR = "xor"
    IMP = "imp"
    IFF = "iff"

    @property
    def table(self) -> Callable[[int, int], int]:
        return _OP_TABLES[self]


_OP_TABLES: Dict[BddOp, Callable[[int, int], int]] = {
    BddOp.AND: lambda a, b: a & b,
    BddOp.OR: lambda a, b: a | b,
    BddOp.XOR: lambda a, b: a ^ b,
    BddOp.IMP: lambda a, b: (1 - a) | b,
    BddOp.IFF: lambda a, b: 1 - (a ^ b),
}

_FORMULA_OPS = {And: BddOp.AND, Or: BddOp.OR, Imp: BddOp.IMP, Iff: BddOp.IFF}


@dataclass(frozen=True)
class BddRef:
    """Node id tied to the manager that created it."""
    manager: 'BddManager'
    node: int

    @property
    def is_terminal(self) -> bool:
        return self.node in (FALSE_ID, TRUE_ID)

    def __and__(self, other: 'BddRef') -> 'BddRef':
        return self.manager.apply(BddOp.AND, self, other)

    def __or__(self, other: 'BddRef') -> 'BddRef':
        return self.manager.apply(BddOp.OR, self, other)

    def __xor__(self, other: 'BddRef') -> 'BddRef':
        return self.manager.apply(BddOp.XOR, self, other)

    def __invert__(self) -> 'BddRef':
        return self.manager.negate(self)

    def __repr__(self) -> str:
        return f"BddRef({self.node})"


# ─────────────────────────────────────────────────────────────────────────────
# Manager
# ─────────────────────────────────────────────────────────────────────────────

class BddManager:
    """
    Node store, unique table and apply cache for one variable order.

    Usage:
        mgr = BddManager(["p", "q"])
        u = mgr.build(parse("p | q"))
        mgr.satcount(u)      # 3
    """

    def __init__(self, order: Sequence[str]):
        order = list(order)
        if len(set(order)) != len(order):
            raise ValueError(f"duplicate atoms in variable order: {order}")
        self.order: List[str] = order
        self.level: Dict[str, int] = {name: i for i, name in enumerate(order)}
        k = len(order)
        # Terminals sit below every variable level.
        self._nodes: List[Tuple[int, int, int]] = [(k, FALSE_ID, FALSE_ID), (k, TRUE_ID, TRUE_ID)]
        self._unique: Dict[Tuple[int, int, int], int] = {}
        self._cache: Dict[Tuple[BddOp, int, int], int] = {}

    def __len__(self) -> int:
        return len(self._nodes)

    @property
    def false(self) -> BddRef:
        return BddRef(self, FALSE_ID)

    @property
    def true(self) -> BddRef:
        return BddRef(self, TRUE_ID)

    def _ref(self, node: int) -> BddRef:
        return BddRef(self, node)

    def _own(self, *refs: BddRef):
        for r in refs:
            if r.manager is not self:
                raise ManagerMismatchError("diagram belongs to a different manager")

    def _level_of(self, node: int) -> int:
        return self._nodes[node][0]

    def _mk(self, level: int, low: int, high: int) -> int:
        if low == high:
            return low
        key = (level, low, high)
        node = self._unique.get(key)
        if node is None:
            node = len(self._nodes)
            self._nodes.append(key)
            self._unique[key] = node
        return node

    def var(self, name: str) -> BddRef:
        if name not in self.level:
            raise AtomNotInOrderError([name])
        return self._ref(self._mk(self.level[name], FALSE_ID, TRUE_ID))

    def node(self, u: BddRef) -> Tuple[str, BddRef, BddRef]:
        """(atom, low, high) of an inner node."""
        self._own(u)
        if u.is_terminal:
            raise ValueError("terminal has no children")
        level, low, high = self._nodes[u.node]
        return self.order[level], self._ref(low), self._ref(high)

    # ── construction ────────────────────────────────────────────

    def build(self, f: Formula) -> BddRef:
        """Canonical diagram of a propositional formula."""
        if not is_propositional(f):
            raise NotPropositionalError(f"BDDs need a propositional formula: {to_text(f)}")
        missing = atoms(f) - set(self.level)
        if missing:
            raise AtomNotInOrderError(missing)
        memo: Dict[Formula, int] = {}

        def go(g: Formula) -> int:
            if g in memo:
                return memo[g]
            if isinstance(g, Top):
                out = TRUE_ID
            elif isinstance(g, Bottom):
                out = FALSE_ID
            elif isinstance(g, Atom):
                out = self._mk(self.level[g.pred], FALSE_ID, TRUE_ID)
            elif isinstance(g, Not):
                out = self._apply(BddOp.XOR, go(g.body), TRUE_ID)
            else:
                out = self._apply(_FORMULA_OPS[type(g)], go(g.left), go(g.right))
            memo[g] = out
            return out

        result = self._ref(go(f))
        logger.debug("bdd: built %s, %d nodes in store", to_text(f), len(self._nodes))
        return result

    def _apply(self, op: BddOp, u: int, v: int) -> int:
        if u <= TRUE_ID and v <= TRUE_ID:
            return op.table(u, v)
        key = (op, u, v)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        lu, lv = self._level_of(u), self._level_of(v)
        top = min(lu, lv)
        u0, u1 = (self._nodes[u][1], self._nodes[u][2]) if lu == top else (u, u)
        v0, v1 = (self._nodes[v][1], self._nodes[v][2]) if lv == top else (v, v)
        out = self._mk(top, self._apply(op, u0, v0), self._apply(op, u1, v1))
        self._cache[key] = out
        return out

    def apply(self, op: BddOp, u: BddRef, v: BddRef) -> BddRef:
        self._own(u, v)
        return self._ref(self._apply(op, u.node, v.node))

    def negate(self, u: BddRef) -> BddRef:
        return self.apply(BddOp.XOR, u, self.true)

    # ── queries ─────────────────────────────────────────────────

    def satcount(self, u: BddRef) -> int:
        """Satisfying assignments over the whole variable order."""
        self._own(u)
        memo: Dict[int, int] = {FALSE_ID: 0, TRUE_ID: 1}

        def count(n: int) -> int:
            if n in memo:
                return memo[n]
            level, low, high = self._nodes[n]
            c = (count(low) << (self._level_of(low) - level - 1)) \
                + (count(high) << (self._level_of(high) - level - 1))
            memo[n] = c
            return c

        return count(u.node) << self._level_of(u.node)

    def restrict(self, u: BddRef, atom: str, value: bool) -> BddRef:
        """Cofactor of u with atom fixed to value."""
        self._own(u)
        if atom not in self.level:
            raise AtomNotInOrderError([atom])
        target = self.level[atom]
        memo: Dict[int, int] = {}

        def go(n: int) -> int:
            level, low, high = self._nodes[n]
            if level > target:
                return n
            if level == target:
                return high if value else low
            if n not in memo:
                memo[n] = self._mk(level, go(low), go(high))
            return memo[n]

        return self._ref(go(u.node))

    def exists_quantify(self, u: BddRef, atom: str) -> BddRef:
        return self.apply(BddOp.OR, self.restrict(u, atom, False), self.restrict(u, atom, True))

    def reachable(self, u: BddRef) -> List[int]:
        """Node ids reachable from u (terminals included), in discovery order."""
        self._own(u)
        seen: Dict[int, None] = {}
        stack = [u.node]
        while stack:
            n = stack.pop()
            if n in seen:
                continue
            seen[n] = None
            if n > TRUE_ID:
                stack.append(self._nodes[n][2])
                stack.append(self._nodes[n][1])
        return list(seen)

    def node_count(self, u: BddRef) -> int:
        return len(self.reachable(u))

    def check_invariants(self) -> List[str]:
        """Reduction, sharing and ordering violations in the whole store."""
        problems = []
        for n, (level, low, high) in enumerate(self._nodes):
            if n <= TRUE_ID:
                continue
            if low == high:
                problems.append(f"node {n}: low == high")
            if self._level_of(low) <= level or self._level_of(high) <= level:
                problems.append(f"node {n}: child level not below parent")
            if self._unique.get((level, low, high)) != n:
                problems.append(f"node {n}: not the unique entry for its triple")
        if len(self._unique) != len(self._nodes) - 2:
            problems.append("unique table size differs from node store")
        return problems

    def to_dot(self, u: BddRef, name: str = "bdd") -> str:
        """Graphviz rendering: dashed edges go low, solid edges go high."""
        graph = pydot.Dot(name, graph_type="digraph")
        for n in self.reachable(u):
            if n <= TRUE_ID:
                graph.add_node(pydot.Node(str(n), label=str(n), shape="box"))
                continue
            level, low, high = self._nodes[n]
            graph.add_node(pydot.Node(str(n), label=self.order[level], shape="circle"))
            graph.add_edge(pydot.Edge(str(n), str(low), style="dashed"))
            graph.add_edge(pydot.Edge(str(n), str(high), style="solid"))
        return graph.to_string()


# ─────────────────────────────────────────────────────────────────────────────
# Module-level operations
# ─────────────────────────────────────────────────────────────────────────────

def build(f: Formula, order: Optional[Sequence[str]] = None,
          manager: Optional[BddManager] = None) -> BddRef:
    """Diagram of f; a fresh manager over sorted atoms unless one is given."""
    if manager is None:
        manager = BddManager(order if order is not None else sorted(atoms(f)))
    elif order is not None and list(order) != manager.order:
        raise ValueError("order conflicts with the manager's order")
    return manager.build(f)


def apply(op: BddOp, u: BddRef, v: BddRef) -> BddRef:
    if u.manager is not v.manager:
        raise ManagerMismatchError("diagrams belong to different managers")
    return u.manager.apply(op, u, v)


def satcount(u: BddRef) -> int:
    return u.manager.satcount(u)


def restrict(u: BddRef, atom: str, value: bool) -> BddRef:
    return u.manager.restrict(u, atom, value)


def exists_quantify(u: BddRef, atom: str) -> BddRef:
    return u.manager.exists_quantify(u, atom)
