"""
Formula Parser - ASCII formula syntax to AST via a lark LALR grammar.

Precedence, tightest first: ~, &, |, ->, <->. -> is right-associative,
& | and <-> are left-associative, quantifier bodies extend as far right as
possible. Inside terms an identifier is a variable when an enclosing
quantifier binds it (or the caller lists it in ``variables``), otherwise a
constant.
"""

from typing import FrozenSet, Iterable, List

from lark import Lark, Token, Tree
from lark.exceptions import UnexpectedEOF, UnexpectedInput

from .errors import FormulaSyntaxError
from .formula import (
    Atom, And, Bottom, Const, Exists, Forall, Formula, Func, Iff, Imp, Not, Or,
    Quantifier, Term, Top, Var, signature_of, walk,
)


FORMULA_GRAMMAR = r"""
    ?formula: iff

    ?iff: imp
        | iff "<->" imp                       -> iff_op

    ?imp: disj
        | disj "->" imp                       -> imp_op

    ?disj: conj
         | disj "|" conj                      -> or_op

    ?conj: unary
         | conj "&" unary                     -> and_op

    ?unary: "~" unary                         -> neg
          | "forall" NAME "." iff             -> forall
          | "exists" NAME "." iff             -> exists
          | primary

    ?primary: "true"                          -> top
            | "false"                         -> bottom
            | NAME "(" term ("," term)* ")"   -> pred_atom
            | NAME                            -> prop_atom
            | "(" iff ")"

    ?term: NAME "(" term ("," term)* ")"      -> func_term
         | NAME                               -> name_term

    NAME: /[A-Za-z][A-Za-z0-9_]*/
    COMMENT: /#[^\n]*/

    %import common.WS
    %ignore WS
    %ignore COMMENT
"""

_BINARY = {"iff_op": Iff, "imp_op": Imp, "or_op": Or, "and_op": And}

_parser = Lark(FORMULA_GRAMMAR, parser="lalr", start=["formula", "term"])


# ─────────────────────────────────────────────────────────────────────────────
# Tree -> AST
# ─────────────────────────────────────────────────────────────────────────────

class _Builder:
    """Walks a lark tree top-down so binder scopes are known at every term."""

    def __init__(self, variables: Iterable[str]):
        self.variables = frozenset(variables)

    def formula(self, tree: Tree, bound: FrozenSet[str]) -> Formula:
        kind = tree.data
        if kind in _BINARY:
            left, right = tree.children
            return _BINARY[kind](self.formula(left, bound), self.formula(right, bound))
        if kind == "neg":
            return Not(self.formula(tree.children[0], bound))
        if kind in ("forall", "exists"):
            name, body = tree.children
            cls = Forall if kind == "forall" else Exists
            return cls(str(name), self.formula(body, bound | {str(name)}))
        if kind == "top":
            return Top()
        if kind == "bottom":
            return Bottom()
        if kind == "prop_atom":
            return Atom(str(tree.children[0]))
        if kind == "pred_atom":
            name, *args = tree.children
            return Atom(str(name), tuple(self.term(a, bound) for a in args))
        raise FormulaSyntaxError(f"unexpected construct '{kind}'")

    def term(self, tree: Tree, bound: FrozenSet[str]) -> Term:
        if tree.data == "name_term":
            name = str(tree.children[0])
            if name in bound or name in self.variables:
                return Var(name)
            return Const(name)
        name, *args = tree.children
        return Func(str(name), tuple(self.term(a, bound) for a in args))


def _syntax_error(text: str, err: UnexpectedInput) -> FormulaSyntaxError:
    line, column = getattr(err, "line", -1), getattr(err, "column", -1)
    if isinstance(err, UnexpectedEOF) or line is None or line < 1:
        lines = text.split("\n")
        line, column = len(lines), len(lines[-1]) + 1
    token = getattr(err, "token", None)
    if isinstance(token, Token) and token.type != "$END":
        message = f"unexpected '{token}'"
    elif isinstance(err, UnexpectedEOF) or isinstance(token, Token):
        message = "unexpected end of input"
    else:
        char = getattr(err, "char", "?")
        message = f"unexpected character '{char}'"
    return FormulaSyntaxError(message, line, column)


def _check_name_kinds(f: Formula):
    """A name may not be both a bound variable and a constant in one formula."""
    binders = {n.var for n in walk(f) if isinstance(n, Quantifier)}
    consts = set()

    def visit(t: Term):
        if isinstance(t, Const):
            consts.add(t.name)
        elif isinstance(t, Func):
            for a in t.args:
                visit(a)

    for node in walk(f):
        if isinstance(node, Atom):
            for a in node.args:
                visit(a)
    clash = binders & consts
    if clash:
        name = sorted(clash)[0]
        raise FormulaSyntaxError(
            f"identifier '{name}' is used both as a bound variable and as a constant"
        )


# ─────────────────────────────────────────────────────────────────────────────
# Public API
# ─────────────────────────────────────────────────────────────────────────────

def parse(text: str, variables: Iterable[str] = ()) -> Formula:
    """
    Parse formula text.

    Args:
        text: formula in the ASCII syntax; '#' starts a comment
        variables: identifiers to read as (free) variables even when unbound

    Raises:
        FormulaSyntaxError: malformed text, with line and column
        ArityError: a symbol used with two arities
    """
    try:
        tree = _parser.parse(text, start="formula")
    except UnexpectedInput as e:
        raise _syntax_error(text, e) from None
    f = _Builder(variables).formula(tree, frozenset())
    signature_of(f)
    _check_name_kinds(f)
    return f


def parse_term(text: str, variables: Iterable[str] = ()) -> Term:
    """Parse a single term; unbound identifiers are constants unless listed."""
    try:
        tree = _parser.parse(text, start="term")
    except UnexpectedInput as e:
        raise _syntax_error(text, e) from None
    return _Builder(variables).term(tree, frozenset())


def parse_many(texts: Iterable[str]) -> List[Formula]:
    """Parse several formulas and check that they share one signature."""
    formulas = [parse(t) for t in texts]
    signature_of(*formulas)
    return formulas
