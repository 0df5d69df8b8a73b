"""
VelociLogic - Logic workbench: formulas, normal forms, SAT, resolution,
natural deduction, BDDs and Datalog.

Part of the Velocity* tool family.
"""

__version__ = "0.1.0"
__author__ = "Scott Peterman"

from .errors import LogicError, FormulaSyntaxError, ResourceLimitError
from .formula import Formula, Atom, Not, And, Or, Imp, Iff, Forall, Exists, Var, Const, Func
from .formula import to_text, free_vars, substitute
from .parser import parse
from .semantics import Interpretation, eval_prop, truth_table, eval_fol, equiv_finite
from .normalform import Clause, ClauseSet, Literal, nnf, cnf_distributive, tseitin, prenex, skolemize, clausify
from .sat import dpll, enumerate_models
from .resolution import unify, resolve_fol, resolve_prop, prove_valid, prove_equiv
from .natded import parse_proof, check
from .bdd import BddManager, BddRef
from .datalog import DatalogProgram, fixpoint, query, cwa_complement

__all__ = [
    'LogicError',
    'FormulaSyntaxError',
    'ResourceLimitError',
    'Formula',
    'Atom',
    'Not',
    'And',
    'Or',
    'Imp',
    'Iff',
    'Forall',
    'Exists',
    'Var',
    'Const',
    'Func',
    'parse',
    'to_text',
    'free_vars',
    'substitute',
    'Interpretation',
    'eval_prop',
    'truth_table',
    'eval_fol',
    'equiv_finite',
    'Clause',
    'ClauseSet',
    'Literal',
    'nnf',
    'cnf_distributive',
    'tseitin',
    'prenex',
    'skolemize',
    'clausify',
    'dpll',
    'enumerate_models',
    'unify',
    'resolve_fol',
    'resolve_prop',
    'prove_valid',
    'prove_equiv',
    'parse_proof',
    'check',
    'BddManager',
    'BddRef',
    'DatalogProgram',
    'fixpoint',
    'query',
    'cwa_complement',
]
