"""
VelociLogic - Entry Point

Usage:
    python -m vlogic.main parse "~forall t. (S(t) -> T(t))"
    python -m vlogic.main table "p -> q"
    python -m vlogic.main sat @problem.cnf
    python -m vlogic.main equiv @f1.txt @f2.txt
    python -m vlogic.main check-proof and_comm
    python -m vlogic.main datalog run program.dl --query "path(a, Y)"
    python -m vlogic.main syllogism --all --import
    python -m vlogic.main puzzle solve
    python -m vlogic.main paper-example

Formulas are given inline or as @file. Exit codes: 0 success, 1 negative
result, 2 usage or input error, 3 resource limit.
"""

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path
from typing import Callable, Dict, List, Optional

import yaml

from .bdd import BddManager
from .config_manager import ConfigManager, set_config, settings
from .datalog import cwa_complement, fixpoint, format_binding, load_program, parse_query, query
from .errors import EvaluationError, LogicError, ResourceLimitError
from .formula import atoms, is_propositional, signature_of, structure, to_text
from .natded import bundled_proofs, check, load_proof
from .normalform import (
    ClauseSet, clausify, cnf_distributive, dimacs_variables, dnf_distributive, is_horn,
    looks_like_dimacs, nnf, parse_dimacs, prenex, skolemize, to_dimacs, tseitin,
)
from .parser import parse
from .resolution import (
    Equivalent, ProverLimits, Proved, Refuted, Saturated, prove_equiv, prove_valid,
    resolve_fol,
)
from .sat import Sat, dpll, enumerate_models, model_lines, solve_formula
from .semantics import Interpretation, equiv_finite, eval_fol, eval_prop, truth_table
from .syllogisms import Syllogism, check_syllogism, sweep
from .worked_example import verify_worked_example
from .zebra import NotUnique, ZebraSolution, load_spec, solve_zebra, verify_solution

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


# ─────────────────────────────────────────────────────────────────────────────
# Input helpers
# ─────────────────────────────────────────────────────────────────────────────

def read_text(arg: str) -> str:
    """Inline text, or the contents of the file named after '@'."""
    if arg.startswith("@"):
        return Path(arg[1:]).read_text()
    return arg


def read_formula(arg: str, variables=()):
    return parse(read_text(arg), variables)


def read_clauses(arg: str) -> ClauseSet:
    """DIMACS text is read as clauses, anything else is clausified as a formula."""
    text = read_text(arg)
    if looks_like_dimacs(text):
        return parse_dimacs(text)
    return clausify(parse(text))


def format_model(model: Dict[str, bool]) -> str:
    return " ".join(f"{name}={int(value)}" for name, value in sorted(model.items()))


def _parse_pairs(text: str, what: str) -> Dict[str, str]:
    pairs = {}
    for item in filter(None, (p.strip() for p in text.split(","))):
        name, sep, value = item.partition("=")
        if not sep:
            raise EvaluationError(f"{what} entry '{item}' is not name=value")
        pairs[name.strip()] = value.strip()
    return pairs


def _truth(value: str) -> bool:
    lowered = value.lower()
    if lowered in ("1", "t", "true"):
        return True
    if lowered in ("0", "f", "false"):
        return False
    raise EvaluationError(f"truth value expected, got '{value}'")


def _limits(args) -> ProverLimits:
    lim = ProverLimits.from_settings()
    overrides = {k: getattr(args, k) for k in ("max_steps", "max_clause_length", "max_term_depth")
                 if getattr(args, k, None) is not None}
    return replace(lim, **overrides)


# ─────────────────────────────────────────────────────────────────────────────
# Commands
# ─────────────────────────────────────────────────────────────────────────────

def cmd_parse(args) -> int:
    print(structure(read_formula(args.formula)))
    return EXIT_OK


def cmd_print(args) -> int:
    print(to_text(read_formula(args.formula)))
    return EXIT_OK


def cmd_table(args) -> int:
    table = truth_table(read_formula(args.formula))
    print(table.render())
    print(f"models: {table.model_count}/{len(table)}")
    return EXIT_OK


def cmd_eval(args) -> int:
    env = {k: int(v) for k, v in _parse_pairs(args.env or "", "env").items()}
    f = read_formula(args.formula, variables=env)
    if args.model:
        with open(args.model) as fh:
            data = yaml.safe_load(fh) or {}
        m = Interpretation.from_dict(data, signature_of(f))
        value = eval_fol(f, m, env)
    else:
        if not is_propositional(f):
            raise EvaluationError("first-order formula needs --model FILE")
        assignment = {k: _truth(v) for k, v in _parse_pairs(args.assign or "", "assign").items()}
        value = eval_prop(f, assignment)
    print("true" if value else "false")
    return EXIT_OK if value else EXIT_NEGATIVE


def cmd_nnf(args) -> int:
    print(to_text(nnf(read_formula(args.formula))))
    return EXIT_OK


def cmd_cnf(args) -> int:
    f = read_formula(args.formula)
    if not args.tseitin and not args.dimacs:
        print(to_text(cnf_distributive(f)))
        return EXIT_OK
    cs = tseitin(f) if args.tseitin else clausify(f)
    if args.dimacs:
        sys.stdout.write(to_dimacs(cs))
    else:
        print(cs)
    return EXIT_OK


def cmd_dnf(args) -> int:
    print(to_text(dnf_distributive(read_formula(args.formula))))
    return EXIT_OK


def cmd_prenex(args) -> int:
    print(to_text(prenex(read_formula(args.formula))))
    return EXIT_OK


def cmd_skolemize(args) -> int:
    print(to_text(skolemize(read_formula(args.formula))))
    return EXIT_OK


def cmd_clausify(args) -> int:
    cs = clausify(read_formula(args.formula))
    if args.dimacs:
        sys.stdout.write(to_dimacs(cs))
    else:
        for clause in cs:
            print(clause)
    return EXIT_OK


def cmd_horn(args) -> int:
    cs = clausify(read_formula(args.formula))
    horn = is_horn(cs)
    print("horn" if horn else "not horn")
    return EXIT_OK if horn else EXIT_NEGATIVE


def cmd_sat(args) -> int:
    text = read_text(args.input)
    if looks_like_dimacs(text):
        index = dimacs_variables(text)
        result = dpll(parse_dimacs(text))
    else:
        f = parse(text)
        index = {name: i for i, name in enumerate(sorted(atoms(f)), start=1)}
        result = solve_formula(f)
    if isinstance(result, Sat):
        print("SAT")
        for name, i in index.items():
            if name != f"x{i}":
                print(f"c {i} {name}")
        for line in model_lines(result.model, index):
            print(line)
        return EXIT_OK
    print("UNSAT")
    return EXIT_NEGATIVE


def cmd_models(args) -> int:
    limit = args.limit if args.limit is not None else settings().model_limit
    text = read_text(args.input)
    if looks_like_dimacs(text):
        models = enumerate_models(parse_dimacs(text), limit)
    else:
        f = parse(text)
        source = sorted(atoms(f))
        # Tseitin atoms are determined by the source atoms, so restriction keeps models distinct.
        models = [{k: m.get(k, False) for k in source} for m in enumerate_models(tseitin(f), limit)]
    for m in models:
        print(format_model(m))
    print(f"{len(models)} model(s)" + (f" (limit {limit})" if len(models) == limit else ""))
    return EXIT_OK if models else EXIT_NEGATIVE


def cmd_resolve(args) -> int:
    cs = read_clauses(args.input)
    result = resolve_fol(cs, _limits(args))
    if isinstance(result, Refuted):
        print(result.proof.render())
        print("REFUTED")
        return EXIT_OK
    if isinstance(result, Saturated):
        print(f"SATURATED ({result.kept} clauses kept)")
        return EXIT_NEGATIVE
    print(f"RESOURCE-OUT ({result.reason})")
    return EXIT_RESOURCE


def _unknown_exit(status: str) -> int:
    return EXIT_RESOURCE if status == "resource-out" else EXIT_NEGATIVE


def cmd_prove(args) -> int:
    result = prove_valid(read_formula(args.formula), _limits(args))
    if isinstance(result, Proved):
        print(result.proof.render())
        print("PROVED")
        return EXIT_OK
    print(f"UNKNOWN ({result.status}: {result.detail})")
    return _unknown_exit(result.status)


def cmd_equiv(args) -> int:
    f1, f2 = read_formula(args.first), read_formula(args.second)
    result = prove_equiv(f1, f2, _limits(args))
    if isinstance(result, Equivalent):
        print("first implies second:")
        print(result.forward.render())
        print("second implies first:")
        print(result.backward.render())
        print("EQUIVALENT")
        return EXIT_OK
    print(f"UNKNOWN ({result.status}: {result.detail})")
    if result.status == "saturated":
        finite = equiv_finite(f1, f2)
        if not finite:
            print(f"countermodel: {finite.render()}")
    return _unknown_exit(result.status)


def _resolve_proof_path(arg: str) -> Path:
    path = Path(arg[1:] if arg.startswith("@") else arg)
    if path.exists():
        return path
    bundled = bundled_proofs()
    if arg in bundled:
        return bundled[arg]
    raise FileNotFoundError(f"no proof file '{arg}' (bundled: {', '.join(bundled)})")


def cmd_check_proof(args) -> int:
    proof = load_proof(_resolve_proof_path(args.proof))
    result = check(proof)
    if result:
        print(f"VALID: {proof.goal}")
        return EXIT_OK
    print(f"INVALID: {result.render()}")
    return EXIT_NEGATIVE


def cmd_bdd(args) -> int:
    f = read_formula(args.formula)
    order = [a.strip() for a in args.order.split(",") if a.strip()] if args.order else sorted(atoms(f))
    mgr = BddManager(order)
    u = mgr.build(f)
    print(f"order: {', '.join(order)}")
    print(f"nodes: {mgr.node_count(u)}")
    print(f"satcount: {mgr.satcount(u)}")
    if args.dot:
        sys.stdout.write(mgr.to_dot(u))
    return EXIT_OK


def cmd_datalog(args) -> int:
    program = load_program(args.file)
    facts = fixpoint(program)
    status = EXIT_OK
    if args.query:
        answers = query(program, parse_query(args.query), facts)
        for theta in answers:
            print(format_binding(theta))
        if not answers:
            print("false")
            status = EXIT_NEGATIVE
    if args.cwa:
        for a in cwa_complement(program, args.cwa, facts):
            print(f"~{to_text(a)}")
    if not args.query and not args.cwa:
        sys.stdout.write(facts.to_text())
    return status


def cmd_syllogism(args) -> int:
    if args.all:
        rows = sweep(args.existential_import)
        for row in rows:
            print(row.render())
        valid = sum(1 for r in rows if r.valid)
        print(f"valid: {valid}/{len(rows)}")
        return EXIT_OK
    if not args.syllogism:
        raise LogicError("give a syllogism (e.g. AAA-1 or Barbara) or --all")
    s = Syllogism.parse(args.syllogism)
    result = check_syllogism(s, args.existential_import, certify=args.certify)
    if result:
        print(f"{s}: valid")
        if result.proof is not None:
            print(result.proof.proof.render())
        return EXIT_OK
    print(f"{s}: invalid")
    print(f"countermodel: {result.render()}")
    return EXIT_NEGATIVE


def cmd_puzzle(args) -> int:
    spec = load_spec(args.file)
    result = solve_zebra(spec)
    if isinstance(result, ZebraSolution):
        print(result.render())
        for problem in verify_solution(spec, result.grid):
            logger.error("solution check: %s", problem)
        return EXIT_OK
    if isinstance(result, NotUnique):
        print(f"NOT UNIQUE (at least {result.count} solutions)")
    else:
        print("UNSAT")
    return EXIT_NEGATIVE


def cmd_paper_example(args) -> int:
    report = verify_worked_example(_limits(args))
    print(report.render(with_proofs=args.proofs))
    return EXIT_OK if report.passed else EXIT_NEGATIVE


# ─────────────────────────────────────────────────────────────────────────────
# Argument parsing
# ─────────────────────────────────────────────────────────────────────────────

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vlogic", description="VelociLogic - Logic Workbench")
    parser.add_argument("--config", metavar="DIR", help="Settings directory (default ~/.velocilogic)")
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging on stderr")
    parser.add_argument("--max-steps", type=int, help="Resolution inference limit")
    parser.add_argument("--max-clause-length", type=int, help="Resolution clause length limit")
    parser.add_argument("--max-term-depth", type=int, help="Resolution term depth limit")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def formula_cmd(name: str, handler: Callable, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("formula", help="Formula text or @file")
        p.set_defaults(handler=handler)
        return p

    formula_cmd("parse", cmd_parse, "Show the syntax tree")
    formula_cmd("print", cmd_print, "Print in canonical form")
    formula_cmd("table", cmd_table, "Truth table")
    p = formula_cmd("eval", cmd_eval, "Evaluate under an assignment or a model")
    p.add_argument("--assign", help="Propositional assignment, e.g. p=1,q=0")
    p.add_argument("--model", metavar="FILE", help="First-order model (YAML)")
    p.add_argument("--env", help="Free-variable values, e.g. x=0,y=1")
    formula_cmd("nnf", cmd_nnf, "Negation normal form")
    p = formula_cmd("cnf", cmd_cnf, "Conjunctive normal form")
    p.add_argument("--tseitin", action="store_true", help="Equisatisfiable Tseitin clauses")
    p.add_argument("--dimacs", action="store_true", help="Print clauses as DIMACS")
    formula_cmd("dnf", cmd_dnf, "Disjunctive normal form")
    formula_cmd("prenex", cmd_prenex, "Prenex normal form")
    formula_cmd("skolemize", cmd_skolemize, "Skolem normal form")
    p = formula_cmd("clausify", cmd_clausify, "Clause set")
    p.add_argument("--dimacs", action="store_true", help="Print DIMACS (propositional only)")
    formula_cmd("horn", cmd_horn, "Is the clause set Horn?")

    p = sub.add_parser("sat", help="DPLL satisfiability")
    p.add_argument("input", help="Formula or DIMACS, inline or @file")
    p.set_defaults(handler=cmd_sat)
    p = sub.add_parser("models", help="Enumerate models")
    p.add_argument("input", help="Formula or DIMACS, inline or @file")
    p.add_argument("--limit", type=int, help="Maximum number of models")
    p.set_defaults(handler=cmd_models)
    p = sub.add_parser("resolve", help="Resolution refutation of a clause set")
    p.add_argument("input", help="Formula or DIMACS, inline or @file")
    p.set_defaults(handler=cmd_resolve)
    formula_cmd("prove", cmd_prove, "Prove validity by resolution")
    p = sub.add_parser("equiv", help="Prove two sentences equivalent")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(handler=cmd_equiv)
    p = sub.add_parser("check-proof", help="Check a natural-deduction proof")
    p.add_argument("proof", help="Proof file or bundled proof name")
    p.set_defaults(handler=cmd_check_proof)
    p = formula_cmd("bdd", cmd_bdd, "Reduced ordered BDD")
    p.add_argument("--order", help="Variable order, e.g. a,b,c")
    p.add_argument("--dot", action="store_true", help="Print a Graphviz graph")

    p = sub.add_parser("datalog", help="Datalog programs")
    dsub = p.add_subparsers(dest="action", metavar="ACTION")
    dsub.required = True
    run = dsub.add_parser("run", help="Compute the fixpoint and answer queries")
    run.add_argument("file")
    run.add_argument("--query", help="Atom, e.g. path(a, Y)")
    run.add_argument("--cwa", metavar="PRED", help="Print facts false under the closed world")
    run.set_defaults(handler=cmd_datalog)

    p = sub.add_parser("syllogism", help="Categorical syllogisms")
    p.add_argument("syllogism", nargs="?", help="e.g. AAA-1 or Barbara")
    p.add_argument("--import", dest="existential_import", action="store_true",
                   help="Assume non-empty subject terms")
    p.add_argument("--all", action="store_true", help="Check all 256 forms")
    p.add_argument("--certify", action="store_true", help="Also prove valid forms by resolution")
    p.set_defaults(handler=cmd_syllogism)

    p = sub.add_parser("puzzle", help="House puzzles")
    psub = p.add_subparsers(dest="action", metavar="ACTION")
    psub.required = True
    solve = psub.add_parser("solve", help="Solve a puzzle spec (classic puzzle by default)")
    solve.add_argument("file", nargs="?")
    solve.set_defaults(handler=cmd_puzzle)

    p = sub.add_parser("paper-example", help="Verify the worked equivalence example")
    p.add_argument("--proofs", action="store_true", help="Print both refutation proofs")
    p.set_defaults(handler=cmd_paper_example)
    return parser


def _setup(args):
    if args.config:
        config = ConfigManager(args.config)
        config.load()
        set_config(config)
    level = logging.DEBUG if args.verbose else getattr(logging, settings().log_level.upper(), logging.WARNING)
    logging.basicConfig(level=level, format='[%(levelname)s] %(message)s', stream=sys.stderr)
    logging.getLogger("vlogic").setLevel(level)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    _setup(args)
    try:
        return args.handler(args)
    except ResourceLimitError as e:
        print(f"resource limit: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except (LogicError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == '__main__':
    sys.exit(main())
