#!/usr/bin/env python3
"""
Tests for categorical syllogisms: parsing, translation and the validity sweep.

Run with: pytest test_syllogisms.py -v
"""

import sys

import pytest

from vlogic.parser import parse
from vlogic.resolution import Proved
from vlogic.semantics import Countermodel, eval_fol
from vlogic.syllogisms import (
    TRADITIONAL_NAMES, Syllogism, SyllogismError, SweepRow, ValidArgument, all_syllogisms,
    categorical, check_syllogism, count_valid_syllogisms, sweep, syllogism_to_fol,
)

UNCONDITIONALLY_VALID = {
    "AAA-1", "EAE-1", "AII-1", "EIO-1",
    "EAE-2", "AEE-2", "EIO-2", "AOO-2",
    "IAI-3", "AII-3", "OAO-3", "EIO-3",
    "AEE-4", "IAI-4", "EIO-4",
}


def test_parse_codes_and_names():
    assert Syllogism.parse("aaa-1") == Syllogism(1, "AAA")
    assert Syllogism.parse("Barbara") == Syllogism(1, "AAA")
    assert Syllogism.parse("bamalip") == Syllogism.parse("Bramantip")
    assert str(Syllogism.parse("OAO-3")) == "OAO-3 (Bocardo)"
    assert Syllogism(2, "AAA").name is None


@pytest.mark.parametrize("text", ["AAX-1", "AAA-5", "Barbarella", ""])
def test_parse_rejects(text):
    with pytest.raises(SyllogismError):
        Syllogism.parse(text)


def test_construction_is_validated():
    with pytest.raises(SyllogismError):
        Syllogism(0, "AAA")
    with pytest.raises(SyllogismError):
        Syllogism(1, "AA")


def test_there_are_256():
    forms = list(all_syllogisms())
    assert len(forms) == 256
    assert len(set(forms)) == 256


def test_categorical_forms():
    assert categorical("A", "S", "P") == parse("forall x. (S(x) -> P(x))")
    assert categorical("E", "S", "P") == parse("forall x. (S(x) -> ~P(x))")
    assert categorical("I", "S", "P") == parse("exists x. (S(x) & P(x))")
    assert categorical("O", "S", "P") == parse("exists x. (S(x) & ~P(x))")


def test_translation_by_figure():
    premises, conclusion = syllogism_to_fol(Syllogism(4, "AAI"))
    assert premises == [parse("forall x. (P(x) -> M(x))"), parse("forall x. (M(x) -> S(x))")]
    assert conclusion == parse("exists x. (S(x) & P(x))")


def test_existential_import_premises():
    premises, _ = syllogism_to_fol(Syllogism(1, "AAI"), existential_import=True)
    assert premises[2:] == [parse("exists x. M(x)"), parse("exists x. S(x)")]


def test_barbara_is_valid_and_certified():
    result = check_syllogism(Syllogism.parse("Barbara"), certify=True)
    assert isinstance(result, ValidArgument)
    assert isinstance(result.proof, Proved)
    assert result.proof.proof.replay()


def test_darapti_needs_existential_import():
    s = Syllogism.parse("Darapti")
    result = check_syllogism(s)
    assert isinstance(result, Countermodel)
    premises, conclusion = syllogism_to_fol(s)
    m = result.interpretation
    assert all(eval_fol(p, m) for p in premises)
    assert not eval_fol(conclusion, m)
    assert check_syllogism(s, existential_import=True)


def test_small_domain_bound_misses_countermodels():
    # the smallest countermodel for III-1 needs two elements
    assert not check_syllogism(Syllogism(1, "III"))
    assert check_syllogism(Syllogism(1, "III"), max_domain=1)


def test_unconditionally_valid_forms():
    valid = {row.syllogism.code for row in sweep() if row.valid}
    assert valid == UNCONDITIONALLY_VALID
    assert count_valid_syllogisms() == 15


def test_traditional_forms_with_existential_import():
    valid = {row.syllogism.code for row in sweep(existential_import=True) if row.valid}
    assert valid == set(TRADITIONAL_NAMES.values())
    assert count_valid_syllogisms(existential_import=True) == 24


def test_sweep_row_render():
    assert SweepRow(Syllogism(1, "AAA"), True).render() == "AAA-1  valid    Barbara"
    assert SweepRow(Syllogism(2, "AAA"), False).render() == "AAA-2  invalid"


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
