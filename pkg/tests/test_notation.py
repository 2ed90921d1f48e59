from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from bwbverify.borel_weil_bott import GradedVector, bwb_cohomology
from bwbverify.notation import (
    NotationError,
    format_bundle,
    format_cohomology,
    format_graded,
    format_weight,
    graded_from_json,
    graded_to_json,
    parse_weight,
    split_bundle_ref,
    weight_from_json,
    weight_to_json,
)
from bwbverify.root_system import Weight

coeffs = st.lists(st.integers(-9, 9), min_size=6, max_size=6)


def test_both_literal_forms_agree():
    assert parse_weight("[1,-4,0,0,0,1]") == parse_weight("w1+w6-4w2") == Weight([1, -4, 0, 0, 0, 1])
    assert parse_weight("0") == Weight.zero(6)
    assert parse_weight("2*w4 - w2") == Weight([0, -1, 0, 2, 0, 0])
    assert parse_weight("1/2w1") == Weight([Fraction(1, 2), 0, 0, 0, 0, 0])


@pytest.mark.parametrize("bad", ["", "w7", "w1w2", "[1,2]", "[1,2,3,4,5,6", "x", "w1+", "[a,0,0,0,0,0]"])
def test_parse_errors(bad):
    with pytest.raises(NotationError):
        parse_weight(bad)


@given(coeffs)
def test_roundtrip_symbolic(c):
    lam = Weight(c)
    assert parse_weight(format_weight(lam)) == lam


@given(coeffs)
def test_roundtrip_vector_and_json(c):
    lam = Weight(c)
    assert parse_weight("[" + ",".join(map(str, c)) + "]") == lam
    assert weight_from_json(weight_to_json(lam)) == lam


def test_canonical_printer():
    assert format_weight(Weight([1, -4, 0, 0, 0, 1])) == "w1-4w2+w6"
    assert format_weight(Weight.zero(6)) == "0"
    assert format_weight(Weight([0, -1, 0, 1, 0, 0])) == "-w2+w4"


def test_format_bundle(parab):
    assert format_bundle(parab, parse_weight("w1+w6-w2")) == "S^{w1+w6}(-1)"
    assert format_bundle(parab, parse_weight("3w2")) == "O(3)"
    assert format_bundle(parab, Weight.zero(6)) == "O"
    assert format_bundle(parab, parse_weight("2w1")) == "S^{2w1}"


def test_format_graded_and_json():
    z = Weight.zero(6)
    g = GradedVector([(0, z, 2), (1, parse_weight("w2"), 1)])
    assert format_graded(g) == "2*C[0] + V^{w2}[-1]"
    assert format_graded(GradedVector()) == "0"
    assert graded_from_json(graded_to_json(g)) == g


def test_format_cohomology(parab):
    assert format_cohomology(bwb_cohomology(parab, parse_weight("w1+w6-4w2"))) == "Acyclic (singular at vertex 4 after s2 s4 s3 s5)"
    assert format_cohomology(bwb_cohomology(parab, parse_weight("w1+w3+w5-3w2"))) == "V^{w1}[-2] (w = s2 s4)"
    assert format_cohomology(bwb_cohomology(parab, Weight.zero(6))) == "C[0]"


def test_split_bundle_ref():
    assert split_bundle_ref("S^{w1}(-2)") == ("S^{w1}", -2)
    assert split_bundle_ref("Ttilde(3)") == ("Ttilde", 3)
    assert split_bundle_ref("O") == ("O", 0)
    assert split_bundle_ref("T~") == ("T~", 0)
    with pytest.raises(NotationError):
        split_bundle_ref("S^{w1}(-2")
