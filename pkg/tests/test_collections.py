from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from bwbverify.collections import (
    Discharger,
    LefschetzSpec,
    Obligation,
    Report,
    Result,
    Rule,
    SpecError,
    enumerate_obligations,
    k_theory_rank,
    merge_obligations,
    twist_ref,
    verify_collection,
)
from bwbverify.levi import canonical_index, parabolic

MAIN_BLOCK = ("O", "T~", "S^{w1}", "S^{2w1}", "E~", "F~", "S^{3w1}", "S^{4w1}", "S^{5w1}")
MAIN_PARTITION = (9, 8, 7, 6, 6, 6, 6, 6, 6, 6, 6)


def test_k_theory_rank():
    assert k_theory_rank(parabolic("E6", 2)) == 72
    assert k_theory_rank(parabolic("A3", 2)) == 6
    for n in range(1, 6):
        assert k_theory_rank(parabolic(f"A{n}", 1)) == n + 1


def test_twist_ref():
    assert twist_ref("S^{w1}(1)", -2) == "S^{w1}(-1)"
    assert twist_ref("O(2)", -2) == "O"
    assert twist_ref("Ttilde", 3) == "Ttilde(3)"


def test_spec_totals():
    main = LefschetzSpec(MAIN_BLOCK, MAIN_PARTITION)
    assert main.total == 72 == k_theory_rank(main.parab)
    assert LefschetzSpec(("O", "T~", "S^{w1}", "S^{2w1}"), (4,) * 11).total == 44
    assert LefschetzSpec(MAIN_BLOCK[:6], (6,) * 11).total == 66


def test_spec_canonicalizes_aliases():
    spec = LefschetzSpec(("O", "T~", "E~"), (3,))
    assert spec.starting_block == ("O", "Ttilde", "Etilde")


def test_spec_objects_are_block_cardinalities():
    spec = LefschetzSpec(("O", "S^{w1}", "S^{2w1}"), (3, 2, 1))
    assert spec.objects() == ["O", "S^{w1}", "S^{2w1}", "O(1)", "S^{w1}(1)", "O(2)"]


@pytest.mark.parametrize(
    "block, partition",
    [
        (("O", "S^{w1}"), (1, 2)),
        (("O", "S^{w1}"), (3,)),
        (("O",), (1,) * 12),
        (("O",), (0,)),
        (("O",), ()),
    ],
)
def test_spec_validation(block, partition):
    with pytest.raises(SpecError):
        LefschetzSpec(block, partition)


def test_spec_twist_step():
    with pytest.raises(SpecError):
        LefschetzSpec(("O",), (1,), twist_step=2)


def test_block_count_bounded_by_canonical_index():
    assert len(MAIN_PARTITION) <= canonical_index(parabolic())


def test_obligation_counts():
    rect4 = enumerate_obligations(LefschetzSpec(("O", "T~", "S^{w1}", "S^{2w1}"), (4,) * 11))
    assert len(rect4) == 4 + 6 + 10 * 16 == 170
    rect6 = enumerate_obligations(LefschetzSpec(MAIN_BLOCK[:6], (6,) * 11))
    assert len(rect6) == 6 + 15 + 10 * 36
    main = enumerate_obligations(LefschetzSpec(MAIN_BLOCK, MAIN_PARTITION))
    assert len(main) == 9 + 36 + 9 * sum(MAIN_PARTITION[1:]) == 612


def test_obligation_shapes():
    obs = enumerate_obligations(LefschetzSpec(("O", "T~"), (2, 1)))
    kinds = [(ob.kind, ob.args[:2]) for ob in obs]
    assert kinds == [
        ("ExceptionalIrreducible", ("O",)),
        ("ExtEquals", ("Ttilde", "Ttilde")),
        ("ExtVanishes", ("Ttilde", "O")),
        ("ExtVanishes", ("O", "O(-1)")),
        ("ExtVanishes", ("O", "Ttilde(-1)")),
    ]


@given(st.integers(1, 4), st.lists(st.integers(1, 4), min_size=1, max_size=6))
def test_enumeration_deterministic_and_duplicate_free(n, parts):
    block = ("O", "S^{w1}", "S^{2w1}", "T~")[:n]
    parts = sorted((min(p, n) for p in parts), reverse=True)
    spec = LefschetzSpec(block, tuple(parts))
    a, b = enumerate_obligations(spec), enumerate_obligations(spec)
    assert a == b
    assert len({ob.key for ob in a}) == len(a)
    assert merge_obligations(a, a) == a


def test_merge_combines_witnesses_and_provenance():
    a = Obligation("ExtVanishes", ("O", "O(-1)"), "first", witnesses=("O(-1)",))
    b = Obligation("ExtVanishes", ("O", "O(-1)"), "second", witnesses=("O(-1)", "X"))
    (m,) = merge_obligations([a], [b])
    assert m.provenance == "first; second" and m.witnesses == ("O(-1)", "X")


def test_unknown_kind_rejected():
    with pytest.raises(SpecError):
        Obligation("Frobnicate", ())


def test_discharge_examples():
    d = Discharger()
    r = d.discharge(Obligation("Acyclic", ("S^{w1+w6}(-2)",)))
    assert r.status == "Proven" and r.witness["singular_vertex"] == 4 and r.witness["word"] == "s2"
    assert d.discharge(Obligation("ExtEquals", ("S^{w1}", "S^{w1}", ((0, "0", 1),)))).status == "Proven"
    r = d.discharge(Obligation("ExtVanishes", ("O", "O")))
    assert r.status == "Refuted" and r.witness["ext"] == "C[0]"
    assert d.discharge(Obligation("ExceptionalIrreducible", ("S^{2w1}",))).status == "Proven"
    assert d.discharge(Obligation("RankEquals", ("Ttilde", 22))).status == "Proven"
    assert d.discharge(Obligation("RankEquals", ("Ttilde", 21))).status == "Refuted"
    assert d.discharge(Obligation("KRankEquals", (72,))).status == "Proven"


def test_discharge_errors_become_refuted():
    r = Discharger().discharge(Obligation("Acyclic", ("Ttilde",)))
    assert r.status == "Refuted" and "error" in r.witness
    r = Discharger().discharge(Obligation("Acyclic", ("S^{w1-w3}",)))
    assert r.status == "Refuted" and "error" in r.witness


def test_filtered_vanishing_is_never_refuted_by_semisimplification():
    # Ext(T~, T~(-1)) has nonzero graded-piece terms in adjacent degrees
    r = Discharger().discharge(Obligation("ExtVanishes", ("Ttilde", "Ttilde(-1)")))
    assert r.status == "Unknown"


def test_complex_rule_discharges_edge_case():
    rule = Rule("complex", "Ttilde", "S^{w1+w6}(-1)", "three-term complex")
    ob = Obligation("ExtVanishes", ("Ttilde(1)", "Ttilde"))
    assert Discharger().discharge(ob).status == "Unknown"
    r = Discharger(rules=[rule]).discharge(ob)
    assert r.status == "Proven" and r.witness["method"] == "complex"


def test_unknown_rule_rejected():
    with pytest.raises(SpecError):
        Discharger(rules=[Rule("magic")])


def test_witness_expectations_checked():
    good = Obligation("ExtVanishes", ("O", "O(-1)"), witnesses=("O(-1)",))
    bad = Obligation("ExtVanishes", ("O", "O(-1)"), witnesses=("O(-2)",))
    d = Discharger()
    assert d.discharge(good).witness["witnesses_match"] is True
    assert d.discharge(bad).witness["missing"] == ["O(-2)"]


def test_report_verdicts():
    ok = Result("Proven", {})
    ob = Obligation("KRankEquals", (72,))
    opt = Obligation("KRankEquals", (1,), required=False)
    assert Report("x", [(ob, ok)]).verdict == "verified"
    assert Report("x", [(ob, ok), (opt, Result("Refuted", {}))]).verdict == "verified"
    assert Report("x", [(ob, Result("Unknown", {}))]).verdict == "unknown"
    assert Report("x", [(ob, Result("Refuted", {})), (ob, Result("Unknown", {}))]).verdict == "refuted"


def test_report_json_schema():
    rep = verify_collection(LefschetzSpec(("O", "S^{w1}"), (2, 2)), lemma="small")
    data = rep.to_json()
    assert set(data) >= {"lemma", "obligations", "verdict", "counts"}
    for row in data["obligations"]:
        assert set(row) == {"kind", "args", "status", "witness", "provenance"}
    assert data["verdict"] == "verified"
    assert data["counts"]["total"] == len(data["obligations"])


def test_jobs_do_not_change_report():
    spec = LefschetzSpec(("O", "S^{w1}", "S^{2w1}"), (3, 3, 2))
    assert verify_collection(spec, jobs=1).dumps() == verify_collection(spec, jobs=2).dumps()
