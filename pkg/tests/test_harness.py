import pytest

from loopkit import harness
from loopkit.core import cyclic_group
from loopkit.errors import OrderTooLarge, UnsupportedProperty
from loopkit.identities import PropertyId, check
from loopkit.subloops import make_special, whole

PROVED = [t for t in harness.THEOREMS if t not in harness.QUESTIONS]


def test_group_examples(z4):
    GH = make_special(z4, {0, 2})
    for tag in PROVED:
        v = harness.verify(GH, tag)
        assert v.applicable and v.conclusion_holds, tag
    v = harness.verify(GH, "T1_11")
    assert v.stats["s2_bol"] and v.stats["all_bol_triples"]


def test_not_applicable_example(special_upto5):
    GH = next(g for g in special_upto5 if not check(g, "S2_BOL").holds)
    v = harness.verify(GH, "T1_4")
    assert not v.applicable and v.conclusion_holds is None and v.counterexample is None
    assert harness.verify(GH, "T1_11").stats["failing_s"] > 0


def test_verdict_invariants(special_upto5):
    for GH in special_upto5[::4]:
        ctx = harness.Context(GH)
        for tag in harness.THEOREMS:
            v = harness.verify(GH, tag, context=ctx)
            assert (v.conclusion_holds is not None) == v.applicable
            assert (v.counterexample is not None) == (v.conclusion_holds is False)


def test_sweep_upto4_no_failures():
    from loopkit.enumerate import enumerate_special
    corpus = [GH for n in range(2, 5) for GH in enumerate_special(n)]
    rep = harness.sweep(corpus, PROVED)
    assert rep.failures == 0 and not rep.counterexamples
    assert rep.instances == len(corpus)


def test_groups_only_sweep():
    corpus = [whole(cyclic_group(n)) for n in range(2, 7)]
    corpus += [make_special(cyclic_group(6), {0, 3}), make_special(cyclic_group(6), {0, 2, 4})]
    rep = harness.sweep(corpus, PROVED)
    assert rep.failures == 0
    for tag in ("R1", "T1_4", "T1_5", "T1_6", "C1_7", "T1_16"):
        assert rep.tallies[tag].applicable == len(corpus)


def test_power_theorems_imply_s_rpap(special_upto5):
    for GH in special_upto5:
        ctx = harness.Context(GH, 3)
        t5, t6 = harness.verify(GH, "T1_5", 3, ctx), harness.verify(GH, "T1_6", 3, ctx)
        if t5.applicable and t5.conclusion_holds and t6.conclusion_holds:
            assert check(GH, PropertyId("S_RPAP", 3)).holds
            assert check(GH, PropertyId("S_RPAP", 3, negative=True)).holds


def test_q2_finding_instance(q2_finding):
    v = harness.verify(q2_finding, "Q2")
    assert v.stats["s2bl_not_bol"] and v.stats["findings"] == 1
    for tag in PROVED:
        assert not harness.verify(q2_finding, tag).failed, tag
    assert harness.verify(q2_finding, "R1").applicable


def test_q1_is_reported_not_failed(q2_finding):
    rep = harness.sweep([q2_finding], ["Q1", "Q2"])
    assert rep.failures == 0


def test_l18_negative_witness_exists(klein):
    GH = make_special(klein, {0, 1})
    v = harness.verify(GH, "L1_8")
    assert v.conclusion_holds
    assert v.stats["right_not_full"] > 0 and v.stats["left_not_full"] > 0


def test_errors():
    GH = whole(cyclic_group(8))
    with pytest.raises(OrderTooLarge):
        harness.verify(GH, "T1_16")
    assert harness.verify(GH, "T1_4").conclusion_holds
    with pytest.raises(UnsupportedProperty):
        harness.verify(GH, "T9_9")
    with pytest.raises(ValueError):
        harness.verify(GH, "T1_5", bounds=0)
