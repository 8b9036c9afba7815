import pytest

from loopkit.errors import UnsupportedProperty
from loopkit.identities import (
    ALL_TAGS,
    CONJUNCTIONS,
    SIMPLE_TAGS,
    WITNESS_VARS,
    PropertyId,
    check,
    replay,
    right_nucleus,
    smarandache_right_nucleus,
)
from loopkit.subloops import make_special, whole

from oracles import identity_witness

BASE_TAGS = [t for t in SIMPLE_TAGS if t not in CONJUNCTIONS]


def _compare(GH):
    L, H = GH.loop, GH.subset
    for tag in BASE_TAGS:
        r = check(GH, tag)
        w = identity_witness(L, H, tag)
        assert r.holds == (w is None), (GH, tag)
        assert r.witness == w, (GH, tag)
    for tag in ("RPAP", "S_RPAP"):
        for neg in (False, True):
            r = check(GH, PropertyId(tag, 4, neg))
            assert r.witness == identity_witness(L, H, tag, 4, neg), (GH, tag, neg)


def test_checks_match_scalar_oracle_upto5(special_upto5):
    for GH in special_upto5:
        _compare(GH)


def test_checks_match_scalar_oracle_order6_sample(special6):
    for GH in special6[::150]:
        _compare(GH)


def test_group_has_every_property(z4):
    GH = make_special(z4, {0, 2})
    for tag in ALL_TAGS:
        r = check(GH, tag)
        if tag == "EXPONENT2":
            assert r.holds
        else:
            assert r.holds, tag
    assert not check(whole(z4), "EXPONENT2").holds
    assert check(whole(z4), "EXPONENT2").witness == (1,)


def test_nonassociative_bol_failure_has_valid_witness(nonassoc5):
    r = check(whole(nonassoc5), "BOL")
    assert not r.holds and len(r.witness) == len(WITNESS_VARS["BOL"])
    assert replay(whole(nonassoc5), "BOL", r.witness)


def test_witnesses_replay(special_upto5):
    failures = 0
    for GH in special_upto5:
        for tag in ALL_TAGS:
            r = check(GH, PropertyId.parse(tag))
            if not r.holds:
                failures += 1
                assert replay(GH, r.clause or tag, r.witness), (GH, tag)
    assert failures > 0


def test_conjunctions_and_monotonicity(special_upto5):
    for GH in special_upto5:
        for conj, parts in CONJUNCTIONS.items():
            assert check(GH, conj).holds == all(check(GH, p).holds for p in parts)
        if check(GH, "BOL").holds:
            assert check(GH, "S2_BOL").holds


def test_whole_subloop_collapse(special_upto5):
    pairs = [("S2_BOL", "BOL"), ("S2_RIP", "RIP"), ("S2_LIP", "LIP"),
             ("S2_RAP", "RAP"), ("S2_LAP", "LAP"), ("S2_IP", "IP"), ("S2_AP", "AP"),
             ("S_RPAP", "RPAP")]
    for GH in special_upto5:
        if GH.is_whole:
            for a, b in pairs:
                assert check(GH, a).holds == check(GH, b).holds


def test_nuclear_square_matches_nucleus(special_upto5):
    for GH in special_upto5:
        T = GH.loop.T
        sn = smarandache_right_nucleus(GH)
        squares_in = all(int(T[s, s]) in right_nucleus(GH.loop) for s in GH.subset)
        assert check(GH, "NUCLEAR_SQUARE").holds == squares_in
        assert sn <= set(GH.subset)


def test_right_nucleus_examples(z4, nonassoc5):
    from loopkit.core import cyclic_group
    assert right_nucleus(z4) == {0, 1, 2, 3}
    assert right_nucleus(cyclic_group(1)) == {0}
    N = right_nucleus(nonassoc5)
    assert 0 in N and len(N) < 5
    assert smarandache_right_nucleus(make_special(z4, {0, 2})) == {0, 2}


def test_property_id_parsing():
    assert str(PropertyId.parse("S_RPAP(-4)")) == "S_RPAP(-4)"
    assert PropertyId.parse("RPAP").max_n == 6
    assert PropertyId.parse(" S2_BOL ") == PropertyId("S2_BOL")
    for bad in ("FOO", "BOL(3)", "RPAP(0)", "rpap"):
        with pytest.raises(UnsupportedProperty):
            PropertyId.parse(bad)
