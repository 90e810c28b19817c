import time

from hypothesis import given, settings, strategies as st

from lpmkit.petri import language
from lpmkit.seqdb import SequenceDatabase
from lpmkit.spm import SequentialPattern, mine_clogsgrow, pattern_to_net, repetitive_support

from oracles import max_non_overlapping

TABLE = {
    "A": 10, "AA": 6, "AB": 7, "ABA": 5, "ABAB": 3, "ABAF": 4, "ABB": 4, "ABBF": 3, "ACB": 3, "ACD": 4,
    "AEF": 3, "B": 10, "BA": 7, "BAB": 5, "BABF": 3, "BAF": 5, "BAA": 4, "BB": 6, "BBAF": 3, "BBA": 4,
    "BBF": 4, "BEF": 3, "D": 4, "E": 6, "EBABA": 3, "EBAF": 4, "EF": 5,
}


def test_reference_supports(db):
    assert repetitive_support(db, ("A",))[0] == 10
    assert repetitive_support(db, ("E", "F"))[0] == 5
    assert repetitive_support(db, tuple("ABA"))[0] == 5
    assert repetitive_support(db, ("Z",)) == (0, [])


def test_instances_are_valid_witnesses(db):
    sup, inst = repetitive_support(db, tuple("BAB"))
    assert sup == len(inst) == 5
    for occ in inst:
        assert len({e.seq_index for e in occ}) == 1
        assert [e.position for e in occ] == sorted(e.position for e in occ)
        assert "".join(db.activity(e) for e in occ) == "BAB"
    # no two instances reuse an event for the same pattern position
    for j in range(3):
        column = [occ[j] for occ in inst]
        assert len(set(column)) == len(column)


def test_closed_patterns_of_running_example(db):
    t0 = time.perf_counter()
    pats = mine_clogsgrow(db, 3)
    assert time.perf_counter() - t0 < 5
    got = {"".join(p.pattern): p.support for p in pats}
    assert {k: got.get(k) for k in TABLE} == TABLE
    # count frozen from the brute-force closed-pattern enumerator
    assert len(pats) == 29
    assert len(mine_clogsgrow(db, 3, keep_singletons=False)) == 26
    keys = [(-p.support, len(p.pattern), p.pattern) for p in pats]
    assert keys == sorted(keys)


def test_min_sup_above_total(db):
    assert mine_clogsgrow(db, db.total_events + 1) == []


def test_pattern_to_net():
    sp = SequentialPattern(("E", "F"), ())
    apn = pattern_to_net(sp)
    assert len(apn.net.transitions) == 2
    assert language(apn, 2) == {("E", "F")}
    assert language(pattern_to_net(("A",)), 1) == {("A",)}


seqs = st.lists(st.sampled_from("abc"), max_size=8)
pats = st.lists(st.sampled_from("abc"), min_size=1, max_size=3).map(tuple)


@settings(max_examples=200, deadline=None, derandomize=True)
@given(st.lists(seqs, min_size=1, max_size=2), pats)
def test_support_matches_brute_force(rows, pattern):
    db = SequenceDatabase(rows)
    assert repetitive_support(db, pattern)[0] == sum(max_non_overlapping(s, pattern) for s in rows)


@settings(max_examples=60, deadline=None, derandomize=True)
@given(st.lists(seqs, min_size=1, max_size=3), pats, st.sampled_from("abc"), st.integers(0, 3))
def test_insertion_never_raises_support(rows, pattern, a, i):
    db = SequenceDatabase(rows)
    longer = pattern[:i] + (a,) + pattern[i:]
    assert repetitive_support(db, longer)[0] <= repetitive_support(db, pattern)[0]


@settings(max_examples=40, deadline=None, derandomize=True)
@given(st.lists(seqs, min_size=1, max_size=3), st.integers(1, 3))
def test_output_is_closed(rows, min_sup):
    db = SequenceDatabase(rows)
    for p in mine_clogsgrow(db, min_sup, keep_singletons=False):
        for i in range(len(p.pattern) + 1):
            for a in "abc":
                q = p.pattern[:i] + (a,) + p.pattern[i:]
                assert repetitive_support(db, q)[0] < p.support
