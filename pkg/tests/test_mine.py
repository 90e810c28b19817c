import pytest

from lpmkit.align import segment_lpm
from lpmkit.mine import Lpm, MineConfig, expand, initial_lpms, mine
from lpmkit.petri import language
from lpmkit.seqdb import SequenceDatabase
from lpmkit.tree import Leaf, leaves, parse, to_text


def test_initial_lpms(db):
    assert [l.text for l in initial_lpms(db)] == list("ABCDEF")
    assert initial_lpms(SequenceDatabase([])) == []
    (x,) = initial_lpms(SequenceDatabase.from_strings(["x x"]))
    assert x.tree == Leaf("x") and x.support == 2


def test_expand_examples():
    texts = {to_text(t) for t in expand(parse("A"), "ABC")}
    assert "->(A, B)" in texts and "->(B, A)" in texts and "*(->(A, B))" in texts
    assert "->(A, +(B, C))" in {to_text(t) for t in expand(parse("->(A, B)"), "ABC")}


def test_expand_single_activity():
    # ->(a,a) twice, X(a,a) collapses to a, +(a,a), *(->(a,a)) twice
    got = expand(Leaf("a"), "a", allow_duplicates=True)
    assert {to_text(t) for t in got} == {"->(a, a)", "+(a, a)", "*(->(a, a))"}
    assert expand(Leaf("a"), "a") == set()


def test_expand_respects_operator_set():
    got = expand(Leaf("a"), "ab", operators={"seq"})
    assert {to_text(t) for t in got} == {"->(a, b)", "->(b, a)"}


def test_config_validation():
    for kw in [dict(exp_max=0), dict(min_sup=0), dict(min_confidence=2), dict(operators={"nope"})]:
        with pytest.raises(ValueError):
            MineConfig(**kw)


def test_lpm_statistics(db):
    a = Lpm.from_tree("->(A, +(B, ->(C, D)))", db)
    assert (a.support, a.instance_count, a.confidence) == (16, 4, 0.4)
    b = Lpm.from_tree("->(E, *(->(B, A)), F)", db)
    assert (b.support, b.instance_count) == (22, 5)
    assert a.activities == frozenset("ABCD")


def test_two_event_sequence():
    res = mine(SequenceDatabase.from_strings(["a b"]), MineConfig(min_sup=1, exp_max=1))
    by_text = {l.text: l.support for l in res}
    assert by_text["->(a, b)"] == 2


@pytest.fixture(scope="module")
def mined(db):
    return mine(db, MineConfig(min_sup=3, exp_max=2))


def test_mined_invariants(db, mined):
    assert not mined.truncated and len(mined) > 0
    keys = [(-l.support, len(l.net.net.transitions), l.text) for l in mined]
    assert keys == sorted(keys) and len(set(keys)) == len(keys)
    for l in mined:
        assert l.support >= 3
        assert 2 <= len(leaves(l.tree)) <= 3
        assert len(l.activities) >= 2
        assert l.support <= db.total_events
        shortest = min(len(t) for t in language(l.net, 6))
        assert l.instance_count * shortest <= l.support


def test_mined_supports_are_self_consistent(db, mined):
    for l in mined.lpms[::25]:
        seg = segment_lpm(db, l.net)
        assert len(seg.explained_events()) == l.support
        assert seg.instance_count() == l.instance_count


def test_budget_truncates(db):
    res = mine(db, MineConfig(min_sup=1, exp_max=3, max_candidates_evaluated=20))
    assert res.truncated and res.candidates_evaluated == 20


def test_workers_do_not_change_result():
    db = SequenceDatabase.from_strings(["a b c a b", "b a c"])
    one = mine(db, MineConfig(min_sup=2, exp_max=2))
    two = mine(db, MineConfig(min_sup=2, exp_max=2, workers=2))
    assert [(l.text, l.support) for l in one] == [(l.text, l.support) for l in two]
