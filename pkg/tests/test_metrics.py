import math

import pytest
from hypothesis import given, settings, strategies as st

from lpmkit.exceptions import ResourceError
from lpmkit.metrics import cardoso, coverage, cyclomatic, evaluate, fscore, harmonic, non_redundancy, perplexity
from lpmkit.petri import AcceptingPetriNet, LabeledPetriNet, Marking
from lpmkit.seqdb import SequenceDatabase
from lpmkit.spm import pattern_to_net
from lpmkit.tree import parse, tree_to_net

from oracles import markov_perplexity


def chain(n):
    return pattern_to_net(tuple(f"a{k}" for k in range(n)))


def net(arcs, labels, initial, final):
    places = sorted({x for arc in arcs for x in arc if x not in labels} | set(initial) | set(final))
    n = LabeledPetriNet(places, list(labels), arcs, labels)
    return AcceptingPetriNet(n, Marking(initial), Marking(final))


def test_coverage_running_example(db, nets):
    a, b, c = nets
    assert coverage(db, [a, b, c]) == 38 / 39
    assert coverage(db, [a, b]) == 38 / 39
    assert coverage(db, [a]) == 16 / 39
    assert coverage(db, []) == 0
    assert coverage(SequenceDatabase([]), [a]) == 0


def test_non_redundancy_exact_model():
    db = SequenceDatabase.from_strings(["a b"])
    assert non_redundancy(db, [tree_to_net(parse("->(a, b)"))]) == 1.0
    assert non_redundancy(db, []) == 1.0


def test_non_redundancy_punishes_redundant_lpm(db, nets):
    a, b, c = nets
    assert non_redundancy(db, [a, b, c]) < non_redundancy(db, [a, b])
    unused = tree_to_net(parse("->(X, Y)"))
    assert non_redundancy(db, [a, b, unused]) < non_redundancy(db, [a, b])


def test_subset_scores(db, nets):
    # regression values for every non-empty subset of the three reference LPMs
    expected = {
        (0,): (0.410, 0.864), (1,): (0.564, 0.879), (2,): (0.205, 0.909),
        (0, 1): (0.974, 0.708), (0, 2): (0.410, 0.731), (1, 2): (0.718, 0.750),
        (0, 1, 2): (0.974, 0.622),
    }
    for idx, (c, p) in expected.items():
        sub = [nets[j] for j in idx]
        assert coverage(db, sub) == pytest.approx(c, abs=5e-4)
        assert non_redundancy(db, sub) == pytest.approx(p, abs=5e-4)
        assert fscore(db, sub) == pytest.approx(harmonic(coverage(db, sub), non_redundancy(db, sub)))


def test_fscore_cases():
    assert harmonic(1, 1) == 1
    assert harmonic(0.5, 0.5) == 0.5
    assert harmonic(0, 0.7) == 0
    assert harmonic(0, 0) == 0
    assert fscore(SequenceDatabase.from_strings(["a"]), []) == 0


@given(st.floats(0, 1), st.floats(0, 1))
def test_fscore_lies_between_its_parts(c, p):
    f = harmonic(c, p)
    assert 0 <= f <= 1
    if c + p > 0:
        assert min(c, p) - 1e-12 <= f <= max(c, p) + 1e-12


@pytest.mark.parametrize("n", [1, 2, 5])
def test_chain_complexity(n):
    assert cardoso(chain(n)) == n
    assert cyclomatic(chain(n)) == 1


def test_cardoso_choice_and_additivity():
    x = net([("p", "t1"), ("t1", "q"), ("p", "t2"), ("t2", "r")], {"t1": "a", "t2": "b"}, {"p": 1}, {"q": 1})
    assert cardoso(x) == 2
    empty = LabeledPetriNet([], [], [], {})
    assert cardoso(empty) == 0
    both = net([("p", "t1"), ("t1", "q"), ("p", "t2"), ("t2", "r"), ("s0", "u1"), ("u1", "s1")],
               {"t1": "a", "t2": "b", "u1": "c"}, {"p": 1, "s0": 1}, {"q": 1, "s1": 1})
    assert cardoso(both) == cardoso(x) + cardoso(chain(1))


def test_cyclomatic_xor_and_improper():
    assert cyclomatic(tree_to_net(parse("X(a, b)"))) == 2
    improper = net([("p", "t1"), ("t1", "q"), ("t1", "r")], {"t1": "a"}, {"p": 1}, {"q": 1})
    assert cyclomatic(improper) is None
    stuck = net([("p", "t1"), ("t1", "q"), ("p", "t2"), ("t2", "r")], {"t1": "a", "t2": "b"}, {"p": 1}, {"q": 1})
    assert cyclomatic(stuck) is None
    pump = net([("p", "t1"), ("t1", "p"), ("t1", "q")], {"t1": "a"}, {"p": 1}, {"p": 1})
    with pytest.raises(ResourceError):
        cyclomatic(pump, budget=50)


def test_perplexity():
    assert perplexity(SequenceDatabase.from_strings(["a b c", "a b c"])) == pytest.approx(1.0)
    assert perplexity(SequenceDatabase.from_strings(["a b", "a c"]), boundaries=False) == pytest.approx(2.0)
    assert perplexity(SequenceDatabase.from_strings(["a b", "a c", "a d"]), boundaries=False) == pytest.approx(3.0)
    with pytest.raises(ValueError):
        perplexity(SequenceDatabase([]))


def test_perplexity_running_example(db):
    # the value is fixed by the standalone calculator in the oracles module
    assert markov_perplexity(list(db)) == pytest.approx(2.5896540052828874, rel=1e-12)
    assert perplexity(db) == pytest.approx(2.5896540052828874, rel=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.lists(st.sampled_from("abcd"), max_size=6), min_size=1, max_size=4))
def test_perplexity_matches_oracle(rows):
    db = SequenceDatabase(rows)
    assert perplexity(db) == pytest.approx(markov_perplexity(rows))
    assert perplexity(db) >= 1 - 1e-12


def test_evaluate_report(db, nets):
    rep = evaluate(db, nets[:2])
    assert (rep.explained_events, rep.total_events) == (38, 39)
    assert rep.pattern_count == 2
    assert (rep.transition_count, rep.cardoso, rep.cyclomatic) == (9, 10, 5)
    assert rep.fscore == pytest.approx(harmonic(rep.coverage, rep.non_redundancy))
    assert rep.summary().startswith("coverage=38/39")
    assert set(rep.to_json()) >= {"coverage", "non_redundancy", "fscore", "cyclomatic"}
    empty = evaluate(db, [])
    assert empty.coverage == 0 and empty.pattern_count == 0


def test_coverage_monotone_on_running_example(db, nets):
    for k in range(1, 3):
        assert coverage(db, nets[:k + 1]) >= coverage(db, nets[:k])
    assert not math.isnan(non_redundancy(db, nets))


def test_empty_database_coverage_is_flagged(caplog, nets):
    assert coverage(SequenceDatabase([()]), nets) == 0
    assert "without events" in caplog.text
