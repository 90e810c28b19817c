import pytest
from hypothesis import given, settings, strategies as st

from lpmkit.petri import language
from lpmkit.tree import AND, LOOP, SEQ, XOR, Leaf, Node, activities, loop, normalize, par, parse, seq, \
    size, to_text, tree_to_net, xor

from oracles import all_trees, distinct_label_trees, same_bounded_language, tree_language


def test_arity_rules():
    with pytest.raises(ValueError):
        Node(SEQ, (Leaf("a"),))
    with pytest.raises(ValueError):
        Node(LOOP, (Leaf("a"), Leaf("b")))
    with pytest.raises(ValueError):
        Leaf("")


def test_text_round_trip():
    for text in ["->(A, +(B, ->(C, D)))", "->(E, *(->(B, A)), F)", "X(a, 'b c', 'd\\'e')"]:
        t = parse(text)
        assert parse(to_text(t)) == t
    assert to_text(seq(Leaf("a"), loop(xor(Leaf("b"), Leaf("c"))))) == "->(a, *(X(b, c)))"


@pytest.mark.parametrize("bad", ["", "->(a", "->(a,)", "Y(a, b)", "a b", "*(a, b)"])
def test_parse_errors(bad):
    with pytest.raises(ValueError):
        parse(bad)


def test_normalize():
    a, b, c = Leaf("a"), Leaf("b"), Leaf("c")
    assert normalize(seq(seq(a, b), c)) == seq(a, b, c)
    assert normalize(par(c, par(b, a))) == par(a, b, c)
    assert normalize(xor(b, a, b)) == xor(a, b)
    assert normalize(xor(a, a)) == a
    assert normalize(loop(loop(a))) == loop(a)


def test_helpers():
    t = parse("->(A, +(B, ->(C, A)))")
    assert activities(t) == {"A", "B", "C"}
    assert size(t) == 4


def test_reference_net_shape():
    apn = tree_to_net(parse("->(A, +(B, ->(C, D)))"))
    labels = [apn.net.labels[t] for t in apn.net.transitions]
    assert sorted(l for l in labels if l) == list("ABCD")
    assert labels.count(None) == 1
    assert len(apn.net.places) == 7
    assert len(apn.initial) == 1 and len(apn.final) == 1


def test_loop_with_surrounding_sequence_is_silent_free():
    apn = tree_to_net(parse("->(E, *(->(B, A)), F)"))
    assert all(apn.net.labels[t] is not None for t in apn.net.transitions)
    assert len(apn.net.places) == 4


def test_unreduced_compilation_has_same_language():
    t = parse("->(a, *(+(b, X(c, d))), e)")
    assert language(tree_to_net(t, reduce=False), 7) == language(tree_to_net(t), 7)


def test_normalize_preserves_language():
    for t in all_trees(3, "ab"):
        assert tree_language(normalize(t), 6) == tree_language(t, 6)


labels_ = st.sampled_from("abc").map(Leaf)
trees = st.recursive(labels_, lambda kids: st.one_of(
    st.tuples(st.sampled_from([SEQ, XOR, AND]), st.lists(kids, min_size=2, max_size=3)).map(
        lambda x: Node(x[0], tuple(x[1]))),
    kids.map(lambda k: Node(LOOP, (k,)))), max_leaves=5)


@settings(max_examples=150, deadline=None)
@given(trees)
def test_enumerated_language_matches_interpreter(t):
    assert language(tree_to_net(t), 6) == tree_language(t, 6)


def test_equivalence_oracle_agrees_with_interpreters():
    for n in (1, 2, 3):
        for t in all_trees(n, "ab"):
            apn = tree_to_net(t)
            assert same_bounded_language(t, apn, 6, "ab") == (tree_language(t, 6) == language(apn, 6))


def test_equivalence_oracle_detects_differences():
    wrong = [("->(a, b)", "X(a, b)"), ("*(a)", "->(a, *(a))"), ("+(a, b)", "->(a, b)"),
             ("*(->(a, b))", "*(+(a, b))"), ("->(a, *(b))", "->(a, b)")]
    for tree, net in wrong:
        assert not same_bounded_language(parse(tree), tree_to_net(parse(net)), 6, "ab")


@pytest.mark.parametrize("n", [1, 2, 3])
def test_compiled_language_matches_small_trees(n):
    bad = [to_text(t) for t in all_trees(n) if not same_bounded_language(t, tree_to_net(t), 8, "abc")]
    assert bad == []


def test_compiled_language_matches_sampled_five_leaf_shapes():
    bad = [to_text(t) for t in distinct_label_trees(5, shape_stride=1009)
           if not same_bounded_language(t, tree_to_net(t), 8, "abcde")]
    assert bad == []
