"""Process trees: leaves are activities, inner nodes are the operators
sequence (``->``), exclusive choice (``X``), concurrency (``+``) and loop
(``*``).

Loop semantics: ``*(x)`` accepts zero or more executions of ``x``. A loop
nested in a sequence therefore makes its body optional, which is what lets
``->(E, *(->(B, A)), F)`` express ``E(BA)*F``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .petri import AcceptingPetriNet, LabeledPetriNet, Marking

SEQ, XOR, AND, LOOP = "seq", "xor", "and", "loop"
OPERATORS = (SEQ, XOR, AND, LOOP)
_SYMBOL = {SEQ: "->", XOR: "X", AND: "+", LOOP: "*"}
_FROM_SYMBOL = {v: k for k, v in _SYMBOL.items()}


@dataclass(frozen=True)
class Leaf:
    label: str

    def __post_init__(self):
        if not isinstance(self.label, str) or not self.label:
            raise ValueError("leaf label must be a non-empty string")

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Node:
    op: str
    children: tuple

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if self.op not in OPERATORS:
            raise ValueError(f"unknown operator {self.op!r}")
        if self.op == LOOP and len(self.children) != 1:
            raise ValueError("loop takes exactly one child")
        if self.op != LOOP and len(self.children) < 2:
            raise ValueError(f"{self.op} needs at least two children")

    def __str__(self):
        return to_text(self)


ProcessTree = Union[Leaf, Node]


def seq(*c) -> Node:
    return Node(SEQ, c)


def xor(*c) -> Node:
    return Node(XOR, c)


def par(*c) -> Node:
    return Node(AND, c)


def loop(c) -> Node:
    return Node(LOOP, (c,))


def leaves(tree: ProcessTree) -> list:
    """Leaf labels in left-to-right order."""
    if isinstance(tree, Leaf):
        return [tree.label]
    out = []
    for c in tree.children:
        out.extend(leaves(c))
    return out


def activities(tree: ProcessTree) -> frozenset:
    return frozenset(leaves(tree))


_PLAIN = re.compile(r"^[A-Za-z0-9_.:\-/]+$")


def _quote(label: str) -> str:
    if _PLAIN.match(label):
        return label
    return "'" + label.replace("\\", "\\\\").replace("'", "\\'") + "'"


def to_text(tree: ProcessTree) -> str:
    if isinstance(tree, Leaf):
        return _quote(tree.label)
    return _SYMBOL[tree.op] + "(" + ", ".join(to_text(c) for c in tree.children) + ")"


_TOKEN = re.compile(r"""\s*(?:(?P<op>->|X|\+|\*)\s*\(|(?P<quoted>'(?:\\.|[^'\\])*')|(?P<bare>[^\s,()']+)|(?P<punct>[),]))""")


def parse(text: str) -> ProcessTree:
    """Parse the canonical text form, e.g. ``->(A, +(B, ->(C, D)))``."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"cannot parse tree text at offset {pos}: {text[pos:pos + 10]!r}")
        pos = m.end()
        if m.group("op"):
            tokens.append(("op", _FROM_SYMBOL[m.group("op")]))
        elif m.group("quoted"):
            tokens.append(("leaf", re.sub(r"\\(.)", r"\1", m.group("quoted")[1:-1])))
        elif m.group("bare"):
            tokens.append(("leaf", m.group("bare")))
        else:
            tokens.append((m.group("punct"), None))
    i = 0

    def node():
        nonlocal i
        if i >= len(tokens):
            raise ValueError("unexpected end of tree text")
        kind, val = tokens[i]
        i += 1
        if kind == "leaf":
            return Leaf(val)
        if kind != "op":
            raise ValueError(f"unexpected {kind!r} in tree text")
        children = [node()]
        while i < len(tokens) and tokens[i][0] == ",":
            i += 1
            children.append(node())
        if i >= len(tokens) or tokens[i][0] != ")":
            raise ValueError("expected ')' in tree text")
        i += 1
        return Node(val, tuple(children))

    tree = node()
    if i != len(tokens):
        raise ValueError("trailing input after tree")
    return tree


def normalize(tree: ProcessTree) -> ProcessTree:
    """Language-preserving canonical form: same-kind seq/xor/and nesting is
    flattened, xor/and children are sorted, duplicate xor branches and nested
    loops collapse."""
    if isinstance(tree, Leaf):
        return tree
    kids = [normalize(c) for c in tree.children]
    if tree.op == LOOP:
        (k,) = kids
        if isinstance(k, Node) and k.op == LOOP:
            return k
        return Node(LOOP, (k,))
    flat = []
    for k in kids:
        if isinstance(k, Node) and k.op == tree.op:
            flat.extend(k.children)
        else:
            flat.append(k)
    if tree.op in (XOR, AND):
        flat.sort(key=to_text)
    if tree.op == XOR:
        flat = list(dict.fromkeys(flat))
        if len(flat) == 1:
            return flat[0]
    return Node(tree.op, tuple(flat))


def size(tree: ProcessTree) -> int:
    return len(leaves(tree))


class _NetBuilder:
    def __init__(self):
        self.places = []
        self.transitions = []
        self.labels = {}
        self.arcs = []

    def place(self):
        p = f"p{len(self.places)}"
        self.places.append(p)
        return p

    def trans(self, label):
        t = f"t{len(self.transitions) + 1}"
        self.transitions.append(t)
        self.labels[t] = label
        return t

    def arc(self, s, d):
        self.arcs.append((s, d))

    def build(self, node, pin, pout):
        if isinstance(node, Leaf):
            t = self.trans(node.label)
            self.arc(pin, t)
            self.arc(t, pout)
        elif node.op == SEQ:
            cur = pin
            for k, c in enumerate(node.children):
                nxt = pout if k == len(node.children) - 1 else self.place()
                self.build(c, cur, nxt)
                cur = nxt
        elif node.op == XOR:
            for c in node.children:
                self.build(c, pin, pout)
        elif node.op == AND:
            split = self.trans(None)
            self.arc(pin, split)
            ends = []
            for c in node.children:
                a, b = self.place(), self.place()
                self.arc(split, a)
                self.build(c, a, b)
                ends.append(b)
            join = self.trans(None)
            for b in ends:
                self.arc(b, join)
            self.arc(join, pout)
        else:  # loop: zero or more runs of the body around a hub place
            enter = self.trans(None)
            hub = self.place()
            self.arc(pin, enter)
            self.arc(enter, hub)
            self.build(node.children[0], hub, hub)
            leave = self.trans(None)
            self.arc(hub, leave)
            self.arc(leave, pout)


def _reduce_silent(places, transitions, labels, arcs, protected):
    """Drop silent transitions that only forward a token between a place and
    a single neighbouring transition (language preserving)."""
    arcs = list(dict.fromkeys(arcs))
    changed = True
    while changed:
        changed = False
        pre = {n: [] for n in places + transitions}
        post = {n: [] for n in places + transitions}
        for s, d in arcs:
            post[s].append(d)
            pre[d].append(s)
        for t in list(transitions):
            if labels[t] is not None:
                continue
            # split side: u -> p -> t  with p private to (u, t)
            if len(pre[t]) == 1:
                p = pre[t][0]
                if p not in protected and post[p] == [t] and len(pre[p]) == 1:
                    u = pre[p][0]
                    if u != t and not set(post[u]) & set(post[t]):
                        arcs = [a for a in arcs if p not in a and a[0] != t]
                        arcs.extend((u, q) for q in post[t])
                        places.remove(p)
                        transitions.remove(t)
                        changed = True
                        break
            # join side: t -> q -> v  with q private to (t, v)
            if len(post[t]) == 1:
                q = post[t][0]
                if q not in protected and pre[q] == [t] and len(post[q]) == 1:
                    v = post[q][0]
                    if v != t and not set(pre[v]) & set(pre[t]):
                        arcs = [a for a in arcs if q not in a and a[1] != t]
                        arcs.extend((p, v) for p in pre[t])
                        places.remove(q)
                        transitions.remove(t)
                        changed = True
                        break
    return places, transitions, arcs


def tree_to_net(tree: ProcessTree, reduce: bool = True) -> AcceptingPetriNet:
    """Block-structured compilation with one initial and one final place."""
    b = _NetBuilder()
    start, end = b.place(), b.place()
    b.build(tree, start, end)
    places, transitions, arcs = b.places, b.transitions, b.arcs
    if reduce:
        places, transitions, arcs = _reduce_silent(list(places), list(transitions), b.labels, arcs, {start, end})
    pmap = {p: f"p{k}" for k, p in enumerate(places)}
    tmap = {t: f"t{k}" for k, t in enumerate(transitions, start=1)}
    ren = {**pmap, **tmap}
    labels = {tmap[t]: b.labels[t] for t in transitions}
    net = LabeledPetriNet(pmap.values(), tmap.values(), [(ren[s], ren[d]) for s, d in arcs], labels)
    return AcceptingPetriNet(net, Marking({pmap[start]: 1}), Marking({pmap[end]: 1}))
