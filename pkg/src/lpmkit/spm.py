"""Closed repetitive gapped sequential patterns.

Support counts the largest set of gapped occurrences in which no two
occurrences use the same event for the same pattern position (Ding et al.'s
non-overlapping semantics). Occurrences may share an event at *different*
pattern positions, which is what makes e.g. ``A A`` occur 6 times in the
running example. Instances are grown left to right, extending each
occurrence to the earliest usable matching event; this greedy is optimal for
the semantics and is checked against a brute-force maximum independent set in
the tests.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence as Seq

from .petri import AcceptingPetriNet, LabeledPetriNet, Marking
from .seqdb import EventRef, SequenceDatabase


@dataclass(frozen=True)
class SequentialPattern:
    pattern: tuple
    instances: tuple = field(repr=False)  # tuples of EventRef, landmark order

    @property
    def support(self) -> int:
        return len(self.instances)

    def events(self) -> frozenset:
        return frozenset(e for inst in self.instances for e in inst)

    def to_json(self) -> dict:
        return {
            "pattern": list(self.pattern),
            "support": self.support,
            "instances": [[{"seq": e.seq_index, "pos": e.position} for e in inst] for inst in self.instances],
        }


def _positions(db: SequenceDatabase) -> list:
    """Per sequence, activity -> ascending 0-based positions."""
    out = []
    for s in db:
        d = {}
        for k, a in enumerate(s):
            d.setdefault(a, []).append(k)
        out.append(d)
    return out


def _grow(instances: list, positions: list) -> list:
    """Extend each instance (ordered by last landmark) with the earliest
    occurrence of the new activity after both its last landmark and the
    previously used occurrence."""
    out = []
    used = -1
    j = 0
    for inst in instances:
        lo = max(inst[-1], used)
        while j < len(positions) and positions[j] <= lo:
            j += 1
        if j == len(positions):
            break
        out.append(inst + (positions[j],))
        used = positions[j]
        j += 1
    return out


def _support_sets(pos: list, pattern: Seq) -> list:
    sets = [[(k,) for k in d.get(pattern[0], ())] for d in pos]
    for a in pattern[1:]:
        sets = [_grow(inst, d.get(a, [])) for inst, d in zip(sets, pos)]
    return sets


def _to_pattern(pattern: tuple, sets: list) -> SequentialPattern:
    inst = tuple(tuple(EventRef(i, k + 1) for k in landmarks)
                 for i, s in enumerate(sets) for landmarks in s)
    return SequentialPattern(tuple(pattern), inst)


def repetitive_support(db: SequenceDatabase, pattern: Seq) -> tuple:
    """Return ``(support, instances)`` for ``pattern`` in ``db``."""
    if len(pattern) == 0:
        raise ValueError("pattern must be non-empty")
    sp = _to_pattern(tuple(pattern), _support_sets(_positions(db), pattern))
    return sp.support, list(sp.instances)


def _order_key(sp: SequentialPattern):
    return (-sp.support, len(sp.pattern), sp.pattern)


def mine_clogsgrow(db: SequenceDatabase, min_sup: int, keep_singletons: bool = True) -> list:
    """All closed patterns with support >= ``min_sup``, highest support first.

    A pattern is closed when no single-activity insertion (at any position)
    has the same support. With ``keep_singletons`` frequent one-activity
    patterns are reported even when absorbed by a longer pattern.
    """
    if min_sup < 1:
        raise ValueError("min_sup must be positive")
    pos = _positions(db)
    alphabet = sorted(db.alphabet)
    frequent = {}

    def dfs(pattern, sets):
        sup = sum(map(len, sets))
        if sup < min_sup:
            return
        frequent[pattern] = sets
        for a in alphabet:
            dfs(pattern + (a,), [_grow(s, d.get(a, [])) for s, d in zip(sets, pos)])

    for a in alphabet:
        dfs((a,), [[(k,) for k in d.get(a, ())] for d in pos])

    support = {p: sum(map(len, s)) for p, s in frequent.items()}
    out = []
    for p, s in frequent.items():
        closed = (keep_singletons and len(p) == 1) or not any(
            support.get(p[:i] + (a,) + p[i:]) == support[p]
            for i in range(len(p) + 1) for a in alphabet)
        if closed:
            out.append(_to_pattern(p, s))
    out.sort(key=_order_key)
    return out


def pattern_to_net(sp) -> AcceptingPetriNet:
    """Strictly sequential net ``p0 -> a1 -> p1 -> ... -> an -> pn``."""
    pattern = tuple(getattr(sp, "pattern", sp))
    if not pattern:
        raise ValueError("pattern must be non-empty")
    n = len(pattern)
    places = [f"p{k}" for k in range(n + 1)]
    trans = [f"t{k}" for k in range(1, n + 1)]
    arcs = []
    for k, t in enumerate(trans):
        arcs += [(places[k], t), (t, places[k + 1])]
    net = LabeledPetriNet(places, trans, arcs, dict(zip(trans, pattern)))
    return AcceptingPetriNet(net, Marking({"p0": 1}), Marking({places[-1]: 1}))
