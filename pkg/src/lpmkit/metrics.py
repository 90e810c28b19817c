"""Quality and complexity measures for LPM sets and sequence databases."""
from __future__ import annotations

import logging
import math
from collections import Counter, defaultdict
from dataclasses import asdict, dataclass
from typing import Optional

from .align import Segmentation, _as_apn, segment_set
from .petri import DEFAULT_STATE_BUDGET, AcceptingPetriNet, LabeledPetriNet, merge_global, reachability_graph
from .seqdb import SequenceDatabase

log = logging.getLogger(__name__)

START, END = "\x02start", "\x03end"


def _segmentation(db, lpms, seg):
    if seg is not None:
        return seg
    return segment_set(db, lpms)


def coverage(db: SequenceDatabase, lpms, seg: Optional[Segmentation] = None) -> float:
    """Share of the database's events that lie in γ-segments of the set.

    An empty set or an empty database gives 0.
    """
    lpms = list(lpms)
    if db.total_events == 0:
        log.warning("coverage of a database without events is reported as 0")
        return 0.0
    if not lpms:
        return 0.0
    return len(_segmentation(db, lpms, seg).explained_events()) / db.total_events


class _PrefixReplayer:
    """Reads visible traces on a net and tracks the markings reachable after
    each prefix, closing over silent transitions."""

    def __init__(self, apn: AcceptingPetriNet):
        self.c = apn.net.compiled
        self.root = self._closure({self.c.encode(apn.initial)})
        self.cache = {(): self.root}

    def _closure(self, markings):
        c = self.c
        seen = set(markings)
        stack = list(markings)
        while stack:
            m = stack.pop()
            for ti in c.enabled(m):
                if c.label[ti] is None:
                    m2 = c.fire(m, ti)
                    if m2 not in seen:
                        seen.add(m2)
                        stack.append(m2)
        return frozenset(seen)

    def markings(self, prefix: tuple) -> frozenset:
        if prefix not in self.cache:
            c = self.c
            before = self.markings(prefix[:-1])
            a = prefix[-1]
            nxt = {c.fire(m, ti) for m in before for ti in c.enabled(m) if c.label[ti] == a}
            self.cache[prefix] = self._closure(nxt)
        return self.cache[prefix]

    def enabled_labels(self, prefix: tuple) -> frozenset:
        c = self.c
        return frozenset(c.label[ti] for m in self.markings(prefix) for ti in c.enabled(m)
                         if c.label[ti] is not None)


def non_redundancy(db: SequenceDatabase, lpms, seg: Optional[Segmentation] = None,
                   global_net: Optional[AcceptingPetriNet] = None) -> float:
    """Escaping-edges precision of the merged model on the explained behaviour.

    Every sequence contributes its explained trace (the concatenated
    γ-segments). A state is the explained prefix read so far; at each state
    that is followed by an event, *taken* is the set of next activities seen
    anywhere in the corpus after that prefix and *enabled* the set of visible
    activities the merged model allows after it. The result is
    ``sum(w * |taken|) / sum(w * |enabled|)`` with ``w`` the visit count,
    or 1 when nothing is enabled anywhere.
    """
    lpms = list(lpms)
    if not lpms:
        return 1.0
    seg = _segmentation(db, lpms, seg)
    apn = global_net or merge_global([_as_apn(x) for x in lpms])
    visits = Counter()
    taken = defaultdict(set)
    for i in range(len(seg.sequences)):
        trace = seg.explained_trace(i)
        for k, a in enumerate(trace):
            visits[trace[:k]] += 1
            taken[trace[:k]].add(a)
    replay = _PrefixReplayer(apn)
    num = den = 0
    for state, w in visits.items():
        num += w * len(taken[state])
        den += w * len(replay.enabled_labels(state))
    return 1.0 if den == 0 else num / den


def harmonic(c: float, p: float) -> float:
    return 0.0 if c + p == 0 else 2 * c * p / (c + p)


def fscore(db: SequenceDatabase, lpms, seg: Optional[Segmentation] = None) -> float:
    lpms = list(lpms)
    if not lpms:
        return 0.0
    seg = _segmentation(db, lpms, seg)
    return harmonic(coverage(db, lpms, seg), non_redundancy(db, lpms, seg))


def cardoso(net) -> int:
    """Sum over places of the number of distinct postsets among the
    transitions consuming from that place."""
    if isinstance(net, AcceptingPetriNet):
        net = net.net
    return sum(len({net.postset(t) for t in net.postset(p)}) for p in net.places)


def cyclomatic(apn: AcceptingPetriNet, budget: int = DEFAULT_STATE_BUDGET) -> Optional[int]:
    """``arcs - nodes + 2`` of the reachability graph, or ``None`` when the
    net can complete improperly (a deadlock other than the final marking,
    or a marking holding more than the final marking)."""
    rg = reachability_graph(apn, budget)
    final = apn.final
    if any(rg.nodes[k] != final for k in rg.deadlocks):
        return None
    for m in rg.nodes:
        if m != final and all(m.get(p) >= n for p, n in final.items()):
            return None
    return len(rg.edges) - len(rg.nodes) + 2


def perplexity(db: SequenceDatabase, boundaries: bool = True) -> float:
    """Exponentiated per-transition entropy of the maximum-likelihood
    first-order Markov chain fitted on ``db`` (natural log throughout).

    With ``boundaries`` every sequence is wrapped in start/end symbols.
    """
    if len(db) == 0:
        raise ValueError("perplexity of an empty database is undefined")
    pairs = Counter()
    for s in db:
        seq = (START, *s, END) if boundaries else tuple(s)
        pairs.update(zip(seq, seq[1:]))
    n = sum(pairs.values())
    if n == 0:
        return 1.0
    out = Counter()
    for (a, _), k in pairs.items():
        out[a] += k
    h = -sum(k * math.log(k / out[a]) for (a, _), k in pairs.items()) / n
    return math.exp(h)


@dataclass(frozen=True)
class LpmSetReport:
    coverage: float
    non_redundancy: float
    fscore: float
    pattern_count: int
    transition_count: int
    cardoso: int
    cyclomatic: Optional[int]  # None on improper completion
    explained_events: int = 0
    total_events: int = 0

    def to_json(self) -> dict:
        return asdict(self)

    def summary(self) -> str:
        cy = "-" if self.cyclomatic is None else self.cyclomatic
        return (f"coverage={self.explained_events}/{self.total_events} ({self.coverage:.4f}) "
                f"non_redundancy={self.non_redundancy:.4f} fscore={self.fscore:.4f} "
                f"patterns={self.pattern_count} transitions={self.transition_count} "
                f"cardoso={self.cardoso} cyclomatic={cy}")


def evaluate(db: SequenceDatabase, lpms, budget: int = DEFAULT_STATE_BUDGET) -> LpmSetReport:
    """Full report for an LPM set. Complexity figures are summed over the
    individual LPM nets; cyclomatic is ``None`` if any LPM completes improperly."""
    nets = [_as_apn(x) for x in lpms]
    if nets:
        seg = segment_set(db, nets, budget=budget)
        c = coverage(db, nets, seg)
        p = non_redundancy(db, nets, seg)
        explained = len(seg.explained_events())
    else:
        c, p, explained = 0.0, 1.0, 0
    cys = [cyclomatic(n, budget) for n in nets]
    return LpmSetReport(
        coverage=c,
        non_redundancy=p,
        fscore=harmonic(c, p),
        pattern_count=len(nets),
        transition_count=sum(len(n.net.transitions) for n in nets),
        cardoso=sum(cardoso(n) for n in nets),
        cyclomatic=None if any(v is None for v in cys) else sum(cys),
        explained_events=explained,
        total_events=db.total_events,
    )
