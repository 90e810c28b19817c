"""Selection and post-processing of LPM sets."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Optional, Sequence as Seq

from .align import _as_apn, segment_lpm, segment_set
from .exceptions import LpmkitError
from .metrics import LpmSetReport, evaluate, fscore
from .mine import Lpm
from .petri import AcceptingPetriNet, LabeledPetriNet, Marking, merge_global
from .seqdb import SequenceDatabase

Discoverer = Callable[[Seq], AcceptingPetriNet]


@dataclass(frozen=True)
class LpmSet:
    """Ordered LPMs plus what the producing algorithm recorded along the way
    (``trace``: newly explained counts, F-scores or clusters)."""
    lpms: tuple = ()
    trace: tuple = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "lpms", tuple(self.lpms))

    def __len__(self):
        return len(self.lpms)

    def __iter__(self):
        return iter(self.lpms)

    def __getitem__(self, j):
        return self.lpms[j]

    @property
    def nets(self) -> list:
        return [_as_apn(x) for x in self.lpms]

    @cached_property
    def global_net(self) -> Optional[AcceptingPetriNet]:
        return merge_global(self.nets) if self.lpms else None

    def report(self, db: SequenceDatabase) -> LpmSetReport:
        return evaluate(db, self.nets)


def _items(lpms) -> list:
    return list(lpms.lpms if isinstance(lpms, LpmSet) else lpms)


def jaccard_distance(a, b) -> float:
    a, b = set(a), set(b)
    if not a and not b:
        return 0.0
    return 1.0 - len(a & b) / len(a | b)


def alignment_based_selection(db: SequenceDatabase, lpms) -> LpmSet:
    """Keep, in order, the LPMs that own at least one γ-segment when the
    whole set is aligned at once."""
    items = _items(lpms)
    if not items:
        return LpmSet()
    seg = segment_set(db, [_as_apn(x) for x in items])
    return LpmSet([x for j, x in enumerate(items) if seg.explained_events_of(j)])


def greedy_selection(db: SequenceDatabase, lpms) -> LpmSet:
    """Repeatedly take the LPM explaining the most events not yet explained
    by earlier picks; ``trace`` holds the newly explained count per pick."""
    items = _items(lpms)
    nets = [_as_apn(x) for x in items]
    candidates = list(range(len(items)))
    explained = set()
    picks, gains = [], []
    while candidates:
        best, best_events = None, frozenset()
        for j in candidates:
            ev = segment_lpm(db, nets[j], exclude=explained).explained_events()
            if len(ev) > len(best_events):
                best, best_events = j, ev
        if best is None:
            break
        picks.append(best)
        gains.append(len(best_events))
        explained |= best_events
        candidates.remove(best)
    return LpmSet([items[j] for j in picks], tuple(gains))


def greedy_fscore_selection(db: SequenceDatabase, lpms) -> LpmSet:
    """Repeatedly add the LPM that raises the set's F-score the most; stop
    when no addition improves it. ``trace`` holds the F-score after each pick."""
    items = _items(lpms)
    nets = [_as_apn(x) for x in items]
    candidates = list(range(len(items)))
    picks, scores = [], []
    best_score = 0.0
    while candidates:
        best, score = None, best_score
        for j in candidates:
            f = fscore(db, [nets[k] for k in picks] + [nets[j]])
            if f > score:
                best, score = j, f
        if best is None:
            break
        picks.append(best)
        scores.append(score)
        best_score = score
        candidates.remove(best)
    return LpmSet([items[j] for j in picks], tuple(scores))


def heuristic_diversity_selection(lpms, threshold: float) -> LpmSet:
    """Scan a ranking and keep an LPM when its activity set is farther than
    ``threshold`` (Jaccard distance) from every activity set kept so far."""
    if not 0.0 <= threshold <= 1.0:
        raise ValueError("threshold must lie in [0, 1]")
    items = _items(lpms)
    kept = []
    for x in items:
        acts = _as_apn(x).activities
        if not kept or min(jaccard_distance(acts, _as_apn(k).activities) for k in kept) > threshold:
            kept.append(x)
    return LpmSet(kept)


def remine(db: SequenceDatabase, lpms, pd: Optional[Discoverer] = None) -> LpmSet:
    """Replace every LPM by a model discovered from its own γ-segments;
    LPMs without any γ-segment are dropped."""
    pd = pd or discover_simple
    items = _items(lpms)
    if not items:
        return LpmSet()
    seg = segment_set(db, [_as_apn(x) for x in items])
    out = []
    for j in range(len(items)):
        traces = seg.gamma_sequences(j)
        if not traces:
            continue
        try:
            net = pd(traces)
        except Exception as exc:
            raise LpmkitError(f"discovery failed for LPM {j}: {exc}") from exc
        out.append(Lpm.from_net(net, db))
    return LpmSet(out)


def merge_clogsgrow(db: SequenceDatabase, patterns, min_dist: float = 0.5,
                    pd: Optional[Discoverer] = None) -> LpmSet:
    """Cluster sequential patterns that add new events, by single-linkage
    Jaccard distance between instance-event sets, and discover one LPM per
    cluster. ``trace`` holds the clusters as tuples of patterns."""
    if not 0.0 <= min_dist <= 1.0:
        raise ValueError("min_dist must lie in [0, 1]")
    pd = pd or discover_simple
    explained = set()
    clusters = []  # lists of (pattern, event set)
    for sp in patterns:
        ev = sp.events()
        if not ev - explained:
            continue
        explained |= ev
        best, best_d = None, math.inf
        for k, cl in enumerate(clusters):
            d = min(jaccard_distance(ev, other) for _, other in cl)
            if d < best_d:
                best, best_d = k, d
        if best is not None and best_d < min_dist:
            clusters[best].append((sp, ev))
        else:
            clusters.append([(sp, ev)])
    out = []
    for k, cl in enumerate(clusters):
        try:
            net = pd([sp.pattern for sp, _ in cl])
        except Exception as exc:
            raise LpmkitError(f"discovery failed for cluster {k}: {exc}") from exc
        out.append(Lpm.from_net(net, db))
    return LpmSet(out, tuple(tuple(sp for sp, _ in cl) for cl in clusters))


def discover_simple(traces: Iterable[Seq], max_variants: int = 32) -> AcceptingPetriNet:
    """Built-in discoverer.

    Up to ``max_variants`` distinct traces give a prefix-tree net accepting
    exactly the observed traces. Beyond that, a directly-follows net is built
    (one place per activity, one transition per observed pair), which accepts
    every input trace and possibly more.
    """
    variants = sorted({tuple(t) for t in traces})
    if not variants:
        raise ValueError("discover_simple needs at least one trace")
    if len(variants) <= max_variants:
        return _prefix_tree_net(variants)
    return _directly_follows_net(variants)


def _prefix_tree_net(variants: list) -> AcceptingPetriNet:
    ends = set(variants)
    prefixes = sorted({v[:k] for v in variants for k in range(len(v) + 1)}, key=lambda p: (len(p), p))
    has_child = {p[:-1] for p in prefixes if p}
    place = {}
    for p in prefixes:
        if p and p not in has_child:
            place[p] = "end"
        else:
            place[p] = f"p{len(place)}"
    places = list(dict.fromkeys(list(place.values()) + ["end"]))
    transitions, arcs, labels = [], [], {}
    for p in prefixes:
        if p:
            t = f"t{len(transitions) + 1}"
            transitions.append(t)
            labels[t] = p[-1]
            arcs += [(place[p[:-1]], t), (t, place[p])]
    for p in prefixes:
        if p in ends and place[p] != "end":
            t = f"t{len(transitions) + 1}"
            transitions.append(t)
            labels[t] = None
            arcs += [(place[p], t), (t, "end")]
    net = LabeledPetriNet(places, transitions, arcs, labels)
    return AcceptingPetriNet(net, Marking({place[()]: 1}), Marking({"end": 1}))


def _directly_follows_net(variants: list) -> AcceptingPetriNet:
    start, end = "start", "end"
    pairs = set()
    for v in variants:
        seq = (start, *v, end)
        pairs.update(zip(seq, seq[1:]))
    acts = sorted({a for v in variants for a in v})
    pname = {a: f"p{k}" for k, a in enumerate(acts, start=1)}
    pname[start], pname[end] = "p0", "pend"
    places = ["p0", *(pname[a] for a in acts), "pend"]
    transitions, arcs, labels = [], [], {}
    for x, y in sorted(pairs, key=lambda xy: (pname[xy[0]], pname[xy[1]])):
        t = f"t{len(transitions) + 1}"
        transitions.append(t)
        labels[t] = None if y == end else y
        arcs += [(pname[x], t), (t, pname[y])]
    net = LabeledPetriNet(places, transitions, arcs, labels)
    return AcceptingPetriNet(net, Marking({"p0": 1}), Marking({"pend": 1}))
