"""Alignments restricted to synchronous moves, log moves and model moves on
silent transitions, and the segmentation of sequences into LPM instances.

Among all minimum-cost alignments the aligner returns a canonical one: fewest
moves first, then the lexicographically smallest move sequence when moves are
ordered sync < silent < log and transitions by their position in the net
(LPM index first for merged nets). The choice only depends on the relative
order of transitions, so appending LPMs to a set never changes which of the
old alignments is picked unless a new LPM improves on it.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence as Seq

from .exceptions import InfeasibleAlignmentError, ResourceError
from .petri import DEFAULT_STATE_BUDGET, T_BL, AcceptingPetriNet, merge_global
from .seqdb import EventRef, SequenceDatabase

SYNC, LOG, SILENT = "sync", "log", "silent_model"


@dataclass(frozen=True)
class Move:
    kind: str
    event: Optional[EventRef] = None
    transition: Optional[str] = None
    activity: Optional[str] = None

    def __post_init__(self):
        if self.kind == SYNC:
            ok = self.event is not None and self.transition is not None
        elif self.kind == LOG:
            ok = self.event is not None and self.transition is None
        elif self.kind == SILENT:
            ok = self.event is None and self.transition is not None
        else:
            ok = False
        if not ok:
            raise ValueError(f"malformed {self.kind} move")


@dataclass(frozen=True)
class Alignment:
    moves: tuple
    cost: int

    @property
    def sync_moves(self) -> list:
        return [m for m in self.moves if m.kind == SYNC]

    @property
    def log_moves(self) -> list:
        return [m for m in self.moves if m.kind == LOG]

    def firing_sequence(self) -> list:
        return [m.transition for m in self.moves if m.kind != LOG]


def _as_apn(x) -> AcceptingPetriNet:
    if isinstance(x, AcceptingPetriNet):
        return x
    net = getattr(x, "net", None)
    if isinstance(net, AcceptingPetriNet):
        return net
    raise TypeError(f"expected an AcceptingPetriNet or an object with one in .net, got {type(x).__name__}")


def _events(seq) -> list:
    """Accept plain label sequences or lists of ``(EventRef, label)`` pairs."""
    out = []
    for k, item in enumerate(seq, start=1):
        if isinstance(item, tuple) and len(item) == 2 and isinstance(item[0], EventRef):
            out.append(item)
        else:
            out.append((EventRef(0, k), item))
    return out


def _search(labels: tuple, apn: AcceptingPetriNet, budget: int) -> tuple:
    """Return the canonical optimal path as a tuple of move keys, plus its cost."""
    c = apn.net.compiled
    T = len(c.tids)
    log_key = 2 * T
    n = len(labels)
    syncable = apn.net.visible_labels
    # admissible and consistent: events nothing in the net can synchronize with
    h = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        h[i] = h[i + 1] + (labels[i] not in syncable)
    start = c.encode(apn.initial)
    final = c.encode(apn.final)
    heap = [(h[0], 0, (), 0, start, 0)]
    closed = set()
    while heap:
        f, hops, path, g, m, i = heapq.heappop(heap)
        if (m, i) in closed:
            continue
        closed.add((m, i))
        if len(closed) > budget:
            raise ResourceError(f"alignment search exceeded {budget} states")
        if i == n and m == final:
            return path, g
        for ti in c.enabled(m):
            lab = c.label[ti]
            if lab is None:
                m2 = c.fire(m, ti)
                if (m2, i) not in closed:
                    heapq.heappush(heap, (g + h[i], hops + 1, path + (T + ti,), g, m2, i))
            elif i < n and lab == labels[i]:
                m2 = c.fire(m, ti)
                if (m2, i + 1) not in closed:
                    heapq.heappush(heap, (g + h[i + 1], hops + 1, path + (ti,), g, m2, i + 1))
        if i < n and (m, i + 1) not in closed:
            heapq.heappush(heap, (g + 1 + h[i + 1], hops + 1, path + (log_key,), g + 1, m, i + 1))
    raise InfeasibleAlignmentError("final marking unreachable with sync, log and silent moves")


def _decode(path: tuple, events: list, apn: AcceptingPetriNet) -> tuple:
    c = apn.net.compiled
    T = len(c.tids)
    moves = []
    i = 0
    for key in path:
        if key < T:
            ref, lab = events[i]
            moves.append(Move(SYNC, ref, c.tids[key], lab))
            i += 1
        elif key < 2 * T:
            moves.append(Move(SILENT, None, c.tids[key - T], None))
        else:
            ref, lab = events[i]
            moves.append(Move(LOG, ref, None, lab))
            i += 1
    return tuple(moves)


def align(seq, apn, budget: int = DEFAULT_STATE_BUDGET) -> Alignment:
    """Optimal alignment where only log moves cost (1 each).

    ``seq`` is a sequence of activity labels (events get ``EventRef(0, k)``)
    or a list of ``(EventRef, label)`` pairs.
    """
    apn = _as_apn(apn)
    events = _events(seq)
    path, cost = _search(tuple(lab for _, lab in events), apn, budget)
    return Alignment(_decode(path, events, apn), cost)


@dataclass(frozen=True)
class Segment:
    kind: str  # "gamma" or "lambda"
    lpm: Optional[int]
    events: tuple  # EventRef, in sequence order
    activities: tuple

    def to_json(self) -> dict:
        return {"type": self.kind, "lpm": self.lpm, "events": [e.position for e in self.events]}


@dataclass(frozen=True)
class Segmentation:
    sequences: tuple  # per database sequence: tuple of Segment ordered by first event
    lpm_count: int

    def gammas(self, j: Optional[int] = None) -> list:
        return [s for segs in self.sequences for s in segs
                if s.kind == "gamma" and (j is None or s.lpm == j)]

    def explained_events(self) -> frozenset:
        return frozenset(e for s in self.gammas() for e in s.events)

    def explained_events_of(self, j: int) -> frozenset:
        if not 0 <= j < self.lpm_count:
            raise ValueError(f"LPM index {j} outside 0..{self.lpm_count - 1}")
        return frozenset(e for s in self.gammas(j) for e in s.events)

    def gamma_sequences(self, j: Optional[int] = None) -> list:
        """Activity sequences of the γ-segments, optionally only those owned by ``j``."""
        return [s.activities for s in self.gammas(j)]

    def explained_trace(self, seq_index: int) -> tuple:
        """Concatenation of the γ-segments of one sequence, in sequence order."""
        evs = sorted((e, a) for s in self.sequences[seq_index] if s.kind == "gamma"
                     for e, a in zip(s.events, s.activities))
        return tuple(a for _, a in evs)

    def instance_count(self, j: Optional[int] = None) -> int:
        return len(self.gammas(j))

    def to_json(self) -> list:
        return [[s.to_json() for s in segs] for segs in self.sequences]


def segments_from_alignment(alignment: Alignment, origin: dict) -> tuple:
    """Cut an alignment on a merged model into γ-segments (closed by ``t_bl``)
    and λ-segments (maximal runs of log moves)."""
    out = []
    gam, gam_owner = [], None
    lam = []

    def flush_gamma():
        nonlocal gam, gam_owner
        if gam:
            out.append(Segment("gamma", gam_owner, tuple(e for e, _ in gam), tuple(a for _, a in gam)))
        gam, gam_owner = [], None

    def flush_lambda():
        nonlocal lam
        if lam:
            out.append(Segment("lambda", None, tuple(e for e, _ in lam), tuple(a for _, a in lam)))
        lam = []

    for mv in alignment.moves:
        if mv.kind == LOG:
            lam.append((mv.event, mv.activity))
            continue
        flush_lambda()
        if mv.transition == T_BL:
            flush_gamma()
            continue
        owner = origin.get(mv.transition)
        if gam_owner is not None and owner != gam_owner:
            flush_gamma()
        if mv.kind == SYNC:
            gam.append((mv.event, mv.activity))
            gam_owner = owner
    flush_lambda()
    flush_gamma()
    out.sort(key=lambda s: s.events[0])
    return tuple(out)


class _AlignCache:
    """Identical label sequences get identical segmentations."""

    def __init__(self, apn, budget):
        self.apn = apn
        self.budget = budget
        self.paths = {}
        c = apn.net.compiled
        self.T = len(c.tids)
        self.owner = [apn.net.origin.get(t) for t in c.tids]
        self.t_bl = c.tids.index(T_BL) if T_BL in c.tids else -1

    def segments(self, events: list) -> tuple:
        """Cut directly on the move keys of the cached path; equivalent to
        ``segments_from_alignment`` on the decoded alignment."""
        labels = tuple(lab for _, lab in events)
        path = self.paths.get(labels)
        if path is None:
            path = self.paths[labels] = _search(labels, self.apn, self.budget)[0]
        T, owner, t_bl = self.T, self.owner, self.t_bl
        out = []
        gam, lam = [], []
        gam_owner = None
        i = 0
        for key in path:
            if key == 2 * T:
                lam.append(events[i])
                i += 1
                continue
            if lam:
                out.append(_segment("lambda", None, lam))
                lam = []
            ti = key if key < T else key - T
            if ti == t_bl:
                if gam:
                    out.append(_segment("gamma", gam_owner, gam))
                gam, gam_owner = [], None
                continue
            if gam_owner is not None and owner[ti] != gam_owner:
                out.append(_segment("gamma", gam_owner, gam))
                gam, gam_owner = [], None
            if key < T:
                gam.append(events[i])
                gam_owner = owner[ti]
                i += 1
        if lam:
            out.append(_segment("lambda", None, lam))
        if gam:
            out.append(_segment("gamma", gam_owner, gam))
        out.sort(key=lambda s: s.events[0])
        return tuple(out)


def _segment(kind, owner, pairs) -> Segment:
    return Segment(kind, owner, tuple(e for e, _ in pairs), tuple(a for _, a in pairs))


def segment_lpm(db: SequenceDatabase, lpm, exclude: Iterable[EventRef] = frozenset(),
                budget: int = DEFAULT_STATE_BUDGET) -> Segmentation:
    """Segment every sequence, projected on the LPM's activities, into instances
    of that single LPM. Events in ``exclude`` are treated as absent."""
    apn = _as_apn(lpm)
    acts = apn.activities
    exclude = frozenset(exclude)
    cache = _AlignCache(merge_global([apn]), budget)
    out = []
    for i in range(len(db)):
        events = [(r, a) for r, a in db.event_list(i, exclude) if a in acts]
        out.append(cache.segments(events))
    return Segmentation(tuple(out), 1)


def segment_set(db: SequenceDatabase, lpms: Seq, exclude: Iterable[EventRef] = frozenset(),
                budget: int = DEFAULT_STATE_BUDGET, global_net: AcceptingPetriNet = None) -> Segmentation:
    """Segment the full sequences on the global merged model of ``lpms``;
    γ-segments carry the index of the LPM whose transitions produced them."""
    lpms = [_as_apn(x) for x in lpms]
    if not lpms:
        raise ValueError("segment_set needs at least one LPM")
    exclude = frozenset(exclude)
    cache = _AlignCache(global_net or merge_global(lpms), budget)
    out = [cache.segments(db.event_list(i, exclude)) for i in range(len(db))]
    return Segmentation(tuple(out), len(lpms))


def explained_events(seg: Segmentation) -> frozenset:
    return seg.explained_events()


def explained_events_of(seg: Segmentation, j: int) -> frozenset:
    return seg.explained_events_of(j)
