"""Labeled and accepting Petri nets, firing rule, bounded language and
reachability exploration, and the global merged model of an LPM set."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Optional

from .exceptions import ResourceError, StateError

DEFAULT_STATE_BUDGET = 10**6
T_BL = "t_bl"
MI = "mi"
MF = "mf"


class Marking(Mapping):
    """Immutable multiset of places."""

    __slots__ = ("_items", "_hash")

    def __init__(self, tokens=()):
        if isinstance(tokens, Mapping):
            items = tokens.items()
        else:
            counts: dict = {}
            for p in tokens:
                counts[p] = counts.get(p, 0) + 1
            items = counts.items()
        clean = {}
        for p, n in items:
            if n < 0:
                raise ValueError(f"negative token count on {p!r}")
            if n:
                clean[p] = int(n)
        self._items = tuple(sorted(clean.items()))
        self._hash = hash(self._items)

    def __getitem__(self, p):
        for q, n in self._items:
            if q == p:
                return n
        raise KeyError(p)

    def get(self, p, default=0):
        for q, n in self._items:
            if q == p:
                return n
        return default

    def __iter__(self):
        return (p for p, _ in self._items)

    def __len__(self):
        return len(self._items)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if isinstance(other, Marking):
            return self._items == other._items
        if isinstance(other, Mapping):
            return self == Marking(other)
        return NotImplemented

    def __repr__(self):
        return "Marking({" + ", ".join(f"{p!r}: {n}" for p, n in self._items) + "})"

    @property
    def total(self) -> int:
        return sum(n for _, n in self._items)


class LabeledPetriNet:
    """Net ``(P, T, F, label)``; a transition mapped to ``None`` is silent.

    ``transitions`` order is significant: it fixes the tie-breaking order used
    by the aligner. ``origin`` optionally maps transitions to the index of the
    LPM they were copied from (set by :func:`merge_global`).
    """

    def __init__(self, places: Iterable[str], transitions: Iterable[str], arcs: Iterable[tuple],
                 labels: Mapping[str, Optional[str]] = None, origin: Mapping[str, Optional[int]] = None):
        self.places = tuple(places)
        self.transitions = tuple(transitions)
        labels = dict(labels or {})
        pset, tset = set(self.places), set(self.transitions)
        if len(pset) != len(self.places) or len(tset) != len(self.transitions):
            raise ValueError("duplicate place or transition id")
        if pset & tset:
            raise ValueError(f"ids used as both place and transition: {sorted(pset & tset)}")
        arcs = tuple(dict.fromkeys(tuple(a) for a in arcs))
        for s, d in arcs:
            if not ((s in pset and d in tset) or (s in tset and d in pset)):
                raise ValueError(f"arc {s!r}->{d!r} does not connect a place and a transition of the net")
        if not set(labels) <= tset:
            raise ValueError(f"labels for unknown transitions: {sorted(set(labels) - tset)}")
        self.arcs = frozenset(arcs)
        self._arc_order = arcs
        self.labels = {t: labels.get(t) for t in self.transitions}
        self.origin = dict(origin) if origin else {}

    def label(self, t):
        return self.labels[t]

    def is_silent(self, t) -> bool:
        return self.labels[t] is None

    @cached_property
    def _pre(self) -> dict:
        pre = {t: [] for t in self.transitions}
        for s, d in self._arc_order:
            if d in pre:
                pre[d].append(s)
        return {t: tuple(ps) for t, ps in pre.items()}

    @cached_property
    def _post(self) -> dict:
        post = {t: [] for t in self.transitions}
        for s, d in self._arc_order:
            if s in post:
                post[s].append(d)
        return {t: tuple(ps) for t, ps in post.items()}

    def preset(self, node) -> frozenset:
        if node in self._pre:
            return frozenset(self._pre[node])
        return frozenset(s for s, d in self.arcs if d == node)

    def postset(self, node) -> frozenset:
        if node in self._post:
            return frozenset(self._post[node])
        return frozenset(d for s, d in self.arcs if s == node)

    @cached_property
    def visible_labels(self) -> frozenset:
        return frozenset(l for l in self.labels.values() if l is not None)

    @cached_property
    def compiled(self) -> "_Compiled":
        return _Compiled(self)

    def __repr__(self):
        return f"LabeledPetriNet(|P|={len(self.places)}, |T|={len(self.transitions)}, |F|={len(self.arcs)})"


class _Compiled:
    """Integer-indexed view of a net; markings become sorted tuples of place indices."""

    def __init__(self, net: LabeledPetriNet):
        self.net = net
        self.pidx = {p: i for i, p in enumerate(net.places)}
        self.tids = net.transitions
        self.pre = [tuple(sorted(self.pidx[p] for p in net._pre[t])) for t in net.transitions]
        self.post = [tuple(sorted(self.pidx[p] for p in net._post[t])) for t in net.transitions]
        self.label = [net.labels[t] for t in net.transitions]
        consumers = [[] for _ in net.places]
        for ti, pre in enumerate(self.pre):
            for p in set(pre):
                consumers[p].append(ti)
        self.consumers = [tuple(sorted(c)) for c in consumers]
        self.source_free = tuple(ti for ti, pre in enumerate(self.pre) if not pre)
        self._enabled = {}
        self._fired = {}

    def encode(self, m: Mapping) -> tuple:
        out = []
        for p, n in m.items():
            out.extend([self.pidx[p]] * n)
        return tuple(sorted(out))

    def decode(self, m: tuple) -> Marking:
        return Marking(self.net.places[i] for i in m)

    def enabled(self, m: tuple) -> tuple:
        """Indices of enabled transitions in ascending (canonical) order."""
        en = self._enabled.get(m)
        if en is None:
            en = self._enabled[m] = self._compute_enabled(m)
        return en

    def _compute_enabled(self, m: tuple) -> tuple:
        marked = set(m)
        cand = set(self.source_free)
        for p in marked:
            cand.update(self.consumers[p])
        # arcs are unweighted, so a preset lists each place at most once
        return tuple(ti for ti in sorted(cand) if all(p in marked for p in self.pre[ti]))

    def fire(self, m: tuple, ti: int) -> tuple:
        key = (m, ti)
        out = self._fired.get(key)
        if out is None:
            out = self._fired[key] = self._compute_fire(m, ti)
        return out

    def _compute_fire(self, m: tuple, ti: int) -> tuple:
        lst = list(m)
        for p in self.pre[ti]:
            lst.remove(p)
        lst.extend(self.post[ti])
        lst.sort()
        return tuple(lst)


@dataclass(frozen=True)
class AcceptingPetriNet:
    net: LabeledPetriNet
    initial: Marking
    final: Marking

    def __post_init__(self):
        object.__setattr__(self, "initial", Marking(self.initial))
        object.__setattr__(self, "final", Marking(self.final))
        places = set(self.net.places)
        for m, name in ((self.initial, "initial"), (self.final, "final")):
            if not set(m) <= places:
                raise ValueError(f"{name} marking references unknown places {sorted(set(m) - places)}")

    @property
    def activities(self) -> frozenset:
        return self.net.visible_labels

    def __repr__(self):
        return f"AcceptingPetriNet({self.net!r}, initial={self.initial!r}, final={self.final!r})"


def enabled(apn: AcceptingPetriNet, m: Mapping) -> frozenset:
    c = apn.net.compiled
    return frozenset(c.tids[i] for i in c.enabled(c.encode(m)))


def fire(apn: AcceptingPetriNet, m: Mapping, t: str) -> Marking:
    c = apn.net.compiled
    enc = c.encode(m)
    ti = c.tids.index(t)
    if ti not in c.enabled(enc):
        raise StateError(f"transition {t!r} is not enabled in {Marking(m)!r}")
    return c.decode(c.fire(enc, ti))


def language(apn: AcceptingPetriNet, max_len: int, budget: int = DEFAULT_STATE_BUDGET) -> set:
    """All visible traces of length <= ``max_len`` leading from initial to final marking."""
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    c = apn.net.compiled
    start = c.encode(apn.initial)
    final = c.encode(apn.final)
    seen = {(start, ())}
    queue = deque(seen)
    traces = set()
    while queue:
        m, trace = queue.popleft()
        if m == final:
            traces.add(trace)
        for ti in c.enabled(m):
            lab = c.label[ti]
            if lab is None:
                nxt = (c.fire(m, ti), trace)
            elif len(trace) < max_len:
                nxt = (c.fire(m, ti), trace + (lab,))
            else:
                continue
            if nxt not in seen:
                seen.add(nxt)
                if len(seen) > budget:
                    raise ResourceError(f"language exploration exceeded {budget} states")
                queue.append(nxt)
    return traces


@dataclass
class ReachabilityGraph:
    nodes: list  # Marking objects, discovery order
    edges: list  # (src index, transition id, dst index)
    initial: int = 0
    deadlocks: list = field(default_factory=list)  # indices of markings with no enabled transition


def reachability_graph(apn: AcceptingPetriNet, budget: int = DEFAULT_STATE_BUDGET) -> ReachabilityGraph:
    c = apn.net.compiled
    start = c.encode(apn.initial)
    index = {start: 0}
    order = [start]
    edges = []
    deadlocks = []
    queue = deque([start])
    while queue:
        m = queue.popleft()
        en = c.enabled(m)
        if not en:
            deadlocks.append(index[m])
        for ti in en:
            m2 = c.fire(m, ti)
            if m2 not in index:
                if len(index) >= budget:
                    raise ResourceError(f"reachability graph exceeded {budget} markings")
                index[m2] = len(order)
                order.append(m2)
                queue.append(m2)
            edges.append((index[m], c.tids[ti], index[m2]))
    return ReachabilityGraph([c.decode(m) for m in order], edges, 0, deadlocks)


def merge_global(lpms) -> AcceptingPetriNet:
    """Fuse the LPMs' initial places into ``mi`` and final places into ``mf``,
    add the silent back-loop ``t_bl`` (mf -> mi) and use ``{mi}`` as both
    initial and final marking.

    Ids are prefixed with ``"<index>."``; ``net.origin`` maps every copied
    transition to its LPM index and ``t_bl`` to ``None``.
    """
    lpms = list(lpms)
    if not lpms:
        raise ValueError("merge_global needs at least one LPM")
    places = [MI, MF]
    transitions = []
    arcs = []
    labels = {}
    origin = {}
    for j, apn in enumerate(lpms):
        net = apn.net
        init, fin = apn.initial, apn.final
        fuse_init = len(init) == 1 and init.total == 1 and not net.preset(next(iter(init)))
        fuse_fin = len(fin) == 1 and fin.total == 1 and not net.postset(next(iter(fin)))
        if fuse_init and fuse_fin and next(iter(init)) == next(iter(fin)):
            fuse_fin = False

        def pname(p):
            if fuse_init and p in init:
                return MI
            if fuse_fin and p in fin:
                return MF
            return f"{j}.{p}"

        for p in net.places:
            if pname(p) not in (MI, MF):
                places.append(pname(p))
        for t in net.transitions:
            tid = f"{j}.{t}"
            transitions.append(tid)
            labels[tid] = net.labels[t]
            origin[tid] = j
        for s, d in net._arc_order:
            if s in net.labels:
                arcs.append((f"{j}.{s}", pname(d)))
            else:
                arcs.append((pname(s), f"{j}.{d}"))
        if not fuse_init:
            if any(n > 1 for n in init.values()):
                raise ValueError(f"LPM {j}: initial marking with more than one token per place")
            tid = f"{j}.t_in"
            transitions.append(tid)
            labels[tid] = None
            origin[tid] = j
            arcs.append((MI, tid))
            arcs.extend((tid, pname(p)) for p in init)
        if not fuse_fin:
            if any(n > 1 for n in fin.values()):
                raise ValueError(f"LPM {j}: final marking with more than one token per place")
            tid = f"{j}.t_out"
            transitions.append(tid)
            labels[tid] = None
            origin[tid] = j
            arcs.extend((pname(p), tid) for p in fin)
            arcs.append((tid, MF))
    transitions.append(T_BL)
    labels[T_BL] = None
    origin[T_BL] = None
    arcs.extend([(MF, T_BL), (T_BL, MI)])
    net = LabeledPetriNet(places, transitions, arcs, labels, origin)
    return AcceptingPetriNet(net, Marking({MI: 1}), Marking({MI: 1}))
