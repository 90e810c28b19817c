"""Local process model discovery by breadth-first process-tree expansion."""
from __future__ import annotations

import logging
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .align import segment_lpm
from .petri import AcceptingPetriNet
from .seqdb import SequenceDatabase
from .tree import AND, LOOP, OPERATORS, SEQ, XOR, Leaf, Node, ProcessTree, activities, normalize, \
    parse, size, to_text, tree_to_net

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Lpm:
    """A local process model together with its statistics on one database.

    ``tree`` is ``None`` for nets that were not compiled from a tree
    (re-mined or discovered models). For tree-based LPMs the net may be
    omitted; it is then compiled on first access.
    """
    tree: Optional[ProcessTree]
    _net: Optional[AcceptingPetriNet] = field(default=None, repr=False)
    support: int = 0
    instance_count: int = 0
    confidence: float = 0.0

    def __post_init__(self):
        if self.tree is None and self._net is None:
            raise ValueError("an LPM needs a tree or a net")

    @property
    def net(self) -> AcceptingPetriNet:
        if self._net is None:
            object.__setattr__(self, "_net", tree_to_net(self.tree))
        return self._net

    def _key(self):
        shape = self.tree if self.tree is not None else id(self._net)
        return (shape, self.support, self.instance_count, self.confidence)

    def __eq__(self, other):
        return isinstance(other, Lpm) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    @property
    def activities(self) -> frozenset:
        if self.tree is not None:
            return frozenset(activities(self.tree))
        return self.net.activities

    @property
    def text(self) -> Optional[str]:
        return None if self.tree is None else to_text(self.tree)

    @classmethod
    def from_tree(cls, tree, db: Optional[SequenceDatabase] = None) -> "Lpm":
        if isinstance(tree, str):
            tree = parse(tree)
        lpm = cls(tree, tree_to_net(tree))
        return lpm.evaluated(db) if db is not None else lpm

    @classmethod
    def from_net(cls, net: AcceptingPetriNet, db: Optional[SequenceDatabase] = None) -> "Lpm":
        lpm = cls(None, net)
        return lpm.evaluated(db) if db is not None else lpm

    def evaluated(self, db: SequenceDatabase) -> "Lpm":
        s, k, conf = _statistics(db, self.net)
        return Lpm(self.tree, self.net, s, k, conf)


def _statistics(db: SequenceDatabase, net: AcceptingPetriNet) -> tuple:
    seg = segment_lpm(db, net)
    explained = seg.explained_events()
    per_act = Counter(db.activity(e) for e in explained)
    totals = db.activity_counts()
    acts = net.activities
    conf = min((per_act[a] / totals[a] if totals.get(a) else 0.0) for a in acts) if acts else 0.0
    return len(explained), seg.instance_count(), conf


@dataclass(frozen=True)
class MineConfig:
    min_sup: int = 3
    exp_max: int = 4
    operators: frozenset = frozenset(OPERATORS)
    min_confidence: float = 0.0
    max_candidates_evaluated: int = 200_000
    allow_duplicates: bool = False  # whether an activity may label several leaves
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "operators", frozenset(self.operators))
        if self.exp_max < 1:
            raise ValueError("exp_max must be at least 1")
        if self.min_sup < 1:
            raise ValueError("min_sup must be positive")
        if not 0.0 <= self.min_confidence <= 1.0:
            raise ValueError("min_confidence must lie in [0, 1]")
        unknown = self.operators - set(OPERATORS)
        if unknown:
            raise ValueError(f"unknown operators: {sorted(unknown)}")


@dataclass
class MineResult:
    lpms: list
    truncated: bool = False
    candidates_evaluated: int = 0

    def __iter__(self):
        return iter(self.lpms)

    def __len__(self):
        return len(self.lpms)


def initial_lpms(db: SequenceDatabase) -> list:
    """One single-leaf LPM per activity, alphabetically."""
    return [Lpm.from_tree(Leaf(a), db) for a in sorted(db.alphabet)]


def _replacements(tree: ProcessTree, f) -> Iterable[ProcessTree]:
    """Every tree obtained by replacing exactly one leaf ``x`` by each of ``f(x)``."""
    if isinstance(tree, Leaf):
        yield from f(tree)
        return
    for i, child in enumerate(tree.children):
        for new in _replacements(child, f):
            yield Node(tree.op, tree.children[:i] + (new,) + tree.children[i + 1:])


def expand(lpm, alphabet: Iterable[str], operators: Iterable[str] = OPERATORS,
           allow_duplicates: bool = False) -> set:
    """Candidate trees one expansion step away from ``lpm``.

    A leaf ``a`` is replaced by ``->(a, b)``, ``->(b, a)``, ``X(a, b)``,
    ``+(a, b)``, ``*(->(a, b))`` or ``*(->(b, a))`` for every new activity
    ``b``. Results are normalized and trees equal to the input are dropped.
    """
    tree = lpm.tree if isinstance(lpm, Lpm) else lpm
    ops = set(operators)
    used = activities(tree)
    new_acts = sorted(a for a in set(alphabet) if allow_duplicates or a not in used)

    def grow(leaf):
        for b in new_acts:
            nb = Leaf(b)
            if SEQ in ops:
                yield Node(SEQ, (leaf, nb))
                yield Node(SEQ, (nb, leaf))
            if XOR in ops:
                yield Node(XOR, (leaf, nb))
            if AND in ops:
                yield Node(AND, (leaf, nb))
            if LOOP in ops:
                yield Node(LOOP, (Node(SEQ, (leaf, nb)),))
                yield Node(LOOP, (Node(SEQ, (nb, leaf)),))

    base = normalize(tree)
    return {t for t in map(normalize, _replacements(tree, grow)) if t != base}


def _rank_key(lpm: Lpm, transitions: int):
    return (-lpm.support, transitions, lpm.text)


_worker_db: Optional[SequenceDatabase] = None
_BATCH = 4096


def _init_worker(db: SequenceDatabase) -> None:
    global _worker_db
    _worker_db = db


def _evaluate_tree(tree, db: Optional[SequenceDatabase] = None) -> tuple:
    """Statistics of one candidate; the net is dropped to keep results small."""
    db = db if db is not None else _worker_db
    net = tree_to_net(tree)
    s, k, conf = _statistics(db, net)
    return Lpm(tree, None, s, k, conf), len(net.net.transitions)


def mine(db: SequenceDatabase, cfg: MineConfig = MineConfig()) -> MineResult:
    """Breadth-first expansion from the single-activity LPMs.

    Candidates with support below ``cfg.min_sup`` or confidence below
    ``cfg.min_confidence`` are neither kept nor expanded. The result holds every kept LPM with at least two distinct
    activities, ranked by support (desc), transition count, then tree text.
    """
    def passes(l):
        return l.support >= cfg.min_sup and l.confidence >= cfg.min_confidence

    frontier = [l for l in initial_lpms(db) if passes(l)]
    seen = {l.tree for l in frontier}
    kept = [(_rank_key(l, 1), l) for l in frontier]
    evaluated = 0
    truncated = False
    alphabet = db.alphabet
    pool = ProcessPoolExecutor(cfg.workers, initializer=_init_worker, initargs=(db,)) if cfg.workers > 1 else None

    def evaluate_all(trees):
        if pool is None:
            for t in trees:
                yield _evaluate_tree(t, db)
            return
        for k in range(0, len(trees), _BATCH):
            yield from pool.map(_evaluate_tree, trees[k:k + _BATCH], chunksize=64)

    try:
        for step in range(cfg.exp_max):
            cands = []
            for lpm in frontier:
                for t in sorted(expand(lpm, alphabet, cfg.operators, cfg.allow_duplicates), key=to_text):
                    if t not in seen:
                        seen.add(t)
                        cands.append(t)
            room = cfg.max_candidates_evaluated - evaluated
            if len(cands) > room:
                cands = cands[:room]
                truncated = True
            frontier = []
            for lpm, n_trans in evaluate_all(cands):
                evaluated += 1
                if passes(lpm):
                    frontier.append(lpm)
                    kept.append((_rank_key(lpm, n_trans), lpm))
            log.info("expansion %d: %d candidates, %d kept", step + 1, len(cands), len(frontier))
            del cands
            if truncated or not frontier:
                break
    finally:
        if pool:
            pool.shutdown()
    if truncated:
        log.warning("candidate budget of %d exhausted; result is partial", cfg.max_candidates_evaluated)
    kept.sort(key=lambda kl: kl[0])
    out = [l for _, l in kept if len(l.activities) >= 2]
    return MineResult(out, truncated, evaluated)
