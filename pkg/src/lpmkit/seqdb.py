"""Sequence databases with stable event identity.

A database is an ordered list of activity sequences. Duplicate sequences are
kept as separate entries so that every event can be addressed through an
:class:`EventRef` (sequence index, 1-based position).
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, NamedTuple, Sequence as Seq

from .exceptions import ParseError

Activity = str
Sequence = tuple  # tuple[Activity, ...]


class EventRef(NamedTuple):
    seq_index: int  # 0-based index into SequenceDatabase.sequences
    position: int  # 1-based position within the sequence


def project(seq: Seq[Activity], keep: Iterable[Activity]) -> tuple:
    """Subsequence of the events whose activity is in ``keep``."""
    keep = set(keep)
    return tuple(a for a in seq if a in keep)


def filter_out(seq: Seq[Activity], drop: Iterable[Activity]) -> tuple:
    """Subsequence with every event whose activity is in ``drop`` removed."""
    drop = set(drop)
    return tuple(a for a in seq if a not in drop)


def prefix(seq: Seq[Activity], k: int) -> tuple:
    if not 1 <= k <= len(seq):
        raise IndexError(f"prefix length {k} outside 1..{len(seq)}")
    return tuple(seq[:k])


@dataclass(frozen=True)
class SequenceDatabase:
    sequences: tuple = ()
    alphabet: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        seqs = tuple(tuple(s) for s in self.sequences)
        for s in seqs:
            for a in s:
                if not isinstance(a, str) or not a:
                    raise ValueError(f"activity labels must be non-empty strings, got {a!r}")
        object.__setattr__(self, "sequences", seqs)
        object.__setattr__(self, "alphabet", frozenset(a for s in seqs for a in s))

    @classmethod
    def from_strings(cls, lines: Iterable[str]) -> "SequenceDatabase":
        """Build from whitespace-separated activity strings, e.g. ``"A B C"``."""
        return cls(tuple(tuple(line.split()) for line in lines))

    def __len__(self) -> int:
        return len(self.sequences)

    def __iter__(self) -> Iterator[tuple]:
        return iter(self.sequences)

    def __getitem__(self, i):
        return self.sequences[i]

    @property
    def total_events(self) -> int:
        return sum(len(s) for s in self.sequences)

    def activity(self, ref: EventRef) -> Activity:
        return self.sequences[ref.seq_index][ref.position - 1]

    def events(self) -> Iterator[tuple[EventRef, Activity]]:
        for i, s in enumerate(self.sequences):
            for pos, a in enumerate(s, start=1):
                yield EventRef(i, pos), a

    def event_list(self, seq_index: int, exclude=frozenset()) -> list[tuple[EventRef, Activity]]:
        """Events of one sequence as ``(ref, activity)`` pairs, minus ``exclude``."""
        out = []
        for pos, a in enumerate(self.sequences[seq_index], start=1):
            ref = EventRef(seq_index, pos)
            if ref not in exclude:
                out.append((ref, a))
        return out

    def activity_counts(self) -> dict[Activity, int]:
        counts: dict[Activity, int] = {}
        for s in self.sequences:
            for a in s:
                counts[a] = counts.get(a, 0) + 1
        return counts

    def to_lines(self) -> str:
        return "".join(" ".join(s) + "\n" for s in self.sequences)


def _load_lines(path: Path) -> SequenceDatabase:
    seqs = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            tokens = [t.strip() for t in line.split(" ")]
            tokens = [t for t in tokens if t]
            if tokens:
                seqs.append(tuple(tokens))
    return SequenceDatabase(tuple(seqs))


def _load_csv(path: Path) -> SequenceDatabase:
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or all(not r for r in rows):
        return SequenceDatabase(())
    header = [h.strip() for h in rows[0]]
    for col in ("case", "activity"):
        if col not in header:
            raise ParseError(f"missing column {col!r} in header", path, 1)
    i_case = header.index("case")
    i_act = header.index("activity")
    i_order = header.index("order") if "order" in header else None

    cases: dict[str, list] = {}
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise ParseError(f"expected {len(header)} fields, got {len(row)}", path, lineno)
        case = row[i_case].strip()
        act = row[i_act].strip()
        if not act:
            raise ParseError("empty activity label", path, lineno)
        order = lineno
        if i_order is not None:
            try:
                order = int(row[i_order].strip())
            except ValueError:
                raise ParseError(f"order value {row[i_order]!r} is not an integer", path, lineno) from None
        cases.setdefault(case, []).append((order, lineno, act))
    seqs = []
    for events in cases.values():
        events.sort(key=lambda e: (e[0], e[1]))
        seqs.append(tuple(e[2] for e in events))
    return SequenceDatabase(tuple(seqs))


def load(path, format: str = "lines") -> SequenceDatabase:
    """Read a database from a ``lines`` or ``csv`` file.

    Cases in a csv file appear in order of their first row.
    """
    path = Path(path)
    if format == "lines":
        return _load_lines(path)
    if format == "csv":
        return _load_csv(path)
    raise ValueError(f"unknown format {format!r}; expected 'lines' or 'csv'")
