"""The bundled running example: four sequences over A-F and three LPMs on it."""
from __future__ import annotations

from importlib import resources

from .seqdb import SequenceDatabase, load

LPM_TEXT = {
    "a": "->(A, +(B, ->(C, D)))",
    "b": "->(E, *(->(B, A)), F)",
    "c": "->(D, X(A, ->(B, E)))",
}


def running_example_path():
    return resources.files("lpmkit") / "data" / "running_example.txt"


def running_example() -> SequenceDatabase:
    with resources.as_file(running_example_path()) as p:
        return load(p)


def reference_lpms(db: SequenceDatabase = None) -> list:
    """LPMs a, b, c as :class:`~lpmkit.mine.Lpm`, evaluated on ``db`` when given."""
    from .mine import Lpm
    return [Lpm.from_tree(LPM_TEXT[k], db) for k in "abc"]
