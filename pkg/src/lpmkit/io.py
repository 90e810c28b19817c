"""JSON serialization of LPMs, LPM sets and sequential patterns."""
from __future__ import annotations

import json
from pathlib import Path

from .exceptions import ParseError
from .mine import Lpm
from .petri import AcceptingPetriNet, LabeledPetriNet, Marking
from .seqdb import EventRef
from .spm import SequentialPattern
from .tree import parse, to_text


def net_to_json(apn: AcceptingPetriNet) -> dict:
    net = apn.net
    return {
        "places": list(net.places),
        "transitions": [{"id": t, "label": net.labels[t]} for t in net.transitions],
        "arcs": [list(a) for a in net._arc_order],
        "initial": dict(apn.initial),
        "final": dict(apn.final),
    }


def net_from_json(d: dict) -> AcceptingPetriNet:
    labels = {t["id"]: t.get("label") for t in d["transitions"]}
    net = LabeledPetriNet(d["places"], list(labels), [tuple(a) for a in d["arcs"]], labels)
    return AcceptingPetriNet(net, Marking(d["initial"]), Marking(d["final"]))


def lpm_to_json(lpm) -> dict:
    out = {"tree": to_text(lpm.tree)} if lpm.tree is not None else {"net": net_to_json(lpm.net)}
    out.update(support=lpm.support, instance_count=lpm.instance_count,
               confidence=lpm.confidence, activities=sorted(lpm.activities))
    return out


def lpm_from_json(d: dict):
    stats = dict(support=d.get("support", 0), instance_count=d.get("instance_count", 0),
                 confidence=d.get("confidence", 0.0))
    if "tree" in d:
        tree = parse(d["tree"])
        return Lpm(tree, None, **stats)
    if "net" in d:
        return Lpm(None, net_from_json(d["net"]), **stats)
    raise ValueError("LPM entry needs a 'tree' or a 'net'")


def pattern_to_json(sp: SequentialPattern) -> dict:
    return sp.to_json()


def pattern_from_json(d: dict) -> SequentialPattern:
    inst = tuple(tuple(EventRef(e["seq"], e["pos"]) for e in i) for i in d["instances"])
    return SequentialPattern(tuple(d["pattern"]), inst)


def dump(obj, path) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=False) + "\n", encoding="utf-8")


def _read_list(path, what: str, convert) -> list:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8") or "[]")
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", path, exc.lineno) from exc
    if not isinstance(data, list):
        raise ParseError(f"expected a JSON array of {what}", path, 1)
    out = []
    for k, d in enumerate(data):
        try:
            out.append(convert(d))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"{what} entry {k}: {exc}", path) from exc
    return out


def save_lpms(lpms, path) -> None:
    dump([lpm_to_json(x) for x in lpms], path)


def load_lpms(path) -> list:
    return _read_list(path, "LPM", lpm_from_json)


def save_patterns(patterns, path) -> None:
    dump([pattern_to_json(p) for p in patterns], path)


def load_patterns(path) -> list:
    return _read_list(path, "pattern", pattern_from_json)
