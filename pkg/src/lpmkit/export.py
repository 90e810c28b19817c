"""Graphviz DOT and PNML writers, plus a PNML reader for round trips."""
from __future__ import annotations

import xml.etree.ElementTree as ET

from .petri import AcceptingPetriNet, LabeledPetriNet, Marking

TOOL = "lpmkit"


def _q(s: str) -> str:
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(apn: AcceptingPetriNet, name: str = "lpm") -> str:
    """Places are circles (initial ones show their tokens, final ones are
    hatched), transitions are boxes and silent transitions gray boxes."""
    net = apn.net
    lines = [f"digraph {_q(name)} {{", "  rankdir=LR;", '  node [fontname="Helvetica"];']
    for p in net.places:
        attrs = ["shape=circle", "fixedsize=true", "width=0.4"]
        tokens = apn.initial.get(p)
        attrs.append(f"label={_q('•' if tokens == 1 else tokens or '')}")
        if p in apn.final:
            attrs.append('style="diagonals"')
        lines.append(f"  {_q(p)} [{', '.join(attrs)}];")
    for t in net.transitions:
        lab = net.labels[t]
        if lab is None:
            lines.append(f'  {_q(t)} [shape=box, label="", style=filled, fillcolor=gray, width=0.15];')
        else:
            lines.append(f"  {_q(t)} [shape=box, label={_q(lab)}];")
    for s, d in net._arc_order:
        lines.append(f"  {_q(s)} -> {_q(d)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_pnml(apn: AcceptingPetriNet, name: str = "lpm") -> str:
    net = apn.net
    root = ET.Element("pnml")
    n = ET.SubElement(root, "net", id=name, type="http://www.pnml.org/version-2009/grammar/ptnet")
    ET.SubElement(ET.SubElement(n, "name"), "text").text = name
    page = ET.SubElement(n, "page", id="page0")
    for p in net.places:
        el = ET.SubElement(page, "place", id=p)
        ET.SubElement(ET.SubElement(el, "name"), "text").text = p
        if apn.initial.get(p):
            ET.SubElement(ET.SubElement(el, "initialMarking"), "text").text = str(apn.initial[p])
    for t in net.transitions:
        el = ET.SubElement(page, "transition", id=t)
        ET.SubElement(ET.SubElement(el, "name"), "text").text = net.labels[t] or ""
        if net.labels[t] is None:
            ET.SubElement(el, "toolspecific", tool=TOOL, version="1", activity="$invisible$")
    for k, (s, d) in enumerate(net._arc_order):
        ET.SubElement(page, "arc", id=f"a{k}", source=s, target=d)
    final = ET.SubElement(ET.SubElement(n, "toolspecific", tool=TOOL, version="1"), "finalMarking")
    for p, k in apn.final.items():
        ET.SubElement(ET.SubElement(final, "place", idref=p), "text").text = str(k)
    ET.indent(root)
    return ET.tostring(root, encoding="unicode", xml_declaration=True) + "\n"


def from_pnml(text: str) -> AcceptingPetriNet:
    root = ET.fromstring(text)
    n = root.find("net")
    places, initial, transitions, labels, arcs = [], {}, [], {}, []
    for p in n.iter("place"):
        if p.get("id") is None:
            continue
        places.append(p.get("id"))
        im = p.find("initialMarking/text")
        if im is not None and int(im.text):
            initial[p.get("id")] = int(im.text)
    for t in n.iter("transition"):
        tid = t.get("id")
        transitions.append(tid)
        silent = any(ts.get("activity") == "$invisible$" for ts in t.findall("toolspecific"))
        name = t.find("name/text")
        labels[tid] = None if silent or name is None or not name.text else name.text
    for a in n.iter("arc"):
        arcs.append((a.get("source"), a.get("target")))
    final = {}
    for ts in n.findall("toolspecific"):
        for p in ts.findall("finalMarking/place"):
            final[p.get("idref")] = int(p.find("text").text)
    net = LabeledPetriNet(places, transitions, arcs, labels)
    return AcceptingPetriNet(net, Marking(initial), Marking(final))
