"""DOT and JSON emitters for digraphs, decompositions, and certificates.

All output is deterministic: vertices and arcs are emitted in sorted
order, so equal inputs yield byte-identical text (snapshot-friendly).
"""

from __future__ import annotations

import json

from .decomposition import CutDecomposition
from .digraph import Digraph
from .solver import Certificate


def _node_line(d: Digraph, v: int, indent: str = "  ") -> str:
    if d.labels is not None:
        return f'{indent}{v} [label="{d.labels[v]}"];'
    return f"{indent}{v};"


def digraph_to_dot(d: Digraph, name: str = "D") -> str:
    lines = [f"digraph {name} {{"]
    for v in d.vertices:
        lines.append(_node_line(d, v))
    for u, v in d.arcs:
        lines.append(f"  {u} -> {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def decomposition_to_dot(dec: CutDecomposition) -> str:
    """Clusters one per tree node (its diblock membership), back arcs dashed.

    Every vertex is drawn once: tree nodes in their own cluster, other
    vertices in the cluster of the diblock that owns them.
    """
    d = dec.host
    members: dict[int, list[int]] = {x: [x] for x in dec.order}
    for v in d.vertices:
        if not dec.is_node(v):
            members[dec.home[v]].append(v)
    lines = ["digraph decomposition {", "  compound=true;"]
    for x in dec.order:
        suffix = " (degenerate)" if dec.is_degenerate(x) else ""
        lines.append(f"  subgraph cluster_{x} {{")
        lines.append(f'    label="B_{x}{suffix}";')
        for v in sorted(members[x]):
            lines.append(_node_line(d, v, indent="    "))
        lines.append("  }")
    internal = set()
    for b in dec.diblocks.values():
        for u, v in d.arcs:
            if u in b and v in b:
                internal.add((u, v))
    for u, v in d.arcs:
        style = "" if (u, v) in internal else " [style=dashed]"
        lines.append(f"  {u} -> {v}{style};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def decomposition_to_json(dec: CutDecomposition) -> str:
    obj = {
        "root": dec.root,
        "parent": {str(x): p for x, p in dec.parent.items()},
        "diblocks": {str(x): sorted(b) for x, b in dec.diblocks.items()},
        "degenerate": sorted(x for x in dec.order if dec.is_degenerate(x)),
    }
    return json.dumps(obj, indent=2, sort_keys=True)


def certificate_to_dot(cert: Certificate, host: Digraph) -> str:
    """Host digraph with the branching pair highlighted.

    Arcs only in the out-branching are green, only in the in-branching
    blue, shared arcs bold black, and unused host arcs light gray.
    """
    out_arcs = set(cert.t_plus.arcs)
    in_arcs = set(cert.t_minus.arcs)
    lines = ["digraph certificate {"]
    lines.append(f'  {cert.t_plus.root} [shape=doublecircle, xlabel="s"];')
    if cert.t_minus.root != cert.t_plus.root:
        lines.append(f'  {cert.t_minus.root} [shape=doubleoctagon, xlabel="t"];')
    for v in host.vertices:
        if v not in (cert.t_plus.root, cert.t_minus.root):
            lines.append(_node_line(host, v))
    for u, v in host.arcs:
        a = (u, v)
        if a in out_arcs and a in in_arcs:
            attr = " [color=black, penwidth=2.0]"
        elif a in out_arcs:
            attr = " [color=forestgreen]"
        elif a in in_arcs:
            attr = " [color=royalblue]"
        else:
            attr = " [color=gray70]"
        lines.append(f"  {u} -> {v}{attr};")
    lines.append("}")
    return "\n".join(lines) + "\n"
