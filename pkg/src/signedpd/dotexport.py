"""Graphviz DOT rendering of transition graphs and type projections.

Output is byte-stable: nodes appear in state order, edges in sorted
index order, and probabilities use a fixed %.6g format, so identical
graphs always serialize to identical text.  Absorbing states (and
closed multisets in projections) get a double border and fill; edges
that exist only through equal-payoff drift are dashed.
"""

from __future__ import annotations

from .chains import TransitionGraph, TypeProjection

_ABSORBING_ATTRS = 'peripheries=2, style=filled, fillcolor="lightblue"'


def _edge_attrs(*parts: str) -> str:
    parts = tuple(p for p in parts if p)
    return f" [{', '.join(parts)}]" if parts else ""


def _edge_style(idx_pair, strict_edges, drift_edges) -> str:
    if idx_pair in drift_edges and idx_pair not in strict_edges:
        return "style=dashed"
    return ""


def _chain_dot(graph: TransitionGraph, probabilities: bool,
               self_loops: bool) -> list[str]:
    lines = [f"digraph {graph.kind}_chain {{", "  rankdir=LR;"]
    absorbing = set(graph.absorbing_indices)
    for i, st in enumerate(graph.states):
        attrs = f" [{_ABSORBING_ATTRS}]" if i in absorbing else ""
        lines.append(f'  "{st.label()}"{attrs};')
    n = len(graph.states)
    for i in range(n):
        for j in range(n):
            p = graph.probs[i, j]
            if p <= 0.0 or (i == j and not self_loops):
                continue
            label = f'label="{p:.6g}"' if probabilities else ""
            style = _edge_style((i, j), graph.strict_edges, graph.drift_edges)
            attrs = _edge_attrs(label, style)
            lines.append(
                f'  "{graph.states[i].label()}" -> "{graph.states[j].label()}"{attrs};'
            )
    lines.append("}")
    return lines


def _projection_dot(proj: TypeProjection) -> list[str]:
    lines = [f"digraph {proj.kind}_types {{", "  rankdir=LR;"]
    closed = {proj.index_of(m) for m in proj.closed_multisets()}
    for k, mset in enumerate(proj.multisets):
        attrs = f" [{_ABSORBING_ATTRS}]" if k in closed else ""
        lines.append(f'  "{proj.label(mset)}"{attrs};')
    for a, b in sorted(proj.edges):
        attrs = _edge_attrs(_edge_style((a, b), proj.strict_edges, proj.drift_edges))
        lines.append(
            f'  "{proj.label(proj.multisets[a])}" -> '
            f'"{proj.label(proj.multisets[b])}"{attrs};'
        )
    lines.append("}")
    return lines


def export_dot(obj, *, probabilities: bool = True,
               self_loops: bool = False) -> str:
    """Render a TransitionGraph or TypeProjection as DOT text.

    ``probabilities`` labels chain edges with their exact probability;
    ``self_loops`` includes the diagonal (absorbing self-loops are
    implied by the node marking, so they are omitted by default).
    """
    if isinstance(obj, TransitionGraph):
        lines = _chain_dot(obj, probabilities, self_loops)
    elif isinstance(obj, TypeProjection):
        lines = _projection_dot(obj)
    else:
        raise TypeError(f"cannot render {type(obj).__name__} as DOT")
    return "\n".join(lines) + "\n"
