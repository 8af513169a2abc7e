"""Exhaustive single-neuron transition graphs over S^N."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from .algebra import format_coeffs
from .network import Network, step

__all__ = [
    "NODE_CAP",
    "TransitionGraph",
    "Classification",
    "enumerate_graph",
    "classify",
    "to_dot",
    "classification_to_json",
    "relabel_isomorphic",
    "max_steps_to_fixed",
]

NODE_CAP = 10 ** 6


@dataclass
class TransitionGraph:
    """Nodes are mixed-radix codes of states (neuron 0 is the most significant digit,
    digits are positions in the state set); edges ``(u, v, i)`` mean updating neuron
    ``i`` at ``u`` yields ``v != u``."""

    net: Network
    n_nodes: int
    edges: list = field(default_factory=list)

    @property
    def radix(self) -> int:
        return len(self.net.states)

    def decode(self, node: int) -> np.ndarray:
        digits = []
        for _ in range(self.net.N):
            node, r = divmod(node, self.radix)
            digits.append(r)
        return self.net.states.elements[digits[::-1]].copy()

    def encode(self, x) -> int:
        x = np.asarray(x, dtype=np.float64).reshape(self.net.N, self.net.dim)
        node = 0
        for xi in x:
            node = node * self.radix + self.net.states.index(xi)
        return node

    def successors(self, node: int) -> list:
        return [v for u, v, _ in self.edges if u == node]

    def out_degree(self) -> np.ndarray:
        deg = np.zeros(self.n_nodes, dtype=int)
        for u, _, _ in self.edges:
            deg[u] += 1
        return deg

    def to_networkx(self) -> nx.MultiDiGraph:
        g = nx.MultiDiGraph()
        g.add_nodes_from(range(self.n_nodes))
        for u, v, i in self.edges:
            g.add_edge(u, v, neuron=i)
        return g


def enumerate_graph(net: Network, node_cap: int = NODE_CAP) -> TransitionGraph:
    if not net.states.finite:
        raise ValueError(f"{net.activation.id} has an infinite state set; no transition graph")
    n_nodes = len(net.states) ** net.N
    if n_nodes > node_cap:
        raise ValueError(f"{n_nodes} states exceed the node cap of {node_cap}")
    g = TransitionGraph(net, n_nodes)
    for u in range(n_nodes):
        x = g.decode(u)
        for i in range(net.N):
            y, changed = step(net, x, i)
            if changed:
                g.edges.append((u, g.encode(y), i))
    return g


@dataclass
class Classification:
    fixed_points: list
    cyclic_nodes: list
    n_nodes: int
    _graph: nx.DiGraph | None = field(default=None, repr=False)

    def basin(self, node: int) -> list:
        """Fixed points reachable from ``node``."""
        reach = nx.descendants(self._graph, node) | {node}
        return sorted(reach & set(self.fixed_points))

    @property
    def counts(self) -> dict:
        return {"nodes": self.n_nodes, "fixed_points": len(self.fixed_points),
                "cyclic_nodes": len(self.cyclic_nodes)}


def classify(g: TransitionGraph) -> Classification:
    """Fixed points are out-degree-0 nodes; cyclic nodes sit in a strongly
    connected component of size >= 2 (self-loops are never recorded)."""
    G = nx.DiGraph()
    G.add_nodes_from(range(g.n_nodes))
    G.add_edges_from((u, v) for u, v, _ in g.edges)
    fixed = sorted(n for n in G.nodes if G.out_degree(n) == 0)
    cyclic = sorted(n for comp in nx.strongly_connected_components(G) if len(comp) > 1 for n in comp)
    return Classification(fixed, cyclic, g.n_nodes, G)


def max_steps_to_fixed(g: TransitionGraph, start: int) -> int | None:
    """Longest path from ``start`` to a fixed point, or None if a cycle is reachable."""
    G = nx.DiGraph(g.to_networkx())
    sub = G.subgraph(nx.descendants(G, start) | {start})
    if not nx.is_directed_acyclic_graph(sub):
        return None
    return nx.dag_longest_path_length(sub)


def _state_label(g: TransitionGraph, node: int) -> str:
    return ", ".join(f"[{format_coeffs([_short(c) for c in xi])}]" for xi in g.decode(node))


def _short(c: float):
    return int(c) if float(c).is_integer() else round(float(c), 4)


def to_dot(g: TransitionGraph, highlight: int | None = None, name: str = "transitions") -> str:
    """DOT digraph; edges reachable from ``highlight`` are red, fixed points doubled."""
    red = set()
    if highlight is not None:
        seen, stack = {highlight}, [highlight]
        adj = {}
        for u, v, i in g.edges:
            adj.setdefault(u, []).append(v)
        while stack:
            u = stack.pop()
            for v in adj.get(u, ()):
                red.add((u, v))
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
    deg = g.out_degree()
    lines = [f"digraph {name} {{"]
    for n in range(g.n_nodes):
        shape = "doublecircle" if deg[n] == 0 else "circle"
        lines.append(f'  {n} [shape={shape}, tooltip="{_state_label(g, n)}"];')
    for u, v, i in sorted(g.edges):
        attrs = f'label="{i + 1}"'
        if (u, v) in red:
            attrs += ", color=red"
        lines.append(f"  {u} -> {v} [{attrs}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def classification_to_json(c: Classification, meta: dict | None = None) -> str:
    doc = {"fixed_points": c.fixed_points, "cyclic_nodes": c.cyclic_nodes, "counts": c.counts}
    if meta:
        doc["meta"] = meta
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def relabel_isomorphic(g1: TransitionGraph, g2: TransitionGraph, state_map) -> bool:
    """Whether ``state_map`` (applied to every neuron) carries g1's edge set onto g2's."""
    def mapped(node):
        x = g1.decode(node)
        return g2.encode(np.array([state_map(xi) for xi in x]))

    if g1.n_nodes != g2.n_nodes:
        return False
    e1 = sorted((mapped(u), mapped(v), i) for u, v, i in g1.edges)
    return e1 == sorted(g2.edges)
