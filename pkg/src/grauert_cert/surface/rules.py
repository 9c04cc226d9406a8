"""Implications between positivity notions for a line bundle on a projective variety."""
from __future__ import annotations

from dataclasses import dataclass

import networkx as nx

__all__ = ["PROPERTIES", "ImplicationRule", "IMPLICATION_RULES", "implication_graph", "rule_path"]

PROPERTIES = (
    "ample", "positive", "semipositive", "nef", "big", "topologically-trivial", "unitary-flat",
)

FIGURE = "Figure 1"


@dataclass(frozen=True)
class ImplicationRule:
    rule_id: int
    source: str
    target: str
    citation: str
    both_ways: bool = False


IMPLICATION_RULES = (
    ImplicationRule(1, "ample", "positive", f"{FIGURE} (1): Kodaira embedding; Demailly, Example 3.14",
                    both_ways=True),
    ImplicationRule(2, "positive", "semipositive", f"{FIGURE} (2): by definition"),
    ImplicationRule(3, "semipositive", "nef", f"{FIGURE} (3): Demailly, Proposition 6.10"),
    ImplicationRule(4, "positive", "big", f"{FIGURE} (4): Demailly, Corollary 6.19"),
    ImplicationRule(5, "topologically-trivial", "semipositive",
                    f"{FIGURE} (5): Kashiwara / Ueda, unitary flat structure"),
)


def implication_graph(rules=IMPLICATION_RULES) -> nx.DiGraph:
    g = nx.DiGraph()
    g.add_nodes_from(PROPERTIES)
    for r in rules:
        g.add_edge(r.source, r.target, rule=r.rule_id)
        if r.both_ways:
            g.add_edge(r.target, r.source, rule=r.rule_id)
    return g


def rule_path(source: str, target: str, rules=IMPLICATION_RULES) -> list[ImplicationRule]:
    """Rules along a shortest implication chain from ``source`` to ``target``."""
    g = implication_graph(rules)
    nodes = nx.shortest_path(g, source, target)
    by_id = {r.rule_id: r for r in rules}
    return [by_id[g.edges[u, v]["rule"]] for u, v in zip(nodes, nodes[1:])]
