"""Shared test utilities: random graph generation and reference oracles."""

from __future__ import annotations

import random

from amrkit.graph import AmrGraph, NodeKind, make_graph

TITLES = [
    "run-01", "dog", "he", "glee", "name", "date-entity", "person", "city",
    "want-01", "boy", "girl", "see-01", "sail-01", "house", "tree", "go-02",
]
LABELS = ["ARG0", "ARG1", "ARG2", "mod", "poss", "time", "domain", "location", "quant"]


def random_graph(rng: random.Random, max_nodes: int = 12, allow_constants: bool = True) -> AmrGraph:
    """A random valid graph: connected concepts with optional constant
    leaves, re-entrancies, and the occasional cycle."""
    n_concepts = rng.randint(1, max(1, max_nodes - 2))
    nodes = [(f"n{i}", rng.choice(TITLES), NodeKind.CONCEPT) for i in range(n_concepts)]
    edges = []
    # spanning structure keeps everything reachable from n0
    for i in range(1, n_concepts):
        parent = f"n{rng.randrange(i)}"
        edges.append((parent, rng.choice(LABELS), f"n{i}"))
    # extra edges create re-entrancy and cycles
    for _ in range(rng.randint(0, max(0, n_concepts - 1))):
        a = rng.randrange(n_concepts)
        b = rng.randrange(n_concepts)
        edges.append((f"n{a}", rng.choice(LABELS), f"n{b}"))
    if allow_constants:
        n_const = rng.randint(0, min(2, max_nodes - n_concepts))
        for k in range(n_const):
            cid = f"c{k}"
            if rng.random() < 0.5:
                nodes.append((cid, str(rng.randint(0, 2020)), NodeKind.NUMBER))
            else:
                nodes.append((cid, rng.choice(["Rover", "New York", "a\\b", 'say "hi"']), NodeKind.STRING))
            parent = f"n{rng.randrange(n_concepts)}"
            edges.append((parent, rng.choice(["op1", "value", "month", "year"]), cid))
    return make_graph(nodes, edges, "n0")


def reference_jaro_winkler(s1: str, s2: str) -> float:
    """Textbook Jaro-Winkler, written independently of the package code."""
    if s1 == s2:
        return 1.0
    if not s1 or not s2:
        return 0.0
    match_distance = max(max(len(s1), len(s2)) // 2 - 1, 0)
    s1_matches: list[int] = []
    s2_matches: list[int] = []
    for i, ch in enumerate(s1):
        start = max(0, i - match_distance)
        end = min(i + match_distance + 1, len(s2))
        for j in range(start, end):
            if j not in s2_matches and s2[j] == ch:
                s1_matches.append(i)
                s2_matches.append(j)
                break
    if not s1_matches:
        return 0.0
    transpositions = sum(
        1 for a, b in zip(sorted(s1_matches), sorted(s2_matches)) if s1[a] != s2[b]
    )
    m = len(s1_matches)
    jaro = (m / len(s1) + m / len(s2) + (m - transpositions / 2) / m) / 3.0
    prefix = 0
    for a, b in zip(s1, s2):
        if a != b or prefix == 4:
            break
        prefix += 1
    return jaro + prefix * 0.1 * (1 - jaro)
