"""Memorized span-text to subgraph mapping, the backoff derivation route."""

from __future__ import annotations

from pathlib import Path
from typing import Iterator

from amrkit.graph import (
    AmrFragment,
    AmrGraph,
    AmrNode,
    GraphError,
    NodeKind,
    parse_penman,
    print_penman,
)


class DictTableError(ValueError):
    pass


def fragment_text(frag: AmrFragment) -> str:
    """Span-independent serialization of a fragment.

    Single constant nodes cannot be written as Penman, so they get the
    `#num` / `#str` prefix forms.
    """
    if len(frag.graph) == 1:
        node = frag.graph.node(frag.head)
        if node.kind is NodeKind.NUMBER:
            return f"#num {node.title}"
        if node.kind is NodeKind.STRING:
            return f"#str {node.title}"
    return print_penman(frag.graph)


def fragment_from_text(text: str, span: tuple[int, int]) -> AmrFragment:
    """Rebuild a fragment template at a span, with ids namespaced by the span."""
    start = span[0]
    if text.startswith("#num ") or text.startswith("#str "):
        kind = NodeKind.NUMBER if text.startswith("#num ") else NodeKind.STRING
        nid = f"t{start}n0"
        node = AmrNode(nid, text[5:], kind)
        return AmrFragment(AmrGraph([node], [], nid), nid, span)
    g = parse_penman(text)
    rename = {old: f"t{start}n{k}" for k, old in enumerate(g.node_ids)}
    nodes = [AmrNode(rename[n.id], n.title, n.kind) for n in g.nodes]
    edges = [(rename[e.source], e.label, rename[e.target]) for e in g.edges]
    from amrkit.graph import make_graph

    g2 = make_graph(nodes, edges, rename[g.root])
    return AmrFragment(g2, rename[g.root], span)


class DictTable:
    """Counts of subgraphs observed for each lowercased span text.

    Lookup returns the highest-count template, ties broken by the
    lexicographically smallest serialization.
    """

    def __init__(self):
        self._counts: dict[str, dict[str, int]] = {}

    def add(self, span_text: str, frag: AmrFragment, count: int = 1) -> None:
        if count < 1:
            raise DictTableError("counts must be >= 1")
        per = self._counts.setdefault(span_text.lower(), {})
        text = fragment_text(frag)
        per[text] = per.get(text, 0) + count

    def lookup(self, span_text: str) -> str | None:
        per = self._counts.get(span_text.lower())
        if not per:
            return None
        return min(per, key=lambda t: (-per[t], t))

    def instantiate(self, span_text: str, span: tuple[int, int]) -> AmrFragment | None:
        text = self.lookup(span_text)
        if text is None:
            return None
        return fragment_from_text(text, span)

    def __contains__(self, span_text: str) -> bool:
        return span_text.lower() in self._counts

    def __len__(self) -> int:
        return len(self._counts)

    def entries(self) -> Iterator[tuple[str, str, int]]:
        """All (span, serialized fragment, count) rows in canonical order."""
        for span in sorted(self._counts):
            per = self._counts[span]
            for text in sorted(per):
                yield span, text, per[text]

    def save(self, path) -> None:
        lines = [f"{span}\t{count}\t{text}" for span, text, count in self.entries()]
        Path(path).write_text("".join(line + "\n" for line in lines), encoding="utf-8")

    @classmethod
    def load(cls, path) -> "DictTable":
        table = cls()
        with open(path, encoding="utf-8") as f:
            for lineno, line in enumerate(f, 1):
                line = line.rstrip("\n")
                if not line.strip():
                    continue
                parts = line.split("\t")
                if len(parts) != 3:
                    raise DictTableError(f"{path}:{lineno}: expected 'span TAB count TAB fragment'")
                span, count_text, text = parts
                try:
                    count = int(count_text)
                except ValueError:
                    raise DictTableError(f"{path}:{lineno}: bad count {count_text!r}") from None
                if count < 1:
                    raise DictTableError(f"{path}:{lineno}: counts must be >= 1")
                try:
                    fragment_from_text(text, (0, 1))
                except (GraphError, ValueError) as e:
                    raise DictTableError(f"{path}:{lineno}: bad fragment: {e}") from None
                per = table._counts.setdefault(span, {})
                per[text] = per.get(text, 0) + count
        return table
