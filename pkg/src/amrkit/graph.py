"""Rooted directed AMR graphs: Penman text, triples, and isomorphism.

Graphs are immutable once built. Node ids are opaque strings; parsed
graphs reuse the Penman variables as ids and number constants `_0`,
`_1`, ... in reading order, which is how alignment files refer to them.
"""

from __future__ import annotations

import re
from collections import Counter, defaultdict
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence


class NodeKind(Enum):
    CONCEPT = "concept"
    STRING = "string"
    NUMBER = "number"


class PenmanError(ValueError):
    """Malformed Penman text. `offset` is the character position of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class GraphError(ValueError):
    """A graph invariant does not hold."""


_INT = re.compile(r"-?\d+\Z")


@dataclass(frozen=True)
class AmrNode:
    id: str
    title: str
    kind: NodeKind = NodeKind.CONCEPT

    def __post_init__(self):
        if not self.title:
            raise GraphError("node title must be non-empty")
        if self.kind is NodeKind.NUMBER and not _INT.match(self.title):
            raise GraphError(f"numeric constant title {self.title!r} is not an integer")


@dataclass(frozen=True)
class AmrEdge:
    source: str
    label: str
    target: str

    def __post_init__(self):
        if not self.label:
            raise GraphError("edge label must be non-empty")


class AmrGraph:
    """Immutable rooted multigraph of concept and constant nodes.

    Every node must be reachable from the root ignoring edge direction.
    Node order is preserved from construction and used wherever a
    deterministic node ordering is needed.
    """

    def __init__(self, nodes: Iterable[AmrNode], edges: Iterable[AmrEdge], root: str):
        self._by_id: dict[str, AmrNode] = {}
        for n in nodes:
            if n.id in self._by_id:
                raise GraphError(f"duplicate node id {n.id!r}")
            self._by_id[n.id] = n
        self.edges: tuple[AmrEdge, ...] = tuple(edges)
        self._out: dict[str, list[AmrEdge]] = {i: [] for i in self._by_id}
        self._in: dict[str, list[AmrEdge]] = {i: [] for i in self._by_id}
        for e in self.edges:
            if e.source not in self._by_id or e.target not in self._by_id:
                raise GraphError(f"edge {e.source} -{e.label}-> {e.target} references an unknown node")
            self._out[e.source].append(e)
            self._in[e.target].append(e)
        if root not in self._by_id:
            raise GraphError(f"root {root!r} is not a node of the graph")
        self.root = root
        seen = {root}
        stack = [root]
        while stack:
            cur = stack.pop()
            for e in self._out[cur]:
                if e.target not in seen:
                    seen.add(e.target)
                    stack.append(e.target)
            for e in self._in[cur]:
                if e.source not in seen:
                    seen.add(e.source)
                    stack.append(e.source)
        if len(seen) != len(self._by_id):
            missing = ", ".join(sorted(set(self._by_id) - seen))
            raise GraphError(f"nodes unreachable from root: {missing}")

    @property
    def nodes(self) -> tuple[AmrNode, ...]:
        return tuple(self._by_id.values())

    @property
    def node_ids(self) -> tuple[str, ...]:
        return tuple(self._by_id)

    def node(self, node_id: str) -> AmrNode:
        return self._by_id[node_id]

    def has_node(self, node_id: str) -> bool:
        return node_id in self._by_id

    def out_edges(self, node_id: str) -> tuple[AmrEdge, ...]:
        return tuple(self._out[node_id])

    def in_edges(self, node_id: str) -> tuple[AmrEdge, ...]:
        return tuple(self._in[node_id])

    def __len__(self) -> int:
        return len(self._by_id)

    def __eq__(self, other) -> bool:
        # structural identity (same ids); use isomorphic() for variable-renaming equality
        if not isinstance(other, AmrGraph):
            return NotImplemented
        return (
            self.root == other.root
            and self._by_id == other._by_id
            and Counter(self.edges) == Counter(other.edges)
        )

    def __hash__(self):
        return hash((self.root, frozenset(self._by_id.values()), frozenset(Counter(self.edges).items())))

    def __repr__(self):
        return f"AmrGraph({len(self)} nodes, {len(self.edges)} edges, root={self.root!r})"


@dataclass(frozen=True)
class AmrFragment:
    """A small connected subgraph derived from a token span.

    `head` is the attachment point used when fragments are linked into a
    full graph; it always coincides with the fragment graph's root.
    `span` is a half-open [start, end) token interval.
    """

    graph: AmrGraph
    head: str
    span: tuple[int, int]

    def __post_init__(self):
        if not self.graph.has_node(self.head):
            raise GraphError(f"fragment head {self.head!r} is not in the fragment graph")
        start, end = self.span
        if not (0 <= start < end):
            raise GraphError(f"bad fragment span {self.span}")

    @property
    def head_title(self) -> str:
        return self.graph.node(self.head).title


def make_graph(nodes, edges, root: str) -> AmrGraph:
    """Build a graph from (id, title[, kind]) tuples and (source, label, target) triples."""
    built = []
    for n in nodes:
        if isinstance(n, AmrNode):
            built.append(n)
        else:
            built.append(AmrNode(*n))
    edge_objs = [e if isinstance(e, AmrEdge) else AmrEdge(*e) for e in edges]
    return AmrGraph(built, edge_objs, root)


# --- Penman reading -------------------------------------------------------

# Relations ending in "-of" denote the inverse edge, except for a few
# label spellings that are not inversions in AMR.
_NON_INVERTIBLE = frozenset({"consist-of", "prep-out-of", "prep-on-behalf-of"})
_ATOM = re.compile(r"[^\s()\":]+")


def _invertible(label: str) -> bool:
    return label.endswith("-of") and len(label) > 3 and label not in _NON_INVERTIBLE


class _Tree:
    __slots__ = ("var", "var_at", "title", "children")

    def __init__(self, var, var_at, title, children):
        self.var = var
        self.var_at = var_at
        self.title = title
        self.children = children  # list of (label, label_offset, child)


class _Str:
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = value


class _Ref:
    __slots__ = ("name",)

    def __init__(self, name):
        self.name = name


class _Reader:
    def __init__(self, text: str):
        self.text = text
        self.i = 0

    def fail(self, message, at=None):
        raise PenmanError(message, self.i if at is None else at)

    def ws(self):
        while self.i < len(self.text) and self.text[self.i].isspace():
            self.i += 1

    def peek(self) -> str:
        return self.text[self.i] if self.i < len(self.text) else ""

    def atom(self, what: str) -> str:
        m = _ATOM.match(self.text, self.i)
        if not m:
            self.fail(f"expected {what}")
        self.i = m.end()
        return m.group()

    def string(self) -> str:
        start = self.i
        self.i += 1  # opening quote
        out = []
        while True:
            if self.i >= len(self.text):
                self.fail("unterminated string constant", start)
            c = self.text[self.i]
            if c == "\\":
                if self.i + 1 >= len(self.text):
                    self.fail("unterminated escape", self.i)
                out.append(self.text[self.i + 1])
                self.i += 2
            elif c == '"':
                self.i += 1
                return "".join(out)
            else:
                out.append(c)
                self.i += 1

    def node(self) -> _Tree:
        start = self.i
        self.i += 1  # opening paren
        self.ws()
        var_at = self.i
        var = self.atom("a variable name")
        self.ws()
        if self.peek() != "/":
            self.fail("expected '/' after variable")
        self.i += 1
        self.ws()
        title = self.atom("a concept title")
        children = []
        while True:
            self.ws()
            c = self.peek()
            if c == ")":
                self.i += 1
                return _Tree(var, var_at, title, children)
            if c == "":
                self.fail("unbalanced parentheses: missing ')'", start)
            if c != ":":
                self.fail("expected ':' or ')'")
            rel_at = self.i
            self.i += 1
            m = _ATOM.match(self.text, self.i)
            if not m:
                self.fail("empty relation name", rel_at)
            label = m.group()
            self.i = m.end()
            self.ws()
            t = self.peek()
            if t == "(":
                children.append((label, rel_at, self.node()))
            elif t == '"':
                children.append((label, rel_at, _Str(self.string())))
            elif t == "" or t in "):":
                self.fail("missing value after relation", rel_at)
            else:
                children.append((label, rel_at, _Ref(self.atom("a value"))))


def parse_penman(text: str) -> AmrGraph:
    """Parse a single parenthesized Penman expression into a graph.

    Repeated variables express re-entrancy. Relations ending in "-of"
    are normalized to the forward edge. Unquoted integers become
    numeric constants, quoted strings become string constants, and any
    other atom that is not a defined variable becomes a constant
    concept occurrence.
    """
    r = _Reader(text)
    r.ws()
    if r.peek() != "(":
        r.fail("expected '(' to open the graph")
    tree = r.node()
    r.ws()
    if r.i != len(r.text):
        r.fail("trailing text after graph")

    defs: dict[str, str] = {}

    def collect(t: _Tree):
        old = defs.get(t.var)
        if old is not None and old != t.title:
            raise PenmanError(
                f"variable {t.var!r} redefined with conflicting title ({old!r} vs {t.title!r})",
                t.var_at,
            )
        defs.setdefault(t.var, t.title)
        for _, _, child in t.children:
            if isinstance(child, _Tree):
                collect(child)

    collect(tree)

    nodes: list[AmrNode] = []
    edges: list[AmrEdge] = []
    materialized: set[str] = set()
    counter = [0]

    def var_node(var: str):
        if var not in materialized:
            materialized.add(var)
            nodes.append(AmrNode(var, defs[var]))

    def const_node(title: str, kind: NodeKind) -> str:
        cid = f"_{counter[0]}"
        counter[0] += 1
        nodes.append(AmrNode(cid, title, kind))
        return cid

    def build(t: _Tree):
        var_node(t.var)
        for label, _rel_at, child in t.children:
            if isinstance(child, _Tree):
                build(child)
                cid, is_concept = child.var, True
            elif isinstance(child, _Str):
                cid, is_concept = const_node(child.value, NodeKind.STRING), False
            elif child.name in defs:
                var_node(child.name)
                cid, is_concept = child.name, True
            elif _INT.match(child.name):
                cid, is_concept = const_node(child.name, NodeKind.NUMBER), False
            else:
                cid, is_concept = const_node(child.name, NodeKind.CONCEPT), False
            if is_concept and _invertible(label):
                edges.append(AmrEdge(cid, label[:-3], t.var))
            else:
                edges.append(AmrEdge(t.var, label, cid))

    build(tree)
    return AmrGraph(nodes, edges, tree.var)


# --- Penman writing -------------------------------------------------------


def print_penman(g: AmrGraph) -> str:
    """Serialize a graph to one line of Penman text.

    Deterministic: children are printed ordered by edge label, then
    child title. Re-entrant nodes are printed once and referenced by
    variable afterwards. Variables are the first letter of the title
    plus a disambiguating number.
    """
    root = g.node(g.root)
    if root.kind is not NodeKind.CONCEPT:
        raise GraphError("cannot print a graph rooted at a constant")
    for n in g.nodes:
        if n.kind is not NodeKind.CONCEPT:
            if g.out_edges(n.id):
                raise GraphError(f"constant node {n.id!r} has outgoing edges")
            if len(g.in_edges(n.id)) != 1:
                raise GraphError(f"constant node {n.id!r} must have exactly one parent to be printed")
    for e in g.edges:
        if _invertible(e.label) and g.node(e.target).kind is NodeKind.CONCEPT:
            raise GraphError(f"edge label {e.label!r} would be read back as an inverse relation")

    names: dict[str, str] = {}
    letter_counts: dict[str, int] = {}
    printed: set[int] = set()

    out_by: dict[str, list] = defaultdict(list)
    in_by: dict[str, list] = defaultdict(list)
    for pos, e in enumerate(g.edges):
        out_by[e.source].append((e.label, pos, e.target))
        inverse = e.label + "-of"
        if inverse not in _NON_INVERTIBLE:
            in_by[e.target].append((inverse, pos, e.source))

    def assign(nid: str):
        title = g.node(nid).title
        ch = next((c.lower() for c in title if c.isalpha()), "x")
        k = letter_counts.get(ch, 0) + 1
        letter_counts[ch] = k
        names[nid] = ch if k == 1 else f"{ch}{k}"

    def value_text(n: AmrNode) -> str:
        if n.kind is NodeKind.NUMBER:
            return n.title
        escaped = n.title.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'

    def sort_key(item):
        label, pos, other = item
        o = g.node(other)
        return (label, o.title, o.kind.value, pos)

    def render(nid: str) -> str:
        assign(nid)
        node = g.node(nid)
        parts = [f"({names[nid]} / {node.title}"]
        for label, pos, other in sorted(out_by.get(nid, []) + in_by.get(nid, []), key=sort_key):
            if pos in printed:
                continue
            printed.add(pos)
            o = g.node(other)
            if o.kind is not NodeKind.CONCEPT:
                parts.append(f" :{label} {value_text(o)}")
            elif other in names:
                parts.append(f" :{label} {names[other]}")
            else:
                parts.append(f" :{label} {render(other)}")
        parts.append(")")
        return "".join(parts)

    text = render(g.root)
    if len(printed) != len(g.edges):
        raise GraphError("graph has edges that cannot be reached for printing")
    return text


# --- Triples --------------------------------------------------------------


def triples(g: AmrGraph) -> list[tuple[str, str, str]]:
    """Triples implied by the graph: one instance triple per node, one
    relation triple per edge (constants rendered by title), plus the
    root triple. Order is deterministic; length is nodes + edges + 1.
    """
    out = [(n.id, "instance", n.title) for n in g.nodes]
    for e in g.edges:
        tgt = g.node(e.target)
        child = tgt.id if tgt.kind is NodeKind.CONCEPT else tgt.title
        out.append((e.source, e.label, child))
    out.append(("TOP", "root", g.root))
    return out


# --- Isomorphism ----------------------------------------------------------


def _signature(g: AmrGraph, n: AmrNode):
    return (
        n.kind.value,
        n.title,
        tuple(sorted(Counter(e.label for e in g.out_edges(n.id)).items())),
        tuple(sorted(Counter(e.label for e in g.in_edges(n.id)).items())),
    )


def isomorphic(a: AmrGraph, b: AmrGraph, pins: Sequence[tuple[str, str]] = ()) -> bool:
    """Graph isomorphism respecting titles, kinds, labels, and the root.

    `pins` forces extra node correspondences (used to compare fragment
    heads). Backtracking search; fine at fragment and sentence scale.
    """
    if len(a) != len(b) or len(a.edges) != len(b.edges):
        return False
    sig_a = {n.id: _signature(a, n) for n in a.nodes}
    sig_b = {n.id: _signature(b, n) for n in b.nodes}
    if Counter(sig_a.values()) != Counter(sig_b.values()):
        return False

    mapping: dict[str, str] = {}
    used: set[str] = set()
    forced = dict(pins)
    forced[a.root] = b.root
    for pa, pb in forced.items():
        if not (a.has_node(pa) and b.has_node(pb)) or sig_a[pa] != sig_b[pb]:
            return False
        if pa in mapping:
            if mapping[pa] != pb:
                return False
            continue
        if pb in used:
            return False
        mapping[pa] = pb
        used.add(pb)

    a_edge_counts = Counter((e.source, e.label, e.target) for e in a.edges)
    b_edge_counts = Counter((e.source, e.label, e.target) for e in b.edges)

    def consistent(u: str, v: str) -> bool:
        for e in a.out_edges(u):
            w = e.target
            if w in mapping:
                if a_edge_counts[(u, e.label, w)] != b_edge_counts[(v, e.label, mapping[w])]:
                    return False
        for e in a.in_edges(u):
            w = e.source
            if w in mapping:
                if a_edge_counts[(w, e.label, u)] != b_edge_counts[(mapping[w], e.label, v)]:
                    return False
        return True

    candidates = {
        n.id: [m.id for m in b.nodes if sig_b[m.id] == sig_a[n.id]]
        for n in a.nodes
        if n.id not in mapping
    }
    order = sorted(candidates, key=lambda nid: (len(candidates[nid]), nid))

    def backtrack(k: int) -> bool:
        if k == len(order):
            return True
        u = order[k]
        for v in candidates[u]:
            if v in used:
                continue
            mapping[u] = v
            if consistent(u, v):
                used.add(v)
                if backtrack(k + 1):
                    return True
                used.discard(v)
            del mapping[u]
        return False

    # re-check pinned pairs against each other now that mapping is seeded
    for pa in forced:
        if not consistent(pa, mapping[pa]):
            return False
    return backtrack(0)


def fragments_match(a: AmrFragment, b: AmrFragment, check_span: bool = False) -> bool:
    """Fragment equality: isomorphic graphs with corresponding heads."""
    if check_span and a.span != b.span:
        return False
    return isomorphic(a.graph, b.graph, pins=[(a.head, b.head)])
