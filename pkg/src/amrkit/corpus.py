"""Corpus files: annotated sentences, gold graphs, alignments, resources.

File formats (documented in docs/formats.md):
  - annotations: one JSON record per line with id, tokens, deps, coref;
  - AMR corpus: blank-line-separated Penman blocks preceded by
    `# ::id` / `# ::snt` comment lines;
  - alignments: `<sentence-id> TAB <node-id> TAB <token-index>` rows;
  - PropBank frames: `lemma frame freq` rows;
  - embeddings: `word v1 ... vd` rows.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from amrkit.graph import AmrFragment, AmrGraph, GraphError, PenmanError, parse_penman, print_penman


class CorpusError(ValueError):
    """A corpus file is malformed or internally inconsistent."""


@dataclass(frozen=True)
class Token:
    text: str
    pos: str
    lemma: str
    ner: str
    index: int

    def __post_init__(self):
        if not self.text:
            raise CorpusError(f"empty token text at index {self.index}")

    @property
    def lower(self) -> str:
        return self.text.lower()


class AnnotatedSentence:
    """Tokens plus the dependency tree and coreference chains.

    The dependency arcs must form a tree: every token has exactly one
    incoming arc, with head -1 marking the root attachment.
    """

    def __init__(
        self,
        id: str,
        tokens: Sequence[Token],
        dep_arcs: Sequence[tuple[int, int, str]],
        coref_chains: Sequence[Sequence[int]] = (),
    ):
        self.id = id
        self.tokens = tuple(tokens)
        self.dep_arcs = tuple((int(h), int(d), str(r)) for h, d, r in dep_arcs)
        self.coref_chains = tuple(tuple(int(i) for i in chain) for chain in coref_chains)
        n = len(self.tokens)
        self._head: dict[int, tuple[int, str]] = {}
        self._children: dict[int, list[tuple[int, str]]] = {i: [] for i in range(n)}
        for h, d, rel in self.dep_arcs:
            if not (0 <= d < n) or not (-1 <= h < n):
                raise CorpusError(f"{id}: dependency arc ({h}, {d}, {rel}) out of range")
            if d in self._head:
                raise CorpusError(f"{id}: token {d} has more than one dependency head")
            self._head[d] = (h, rel)
            if h >= 0:
                self._children[h].append((d, rel))
        for i in range(n):
            if i not in self._head:
                raise CorpusError(f"{id}: token {i} has no dependency head")
        self._coref_tokens = {i for chain in self.coref_chains for i in chain}
        for i in self._coref_tokens:
            if not (0 <= i < n):
                raise CorpusError(f"{id}: coref chain references token {i} out of range")
        self._depth: dict[int, int] = {}
        for i in range(n):
            path = []
            j = i
            while j not in self._depth:
                path.append(j)
                h = self._head[j][0]
                if h == -1:
                    self._depth[j] = 0
                    break
                if h in path:
                    raise CorpusError(f"{id}: dependency arcs contain a cycle through token {h}")
                j = h
            for k in reversed(path):
                if k not in self._depth:
                    self._depth[k] = self._depth[self._head[k][0]] + 1

    def __len__(self) -> int:
        return len(self.tokens)

    def head_of(self, i: int) -> tuple[int, str]:
        """(head index or -1, relation) of the arc pointing at token i."""
        return self._head[i]

    def children_of(self, i: int) -> tuple[tuple[int, str], ...]:
        return tuple(self._children[i])

    def depth(self, i: int) -> int:
        return self._depth[i]

    def in_coref(self, i: int) -> bool:
        return i in self._coref_tokens


@dataclass
class TrainingPair:
    sentence: AnnotatedSentence
    graph: AmrGraph
    alignment: dict[str, int] | None = None
    snt: str = ""

    @property
    def id(self) -> str:
        return self.sentence.id


@dataclass
class LexicalResources:
    """PropBank frame subset and optional word embeddings."""

    propbank: Mapping[str, tuple[tuple[str, int], ...]] = field(default_factory=dict)
    embeddings: Mapping[str, tuple[float, ...]] | None = None

    def __post_init__(self):
        self.propbank_lemmas: tuple[str, ...] = tuple(sorted(self.propbank))


# --- annotations (JSON lines) ----------------------------------------------


def _sentence_from_record(rec: dict, where: str) -> AnnotatedSentence:
    required = {"id", "tokens", "deps", "coref"}
    if set(rec) != required:
        extra = sorted(set(rec) ^ required)
        raise CorpusError(f"{where}: record keys must be exactly id/tokens/deps/coref (mismatch: {extra})")
    tokens = []
    for i, t in enumerate(rec["tokens"]):
        if set(t) != {"text", "pos", "lemma", "ner"}:
            raise CorpusError(f"{where}: token {i} must have exactly text/pos/lemma/ner")
        tokens.append(Token(t["text"], t["pos"], t["lemma"], t["ner"], i))
    return AnnotatedSentence(rec["id"], tokens, rec["deps"], rec["coref"])


def load_annotations(path) -> list[AnnotatedSentence]:
    sentences = []
    seen = set()
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.strip()
            if not line:
                continue
            where = f"{path}:{lineno}"
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as e:
                raise CorpusError(f"{where}: bad JSON record: {e}") from None
            sent = _sentence_from_record(rec, where)
            if sent.id in seen:
                raise CorpusError(f"{where}: duplicate sentence id {sent.id!r}")
            seen.add(sent.id)
            sentences.append(sent)
    return sentences


def annotation_line(sent: AnnotatedSentence) -> str:
    """Canonical one-line encoding; loading then re-serializing is byte-identical."""
    rec = {
        "id": sent.id,
        "tokens": [
            {"text": t.text, "pos": t.pos, "lemma": t.lemma, "ner": t.ner} for t in sent.tokens
        ],
        "deps": [list(arc) for arc in sent.dep_arcs],
        "coref": [list(chain) for chain in sent.coref_chains],
    }
    return json.dumps(rec, separators=(",", ":"), ensure_ascii=False)


def save_annotations(sentences: Iterable[AnnotatedSentence], path) -> None:
    Path(path).write_text(
        "".join(annotation_line(s) + "\n" for s in sentences), encoding="utf-8"
    )


# --- AMR corpus blocks ------------------------------------------------------


def load_amr_corpus(path) -> list[tuple[str, str, AmrGraph]]:
    """Read (id, sentence, graph) entries from a Penman corpus file."""
    entries = []
    block_id = None
    block_snt = ""
    graph_lines: list[str] = []
    start_line = 0

    def flush(lineno):
        nonlocal block_id, block_snt, graph_lines
        if block_id is None and not graph_lines:
            return
        if block_id is None:
            raise CorpusError(f"{path}:{start_line}: graph block without a '# ::id' line")
        if not graph_lines:
            raise CorpusError(f"{path}:{lineno}: block {block_id!r} has no graph")
        text = " ".join(graph_lines)
        try:
            g = parse_penman(text)
        except (PenmanError, GraphError) as e:
            raise CorpusError(f"{path}: block {block_id!r}: {e}") from None
        entries.append((block_id, block_snt, g))
        block_id, block_snt, graph_lines = None, "", []

    last_line = 0
    with open(path, encoding="utf-8") as f:
        for lineno, raw in enumerate(f, 1):
            last_line = lineno
            line = raw.rstrip("\n")
            if not line.strip():
                flush(lineno)
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if body.startswith("::id"):
                    if block_id is not None or graph_lines:
                        flush(lineno)
                    block_id = body[4:].strip().split()[0] if body[4:].strip() else ""
                    if not block_id:
                        raise CorpusError(f"{path}:{lineno}: empty '# ::id' line")
                    start_line = lineno
                elif body.startswith("::snt"):
                    block_snt = body[5:].strip()
                continue
            if block_id is None:
                raise CorpusError(f"{path}:{lineno}: graph text before any '# ::id' line")
            if not graph_lines:
                start_line = lineno
            graph_lines.append(line.strip())
    flush(last_line)

    ids = [e[0] for e in entries]
    dupes = {i for i in ids if ids.count(i) > 1}
    if dupes:
        raise CorpusError(f"{path}: duplicate block ids: {', '.join(sorted(dupes))}")
    return entries


def save_amr_corpus(entries: Iterable[tuple[str, str, AmrGraph]], path) -> None:
    blocks = []
    for block_id, snt, g in entries:
        lines = [f"# ::id {block_id}"]
        if snt:
            lines.append(f"# ::snt {snt}")
        lines.append(print_penman(g))
        blocks.append("\n".join(lines))
    Path(path).write_text("\n\n".join(blocks) + "\n", encoding="utf-8")


def load_corpus(amr_path, annotations_path) -> list[TrainingPair]:
    """Pair AMR blocks with annotation records by id; mismatches are errors."""
    amr_entries = load_amr_corpus(amr_path)
    sentences = load_annotations(annotations_path)
    by_id = {s.id: s for s in sentences}
    amr_ids = {e[0] for e in amr_entries}
    orphans = sorted(amr_ids ^ set(by_id))
    if orphans:
        raise CorpusError(
            f"corpus id mismatch between {amr_path} and {annotations_path}: {', '.join(orphans)}"
        )
    return [TrainingPair(by_id[i], g, None, snt) for i, snt, g in amr_entries]


# --- alignments -------------------------------------------------------------


def load_alignments(path, pairs: Sequence[TrainingPair]) -> dict[str, dict[str, int]]:
    """Read a `<id> TAB <node-id> TAB <token-index>` file validated against a corpus.

    Every graph mentioned must end up with a total node-to-token map.
    """
    by_id = {p.id: p for p in pairs}
    out: dict[str, dict[str, int]] = {}
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise CorpusError(f"{path}:{lineno}: expected 3 tab-separated fields")
            sid, node_id, idx_text = parts
            if sid not in by_id:
                raise CorpusError(f"{path}:{lineno}: unknown sentence id {sid!r}")
            pair = by_id[sid]
            if not pair.graph.has_node(node_id):
                raise CorpusError(f"{path}:{lineno}: unknown node {node_id!r} in sentence {sid!r}")
            try:
                idx = int(idx_text)
            except ValueError:
                raise CorpusError(f"{path}:{lineno}: bad token index {idx_text!r}") from None
            if not (0 <= idx < len(pair.sentence)):
                raise CorpusError(f"{path}:{lineno}: token index {idx} out of range for {sid!r}")
            per = out.setdefault(sid, {})
            if node_id in per:
                raise CorpusError(f"{path}:{lineno}: duplicate alignment for node {node_id!r} in {sid!r}")
            per[node_id] = idx
    for sid, mapping in out.items():
        missing = sorted(set(by_id[sid].graph.node_ids) - set(mapping))
        if missing:
            raise CorpusError(f"{path}: sentence {sid!r}: unaligned nodes: {', '.join(missing)}")
    return out


def alignment_lines(alignments: Mapping[str, Mapping[str, int]], pairs: Sequence[TrainingPair]) -> list[str]:
    lines = []
    for pair in pairs:
        mapping = alignments.get(pair.id)
        if mapping is None:
            continue
        for node_id in pair.graph.node_ids:
            lines.append(f"{pair.id}\t{node_id}\t{mapping[node_id]}")
    return lines


def save_alignments(alignments: Mapping[str, Mapping[str, int]], pairs: Sequence[TrainingPair], path) -> None:
    Path(path).write_text("".join(line + "\n" for line in alignment_lines(alignments, pairs)), encoding="utf-8")


# --- lexical resources ------------------------------------------------------


def load_propbank(path) -> dict[str, tuple[tuple[str, int], ...]]:
    """Read `lemma frame freq` rows into a lemma -> ((frame, freq), ...) map."""
    table: dict[str, list[tuple[str, int]]] = {}
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 3:
                raise CorpusError(f"{path}:{lineno}: expected 'lemma frame freq'")
            lemma, frame, freq_text = parts
            if not frame.startswith(lemma + "-") or not frame[len(lemma) + 1 :].isdigit():
                raise CorpusError(f"{path}:{lineno}: frame {frame!r} does not match '{lemma}-NN'")
            try:
                freq = int(freq_text)
            except ValueError:
                raise CorpusError(f"{path}:{lineno}: bad frequency {freq_text!r}") from None
            table.setdefault(lemma, []).append((frame, freq))
    return {lemma: tuple(frames) for lemma, frames in table.items()}


def load_embeddings(path) -> dict[str, tuple[float, ...]]:
    """Read `word v1 ... vd` rows; every vector must share one dimension."""
    vectors: dict[str, tuple[float, ...]] = {}
    dim = None
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) < 2:
                raise CorpusError(f"{path}:{lineno}: expected 'word v1 ... vd'")
            word = parts[0]
            try:
                vec = tuple(float(x) for x in parts[1:])
            except ValueError:
                raise CorpusError(f"{path}:{lineno}: bad vector component") from None
            if dim is None:
                dim = len(vec)
            elif len(vec) != dim:
                raise CorpusError(f"{path}:{lineno}: vector dimension {len(vec)} != {dim}")
            vectors[word] = vec
    return vectors


def load_resources(propbank_path=None, embeddings_path=None) -> LexicalResources:
    propbank = load_propbank(propbank_path) if propbank_path else {}
    embeddings = load_embeddings(embeddings_path) if embeddings_path else None
    return LexicalResources(propbank, embeddings)


# --- gold fragments from alignments ----------------------------------------


def induced_fragment(pair: TrainingPair, span: tuple[int, int]) -> AmrFragment | None:
    """Subgraph of the gold graph aligned inside a token span.

    Returns None when no node aligns there, or when a multi-token span's
    node set is not connected (such a span is not one fragment). On a
    single token a disconnected set keeps its largest component, ties
    broken by node order, so every token can still be labeled.
    """
    if pair.alignment is None:
        raise ValueError(f"pair {pair.id!r} has no alignment")
    start, end = span
    picked = [nid for nid in pair.graph.node_ids if start <= pair.alignment[nid] < end]
    if not picked:
        return None
    picked_set = set(picked)

    # undirected components within the picked set
    components: list[list[str]] = []
    seen: set[str] = set()
    for nid in picked:
        if nid in seen:
            continue
        comp = [nid]
        seen.add(nid)
        stack = [nid]
        while stack:
            cur = stack.pop()
            for e in pair.graph.out_edges(cur):
                if e.target in picked_set and e.target not in seen:
                    seen.add(e.target)
                    comp.append(e.target)
                    stack.append(e.target)
            for e in pair.graph.in_edges(cur):
                if e.source in picked_set and e.source not in seen:
                    seen.add(e.source)
                    comp.append(e.source)
                    stack.append(e.source)
        components.append(comp)
    if len(components) > 1 and end - start > 1:
        return None
    order = {nid: k for k, nid in enumerate(pair.graph.node_ids)}
    components.sort(key=lambda c: (-len(c), min(order[n] for n in c)))
    keep = set(components[0])

    nodes = [pair.graph.node(nid) for nid in pair.graph.node_ids if nid in keep]
    edges = [e for e in pair.graph.edges if e.source in keep and e.target in keep]
    head = _local_head(pair.graph, keep, edges, order)
    subgraph = AmrGraph(nodes, edges, head)
    return AmrFragment(subgraph, head, span)


def _local_head(graph: AmrGraph, keep: set[str], edges, order: dict[str, int]) -> str:
    """Attachment point of a fragment within its sentence graph.

    The head is where the rest of the graph connects: the whole-graph
    root when it lies inside, else a node referenced by an external
    edge (that is how the sailor-style fragments stay rooted at the
    entity, with the internal verb attached by an inverse relation),
    else a node without internal parents.
    """
    if graph.root in keep:
        return graph.root

    def dominated(nid: str) -> int:
        seen = {nid}
        stack = [nid]
        while stack:
            cur = stack.pop()
            for e in edges:
                if e.source == cur and e.target not in seen:
                    seen.add(e.target)
                    stack.append(e.target)
        return len(seen)

    referenced = [
        nid for nid in keep
        if any(e.source not in keep for e in graph.in_edges(nid))
    ]
    if referenced:
        return max(referenced, key=lambda n: (dominated(n), -order[n]))
    incoming = {e.target for e in edges}
    parentless = [nid for nid in keep if nid not in incoming]
    if parentless:
        return max(parentless, key=lambda n: (dominated(n), -order[n]))
    return min(keep, key=lambda n: order[n])  # cycle
