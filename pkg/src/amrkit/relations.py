"""Link concept fragments into one rooted graph (the simplified SRL stage).

Candidate labeled edges between fragment heads are scored by a
perceptron-trained linear model plus a fixed distance penalty, then
selected greedily Kruskal-style: highest score first, taking an edge
when it joins two components, or when its score is positive, subject
to at most one outgoing ARG0..ARG5 edge per (head, label).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from amrkit.actions import ReliabilityTable
from amrkit.classifier import Segment, segment_pair
from amrkit.corpus import AnnotatedSentence, CorpusError, LexicalResources, TrainingPair
from amrkit.graph import AmrEdge, AmrFragment, AmrGraph

GENERIC_LABELS = ("ARG0", "ARG1", "ARG2", "ARG3", "ARG4", "mod", "op1", "poss", "domain")
FUNCTIONAL_LABELS = frozenset({"ARG0", "ARG1", "ARG2", "ARG3", "ARG4", "ARG5"})

_FRAME = re.compile(r"-\d\d+\Z")
_SPECIAL_FAMILIES = frozenset({"name", "person", "date-entity"})

# fixed per-token distance penalty, so even an untrained scorer prefers
# near attachments
_DISTANCE_PENALTY = 0.01


@dataclass(frozen=True)
class CandidateEdge:
    source: int  # fragment index
    target: int
    source_head: str  # head node ids
    target_head: str
    label: str
    score: float


def title_family(title: str) -> str:
    if _FRAME.search(title):
        return "<pred>"
    if title in _SPECIAL_FAMILIES:
        return title
    return "<plain>"


def span_head_token(sentence: AnnotatedSentence, span: tuple[int, int]) -> int:
    """Token in the span whose dependency head lies outside it."""
    start, end = span
    for i in range(start, end):
        h, _ = sentence.head_of(i)
        if h < start or h >= end:
            return i
    return start


class EdgeScorer:
    def __init__(self, weights: Mapping[str, float] | None = None,
                 family_labels: Mapping[str, Sequence[str]] | None = None):
        self.weights = dict(weights or {})
        self.family_labels = {k: tuple(v) for k, v in (family_labels or {}).items()}

    def labels_for(self, source_title: str) -> tuple[str, ...]:
        return self.family_labels.get(title_family(source_title), GENERIC_LABELS)

    def score(self, features: Sequence[str], distance: int) -> float:
        return sum(self.weights.get(f, 0.0) for f in features) - _DISTANCE_PENALTY * (distance - 1)

    def to_text(self) -> str:
        lines = ["amrkit-edge-scorer 1", "[labels]"]
        for fam in sorted(self.family_labels):
            for label in self.family_labels[fam]:
                lines.append(f"{fam}\t{label}")
        lines.append("[weights]")
        for name in sorted(self.weights):
            if self.weights[name] != 0.0:
                lines.append(f"{name}\t{self.weights[name]!r}")
        return "".join(line + "\n" for line in lines)

    def save(self, path) -> None:
        Path(path).write_text(self.to_text(), encoding="utf-8")

    @classmethod
    def load(cls, path) -> "EdgeScorer":
        with open(path, encoding="utf-8") as f:
            lines = f.read().splitlines()
        if not lines or lines[0] != "amrkit-edge-scorer 1":
            raise CorpusError(f"{path}: not a version-1 edge scorer file")
        section = None
        weights: dict[str, float] = {}
        family_labels: dict[str, list[str]] = {}
        for lineno, line in enumerate(lines[1:], 2):
            if not line.strip():
                continue
            if line in ("[labels]", "[weights]"):
                section = line
                continue
            parts = line.split("\t")
            if section == "[labels]" and len(parts) == 2:
                family_labels.setdefault(parts[0], []).append(parts[1])
            elif section == "[weights]" and len(parts) == 2:
                try:
                    weights[parts[0]] = float(parts[1])
                except ValueError:
                    raise CorpusError(f"{path}:{lineno}: bad weight") from None
            else:
                raise CorpusError(f"{path}:{lineno}: unexpected line {line!r}")
        return cls(weights, family_labels)


def edge_features(
    src: AmrFragment,
    tgt: AmrFragment,
    label: str,
    sentence: AnnotatedSentence,
) -> tuple[list[str], int]:
    """Feature names for attaching tgt under src, plus head-token distance."""
    s_tok = span_head_token(sentence, src.span)
    t_tok = span_head_token(sentence, tgt.span)
    s_title = src.head_title
    t_title = tgt.head_title
    feats = [
        f"label={label}",
        f"pair={s_title}|{t_title}|{label}",
        f"src={s_title}|{label}",
        f"tgt={t_title}|{label}",
        f"srcfam={title_family(s_title)}|{label}",
        f"tgtfam={title_family(t_title)}|{label}",
        f"dir={'fwd' if s_tok < t_tok else 'back'}|{label}",
    ]
    sh, s_rel = sentence.head_of(s_tok)
    th, t_rel = sentence.head_of(t_tok)
    if th == s_tok:
        feats.append(f"dep=down:{t_rel}|{label}")
        feats.append(f"dep=down:{t_rel}|fam={title_family(s_title)}|{label}")
    elif sh == t_tok:
        feats.append(f"dep=up:{s_rel}|{label}")
    else:
        feats.append(f"dep=none|{label}")
    distance = abs(s_tok - t_tok)
    bucket = str(distance) if distance <= 4 else "5+"
    feats.append(f"dist={bucket}|{label}")
    return feats, distance


def score_edges(
    fragments: Sequence[AmrFragment],
    sentence: AnnotatedSentence,
    scorer: EdgeScorer,
) -> list[CandidateEdge]:
    """Every ordered fragment pair with every candidate label, scored."""
    if not fragments:
        raise ValueError("score_edges: no fragments")
    out = []
    for i, src in enumerate(fragments):
        for j, tgt in enumerate(fragments):
            if i == j:
                continue
            for label in scorer.labels_for(src.head_title):
                feats, distance = edge_features(src, tgt, label, sentence)
                out.append(
                    CandidateEdge(i, j, src.head, tgt.head, label, scorer.score(feats, distance))
                )
    return out


def _select_edges(
    fragments: Sequence[AmrFragment], edges: Sequence[CandidateEdge]
) -> list[CandidateEdge]:
    parent = list(range(len(fragments)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    chosen: list[CandidateEdge] = []
    functional_used: set[tuple[str, str]] = set()
    ordered = sorted(edges, key=lambda e: (-e.score, e.label, e.source, e.target))
    for cand in ordered:
        if cand.label in FUNCTIONAL_LABELS and (cand.source_head, cand.label) in functional_used:
            continue
        a, b = find(cand.source), find(cand.target)
        if a != b:
            parent[a] = b
        elif cand.score <= 0.0:
            continue
        chosen.append(cand)
        if cand.label in FUNCTIONAL_LABELS:
            functional_used.add((cand.source_head, cand.label))
    roots = {find(i) for i in range(len(fragments))}
    if len(roots) != 1:
        raise CorpusError("candidate edges do not connect the fragments")
    return chosen


def connect(
    fragments: Sequence[AmrFragment],
    edges: Sequence[CandidateEdge],
    sentence: AnnotatedSentence | None = None,
) -> AmrGraph:
    """Assemble fragments and selected edges into one rooted graph.

    The root is the head of the fragment whose head token sits
    shallowest in the dependency tree (leftmost on ties); without a
    sentence the first fragment wins.
    """
    if not fragments:
        raise ValueError("connect: no fragments")
    chosen = _select_edges(fragments, edges) if len(fragments) > 1 else []
    nodes = [n for frag in fragments for n in frag.graph.nodes]
    all_edges = [e for frag in fragments for e in frag.graph.edges]
    all_edges.extend(AmrEdge(c.source_head, c.label, c.target_head) for c in chosen)
    if sentence is not None:
        root_frag = min(
            fragments,
            key=lambda fr: (sentence.depth(span_head_token(sentence, fr.span)), fr.span[0]),
        )
    else:
        root_frag = fragments[0]
    return AmrGraph(nodes, all_edges, root_frag.head)


# --- training ---------------------------------------------------------------


def gold_inter_edges(
    pair: TrainingPair, segments: Sequence[Segment]
) -> tuple[list[AmrFragment], set[tuple[int, int, str]]]:
    """Fragments of a pair and the gold edges between them, head to head."""
    fragments = [seg.fragment for seg in segments if seg.fragment is not None]
    node_to_frag: dict[str, int] = {}
    for k, frag in enumerate(fragments):
        for nid in frag.graph.node_ids:
            node_to_frag[nid] = k
    gold: set[tuple[int, int, str]] = set()
    for e in pair.graph.edges:
        fs = node_to_frag.get(e.source)
        ft = node_to_frag.get(e.target)
        if fs is None or ft is None or fs == ft:
            continue
        gold.add((fs, ft, e.label))
    return fragments, gold


def train_scorer(
    pairs: Sequence[TrainingPair],
    resources: LexicalResources,
    table: ReliabilityTable,
    epochs: int = 10,
) -> EdgeScorer:
    """Perceptron updates toward the gold inter-fragment edges."""
    if not pairs:
        raise ValueError("train_scorer: empty corpus")
    items = []
    family_labels: dict[str, set[str]] = {}
    for pair in pairs:
        segments = segment_pair(pair, resources, table)
        fragments, gold = gold_inter_edges(pair, segments)
        if len(fragments) < 2:
            continue
        items.append((pair, fragments, gold))
        for fs, _, label in gold:
            family_labels.setdefault(title_family(fragments[fs].head_title), set()).add(label)
    vocab = {fam: tuple(sorted(labels)) for fam, labels in family_labels.items()}

    scorer = EdgeScorer({}, vocab)
    for _ in range(epochs):
        mistakes = 0
        for pair, fragments, gold in items:
            candidates = score_edges(fragments, pair.sentence, scorer)
            predicted = {
                (c.source, c.target, c.label) for c in _select_edges(fragments, candidates)
            }
            for fs, ft, label in sorted(gold - predicted):
                feats, _ = edge_features(fragments[fs], fragments[ft], label, pair.sentence)
                for f in feats:
                    scorer.weights[f] = scorer.weights.get(f, 0.0) + 1.0
                mistakes += 1
            for fs, ft, label in sorted(predicted - gold):
                feats, _ = edge_features(fragments[fs], fragments[ft], label, pair.sentence)
                for f in feats:
                    scorer.weights[f] = scorer.weights.get(f, 0.0) - 1.0
                mistakes += 1
        if mistakes == 0:
            break
    return scorer
