"""Smatch scoring, action accuracy, and corpus reports.

Smatch is the F1 of the best triple overlap between two graphs under an
injective mapping of variables. The hill-climbing search restarts from
random mappings plus one title-seeded mapping; `smatch_exact` is the
exhaustive oracle for small graphs.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from amrkit.actions import ActionLabel
from amrkit.graph import AmrGraph, NodeKind


@dataclass(frozen=True)
class SmatchResult:
    precision: float
    recall: float
    f1: float
    matched: int
    gold_total: int
    pred_total: int


def _result(matched: int, pred_total: int, gold_total: int) -> SmatchResult:
    p = matched / pred_total if pred_total else 0.0
    r = matched / gold_total if gold_total else 0.0
    f1 = 2 * p * r / (p + r) if p + r > 0 else 0.0
    return SmatchResult(p, r, f1, matched, gold_total, pred_total)


class _Bundle:
    """Triples of one graph split by how their endpoints are rendered."""

    def __init__(self, g: AmrGraph):
        self.vars = list(g.node_ids)
        self.titles = {n.id: n.title for n in g.nodes}
        self.instances = [(n.id, n.title) for n in g.nodes]
        self.var_edges = Counter()
        self.lit_edges = Counter()
        for e in g.edges:
            tgt = g.node(e.target)
            if tgt.kind is NodeKind.CONCEPT:
                self.var_edges[(e.source, e.label, e.target)] += 1
            else:
                self.lit_edges[(e.source, e.label, tgt.title)] += 1
        self.root = g.root
        self.total = len(self.instances) + sum(self.var_edges.values()) + sum(self.lit_edges.values()) + 1

    def match_count(self, other: "_Bundle", mapping: dict[str, str | None]) -> int:
        matched = 0
        other_titles = other.titles
        for v, title in self.instances:
            m = mapping.get(v)
            if m is not None and other_titles.get(m) == title:
                matched += 1
        mapped_var = Counter()
        for (s, label, t), c in self.var_edges.items():
            ms, mt = mapping.get(s), mapping.get(t)
            if ms is not None and mt is not None:
                mapped_var[(ms, label, mt)] += c
        matched += sum((mapped_var & other.var_edges).values())
        mapped_lit = Counter()
        for (s, label, lit), c in self.lit_edges.items():
            ms = mapping.get(s)
            if ms is not None:
                mapped_lit[(ms, label, lit)] += c
        matched += sum((mapped_lit & other.lit_edges).values())
        if mapping.get(self.root) == other.root:
            matched += 1
        return matched


def _climb(pred: _Bundle, gold: _Bundle, start: dict[str, str | None]) -> tuple[int, dict]:
    current = dict(start)
    score = pred.match_count(gold, current)
    while True:
        best_gain = 0
        best_move = None
        used = {v for v in current.values() if v is not None}
        for v in pred.vars:
            old = current[v]
            for target in [None] + gold.vars:
                if target == old or (target is not None and target in used and target != old):
                    continue
                current[v] = target
                s = pred.match_count(gold, current)
                if s - score > best_gain:
                    best_gain = s - score
                    best_move = ("set", v, target)
                current[v] = old
        for i in range(len(pred.vars)):
            for j in range(i + 1, len(pred.vars)):
                a, b = pred.vars[i], pred.vars[j]
                current[a], current[b] = current[b], current[a]
                s = pred.match_count(gold, current)
                if s - score > best_gain:
                    best_gain = s - score
                    best_move = ("swap", a, b)
                current[a], current[b] = current[b], current[a]
        if best_move is None:
            return score, current
        kind, a, b = best_move
        if kind == "set":
            current[a] = b
        else:
            current[a], current[b] = current[b], current[a]
        score += best_gain


def _seed_mapping(pred: _Bundle, gold: _Bundle) -> dict[str, str | None]:
    mapping: dict[str, str | None] = {}
    used: set[str] = set()
    for v in pred.vars:
        title = pred.titles[v]
        pick = next((g for g in gold.vars if g not in used and gold.titles[g] == title), None)
        mapping[v] = pick
        if pick is not None:
            used.add(pick)
    return mapping


def smatch(pred: AmrGraph, gold: AmrGraph, restarts: int = 32, seed: int = 13) -> SmatchResult:
    """Hill-climbing smatch from `restarts` random starts plus a title-seeded one."""
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    bp, bg = _Bundle(pred), _Bundle(gold)
    rng = random.Random(seed)
    best, _ = _climb(bp, bg, _seed_mapping(bp, bg))
    for _ in range(restarts):
        targets = list(bg.vars)
        rng.shuffle(targets)
        start: dict[str, str | None] = {}
        for k, v in enumerate(bp.vars):
            start[v] = targets[k] if k < len(targets) else None
        score, _ = _climb(bp, bg, start)
        if score > best:
            best = score
    return _result(best, bp.total, bg.total)


def smatch_exact(pred: AmrGraph, gold: AmrGraph) -> SmatchResult:
    """Exhaustive search over injective variable mappings (small graphs only)."""
    bp, bg = _Bundle(pred), _Bundle(gold)
    if len(bp.vars) + len(bg.vars) > 8:
        raise ValueError("smatch_exact is limited to 8 combined variables")
    from itertools import permutations

    best = 0
    if len(bp.vars) <= len(bg.vars):
        for perm in permutations(bg.vars, len(bp.vars)):
            mapping = dict(zip(bp.vars, perm))
            best = max(best, bp.match_count(bg, mapping))
    else:
        for perm in permutations(bp.vars, len(bg.vars)):
            mapping: dict[str, str | None] = {v: None for v in bp.vars}
            mapping.update(zip(perm, bg.vars))
            best = max(best, bp.match_count(bg, mapping))
    return _result(best, bp.total, bg.total)


def corpus_smatch(
    graph_pairs: Sequence[tuple[AmrGraph, AmrGraph]], restarts: int = 32, seed: int = 13
) -> SmatchResult:
    """Micro-averaged smatch: counts are summed over sentences."""
    matched = pred_total = gold_total = 0
    for pred, gold in graph_pairs:
        r = smatch(pred, gold, restarts=restarts, seed=seed)
        matched += r.matched
        pred_total += r.pred_total
        gold_total += r.gold_total
    return _result(matched, pred_total, gold_total)


# --- action accuracy ------------------------------------------------------------


@dataclass(frozen=True)
class ActionEvalResult:
    accuracy: float
    confusion: dict  # (gold, predicted) -> count


def action_accuracy(
    pred: Sequence[ActionLabel], gold: Sequence[ActionLabel]
) -> ActionEvalResult:
    if len(pred) != len(gold):
        raise ValueError(f"length mismatch: {len(pred)} predicted vs {len(gold)} gold labels")
    if not gold:
        raise ValueError("empty label sequences")
    confusion: Counter = Counter()
    hits = 0
    for p, g in zip(pred, gold):
        confusion[(g, p)] += 1
        if p is g:
            hits += 1
    return ActionEvalResult(hits / len(gold), dict(confusion))


def format_confusion(confusion: dict) -> str:
    labels = [a for a in ActionLabel]
    width = max(len(a.value) for a in labels) + 1
    header = " " * width + "".join(a.value.rjust(width) for a in labels)
    lines = [header]
    for g in labels:
        row = g.value.ljust(width)
        for p in labels:
            row += str(confusion.get((g, p), 0)).rjust(width)
        lines.append(row)
    return "\n".join(lines)


def format_distribution(labels: Sequence[ActionLabel]) -> str:
    """Action histogram in the corpus-report style: counts and percent."""
    counts = Counter(labels)
    total = len(labels)
    lines = [f"{'action':<10}{'tokens':>8}{'%':>8}"]
    for action, count in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0].value)):
        lines.append(f"{action.value:<10}{count:>8}{100.0 * count / total:>8.1f}")
    lines.append(f"{'total':<10}{total:>8}{100.0:>8.1f}")
    return "\n".join(lines)


def format_smatch(result: SmatchResult) -> str:
    return (
        f"precision {result.precision:.4f}  recall {result.recall:.4f}  f1 {result.f1:.4f}  "
        f"(matched {result.matched}, pred {result.pred_total}, gold {result.gold_total})"
    )
