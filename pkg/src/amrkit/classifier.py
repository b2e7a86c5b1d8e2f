"""Action classification: features, training-set induction, and decoding.

Training labels come from aligned pairs: each maximal token span whose
aligned subgraph some action can derive is labeled with the most
reliable such action, every other token gets NONE, and every derived
span feeds the memorized span-to-subgraph table.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from amrkit.actions import (
    ActionError,
    ActionLabel,
    ReliabilityTable,
    applicable_actions,
    collapse_labels,
    execute,
    most_reliable,
    verb_title,
)
from amrkit.corpus import (
    AnnotatedSentence,
    CorpusError,
    LexicalResources,
    TrainingPair,
    induced_fragment,
)
from amrkit.dict_table import DictTable
from amrkit.graph import AmrFragment
from amrkit.jaro import jaro_winkler
from amrkit.maxent import MaxentModel

LABEL_ORDER = tuple(a.value for a in ActionLabel)

_SENT_BEGIN = "<S>"
_SENT_END = "</S>"
_PRONOUN_TAGS = frozenset({"PRP", "PRP$", "WP", "WP$"})


@dataclass(frozen=True)
class LabeledToken:
    sentence_id: str
    index: int
    label: ActionLabel


def _length_bucket(n: int) -> str:
    if n <= 4:
        return str(n)
    return "5-7" if n <= 7 else "8+"


def _capitalization(text: str) -> str:
    letters = [c for c in text if c.isalpha()]
    if not letters:
        return "none"
    if all(c.isupper() for c in letters):
        return "upper"
    if all(c.islower() for c in letters):
        return "lower"
    if text[0].isupper() and all(c.islower() for c in letters[1:]):
        return "init"
    return "mixed"


def featurize(
    index: int,
    sentence: AnnotatedSentence,
    resources: LexicalResources,
    dict_table: DictTable | None = None,
) -> dict[str, float]:
    """Sparse feature map for one token (see docs/formats.md for the families)."""
    tok = sentence.tokens[index]
    f: dict[str, float] = {}

    def ind(name: str):
        f[name] = 1.0

    ind(f"tok={tok.lower}")
    if resources.embeddings is not None:
        vec = resources.embeddings.get(tok.lower)
        if vec is not None:
            for k, v in enumerate(vec):
                f[f"emb{k}"] = v

    left = sentence.tokens[index - 1].lower if index > 0 else _SENT_BEGIN
    right = sentence.tokens[index + 1].lower if index + 1 < len(sentence) else _SENT_END
    ind(f"left={left}")
    ind(f"right={right}")
    ind(f"bigram_left={left}|{tok.lower}")
    ind(f"bigram_right={tok.lower}|{right}")

    ind(f"len={_length_bucket(len(tok.text))}")
    if tok.lower.startswith("non"):
        ind("non_prefix")

    lpos = sentence.tokens[index - 1].pos if index > 0 else _SENT_BEGIN
    rpos = sentence.tokens[index + 1].pos if index + 1 < len(sentence) else _SENT_END
    ind(f"pos={tok.pos}")
    ind(f"lpos={lpos}")
    ind(f"rpos={rpos}")
    ind(f"bigram_lpos={lpos}|{tok.pos}")
    ind(f"bigram_rpos={tok.pos}|{rpos}")

    head, rel = sentence.head_of(index)
    if head >= 0:
        parent = sentence.tokens[head]
        ind(f"dep_parent={parent.lower}")
        ind(f"dep_parent_pos={parent.pos}")
    else:
        ind("dep_parent=<ROOT>")
        ind("dep_parent_pos=<ROOT>")
    ind(f"in_arc={rel}")

    children = sentence.children_of(index)
    for _, crel in children:
        f[f"out_arc={crel}"] = f.get(f"out_arc={crel}", 0.0) + 1.0
    ind(f"n_out={len(children)}")

    if resources.propbank_lemmas:
        best = max(jaro_winkler(tok.lemma.lower(), lemma) for lemma in resources.propbank_lemmas)
        f["max_jw"] = best
        if best >= 0.95:
            ind("max_jw_hi")
        vt = verb_title(tok.lemma, resources)
        if vt is not None:
            ind(f"verb_out={vt}")

    if dict_table is not None:
        frag = dict_table.instantiate(tok.lower, (index, index + 1))
        if frag is not None:
            ind(f"dict_out={frag.head_title}")

    lner = sentence.tokens[index - 1].ner if index > 0 else _SENT_BEGIN
    rner = sentence.tokens[index + 1].ner if index + 1 < len(sentence) else _SENT_END
    ind(f"ner={tok.ner}")
    ind(f"lner={lner}")
    ind(f"rner={rner}")
    ind(f"bigram_lner={lner}|{tok.ner}")
    ind(f"bigram_rner={tok.ner}|{rner}")

    ind(f"cap={_capitalization(tok.text)}")

    if head >= 0 and (rel.startswith("prep") or rel == "appos"):
        parent_ner = sentence.tokens[head].ner
        if parent_ner != "O":
            ind(f"prep_appos={rel}|{parent_ner}")

    pronoun = tok.pos in _PRONOUN_TAGS
    coref = sentence.in_coref(index)
    if pronoun:
        ind("pronoun")
    if coref:
        ind("coref")
    if pronoun and coref:
        ind("pronoun_coref")
    return f


# --- training-set induction --------------------------------------------------


@dataclass(frozen=True)
class Segment:
    span: tuple[int, int]
    action: ActionLabel
    fragment: AmrFragment | None


def segment_pair(
    pair: TrainingPair,
    resources: LexicalResources,
    table: ReliabilityTable,
    max_span: int = 6,
) -> list[Segment]:
    """Split a sentence into action-derivable spans given its alignment.

    Chooses the segmentation maximizing summed per-token reliability of
    the most reliable applicable action on each span (NONE counts 1.0),
    preferring shorter spans on ties. Spans must start and end on
    aligned tokens; interior tokens may be unaligned (dates with commas).
    """
    if pair.alignment is None:
        raise ValueError(f"pair {pair.id!r} has no alignment")
    sentence = pair.sentence
    n = len(sentence)
    aligned_count = [0] * n
    for _, j in pair.alignment.items():
        aligned_count[j] += 1

    NEG = float("-inf")
    dp: list[float] = [NEG] * (n + 1)
    choice: list[Segment | None] = [None] * (n + 1)
    dp[n] = 0.0
    for i in range(n - 1, -1, -1):
        if not aligned_count[i]:
            dp[i] = dp[i + 1] + 1.0
            choice[i] = Segment((i, i + 1), ActionLabel.NONE, None)
            continue
        for e in range(i + 1, min(n, i + max_span) + 1):
            if not aligned_count[e - 1]:
                continue
            if dp[e] == NEG:
                continue
            frag = induced_fragment(pair, (i, e))
            if frag is None:
                continue
            actions = applicable_actions(frag, (i, e), sentence, resources)
            action = most_reliable(actions, table)
            # a single-token fragment may have discarded disconnected
            # nodes; every node lost from the derivation costs a unit
            dropped = sum(aligned_count[i:e]) - len(frag.graph)
            score = (e - i) * table[action] - float(dropped) + dp[e]
            if score > dp[i] + 1e-12:
                dp[i] = score
                choice[i] = Segment((i, e), action, frag)
    if dp[0] == NEG:
        raise CorpusError(f"pair {pair.id!r}: no action segmentation covers the sentence")

    segments = []
    i = 0
    while i < n:
        seg = choice[i]
        assert seg is not None
        segments.append(seg)
        i = seg.span[1]
    return segments


def extract_training(
    pairs: Sequence[TrainingPair],
    table: ReliabilityTable,
    resources: LexicalResources,
) -> tuple[list[LabeledToken], DictTable]:
    """Labels for every token of every aligned pair, plus the span table.

    The table accumulates every derived span (not only DICT-labeled
    ones) so decoding can back off to memorized subgraphs.
    """
    labeled: list[LabeledToken] = []
    dict_table = DictTable()
    for pair in pairs:
        for seg in segment_pair(pair, resources, table):
            start, end = seg.span
            for idx in range(start, end):
                labeled.append(LabeledToken(pair.id, idx, seg.action))
            if seg.fragment is not None:
                span_text = " ".join(t.lower for t in pair.sentence.tokens[start:end])
                dict_table.add(span_text, seg.fragment)
    return labeled, dict_table


def labeled_to_sequences(
    labeled: Sequence[LabeledToken], sentences: Sequence[AnnotatedSentence]
) -> dict[str, list[ActionLabel]]:
    """Group per-token labels into one full sequence per sentence."""
    by_id = {s.id: s for s in sentences}
    out: dict[str, list[ActionLabel]] = {}
    for lt in labeled:
        if lt.sentence_id not in by_id:
            raise CorpusError(f"labeled token references unknown sentence {lt.sentence_id!r}")
        seq = out.setdefault(lt.sentence_id, [None] * len(by_id[lt.sentence_id]))  # type: ignore[list-item]
        if not (0 <= lt.index < len(seq)):
            raise CorpusError(f"{lt.sentence_id}: label index {lt.index} out of range")
        if seq[lt.index] is not None:
            raise CorpusError(f"{lt.sentence_id}: duplicate label for token {lt.index}")
        seq[lt.index] = lt.label
    for sid, seq in out.items():
        missing = [i for i, lab in enumerate(seq) if lab is None]
        if missing:
            raise CorpusError(f"{sid}: tokens without labels: {missing}")
    return out


# --- decoding -----------------------------------------------------------------


def decode(
    sentence: AnnotatedSentence,
    model: MaxentModel,
    dict_table: DictTable,
    resources: LexicalResources,
) -> list[AmrFragment]:
    """Classify tokens, collapse identical neighbors, execute each span.

    A span whose action fails (a dictionary miss, an unparseable value
    or date) falls back through the remaining labels by mean span
    probability; reaching NONE drops the span.
    """
    probs = [
        model.predict_proba(featurize(i, sentence, resources, dict_table))
        for i in range(len(sentence))
    ]
    labels = [ActionLabel(model.labels[int(p.argmax())]) for p in probs]

    fragments: list[AmrFragment] = []
    for start, end, label in collapse_labels(labels):
        if label is ActionLabel.NONE:
            continue
        mean = sum(probs[i] for i in range(start, end)) / (end - start)
        pos = {name: k for k, name in enumerate(model.labels)}
        ranked = sorted(ActionLabel, key=lambda a: (-mean[pos[a.value]], pos[a.value]))
        order = [label] + [a for a in ranked if a is not label]
        for action in order:
            if action is ActionLabel.NONE:
                break
            try:
                frag = execute(action, (start, end), sentence, resources, dict_table)
            except ActionError:
                continue
            if frag is not None:
                fragments.append(frag)
                break
    return fragments


def oracle_decode(
    sentence: AnnotatedSentence,
    labels: Sequence[ActionLabel],
    dict_table: DictTable,
    resources: LexicalResources,
) -> list[AmrFragment]:
    """Execute a given label sequence (no classifier, no backoff ranking)."""
    fragments = []
    for start, end, label in collapse_labels(list(labels)):
        if label is ActionLabel.NONE:
            continue
        try:
            frag = execute(label, (start, end), sentence, resources, dict_table)
        except ActionError:
            continue
        if frag is not None:
            fragments.append(frag)
    return fragments


def dict_baseline(
    sentence: AnnotatedSentence,
    dict_table: DictTable,
    max_span: int = 4,
) -> list[AmrFragment]:
    """Greedy longest-match lookup of every span, the all-DICT strategy."""
    fragments = []
    i = 0
    n = len(sentence)
    while i < n:
        hit = None
        for e in range(min(n, i + max_span), i, -1):
            span_text = " ".join(t.lower for t in sentence.tokens[i:e])
            frag = dict_table.instantiate(span_text, (i, e))
            if frag is not None:
                hit = (frag, e)
                break
        if hit is None:
            i += 1
        else:
            fragments.append(hit[0])
            i = hit[1]
    return fragments


# --- label files ----------------------------------------------------------------


def save_labels(labeled: Sequence[LabeledToken], sentences: Sequence[AnnotatedSentence], path) -> None:
    by_id = {s.id: s for s in sentences}
    lines = []
    for lt in labeled:
        text = by_id[lt.sentence_id].tokens[lt.index].text
        lines.append(f"{lt.sentence_id}\t{lt.index}\t{text}\t{lt.label.value}")
    Path(path).write_text("".join(line + "\n" for line in lines), encoding="utf-8")


def load_labels(path) -> list[LabeledToken]:
    out = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise CorpusError(f"{path}:{lineno}: expected 'id TAB index TAB token TAB label'")
            sid, idx_text, _token, label_text = parts
            try:
                idx = int(idx_text)
            except ValueError:
                raise CorpusError(f"{path}:{lineno}: bad index {idx_text!r}") from None
            try:
                label = ActionLabel(label_text)
            except ValueError:
                raise CorpusError(f"{path}:{lineno}: unknown action label {label_text!r}") from None
            out.append(LabeledToken(sid, idx, label))
    return out
