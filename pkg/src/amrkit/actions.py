"""The nine derivation actions, their reliabilities, and execution.

Each action turns a token span into a small AMR fragment (or nothing,
for NONE). Actions that can fail (VALUE on a non-number, DATE on an
unrecognized span, DICT on a table miss) raise ActionError, which
callers distinguish from the NONE action's absent result.
"""

from __future__ import annotations

from collections import defaultdict
from enum import Enum
from typing import Iterable, Mapping, Sequence

from amrkit.corpus import AnnotatedSentence, LexicalResources, TrainingPair, induced_fragment
from amrkit.dict_table import DictTable
from amrkit.graph import AmrFragment, NodeKind, fragments_match, make_graph
from amrkit.jaro import jaro_winkler


class ActionLabel(Enum):
    IDENTITY = "IDENTITY"
    NONE = "NONE"
    VERB = "VERB"
    VALUE = "VALUE"
    LEMMA = "LEMMA"
    NAME = "NAME"
    PERSON = "PERSON"
    DATE = "DATE"
    DICT = "DICT"


# Fixed order used to break reliability ties: non-generating and
# exact-copy actions first, the memorized table last.
TIE_BREAK: tuple[ActionLabel, ...] = (
    ActionLabel.NONE,
    ActionLabel.IDENTITY,
    ActionLabel.PERSON,
    ActionLabel.NAME,
    ActionLabel.DATE,
    ActionLabel.VERB,
    ActionLabel.LEMMA,
    ActionLabel.VALUE,
    ActionLabel.DICT,
)
_TIE_RANK = {a: k for k, a in enumerate(TIE_BREAK)}

# Actions whose execution is uniquely determined by the span, so a
# correct label guarantees a correct fragment.
DETERMINISTIC_ACTIONS = frozenset(
    {ActionLabel.IDENTITY, ActionLabel.NONE, ActionLabel.NAME, ActionLabel.PERSON}
)


class ActionError(Exception):
    """An action could not derive a fragment from the span."""

    def __init__(self, action: "ActionLabel", reason: str):
        super().__init__(f"{action.value}: {reason}")
        self.action = action


class ReliabilityTable:
    """Per-action probability of deriving the correct fragment given the
    correct action label. The deterministic actions sit at 1.0 and the
    memorized-table action is strictly lowest.
    """

    def __init__(self, values: Mapping[ActionLabel, float]):
        missing = [a.value for a in ActionLabel if a not in values]
        if missing:
            raise ValueError(f"reliability missing for: {', '.join(missing)}")
        self._values = {a: float(values[a]) for a in ActionLabel}
        for a, v in self._values.items():
            if not (0.0 <= v <= 1.0):
                raise ValueError(f"reliability of {a.value} out of [0, 1]: {v}")
        for a in DETERMINISTIC_ACTIONS:
            if self._values[a] != 1.0:
                raise ValueError(f"{a.value} must have reliability 1.0")
        dict_rel = self._values[ActionLabel.DICT]
        others = min(v for a, v in self._values.items() if a is not ActionLabel.DICT)
        if dict_rel >= others:
            raise ValueError("DICT must have strictly the lowest reliability")

    def __getitem__(self, action: ActionLabel) -> float:
        return self._values[action]

    def as_dict(self) -> dict[ActionLabel, float]:
        return dict(self._values)

    def replace(self, overrides: Mapping[ActionLabel, float]) -> "ReliabilityTable":
        values = self.as_dict()
        values.update(overrides)
        return ReliabilityTable(values)


DEFAULT_RELIABILITY = ReliabilityTable(
    {
        ActionLabel.IDENTITY: 1.0,
        ActionLabel.NONE: 1.0,
        ActionLabel.NAME: 1.0,
        ActionLabel.PERSON: 1.0,
        ActionLabel.VERB: 0.94,
        ActionLabel.DATE: 0.92,
        ActionLabel.LEMMA: 0.90,
        ActionLabel.VALUE: 0.90,
        ActionLabel.DICT: 0.67,
    }
)


def most_reliable(candidates: Iterable[ActionLabel], table: ReliabilityTable) -> ActionLabel:
    """The candidate with the highest reliability, fixed-order tie-break."""
    candidates = list(candidates)
    if not candidates:
        raise ValueError("most_reliable: empty candidate set")
    return max(candidates, key=lambda a: (table[a], -_TIE_RANK[a]))


# --- execution --------------------------------------------------------------


def _check_span(span: tuple[int, int], sentence: AnnotatedSentence):
    start, end = span
    if not (0 <= start < end <= len(sentence)):
        raise ValueError(f"span {span} out of bounds for sentence {sentence.id!r}")


def _single(span: tuple[int, int], title: str, kind: NodeKind = NodeKind.CONCEPT) -> AmrFragment:
    nid = f"t{span[0]}n0"
    return AmrFragment(make_graph([(nid, title, kind)], [], nid), nid, span)


def verb_title(query: str, resources: LexicalResources) -> str | None:
    """Most frequent sense of the PropBank lemma most similar to `query`."""
    best_score = -1.0
    best_lemma = None
    for lemma in resources.propbank_lemmas:
        s = jaro_winkler(query, lemma)
        if s > best_score:
            best_score = s
            best_lemma = lemma
    if best_lemma is None:
        return None
    frames = resources.propbank[best_lemma]
    return min(frames, key=lambda fr: (-fr[1], fr[0]))[0]


def execute(
    action: ActionLabel,
    span: tuple[int, int],
    sentence: AnnotatedSentence,
    resources: LexicalResources,
    dict_table: DictTable | None = None,
) -> AmrFragment | None:
    """Run one action on a token span.

    Returns None for NONE; raises ActionError when VALUE, DATE, or DICT
    cannot derive anything from the span.
    """
    from amrkit.normalize import parse_date_fields, parse_integer

    _check_span(span, sentence)
    start, end = span
    tokens = sentence.tokens[start:end]

    if action is ActionLabel.NONE:
        return None

    if action is ActionLabel.IDENTITY:
        return _single(span, "-".join(t.lower for t in tokens))

    if action is ActionLabel.LEMMA:
        return _single(span, "-".join(t.lemma for t in tokens))

    if action is ActionLabel.VERB:
        title = verb_title("-".join(t.lemma for t in tokens), resources)
        if title is None:
            raise ActionError(action, "no PropBank frames available")
        return _single(span, title)

    if action is ActionLabel.VALUE:
        value = parse_integer(" ".join(t.text for t in tokens))
        if value is None:
            raise ActionError(action, f"no integer value in span {[t.text for t in tokens]!r}")
        return _single(span, str(value), NodeKind.NUMBER)

    if action is ActionLabel.NAME or action is ActionLabel.PERSON:
        name_id = f"t{start}n0"
        nodes = [(name_id, "name", NodeKind.CONCEPT)]
        edges = []
        for k, t in enumerate(tokens):
            cid = f"t{start}n{k + 1}"
            nodes.append((cid, t.text, NodeKind.STRING))
            edges.append((name_id, f"op{k + 1}", cid))
        if action is ActionLabel.NAME:
            return AmrFragment(make_graph(nodes, edges, name_id), name_id, span)
        person_id = f"t{start}p"
        nodes.append((person_id, "person", NodeKind.CONCEPT))
        edges.append((person_id, "name", name_id))
        return AmrFragment(make_graph(nodes, edges, person_id), person_id, span)

    if action is ActionLabel.DATE:
        fields = parse_date_fields([t.text for t in tokens])
        if fields is None:
            raise ActionError(action, f"unrecognized date span {[t.text for t in tokens]!r}")
        date_id = f"t{start}n0"
        nodes = [(date_id, "date-entity", NodeKind.CONCEPT)]
        edges = []
        for k, field in enumerate(("year", "month", "day")):
            if field in fields:
                cid = f"t{start}n{k + 1}"
                nodes.append((cid, str(fields[field]), NodeKind.NUMBER))
                edges.append((date_id, field, cid))
        return AmrFragment(make_graph(nodes, edges, date_id), date_id, span)

    if action is ActionLabel.DICT:
        if dict_table is None:
            raise ActionError(action, "no dictionary table provided")
        frag = dict_table.instantiate(" ".join(t.lower for t in tokens), span)
        if frag is None:
            raise ActionError(action, f"no entry for span {' '.join(t.lower for t in tokens)!r}")
        return frag

    raise ValueError(f"unknown action {action!r}")


_GENERATING = (
    ActionLabel.IDENTITY,
    ActionLabel.VERB,
    ActionLabel.VALUE,
    ActionLabel.LEMMA,
    ActionLabel.NAME,
    ActionLabel.PERSON,
    ActionLabel.DATE,
)


def applicable_actions(
    fragment: AmrFragment | None,
    span: tuple[int, int],
    sentence: AnnotatedSentence,
    resources: LexicalResources,
) -> set[ActionLabel]:
    """Actions whose execution on the span reproduces the gold fragment.

    DICT can memorize any fragment, so it is applicable whenever there
    is one; NONE is applicable exactly when there is none.
    """
    if fragment is None:
        return {ActionLabel.NONE}
    out = {ActionLabel.DICT}
    for action in _GENERATING:
        try:
            cand = execute(action, span, sentence, resources, None)
        except ActionError:
            continue
        if cand is not None and fragments_match(cand, fragment):
            out.add(action)
    return out


# --- label spans and reliability estimation ---------------------------------


def collapse_labels(labels: Sequence[ActionLabel]) -> list[tuple[int, int, ActionLabel]]:
    """Merge runs of adjacent identical labels into (start, end, label) spans."""
    spans = []
    i = 0
    while i < len(labels):
        j = i + 1
        while j < len(labels) and labels[j] is labels[i]:
            j += 1
        spans.append((i, j, labels[i]))
        i = j
    return spans


def estimate_reliability(
    labeled_pairs: Sequence[tuple[TrainingPair, Sequence[ActionLabel]]],
    dict_table: DictTable,
    resources: LexicalResources,
    defaults: ReliabilityTable = DEFAULT_RELIABILITY,
) -> ReliabilityTable:
    """Measure per-action accuracy of fragment derivation on labeled data.

    Deterministic actions are pinned at 1.0; actions absent from the
    data keep their default value. The table invariant that DICT is
    strictly lowest is enforced by capping DICT just under the rest.
    """
    tallies: dict[ActionLabel, list[int]] = defaultdict(lambda: [0, 0])
    for pair, labels in labeled_pairs:
        if len(labels) != len(pair.sentence):
            raise ValueError(f"pair {pair.id!r}: {len(labels)} labels for {len(pair.sentence)} tokens")
        for start, end, action in collapse_labels(list(labels)):
            if action is ActionLabel.NONE or action in DETERMINISTIC_ACTIONS:
                continue
            gold = induced_fragment(pair, (start, end))
            correct = False
            if gold is not None:
                try:
                    derived = execute(action, (start, end), pair.sentence, resources, dict_table)
                except ActionError:
                    derived = None
                if derived is not None:
                    correct = fragments_match(derived, gold)
            tallies[action][0] += 1 if correct else 0
            tallies[action][1] += 1

    values = defaults.as_dict()
    for action, (hits, total) in tallies.items():
        if total:
            values[action] = hits / total
    for action in DETERMINISTIC_ACTIONS:
        values[action] = 1.0
    floor = min(v for a, v in values.items() if a is not ActionLabel.DICT)
    if values[ActionLabel.DICT] >= floor:
        values[ActionLabel.DICT] = max(floor - 1e-6, 0.0)
    return ReliabilityTable(values)
