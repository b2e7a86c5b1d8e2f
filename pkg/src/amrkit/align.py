"""Induce a total node-to-token alignment for a (sentence, graph) pair.

The objective prefers alignments whose nodes can be derived by reliable
actions from their tokens, with a memorized-lookup similarity fallback
and a small bonus for keeping graph neighbors on nearby tokens. Search
is greedy assignment followed by single-node hill climbing; everything
is deterministic.
"""

from __future__ import annotations

from amrkit.actions import ActionError, ActionLabel, ReliabilityTable, execute
from amrkit.corpus import LexicalResources, TrainingPair
from amrkit.graph import NodeKind
from amrkit.jaro import jaro_winkler

# Actions considered when scoring a single node against a single token.
_NODE_ACTIONS = (
    ActionLabel.IDENTITY,
    ActionLabel.PERSON,
    ActionLabel.NAME,
    ActionLabel.DATE,
    ActionLabel.VERB,
    ActionLabel.LEMMA,
    ActionLabel.VALUE,
)


def _title_stem(title: str) -> str:
    return title.split("-")[0] or title


def lexical_similarity(token, title: str) -> float:
    """Similarity between a token and a node title's pre-hyphen stem."""
    stem = _title_stem(title).lower()
    return max(jaro_winkler(token.lower, stem), jaro_winkler(token.lemma.lower(), stem))


def _number_similarity(token, value: str, month_ok: bool) -> float:
    """Number constants match tokens denoting the same integer; month
    constants additionally match the month's name."""
    from amrkit.normalize import _month, parse_integer

    target = int(value)
    if parse_integer(token.text) == target:
        return 1.0
    if month_ok and _month(token.text) == target:
        return 1.0
    return 0.0


# Node titles that carry structure rather than lexical content: they
# count as derivable from a token only when their children are too.
_STRUCTURAL_TITLES = frozenset({"name", "person", "date-entity"})


def _node_scores(
    pair: TrainingPair,
    resources: LexicalResources,
    table: ReliabilityTable,
) -> dict[str, list[float]]:
    """Base score of putting each node on each token, graph structure aside."""
    sentence = pair.sentence
    graph = pair.graph
    n_tokens = len(sentence)

    # what each action yields on each single-token span, computed once
    produced: list[dict[ActionLabel, set[tuple[str, str]]]] = []
    for j in range(n_tokens):
        per: dict[ActionLabel, set[tuple[str, str]]] = {}
        for action in _NODE_ACTIONS:
            if action is ActionLabel.VERB and not sentence.tokens[j].pos.startswith("VB"):
                # verb-sense lookup only competes on verb tokens; elsewhere
                # the similarity fallback scores the pairing
                continue
            try:
                frag = execute(action, (j, j + 1), sentence, resources, None)
            except ActionError:
                continue
            if frag is not None:
                per[action] = {(n.kind.value, n.title) for n in frag.graph.nodes}
        produced.append(per)

    def derivable(nid: str, made: set[tuple[str, str]], seen: frozenset[str]) -> bool:
        node = graph.node(nid)
        if (node.kind.value, node.title) not in made:
            return False
        if node.kind is not NodeKind.CONCEPT or node.title not in _STRUCTURAL_TITLES:
            return True
        children = [e.target for e in graph.out_edges(nid) if e.target not in seen]
        if not children:
            return True
        return any(derivable(c, made, seen | {nid}) for c in children)

    def anchor_children(nid: str) -> list[str]:
        # nodes without lexical content borrow their children's anchors:
        # entities point at their name node, date-entity at its fields
        out = []
        for e in graph.out_edges(nid):
            child = graph.node(e.target)
            if e.label == "name" and child.kind is NodeKind.CONCEPT and child.title == "name":
                out.append(e.target)
            elif graph.node(nid).title == "date-entity" and child.kind is NodeKind.NUMBER:
                out.append(e.target)
        return out

    def similarity(node, j: int) -> float:
        token = sentence.tokens[j]
        if node.kind is NodeKind.NUMBER:
            month_ok = any(e.label == "month" for e in graph.in_edges(node.id))
            return _number_similarity(token, node.title, month_ok)
        return lexical_similarity(token, node.title)

    base: dict[str, list[float]] = {}
    for node in graph.nodes:
        row = []
        for j in range(n_tokens):
            best = 0.0
            for action, made in produced[j].items():
                if table[action] > best and derivable(node.id, made, frozenset()):
                    best = table[action]
            row.append(best)
        base[node.id] = row
    lam = table[ActionLabel.DICT]
    strength = {
        node.id: [
            max(base[node.id][j], lam * similarity(node, j)) for j in range(n_tokens)
        ]
        for node in graph.nodes
    }
    scores: dict[str, list[float]] = {}
    for node in graph.nodes:
        anchors = anchor_children(node.id)
        row = []
        for j in range(n_tokens):
            value = strength[node.id][j]
            if anchors:
                value = max(value, lam * min(1.0, max(strength[a][j] for a in anchors)))
            row.append(value)
        scores[node.id] = row
    return scores


def alignment_score(
    pair: TrainingPair,
    alignment: dict[str, int],
    resources: LexicalResources,
    table: ReliabilityTable,
    beta: float = 0.1,
) -> float:
    """Objective value of an alignment (node scores plus coherence bonus)."""
    scores = _node_scores(pair, resources, table)
    return _total(pair, alignment, scores, beta)


def _total(pair, alignment, scores, beta) -> float:
    value = sum(scores[nid][alignment[nid]] for nid in alignment)
    for e in pair.graph.edges:
        if e.source != e.target and abs(alignment[e.source] - alignment[e.target]) <= 1:
            value += beta
    return value


def align(
    pair: TrainingPair,
    resources: LexicalResources,
    table: ReliabilityTable,
    beta: float = 0.1,
    hill_climb_iters: int = 100,
) -> dict[str, int]:
    """Best-scoring total alignment of graph nodes to sentence tokens."""
    sentence = pair.sentence
    if len(sentence) == 0 or len(pair.graph) == 0:
        raise ValueError(f"pair {pair.id!r}: empty sentence or graph")
    scores = _node_scores(pair, resources, table)
    node_order = list(pair.graph.node_ids)
    neighbors: dict[str, list[str]] = {nid: [] for nid in node_order}
    for e in pair.graph.edges:
        if e.source != e.target:
            neighbors[e.source].append(e.target)
            neighbors[e.target].append(e.source)

    def climb(start: dict[str, int]) -> tuple[float, dict[str, int]]:
        current = dict(start)
        for _ in range(hill_climb_iters):
            moved = False
            for nid in node_order:
                here = current[nid]
                base_adj = sum(1 for m in neighbors[nid] if abs(current[m] - here) <= 1)
                best_j, best_gain = here, 0.0
                for j in range(len(sentence)):
                    if j == here:
                        continue
                    adj = sum(1 for m in neighbors[nid] if abs(current[m] - j) <= 1)
                    gain = scores[nid][j] - scores[nid][here] + beta * (adj - base_adj)
                    if gain > best_gain + 1e-12:
                        best_gain, best_j = gain, j
                if best_j != here:
                    current[nid] = best_j
                    moved = True
            if not moved:
                break
        return _total(pair, current, scores, beta), current

    # greedy seed: most promising nodes first, each to its best token
    # given the neighbors placed so far
    greedy: dict[str, int] = {}
    order = sorted(
        range(len(node_order)),
        key=lambda k: (-max(scores[node_order[k]]), k),
    )
    for k in order:
        nid = node_order[k]
        best_j, best_value = 0, float("-inf")
        for j in range(len(sentence)):
            adj = sum(1 for m in neighbors[nid] if m in greedy and abs(greedy[m] - j) <= 1)
            value = scores[nid][j] + beta * adj
            if value > best_value + 1e-12:
                best_value, best_j = value, j
        greedy[nid] = best_j

    best_score, best = climb(greedy)

    # the all-lookup baseline can occasionally out-score the greedy seed
    # through its coherence term; keep whichever local optimum wins
    baseline = {}
    for nid in node_order:
        title = pair.graph.node(nid).title
        sims = [lexical_similarity(sentence.tokens[j], title) for j in range(len(sentence))]
        top = max(sims)
        baseline[nid] = next(j for j, s in enumerate(sims) if s >= top - 1e-12)
    base_score, base_opt = climb(baseline)
    if base_score > best_score + 1e-12:
        return base_opt
    return best


def evaluate_alignment(predicted: dict[str, int], gold: dict[str, int]) -> float:
    """Fraction of nodes aligned to the gold token."""
    if set(predicted) != set(gold):
        raise ValueError("alignment node sets differ")
    if not gold:
        raise ValueError("empty alignments")
    return sum(1 for n, j in gold.items() if predicted[n] == j) / len(gold)
