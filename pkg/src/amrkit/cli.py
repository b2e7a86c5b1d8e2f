"""Command-line pipeline driver.

Subcommands: align, extract, train, parse, eval-smatch, eval-actions,
eval-align, report. Outputs are buffered and written only when a
command succeeds, so failures leave no partial artifacts. Every run
writes `<primary output>.manifest` with the config hash and seed.

Exit codes: 0 success, 1 usage or config error, 2 data error,
3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from amrkit import __version__
from amrkit.actions import ActionLabel, ReliabilityTable, estimate_reliability
from amrkit.align import align as align_pair
from amrkit.classifier import (
    LABEL_ORDER,
    decode,
    extract_training,
    featurize,
    labeled_to_sequences,
    load_labels,
)
from amrkit.config import ConfigError, PipelineConfig, load_config, manifest_text
from amrkit.corpus import (
    CorpusError,
    LexicalResources,
    alignment_lines,
    load_alignments,
    load_amr_corpus,
    load_annotations,
    load_corpus,
    load_resources,
)
from amrkit.dict_table import DictTable, DictTableError
from amrkit.evaluate import (
    action_accuracy,
    corpus_smatch,
    format_confusion,
    format_distribution,
    format_smatch,
)
from amrkit.graph import GraphError, PenmanError, print_penman
from amrkit.maxent import MaxentError, MaxentModel, TrainConfig, train_maxent
from amrkit.relations import EdgeScorer, connect, score_edges, train_scorer


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


class Outputs:
    """Buffered file writes, committed only on success."""

    def __init__(self):
        self._files: dict[str, str] = {}

    def add(self, path, content: str):
        self._files[str(path)] = content

    def commit(self):
        for path, content in self._files.items():
            Path(path).parent.mkdir(parents=True, exist_ok=True)
            Path(path).write_text(content, encoding="utf-8")
        return sorted(self._files)


def _require_files(*paths):
    for p in paths:
        if p is not None and not Path(p).is_file():
            raise CorpusError(f"input file not found: {p}")


def _resources(args) -> LexicalResources:
    _require_files(args.propbank, getattr(args, "embeddings", None))
    return load_resources(args.propbank, getattr(args, "embeddings", None))


def _config(args) -> PipelineConfig:
    overrides = {}
    for item in args.set or []:
        if "=" not in item:
            raise UsageError(f"--set expects key=value, got {item!r}")
        key, _, value = item.partition("=")
        overrides[key.strip()] = value.strip()
    if args.config is not None:
        _require_files(args.config)
    return load_config(args.config, overrides)


def _reliability(cfg: PipelineConfig, path) -> ReliabilityTable:
    if path is None:
        return cfg.reliability_table()
    _require_files(path)
    values = {}
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise CorpusError(f"{path}:{lineno}: expected 'ACTION TAB value'")
            try:
                values[ActionLabel(parts[0])] = float(parts[1])
            except ValueError:
                raise CorpusError(f"{path}:{lineno}: bad reliability row") from None
    try:
        return ReliabilityTable(values)
    except ValueError as e:
        raise CorpusError(f"{path}: {e}") from None


def _reliability_lines(table: ReliabilityTable) -> str:
    return "".join(f"{a.value}\t{table[a]!r}\n" for a in ActionLabel)


# --- subcommands -------------------------------------------------------------


def cmd_align(args) -> int:
    cfg = _config(args)
    _require_files(args.amr, args.annotations)
    resources = _resources(args)
    pairs = load_corpus(args.amr, args.annotations)
    table = cfg.reliability_table()
    alignments = {}
    for pair in pairs:
        alignments[pair.id] = align_pair(
            pair,
            resources,
            table,
            beta=cfg["align.beta"],
            hill_climb_iters=cfg["align.hill-climb-iters"],
        )
    out = Outputs()
    out.add(args.out, "".join(line + "\n" for line in alignment_lines(alignments, pairs)))
    out.add(f"{args.out}.manifest", manifest_text("align", cfg))
    out.commit()
    print(f"align: wrote {args.out} ({len(pairs)} sentences)")
    return 0


def cmd_extract(args) -> int:
    cfg = _config(args)
    _require_files(args.amr, args.annotations, args.alignments)
    resources = _resources(args)
    pairs = load_corpus(args.amr, args.annotations)
    alignments = load_alignments(args.alignments, pairs)
    missing = [p.id for p in pairs if p.id not in alignments]
    if missing:
        raise CorpusError(f"{args.alignments}: no alignment for: {', '.join(missing)}")
    for pair in pairs:
        pair.alignment = alignments[pair.id]
    table = cfg.reliability_table()
    labeled, dict_table = extract_training(pairs, table, resources)
    sequences = labeled_to_sequences(labeled, [p.sentence for p in pairs])
    estimated = estimate_reliability(
        [(p, sequences[p.id]) for p in pairs], dict_table, resources, defaults=table
    )
    out = Outputs()
    out.add(args.out_labels, _labels_text(labeled, pairs))
    dict_lines = [f"{span}\t{count}\t{text}" for span, text, count in dict_table.entries()]
    out.add(args.out_dict, "".join(line + "\n" for line in dict_lines))
    out.add(args.out_reliability, _reliability_lines(estimated))
    out.add(f"{args.out_labels}.manifest", manifest_text("extract", cfg))
    out.commit()
    print(
        f"extract: {len(labeled)} labeled tokens, {len(dict_table)} dictionary spans"
    )
    return 0


def _labels_text(labeled, pairs) -> str:
    by_id = {p.id: p.sentence for p in pairs}
    lines = []
    for lt in labeled:
        text = by_id[lt.sentence_id].tokens[lt.index].text
        lines.append(f"{lt.sentence_id}\t{lt.index}\t{text}\t{lt.label.value}")
    return "".join(line + "\n" for line in lines)


def cmd_train(args) -> int:
    cfg = _config(args)
    _require_files(args.amr, args.annotations, args.alignments, args.labels, args.dict)
    resources = _resources(args)
    pairs = load_corpus(args.amr, args.annotations)
    alignments = load_alignments(args.alignments, pairs)
    for pair in pairs:
        if pair.id in alignments:
            pair.alignment = alignments[pair.id]
    dict_table = DictTable.load(args.dict)
    labeled = load_labels(args.labels)
    sequences = labeled_to_sequences(labeled, [p.sentence for p in pairs])
    table = _reliability(cfg, args.reliability)

    examples = []
    for pair in pairs:
        seq = sequences.get(pair.id)
        if seq is None:
            raise CorpusError(f"{args.labels}: no labels for sentence {pair.id!r}")
        for i, label in enumerate(seq):
            examples.append((featurize(i, pair.sentence, resources, dict_table), label.value))
    model = train_maxent(
        examples,
        LABEL_ORDER,
        TrainConfig(
            l2=cfg["train.l2"],
            max_iters=cfg["train.max-iters"],
            tol=cfg["train.tol"],
            step=cfg["train.step"],
        ),
    )
    aligned_pairs = [p for p in pairs if p.alignment is not None]
    scorer = train_scorer(aligned_pairs, resources, table, epochs=cfg["scorer.epochs"])

    hits = sum(1 for feats, label in examples if model.predict(feats) == label)
    out = Outputs()
    out.add(args.out_model, model.to_text())
    out.add(args.out_scorer, scorer.to_text())
    out.add(f"{args.out_model}.manifest", manifest_text("train", cfg))
    out.commit()
    print(f"train: {len(examples)} examples, training accuracy {hits / len(examples):.3f}")
    return 0


def cmd_parse(args) -> int:
    cfg = _config(args)
    _require_files(args.annotations, args.model, args.dict, args.scorer)
    resources = _resources(args)
    sentences = load_annotations(args.annotations)
    model = MaxentModel.load(args.model)
    dict_table = DictTable.load(args.dict)
    scorer = EdgeScorer.load(args.scorer)

    blocks = []
    for sentence in sentences:
        fragments = decode(sentence, model, dict_table, resources)
        if fragments:
            candidates = (
                score_edges(fragments, sentence, scorer) if len(fragments) > 1 else []
            )
            graph = connect(fragments, candidates, sentence)
            text = print_penman(graph)
        else:
            text = "(a / amr-empty)"
        snt = " ".join(t.text for t in sentence.tokens)
        blocks.append(f"# ::id {sentence.id}\n# ::snt {snt}\n{text}")
    out = Outputs()
    out.add(args.out, "\n\n".join(blocks) + "\n")
    out.add(f"{args.out}.manifest", manifest_text("parse", cfg))
    out.commit()
    print(f"parse: wrote {args.out} ({len(sentences)} sentences)")
    return 0


def cmd_eval_smatch(args) -> int:
    cfg = _config(args)
    _require_files(args.pred, args.gold)
    pred_entries = {i: g for i, _, g in load_amr_corpus(args.pred)}
    gold_entries = load_amr_corpus(args.gold)
    orphans = sorted(set(pred_entries) ^ {i for i, _, _ in gold_entries})
    if orphans:
        raise CorpusError(f"eval-smatch: ids differ between files: {', '.join(orphans)}")
    pairs = [(pred_entries[i], g) for i, _, g in gold_entries]
    result = corpus_smatch(pairs, restarts=cfg["smatch.restarts"], seed=cfg["seed"])
    print(format_smatch(result))
    return 0


def _label_sequences_from_file(path) -> dict[str, dict[int, ActionLabel]]:
    out: dict[str, dict[int, ActionLabel]] = {}
    for lt in load_labels(path):
        out.setdefault(lt.sentence_id, {})[lt.index] = lt.label
    return out


def cmd_eval_actions(args) -> int:
    _config(args)
    _require_files(args.pred, args.gold)
    pred = _label_sequences_from_file(args.pred)
    gold = _label_sequences_from_file(args.gold)
    if set(pred) != set(gold):
        raise CorpusError("eval-actions: sentence ids differ between files")
    pred_seq, gold_seq = [], []
    for sid in sorted(gold):
        if set(pred[sid]) != set(gold[sid]):
            raise CorpusError(f"eval-actions: token indices differ for {sid!r}")
        for idx in sorted(gold[sid]):
            pred_seq.append(pred[sid][idx])
            gold_seq.append(gold[sid][idx])
    result = action_accuracy(pred_seq, gold_seq)
    print(f"action accuracy {result.accuracy:.4f} over {len(gold_seq)} tokens")
    print(format_confusion(result.confusion))
    return 0


def cmd_eval_align(args) -> int:
    _config(args)
    _require_files(args.pred, args.gold, args.amr, args.annotations)
    pairs = load_corpus(args.amr, args.annotations)
    pred = load_alignments(args.pred, pairs)
    gold = load_alignments(args.gold, pairs)
    ids = sorted(gold)
    missing = [i for i in ids if i not in pred]
    if missing:
        raise CorpusError(f"eval-align: predictions missing for: {', '.join(missing)}")
    correct = total = 0
    for sid in ids:
        for node, tok in gold[sid].items():
            total += 1
            if pred[sid].get(node) == tok:
                correct += 1
    print(f"alignment accuracy {correct / total:.4f} over {total} nodes ({len(ids)} sentences)")
    return 0


def cmd_report(args) -> int:
    _config(args)
    _require_files(args.labels)
    labels = [lt.label for lt in load_labels(args.labels)]
    if not labels:
        raise CorpusError(f"{args.labels}: no labeled tokens")
    print(format_distribution(labels))
    return 0


# --- argument wiring ----------------------------------------------------------


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="key = value config file")
    p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a config key")


def build_parser() -> _Parser:
    parser = _Parser(prog="amrkit", description=__doc__)
    parser.add_argument("--version", action="version", version=f"amrkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("align", help="induce node-to-token alignments")
    p.add_argument("--amr", required=True)
    p.add_argument("--annotations", required=True)
    p.add_argument("--propbank", required=True)
    p.add_argument("--embeddings")
    p.add_argument("--out", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_align)

    p = sub.add_parser("extract", help="induce action labels, dictionary, reliabilities")
    p.add_argument("--amr", required=True)
    p.add_argument("--annotations", required=True)
    p.add_argument("--alignments", required=True)
    p.add_argument("--propbank", required=True)
    p.add_argument("--embeddings")
    p.add_argument("--out-labels", required=True)
    p.add_argument("--out-dict", required=True)
    p.add_argument("--out-reliability", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("train", help="train the action classifier and edge scorer")
    p.add_argument("--amr", required=True)
    p.add_argument("--annotations", required=True)
    p.add_argument("--alignments", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--dict", required=True)
    p.add_argument("--reliability")
    p.add_argument("--propbank", required=True)
    p.add_argument("--embeddings")
    p.add_argument("--out-model", required=True)
    p.add_argument("--out-scorer", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("parse", help="parse annotated sentences to Penman")
    p.add_argument("--annotations", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--dict", required=True)
    p.add_argument("--scorer", required=True)
    p.add_argument("--propbank", required=True)
    p.add_argument("--embeddings")
    p.add_argument("--out", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("eval-smatch", help="smatch of predicted vs gold graphs")
    p.add_argument("--pred", required=True)
    p.add_argument("--gold", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_eval_smatch)

    p = sub.add_parser("eval-actions", help="accuracy of predicted action labels")
    p.add_argument("--pred", required=True)
    p.add_argument("--gold", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_eval_actions)

    p = sub.add_parser("eval-align", help="accuracy of predicted alignments")
    p.add_argument("--pred", required=True)
    p.add_argument("--gold", required=True)
    p.add_argument("--amr", required=True)
    p.add_argument("--annotations", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_eval_align)

    p = sub.add_parser("report", help="action distribution of a labels file")
    p.add_argument("--labels", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    command = "amrkit"
    try:
        args = parser.parse_args(argv)
        command = args.command
        return args.func(args)
    except UsageError as e:
        print(f"{command}: usage error: {e}", file=sys.stderr)
        return 1
    except ConfigError as e:
        print(f"{command}: config error: {e}", file=sys.stderr)
        return 1
    except (CorpusError, PenmanError, GraphError, DictTableError, MaxentError) as e:
        print(f"{command}: data error: {e}", file=sys.stderr)
        return 2
    except Exception as e:  # noqa: BLE001 - invariant violations map to exit 3
        print(f"{command}: internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
