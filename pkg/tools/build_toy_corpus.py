#!/usr/bin/env python3
"""Regenerate the bundled toy corpus under data/.

The corpus is hand-authored here as Python literals and written out in
the toolkit's file formats. Alignments map node ids to token indices;
constants are referenced as `_0`, `_1`, ... in Penman reading order.
Run from the repository root: python3 tools/build_toy_corpus.py
"""

from __future__ import annotations

import sys
from pathlib import Path

from amrkit.corpus import AnnotatedSentence, Token, save_annotations
from amrkit.graph import parse_penman, print_penman

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "data"


def S(text, pos, lemma, ner="O"):
    return (text, pos, lemma, ner)


# (id, tokens, deps, coref, amr, alignment)
TRAIN = [
    (
        "s1",
        [S("He", "PRP", "he"), S("gleefully", "RB", "glee"), S("ran", "VBD", "run"),
         S("to", "TO", "to"), S("his", "PRP$", "he"), S("dog", "NN", "dog"),
         S("Rover", "NNP", "rover"), S(".", ".", ".")],
        [(2, 0, "nsubj"), (2, 1, "advmod"), (-1, 2, "root"), (5, 3, "case"),
         (5, 4, "poss"), (2, 5, "prep_to"), (5, 6, "appos"), (2, 7, "punct")],
        [[0, 4]],
        '(r / run-01 :ARG0 (h / he) :mod (g / glee) '
        ':destination (d / dog :poss h :name (n / name :op1 "Rover")))',
        {"r": 2, "h": 0, "g": 1, "d": 5, "n": 6, "_0": 6},
    ),
    (
        "s2",
        [S("The", "DT", "the"), S("sailor", "NN", "sailor"), S("slept", "VBD", "sleep"),
         S(".", ".", ".")],
        [(1, 0, "det"), (2, 1, "nsubj"), (-1, 2, "root"), (2, 3, "punct")],
        [],
        "(s / sleep-01 :ARG0 (p / person :ARG0-of (s2 / sail-01)))",
        {"s": 2, "p": 1, "s2": 1},
    ),
    (
        "s3",
        [S("Mary", "NNP", "mary", "PERSON"), S("visited", "VBD", "visit"),
         S("Paris", "NNP", "paris", "LOC"), S("in", "IN", "in"),
         S("January", "NNP", "january", "DATE"), S("2008", "CD", "2008", "DATE"),
         S(".", ".", ".")],
        [(1, 0, "nsubj"), (-1, 1, "root"), (1, 2, "dobj"), (4, 3, "case"),
         (1, 4, "prep_in"), (4, 5, "nummod"), (1, 6, "punct")],
        [],
        '(v / visit-01 :ARG0 (p / person :name (n / name :op1 "Mary")) '
        ':ARG1 (c / city :name (n2 / name :op1 "Paris")) '
        ":time (d / date-entity :year 2008 :month 1))",
        {"v": 1, "p": 0, "n": 0, "_0": 0, "c": 2, "n2": 2, "_1": 2, "d": 4, "_2": 5, "_3": 4},
    ),
    (
        "s4",
        [S("Five", "CD", "five"), S("dogs", "NNS", "dog"), S("barked", "VBD", "bark"),
         S(".", ".", ".")],
        [(1, 0, "nummod"), (2, 1, "nsubj"), (-1, 2, "root"), (2, 3, "punct")],
        [],
        "(b / bark-01 :ARG0 (d / dog :quant 5))",
        {"b": 2, "d": 1, "_0": 0},
    ),
    (
        "s5",
        [S("The", "DT", "the"), S("cat", "NN", "cat"), S("chased", "VBD", "chase"),
         S("a", "DT", "a"), S("mouse", "NN", "mouse"), S(".", ".", ".")],
        [(1, 0, "det"), (2, 1, "nsubj"), (-1, 2, "root"), (4, 3, "det"),
         (2, 4, "dobj"), (2, 5, "punct")],
        [],
        "(c / chase-01 :ARG0 (c2 / cat) :ARG1 (m / mouse))",
        {"c": 2, "c2": 1, "m": 4},
    ),
    (
        "s6",
        [S("John", "NNP", "john", "PERSON"), S("saw", "VBD", "see"),
         S("Lisbon", "NNP", "lisbon", "LOC"), S(".", ".", ".")],
        [(1, 0, "nsubj"), (-1, 1, "root"), (1, 2, "dobj"), (1, 3, "punct")],
        [],
        '(s / see-01 :ARG0 (p / person :name (n / name :op1 "John")) '
        ':ARG1 (c / city :name (n2 / name :op1 "Lisbon")))',
        {"s": 1, "p": 0, "n": 0, "_0": 0, "c": 2, "n2": 2, "_1": 2},
    ),
    (
        "s7",
        [S("She", "PRP", "she"), S("sang", "VBD", "sing"), S("in", "IN", "in"),
         S("1999", "CD", "1999", "DATE"), S(".", ".", ".")],
        [(1, 0, "nsubj"), (-1, 1, "root"), (3, 2, "case"), (1, 3, "prep_in"),
         (1, 4, "punct")],
        [],
        "(s / sing-01 :ARG0 (s2 / she) :time (d / date-entity :year 1999))",
        {"s": 1, "s2": 0, "d": 3, "_0": 3},
    ),
    (
        "s8",
        [S("Barack", "NNP", "barack", "PERSON"), S("Obama", "NNP", "obama", "PERSON"),
         S("spoke", "VBD", "speak"), S("yesterday", "NN", "yesterday"), S(".", ".", ".")],
        [(1, 0, "compound"), (2, 1, "nsubj"), (-1, 2, "root"), (2, 3, "tmod"),
         (2, 4, "punct")],
        [],
        '(s / speak-01 :ARG0 (p / person :name (n / name :op1 "Barack" :op2 "Obama")) '
        ":time (y / yesterday))",
        {"s": 2, "p": 0, "n": 0, "_0": 0, "_1": 1, "y": 3},
    ),
    (
        "s9",
        [S("Two", "CD", "two"), S("sailors", "NNS", "sailor"), S("swam", "VBD", "swim"),
         S("quickly", "RB", "quick"), S(".", ".", ".")],
        [(1, 0, "nummod"), (2, 1, "nsubj"), (-1, 2, "root"), (2, 3, "advmod"),
         (2, 4, "punct")],
        [],
        "(s / swim-01 :ARG0 (p / person :quant 2 :ARG0-of (s2 / sail-01)) :manner (q / quick))",
        {"s": 2, "p": 1, "_0": 0, "s2": 1, "q": 3},
    ),
    (
        "s10",
        [S("The", "DT", "the"), S("boy", "NN", "boy"), S("wants", "VBZ", "want"),
         S("to", "TO", "to"), S("win", "VB", "win"), S(".", ".", ".")],
        [(1, 0, "det"), (2, 1, "nsubj"), (-1, 2, "root"), (4, 3, "mark"),
         (2, 4, "xcomp"), (2, 5, "punct")],
        [],
        "(w / want-01 :ARG0 (b / boy) :ARG1 (w2 / win-01 :ARG0 b))",
        {"w": 2, "b": 1, "w2": 4},
    ),
    (
        "s11",
        [S("A", "DT", "a"), S("dog", "NN", "dog"), S("slept", "VBD", "sleep"),
         S("on", "IN", "on"), S("the", "DT", "the"), S("mat", "NN", "mat"),
         S(".", ".", ".")],
        [(1, 0, "det"), (2, 1, "nsubj"), (-1, 2, "root"), (5, 3, "case"),
         (5, 4, "det"), (2, 5, "prep_on"), (2, 6, "punct")],
        [],
        "(s / sleep-01 :ARG0 (d / dog) :location (m / mat))",
        {"s": 2, "d": 1, "m": 5},
    ),
    (
        "s12",
        [S("Maria", "NNP", "maria", "PERSON"), S("read", "VBD", "read"),
         S("a", "DT", "a"), S("book", "NN", "book"), S("on", "IN", "on"),
         S("January", "NNP", "january", "DATE"), S("1", "CD", "1", "DATE"),
         S(",", ",", ","), S("2008", "CD", "2008", "DATE"), S(".", ".", ".")],
        [(1, 0, "nsubj"), (-1, 1, "root"), (3, 2, "det"), (1, 3, "dobj"),
         (5, 4, "case"), (1, 5, "prep_on"), (5, 6, "nummod"), (5, 7, "punct"),
         (5, 8, "nummod"), (1, 9, "punct")],
        [],
        '(r / read-01 :ARG0 (p / person :name (n / name :op1 "Maria")) :ARG1 (b / book) '
        ":time (d / date-entity :year 2008 :month 1 :day 1))",
        {"r": 1, "p": 0, "n": 0, "_0": 0, "b": 3, "d": 5, "_1": 8, "_2": 5, "_3": 6},
    ),
    (
        "s13",
        [S("Three", "CD", "three"), S("cats", "NNS", "cat"), S("jumped", "VBD", "jump"),
         S(".", ".", ".")],
        [(1, 0, "nummod"), (2, 1, "nsubj"), (-1, 2, "root"), (2, 3, "punct")],
        [],
        "(j / jump-01 :ARG0 (c / cat :quant 3))",
        {"j": 2, "c": 1, "_0": 0},
    ),
    (
        "s14",
        [S("The", "DT", "the"), S("teacher", "NN", "teacher"), S("smiled", "VBD", "smile"),
         S(".", ".", ".")],
        [(1, 0, "det"), (2, 1, "nsubj"), (-1, 2, "root"), (2, 3, "punct")],
        [],
        "(s / smile-01 :ARG0 (t / teacher))",
        {"s": 2, "t": 1},
    ),
    (
        "s15",
        [S("He", "PRP", "he"), S("wants", "VBZ", "want"), S("a", "DT", "a"),
         S("banana", "NN", "banana"), S(".", ".", ".")],
        [(1, 0, "nsubj"), (-1, 1, "root"), (3, 2, "det"), (1, 3, "dobj"),
         (1, 4, "punct")],
        [],
        "(w / want-01 :ARG0 (h / he) :ARG1 (b / banana))",
        {"w": 1, "h": 0, "b": 3},
    ),
    (
        "s16",
        [S("Rex", "NNP", "rex"), S("barked", "VBD", "bark"), S("loudly", "RB", "loud"),
         S(".", ".", ".")],
        [(1, 0, "nsubj"), (-1, 1, "root"), (1, 2, "advmod"), (1, 3, "punct")],
        [],
        '(b / bark-01 :ARG0 (d / dog :name (n / name :op1 "Rex")) :manner (l / loud))',
        {"b": 1, "d": 0, "n": 0, "_0": 0, "l": 2},
    ),
    (
        "s17",
        [S("The", "DT", "the"), S("girl", "NN", "girl"), S("ate", "VBD", "eat"),
         S("an", "DT", "a"), S("apple", "NN", "apple"), S(".", ".", ".")],
        [(1, 0, "det"), (2, 1, "nsubj"), (-1, 2, "root"), (4, 3, "det"),
         (2, 4, "dobj"), (2, 5, "punct")],
        [],
        "(e / eat-01 :ARG0 (g / girl) :ARG1 (a / apple))",
        {"e": 2, "g": 1, "a": 4},
    ),
    (
        "s18",
        [S("The", "DT", "the"), S("sailor", "NN", "sailor"), S("sang", "VBD", "sing"),
         S(".", ".", ".")],
        [(1, 0, "det"), (2, 1, "nsubj"), (-1, 2, "root"), (2, 3, "punct")],
        [],
        "(s / sing-01 :ARG0 (p / person :ARG0-of (s2 / sail-01)))",
        {"s": 2, "p": 1, "s2": 1},
    ),
    (
        "s19",
        [S("John", "NNP", "john", "PERSON"), S("walked", "VBD", "walk"),
         S("to", "TO", "to"), S("Paris", "NNP", "paris", "LOC"), S(".", ".", ".")],
        [(1, 0, "nsubj"), (-1, 1, "root"), (3, 2, "case"), (1, 3, "prep_to"),
         (1, 4, "punct")],
        [],
        '(w / walk-01 :ARG0 (p / person :name (n / name :op1 "John")) '
        ':destination (c / city :name (n2 / name :op1 "Paris")))',
        {"w": 1, "p": 0, "n": 0, "_0": 0, "c": 3, "n2": 3, "_1": 3},
    ),
    (
        "s20",
        [S("She", "PRP", "she"), S("saw", "VBD", "see"), S("five", "CD", "five"),
         S("cats", "NNS", "cat"), S(".", ".", ".")],
        [(1, 0, "nsubj"), (-1, 1, "root"), (3, 2, "nummod"), (1, 3, "dobj"),
         (1, 4, "punct")],
        [],
        "(s / see-01 :ARG0 (s2 / she) :ARG1 (c / cat :quant 5))",
        {"s": 1, "s2": 0, "c": 3, "_0": 2},
    ),
    (
        "s21",
        [S("The", "DT", "the"), S("dog", "NN", "dog"), S("chased", "VBD", "chase"),
         S("Rover", "NNP", "rover"), S(".", ".", ".")],
        [(1, 0, "det"), (2, 1, "nsubj"), (-1, 2, "root"), (2, 3, "dobj"),
         (2, 4, "punct")],
        [],
        '(c / chase-01 :ARG0 (d / dog) :ARG1 (n / name :op1 "Rover"))',
        {"c": 2, "d": 1, "n": 3, "_0": 3},
    ),
    (
        "s22",
        [S("Students", "NNS", "student"), S("read", "VBP", "read"),
         S("books", "NNS", "book"), S(".", ".", ".")],
        [(1, 0, "nsubj"), (-1, 1, "root"), (1, 2, "dobj"), (1, 3, "punct")],
        [],
        "(r / read-01 :ARG0 (s / student) :ARG1 (b / book))",
        {"r": 1, "s": 0, "b": 2},
    ),
    (
        "s23",
        [S("It", "PRP", "it"), S("rained", "VBD", "rain"), S("in", "IN", "in"),
         S("April", "NNP", "april", "DATE"), S(".", ".", ".")],
        [(1, 0, "nsubj"), (-1, 1, "root"), (3, 2, "case"), (1, 3, "prep_in"),
         (1, 4, "punct")],
        [],
        "(r / rain-01 :time (d / date-entity :month 4))",
        {"r": 1, "d": 3, "_0": 3},
    ),
    (
        "s24",
        [S("The", "DT", "the"), S("man", "NN", "man"), S("gave", "VBD", "give"),
         S("her", "PRP", "she"), S("a", "DT", "a"), S("rose", "NN", "rose"),
         S(".", ".", ".")],
        [(1, 0, "det"), (2, 1, "nsubj"), (-1, 2, "root"), (2, 3, "iobj"),
         (5, 4, "det"), (2, 5, "dobj"), (2, 6, "punct")],
        [],
        "(g / give-01 :ARG0 (m / man) :ARG2 (s / she) :ARG1 (r / rose))",
        {"g": 2, "m": 1, "s": 3, "r": 5},
    ),
    (
        "s25",
        [S("He", "PRP", "he"), S("said", "VBD", "say"), S("that", "IN", "that"),
         S("he", "PRP", "he"), S("slept", "VBD", "sleep"), S(".", ".", ".")],
        [(1, 0, "nsubj"), (-1, 1, "root"), (4, 2, "mark"), (4, 3, "nsubj"),
         (1, 4, "ccomp"), (1, 5, "punct")],
        [[0, 3]],
        "(s / say-01 :ARG0 (h / he) :ARG1 (s2 / sleep-01 :ARG0 h))",
        {"s": 1, "h": 0, "s2": 4},
    ),
]

HELDOUT = [
    (
        "h1",
        [S("Felix", "NNP", "felix", "PERSON"), S("Baumgartner", "NNP", "baumgartner", "PERSON"),
         S("jumped", "VBD", "jump"), S(".", ".", ".")],
        [(1, 0, "compound"), (2, 1, "nsubj"), (-1, 2, "root"), (2, 3, "punct")],
        [],
        '(j / jump-01 :ARG0 (p / person :name (n / name :op1 "Felix" :op2 "Baumgartner")))',
        {"j": 2, "p": 0, "n": 0, "_0": 0, "_1": 1},
    ),
    (
        "h2",
        [S("The", "DT", "the"), S("zebra", "NN", "zebra"), S("swam", "VBD", "swim"),
         S(".", ".", ".")],
        [(1, 0, "det"), (2, 1, "nsubj"), (-1, 2, "root"), (2, 3, "punct")],
        [],
        "(s / swim-01 :ARG0 (z / zebra))",
        {"s": 2, "z": 1},
    ),
    (
        "h3",
        [S("Seven", "CD", "seven"), S("wolves", "NNS", "wolf"), S("howled", "VBD", "howl"),
         S(".", ".", ".")],
        [(1, 0, "nummod"), (2, 1, "nsubj"), (-1, 2, "root"), (2, 3, "punct")],
        [],
        "(h / howl-01 :ARG0 (w / wolf :quant 7))",
        {"h": 2, "w": 1, "_0": 0},
    ),
    (
        "h4",
        [S("Susan", "NNP", "susan", "PERSON"), S("sang", "VBD", "sing"), S("in", "IN", "in"),
         S("June", "NNP", "june", "DATE"), S("1980", "CD", "1980", "DATE"), S(".", ".", ".")],
        [(1, 0, "nsubj"), (-1, 1, "root"), (3, 2, "case"), (1, 3, "prep_in"),
         (3, 4, "nummod"), (1, 5, "punct")],
        [],
        '(s / sing-01 :ARG0 (p / person :name (n / name :op1 "Susan")) '
        ":time (d / date-entity :year 1980 :month 6))",
        {"s": 1, "p": 0, "n": 0, "_0": 0, "d": 3, "_1": 4, "_2": 3},
    ),
    (
        "h5",
        [S("The", "DT", "the"), S("lion", "NN", "lion"), S("ate", "VBD", "eat"),
         S(".", ".", ".")],
        [(1, 0, "det"), (2, 1, "nsubj"), (-1, 2, "root"), (2, 3, "punct")],
        [],
        "(e / eat-01 :ARG0 (l / lion))",
        {"e": 2, "l": 1},
    ),
]

PROPBANK = """\
run run-01 620
run run-02 80
sleep sleep-01 40
visit visit-01 50
bark bark-01 12
chase chase-01 30
see see-01 400
sing sing-01 25
speak speak-01 90
swim swim-01 22
want want-01 500
win win-01 120
jump jump-01 35
eat eat-01 60
give give-01 300
read read-01 70
say say-01 800
rain rain-01 15
smile smile-01 20
walk walk-01 55
howl howl-01 6
sail sail-01 18
sprint sprint-01 10
sprint sprint-02 3
study study-01 45
hear hear-01 100
go go-02 200
go go-01 150
"""

EMBEDDINGS = """\
dog 0.21 -0.34 0.55 0.10
cat 0.25 -0.31 0.49 0.02
he 0.90 0.12 -0.44 0.31
she 0.88 0.15 -0.47 0.29
ran -0.12 0.77 0.20 -0.05
boy 0.41 -0.02 0.16 0.38
girl 0.44 -0.04 0.13 0.40
sailor 0.05 0.61 0.33 -0.21
book -0.30 0.08 0.72 0.14
"""

CONFIG = """\
# toy pipeline configuration: a tiny corpus is meant to be memorized
seed = 13
train.l2 = 0.01
train.max-iters = 400
train.step = 0.5
scorer.epochs = 10
"""


def build_split(entries, prefix: str, with_alignments: bool):
    # the authored Penman text goes into the file verbatim so that node
    # ids in the alignment rows (variables, _k constants) match a parse
    # of the written file
    sentences = []
    blocks = []
    alignment_rows = []
    for sid, tokens, deps, coref, amr_text, alignment in entries:
        toks = [Token(t[0], t[1], t[2], t[3], i) for i, t in enumerate(tokens)]
        sent = AnnotatedSentence(sid, toks, deps, coref)
        graph = parse_penman(amr_text)
        print_penman(graph)  # must be serializable
        node_ids = set(graph.node_ids)
        if set(alignment) != node_ids:
            missing = sorted(node_ids - set(alignment))
            extra = sorted(set(alignment) - node_ids)
            sys.exit(f"{sid}: alignment mismatch (missing {missing}, extra {extra})")
        for nid, idx in alignment.items():
            if not (0 <= idx < len(toks)):
                sys.exit(f"{sid}: alignment index {idx} out of range")
        sentences.append(sent)
        blocks.append(f"# ::id {sid}\n# ::snt {' '.join(t[0] for t in tokens)}\n{amr_text}")
        for nid in graph.node_ids:
            alignment_rows.append(f"{sid}\t{nid}\t{alignment[nid]}")

    save_annotations(sentences, DATA / "toy" / f"{prefix}.jsonl")
    (DATA / "toy" / f"{prefix}.amr").write_text("\n\n".join(blocks) + "\n", encoding="utf-8")
    if with_alignments:
        (DATA / "toy" / f"{prefix}.gold-alignments.tsv").write_text(
            "".join(row + "\n" for row in alignment_rows), encoding="utf-8"
        )


def main():
    (DATA / "toy").mkdir(parents=True, exist_ok=True)
    build_split(TRAIN, "train", with_alignments=True)
    build_split(HELDOUT, "heldout", with_alignments=True)
    (DATA / "propbank-frames.txt").write_text(PROPBANK, encoding="utf-8")
    (DATA / "toy" / "embeddings.txt").write_text(EMBEDDINGS, encoding="utf-8")
    (DATA / "toy" / "config.txt").write_text(CONFIG, encoding="utf-8")
    print(f"wrote toy corpus under {DATA}")


if __name__ == "__main__":
    main()
