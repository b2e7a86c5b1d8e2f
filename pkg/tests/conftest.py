from __future__ import annotations

from pathlib import Path

import pytest

from amrkit.actions import DEFAULT_RELIABILITY
from amrkit.corpus import load_alignments, load_corpus, load_resources

REPO = Path(__file__).resolve().parent.parent
DATA = REPO / "data"
TOY = DATA / "toy"


@pytest.fixture(scope="session")
def resources():
    return load_resources(DATA / "propbank-frames.txt", TOY / "embeddings.txt")


@pytest.fixture(scope="session")
def reliability():
    return DEFAULT_RELIABILITY


@pytest.fixture(scope="session")
def train_pairs():
    pairs = load_corpus(TOY / "train.amr", TOY / "train.jsonl")
    gold = load_alignments(TOY / "train.gold-alignments.tsv", pairs)
    for p in pairs:
        p.alignment = gold[p.id]
    return pairs


@pytest.fixture(scope="session")
def heldout_pairs():
    pairs = load_corpus(TOY / "heldout.amr", TOY / "heldout.jsonl")
    gold = load_alignments(TOY / "heldout.gold-alignments.tsv", pairs)
    for p in pairs:
        p.alignment = gold[p.id]
    return pairs


@pytest.fixture()
def fig1_pair(train_pairs):
    return next(p for p in train_pairs if p.id == "s1")
