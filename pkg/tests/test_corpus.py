import pytest

from amrkit.corpus import (
    AnnotatedSentence,
    CorpusError,
    Token,
    annotation_line,
    induced_fragment,
    load_alignments,
    load_annotations,
    load_corpus,
    load_embeddings,
    load_propbank,
    save_annotations,
)

from conftest import TOY, DATA


def test_load_toy_corpus_fig1(train_pairs):
    s1 = next(p for p in train_pairs if p.id == "s1")
    assert len(s1.sentence) == 8
    assert [t.text for t in s1.sentence.tokens[:3]] == ["He", "gleefully", "ran"]
    assert s1.sentence.tokens[0].lower == "he"
    assert len(s1.graph) == 6


def test_load_corpus_empty_files(tmp_path):
    amr = tmp_path / "a.amr"
    ann = tmp_path / "a.jsonl"
    amr.write_text("")
    ann.write_text("")
    assert load_corpus(amr, ann) == []


def test_load_corpus_orphan_id_is_error(tmp_path):
    amr = tmp_path / "a.amr"
    ann = tmp_path / "a.jsonl"
    amr.write_text("# ::id s1\n(d / dog)\n")
    ann.write_text(
        '{"id":"s1","tokens":[{"text":"dog","pos":"NN","lemma":"dog","ner":"O"}],'
        '"deps":[[-1,0,"root"]],"coref":[]}\n'
        '{"id":"s2","tokens":[{"text":"cat","pos":"NN","lemma":"cat","ner":"O"}],'
        '"deps":[[-1,0,"root"]],"coref":[]}\n'
    )
    with pytest.raises(CorpusError, match="s2"):
        load_corpus(amr, ann)


def test_annotations_round_trip_is_byte_identical(tmp_path):
    sentences = load_annotations(TOY / "train.jsonl")
    out = tmp_path / "out.jsonl"
    save_annotations(sentences, out)
    assert out.read_bytes() == (TOY / "train.jsonl").read_bytes()


def test_annotation_line_is_canonical():
    sent = AnnotatedSentence(
        "x",
        [Token("Hi", "UH", "hi", "O", 0)],
        [(-1, 0, "root")],
        [],
    )
    line = annotation_line(sent)
    assert line == (
        '{"id":"x","tokens":[{"text":"Hi","pos":"UH","lemma":"hi","ner":"O"}],'
        '"deps":[[-1,0,"root"]],"coref":[]}'
    )


def test_dependency_tree_validation():
    toks = [Token("a", "DT", "a", "O", 0), Token("b", "NN", "b", "O", 1)]
    with pytest.raises(CorpusError, match="no dependency head"):
        AnnotatedSentence("x", toks, [(-1, 0, "root")], [])
    with pytest.raises(CorpusError, match="more than one"):
        AnnotatedSentence("x", toks, [(-1, 0, "root"), (0, 1, "det"), (1, 1, "det")], [])
    with pytest.raises(CorpusError, match="cycle"):
        AnnotatedSentence("x", toks, [(1, 0, "det"), (0, 1, "det")], [])
    with pytest.raises(CorpusError, match="out of range"):
        AnnotatedSentence("x", toks, [(-1, 0, "root"), (5, 1, "det")], [])


def test_sentence_helpers(train_pairs):
    s1 = next(p for p in train_pairs if p.id == "s1").sentence
    assert s1.head_of(0) == (2, "nsubj")
    assert s1.depth(2) == 0
    assert s1.depth(0) == 1
    assert (5, "prep_to") in [(d, r) for d, r in s1.children_of(2)]
    assert s1.in_coref(0) and s1.in_coref(4) and not s1.in_coref(2)


def test_load_alignments_round_trip(train_pairs):
    gold = {p.id: p.alignment for p in train_pairs}
    s1 = gold["s1"]
    assert s1["r"] == 2 and s1["h"] == 0 and s1["_0"] == 6


def test_load_alignments_duplicate_row(tmp_path, train_pairs):
    path = tmp_path / "a.tsv"
    path.write_text("s1\tr\t2\ns1\tr\t2\n")
    with pytest.raises(CorpusError, match="duplicate"):
        load_alignments(path, train_pairs)


def test_load_alignments_unknown_node(tmp_path, train_pairs):
    path = tmp_path / "a.tsv"
    path.write_text("s1\tzz\t2\n")
    with pytest.raises(CorpusError, match="unknown node"):
        load_alignments(path, train_pairs)


def test_load_alignments_out_of_range(tmp_path, train_pairs):
    path = tmp_path / "a.tsv"
    path.write_text("s1\tr\t99\n")
    with pytest.raises(CorpusError, match="out of range"):
        load_alignments(path, train_pairs)


def test_load_alignments_requires_totality(tmp_path, train_pairs):
    path = tmp_path / "a.tsv"
    path.write_text("s1\tr\t2\n")
    with pytest.raises(CorpusError, match="unaligned"):
        load_alignments(path, train_pairs)


def test_load_alignments_empty_file(tmp_path, train_pairs):
    path = tmp_path / "a.tsv"
    path.write_text("")
    assert load_alignments(path, train_pairs) == {}


def test_load_propbank():
    table = load_propbank(DATA / "propbank-frames.txt")
    assert ("run-01", 620) in table["run"]
    assert ("run-02", 80) in table["run"]


def test_load_propbank_rejects_bad_frame(tmp_path):
    path = tmp_path / "pb.txt"
    path.write_text("run walk-01 5\n")
    with pytest.raises(CorpusError, match="does not match"):
        load_propbank(path)


def test_load_embeddings_dimension_check(tmp_path):
    path = tmp_path / "emb.txt"
    path.write_text("dog 1.0 2.0\ncat 1.0\n")
    with pytest.raises(CorpusError, match="dimension"):
        load_embeddings(path)


def test_induced_fragment_head_is_attachment_point(train_pairs):
    s2 = next(p for p in train_pairs if p.id == "s2")
    frag = induced_fragment(s2, (1, 2))  # sailor
    assert frag.head_title == "person"
    assert len(frag.graph) == 2


def test_induced_fragment_empty_span(train_pairs):
    s2 = next(p for p in train_pairs if p.id == "s2")
    assert induced_fragment(s2, (0, 1)) is None  # "The"


def _tiny_pair(alignment):
    from amrkit.corpus import TrainingPair
    from amrkit.graph import make_graph

    toks = [Token(w, "NN", w, "O", i) for i, w in enumerate(["a", "b", "c"])]
    sent = AnnotatedSentence("t", toks, [(-1, 0, "root"), (0, 1, "x"), (0, 2, "x")], [])
    graph = make_graph(
        [("r", "run-01"), ("a", "ant"), ("b", "bee")],
        [("r", "ARG0", "a"), ("r", "ARG1", "b")],
        "r",
    )
    return TrainingPair(sent, graph, alignment)


def test_induced_fragment_disconnected_multi_token_rejected():
    pair = _tiny_pair({"a": 0, "b": 1, "r": 2})
    # ant and bee share no edge, so the two-token span is not a fragment
    assert induced_fragment(pair, (0, 2)) is None
    assert induced_fragment(pair, (0, 1)).head_title == "ant"


def test_induced_fragment_single_token_keeps_largest_component():
    pair = _tiny_pair({"a": 0, "b": 0, "r": 1})
    frag = induced_fragment(pair, (0, 1))
    assert len(frag.graph) == 1  # one of the two disconnected nodes survives
