import io
import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nonprojdp.errors import ConlluParseError
from nonprojdp.transitions import DepTree, all_trees
from nonprojdp.treebank import (
    MalformedTreeWarning,
    corpus_stats,
    is_nonprojective,
    parse_conllu,
    read_conllu,
    write_conllu_heads,
)


def tok(i, head, form="w"):
    return "\t".join([str(i), form, "_", "_", "_", "_", str(head), "dep", "_", "_"])


def test_two_token_block():
    text = "# sent_id = a\n" + tok(1, 2) + "\n" + tok(2, 0) + "\n\n"
    [(sent, tree)] = read_conllu(io.StringIO(text))
    assert sent.n == 2
    assert tree == DepTree((2, 0))


def test_bytes_stream():
    text = (tok(1, 0) + "\n\n").encode()
    [(_, tree)] = read_conllu(io.BytesIO(text))
    assert tree == DepTree((0,))


def test_multiword_and_empty_nodes_skipped():
    mwt = "3-4\tdel\t_\t_\t_\t_\t_\t_\t_\t_"
    empty_node = "4.1\tx\t_\t_\t_\t_\t_\t_\t_\t_"
    lines = [tok(1, 2), tok(2, 0), mwt, tok(3, 4), tok(4, 2), empty_node]
    [(_, tree)] = read_conllu(io.StringIO("\n".join(lines) + "\n"))
    assert tree == DepTree((2, 0, 4, 2))


def test_cycle_excluded_with_warning():
    text = tok(1, 2) + "\n" + tok(2, 1) + "\n\n" + tok(1, 0) + "\n"
    with pytest.warns(MalformedTreeWarning):
        doc = parse_conllu(io.StringIO(text))
    assert len(doc.sentences) == 1
    assert len(doc.excluded) == 1 and doc.excluded[0].line == 1


def test_out_of_range_and_missing_heads_excluded():
    text = tok(1, 5) + "\n\n" + tok(1, "_") + "\n\n"
    with pytest.warns(MalformedTreeWarning):
        doc = parse_conllu(io.StringIO(text))
    assert doc.sentences == [] and len(doc.excluded) == 2


def test_wrong_column_count_is_an_error():
    text = tok(1, 0) + "\n" + "2\tonly\tthree\n"
    with pytest.raises(ConlluParseError) as info:
        read_conllu(io.StringIO(text))
    assert info.value.line == 2


def test_roundtrip_ids_and_heads():
    trees = [DepTree((2, 0)), DepTree((3, 4, 0, 3)), DepTree((0,))]
    text = write_conllu_heads(trees)
    assert [t for _, t in read_conllu(io.StringIO(text))] == trees


@pytest.mark.parametrize(
    "heads, expected",
    [
        ((3, 4, 0, 3), True),
        ((0, 1), False),
        ((2, 0), False),
        ((0, 0, 0), False),
        ((3, 0, 2), True),
        ((2, 0, 2), False),
        ((0, 4, 1, 0), True),
    ],
)
def test_is_nonprojective(heads, expected):
    assert is_nonprojective(DepTree(heads)) is expected


def _crossing_pairs_brute(tree):
    # independent formulation: two arcs cross iff exactly one endpoint of one
    # lies strictly inside the other
    arcs = [(h, m) for m, h in enumerate(tree.heads, start=1)]
    for (h1, m1), (h2, m2) in itertools.combinations(arcs, 2):
        lo, hi = min(h1, m1), max(h1, m1)
        inside = [lo < x < hi for x in (h2, m2)]
        outside = [x < lo or x > hi for x in (h2, m2)]
        if (inside[0] and outside[1]) or (inside[1] and outside[0]):
            return True
    return False


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_is_nonprojective_matches_brute_force(n):
    for tree in all_trees(n):
        assert is_nonprojective(tree) == _crossing_pairs_brute(tree)


@given(st.sampled_from(all_trees(5)), st.randoms())
def test_crossing_test_ignores_arc_order(tree, rnd):
    arcs = list(tree.arcs())
    rnd.shuffle(arcs)
    assert is_nonprojective(DepTree.from_arcs(tree.n, arcs)) == is_nonprojective(tree)


def test_corpus_stats(tmp_path):
    empty = tmp_path / "empty.conllu"
    empty.write_text("")
    mixed = tmp_path / "mixed.conllu"
    mixed.write_text(write_conllu_heads([DepTree((2, 0)), DepTree((3, 4, 0, 3))]))
    broken = tmp_path / "broken.conllu"
    broken.write_text("1\tbad\n")
    stats = corpus_stats([empty, mixed, broken, tmp_path / "missing.conllu"])
    assert (stats.per_file[str(empty)].total, stats.per_file[str(empty)].nonprojective) == (0, 0)
    assert (stats.total_sentences, stats.nonprojective_sentences) == (2, 1)
    assert stats.percentage == 50.0
    assert stats.per_file[str(broken)].error is not None
    assert stats.per_file[str(tmp_path / "missing.conllu")].error is not None
