from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from codemix_stance.corpus import StanceLabel
from codemix_stance.features import FeatureDescriptor, FeatureSpace, to_matrix
from codemix_stance.selection import (
    ContingencyTable,
    apply_remap,
    chi_square_exact,
    chi_square_statistic,
    contingency_counts,
    rank_features,
    select_top_k,
    selection_report,
)

from oracles import chi2_oracle, random_binary, top_k_oracle

LABELS = list(StanceLabel)


def space_of(d):
    return FeatureSpace(tuple(FeatureDescriptor.word(f"f{j:03d}") for j in range(d)))


def test_hand_computed_table():
    # expected counts 10/3 (present row) and 20/3 (absent row) everywhere;
    # present row contributes 40/3 + 10/3 + 10/3 = 20, absent row 20/3 + 5/3 + 5/3 = 10
    table = ContingencyTable(((10, 0, 0), (0, 10, 10)))
    assert table.n == 30
    assert chi_square_exact(table) == 30
    assert chi_square_statistic(table) == 30.0


def test_independent_feature_scores_zero():
    assert chi_square_statistic(ContingencyTable(((4, 5, 6), (0, 0, 0)))) == 0
    assert chi_square_statistic(ContingencyTable(((0, 0, 0), (4, 5, 6)))) == 0
    assert chi_square_statistic(ContingencyTable(((2, 4, 6), (1, 2, 3)))) == 0


def test_negative_count_rejected():
    with pytest.raises(ValueError):
        ContingencyTable(((1, -1, 0), (0, 0, 0)))


def test_row_swap_symmetry():
    t = ((3, 1, 7), (2, 9, 4))
    assert chi_square_exact(ContingencyTable(t)) == chi_square_exact(ContingencyTable(t[::-1]))


def test_table_from_column():
    labels = [StanceLabel.FAVOR, StanceLabel.AGAINST, StanceLabel.NONE, StanceLabel.NONE]
    assert ContingencyTable.from_column([1, 0, 1, 0], labels).counts == ((1, 0, 1), (0, 1, 1))


def test_contingency_counts_margins():
    rng = np.random.default_rng(3)
    X = random_binary(rng, 50, 7)
    labels = [LABELS[i] for i in rng.integers(0, 3, 50)]
    counts = contingency_counts(X, labels)
    for j in range(7):
        assert counts[j].sum() == 50
        assert list(counts[j].sum(axis=0)) == [labels.count(lab) for lab in LABELS]


def test_brute_force_ranking_100x40():
    rng = np.random.default_rng(0)
    X = random_binary(rng, 100, 40)
    labels = [LABELS[i] for i in rng.integers(0, 3, 100)]
    space = space_of(40)
    reduced, remap = select_top_k(X, labels, space, k=10)
    expected, scores = top_k_oracle(X, labels, [d.key for d in space.descriptors], 10)
    assert [space.index[d.key] for d in reduced.descriptors] == expected
    assert remap == {old: new for new, old in enumerate(expected)}
    assert [s for _, s in rank_features(X, labels, space)][:10] == [scores[j] for j in expected]


def test_ties_break_on_key():
    X = np.array([[1, 1], [0, 0], [0, 0]], dtype=np.uint8)
    labels = [StanceLabel.FAVOR, StanceLabel.AGAINST, StanceLabel.NONE]
    space = FeatureSpace((FeatureDescriptor.word("b"), FeatureDescriptor.word("a")))
    assert [i for i, _ in rank_features(X, labels, space)] == [1, 0]


def test_k_zero_and_k_exceeding():
    rng = np.random.default_rng(1)
    X = random_binary(rng, 20, 5)
    labels = [LABELS[i % 3] for i in range(20)]
    space = space_of(5)
    empty, remap = select_top_k(X, labels, space, k=0)
    assert len(empty) == 0 and remap == {}
    full, remap = select_top_k(X, labels, space, k=500)
    assert set(full.descriptors) == set(space.descriptors)
    assert sorted(remap) == list(range(5))
    # keeping everything and remapping reproduces the columns
    Xr = apply_remap(X, remap)
    for old, new in remap.items():
        assert np.array_equal(Xr[:, new], X[:, old])


def test_length_mismatch():
    with pytest.raises(ValueError):
        select_top_k(np.zeros((3, 2), dtype=np.uint8), [StanceLabel.FAVOR], space_of(2))


def test_feature_vectors_accepted():
    rng = np.random.default_rng(2)
    X = random_binary(rng, 30, 6)
    labels = [LABELS[i % 3] for i in range(30)]
    space = space_of(6)
    from codemix_stance.features import FeatureVector

    vecs = [FeatureVector(tuple(np.flatnonzero(r).tolist()), 6) for r in X]
    assert np.array_equal(to_matrix(vecs), X)
    assert select_top_k(vecs, labels, space, 3) == select_top_k(X, labels, space, 3)


def test_per_class_max_variant():
    X = np.array([[1], [0], [0], [0]], dtype=np.uint8)
    labels = [StanceLabel.FAVOR, StanceLabel.FAVOR, StanceLabel.AGAINST, StanceLabel.NONE]
    (_, score), = rank_features(X, labels, space_of(1), "per-class-max")
    # best 2x2 is FAVOR vs rest: present (1,0), absent (1,2), n=4.
    # expected present row (1/2, 1/2), absent row (3/2, 3/2): 1/2 + 1/2 + 1/6 + 1/6;
    # AGAINST and NONE vs rest give 4/9 each
    assert score == Fraction(4, 3)
    with pytest.raises(ValueError):
        rank_features(X, labels, space_of(1), "mutual-information")


def test_selection_report_format():
    table = ((1, 0, 0), (0, 1, 1))
    X = np.array([[1], [0], [0]], dtype=np.uint8)
    labels = [StanceLabel.FAVOR, StanceLabel.AGAINST, StanceLabel.NONE]
    report = selection_report(rank_features(X, labels, space_of(1)), space_of(1), 1)
    assert report.splitlines()[1] == f"1\t{float(chi_square_exact(ContingencyTable(table))):.6f}\tword:f000"


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 60), st.integers(1, 12))
def test_ranking_matches_oracle(seed, n, d):
    rng = np.random.default_rng(seed)
    X = random_binary(rng, n, d, density=rng.uniform(0.05, 0.9))
    labels = [LABELS[i] for i in rng.integers(0, 3, n)]
    space = space_of(d)
    got = rank_features(X, labels, space)
    expected, scores = top_k_oracle(X, labels, [x.key for x in space.descriptors], d)
    assert [i for i, _ in got] == expected
    assert all(s == scores[i] for i, s in got)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_permutation_invariance(seed):
    rng = np.random.default_rng(seed)
    X = random_binary(rng, 40, 10)
    labels = [LABELS[i] for i in rng.integers(0, 3, 40)]
    perm = rng.permutation(40)
    space = space_of(10)
    assert select_top_k(X, labels, space, 4) == select_top_k(X[perm], [labels[i] for i in perm], space, 4)
