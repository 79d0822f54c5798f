import itertools
from math import comb, factorial

import pytest

from qfock.combinatorics import (
    PairPartition,
    PartialPartition,
    Permutation,
    SubsetCoset,
    coset_data,
    coset_word,
    crossings,
    enumerate_pair_partitions,
    enumerate_partial_partitions,
    inversions,
    iota_prime,
    iota_prime_closed_form,
    max_pairs,
    partition_triple,
)

FIG_A = PartialPartition(8, 4, ((2, 5), (4, 7)))
FIG_B = PartialPartition(8, 4, ((1, 6), (2, 5)))
FIG_C = PartialPartition(8, 4, ((1, 6), (2, 5), (4, 7)))


def test_inversions():
    assert inversions(Permutation.identity(5)) == 0
    assert inversions((2, 1)) == 1
    assert inversions((1, 3, 2, 4)) == 1
    assert inversions((3, 1, 2, 4)) == 2


def test_permutation_validation():
    with pytest.raises(ValueError):
        Permutation((1, 3))
    with pytest.raises(ValueError):
        Permutation((1, 1, 2))


def test_coset_word_orientations():
    assert coset_word(SubsetCoset(4, (3, 4))).images == (1, 2, 3, 4)
    assert coset_word(SubsetCoset(4, (2, 4))).images == (1, 3, 2, 4)
    assert coset_word(SubsetCoset(4, (1, 2, 4))).images == (3, 1, 2, 4)
    assert coset_word(SubsetCoset(4, (1, 3)), chosen_first=True).images == (1, 3, 2, 4)
    assert coset_data(SubsetCoset(4, (2, 4)))[1] == 1
    assert coset_data(SubsetCoset(4, (1, 2, 4)))[1] == 2
    assert coset_data(SubsetCoset(4, (1, 3)), chosen_first=True)[1] == 1
    assert coset_data(SubsetCoset(4, (1, 2, 3)), chosen_first=True)[1] == 0


def test_coset_representative_is_minimal():
    """The two-ascending-runs word minimizes inversions over its coset."""
    for n in range(1, 7):
        for size in range(n + 1):
            for chosen in itertools.combinations(range(1, n + 1), size):
                sub = SubsetCoset(n, chosen)
                for chosen_first in (False, True):
                    rep, count = coset_data(sub, chosen_first)
                    first = set(sub.chosen if chosen_first else sub.complement)
                    best = min(
                        inversions(w)
                        for w in itertools.permutations(range(1, n + 1))
                        if set(w[: len(first)]) == first
                    )
                    assert count == best
                    assert set(rep.images[: len(first)]) == first


def test_crossings_on_figures():
    assert crossings(FIG_A) == 3
    assert crossings(FIG_B) == 4
    assert crossings(PartialPartition(5, 2, ())) == 0


def test_crossings_multiset_m4():
    counts = sorted(crossings(p) for p in enumerate_pair_partitions(4))
    assert counts == [0, 0, 1]


def test_pair_partition_counts():
    for n in range(1, 6):
        seen = list(enumerate_pair_partitions(2 * n))
        assert len(seen) == len(set(seen))
        double_fact = 1
        for i in range(1, 2 * n, 2):
            double_fact *= i
        assert len(seen) == double_fact
    assert list(enumerate_pair_partitions(3)) == []
    assert len(list(enumerate_pair_partitions(2))) == 1


def test_iota_prime_on_figures():
    assert iota_prime(FIG_B) == 6
    assert iota_prime(FIG_A) == 3
    assert iota_prime(FIG_C) == 6
    assert iota_prime(PartialPartition(8, 4, ())) == 0


def test_iota_prime_rejects_block_violation():
    with pytest.raises(ValueError):
        iota_prime(PartialPartition(4, 2, ((1, 2),)))


def test_partition_triple_on_figures():
    a, b, sigma = partition_triple(FIG_A)
    assert a.chosen == (2, 4)
    assert b.chosen == (1, 3)
    assert sigma.images == (1, 2)
    assert coset_data(a)[1] == 1
    assert coset_data(b, chosen_first=True)[1] == 1
    assert iota_prime_closed_form(FIG_A) == 3

    a, b, sigma = partition_triple(FIG_C)
    assert a.chosen == (1, 2, 4)
    assert coset_data(a)[1] == 2
    assert coset_data(b, chosen_first=True)[1] == 0
    assert inversions(sigma) == 1
    assert iota_prime_closed_form(FIG_C) == 2 + 0 + 1 + comb(3, 2)


def test_partition_triple_empty():
    a, b, sigma = partition_triple(PartialPartition(6, 2, ()))
    assert a.chosen == () and b.chosen == () and sigma.images == ()
    assert iota_prime_closed_form(PartialPartition(6, 2, ())) == 0


def test_partial_partition_counts():
    for n in range(0, 9):
        for k in range(0, n + 1):
            for j in range(0, max_pairs(n, k) + 1):
                seen = list(enumerate_partial_partitions(n, k, j))
                assert len(seen) == comb(n - k, j) * comb(k, j) * factorial(j)
                assert len(set(seen)) == len(seen)


def test_enumeration_contains_figure_partition():
    assert FIG_A in list(enumerate_partial_partitions(8, 4, 2))


def test_enumeration_is_sorted_and_validated():
    pairs_seen = [p.pairs for p in enumerate_partial_partitions(6, 3, 2)]
    assert pairs_seen == sorted(pairs_seen)
    with pytest.raises(ValueError):
        list(enumerate_partial_partitions(4, 2, 3))


def test_closed_form_matches_recursion_exhaustively():
    """iota' = iota(A) + iota(B) + inv(sigma) + C(j,2) over every block partition."""
    checked = 0
    for n in range(0, 7):
        for k in range(0, n + 1):
            for j in range(0, max_pairs(n, k) + 1):
                for rho in enumerate_partial_partitions(n, k, j):
                    assert iota_prime(rho) == iota_prime_closed_form(rho)
                    checked += 1
    assert checked > 150


def test_single_pair_iota_prime_is_crossings():
    for n in range(2, 8):
        for k in range(1, n):
            for rho in enumerate_partial_partitions(n, k, 1):
                assert iota_prime(rho) == crossings(rho)


def test_singletons_derived():
    assert FIG_A.singletons == (1, 3, 6, 8)
    assert PairPartition(4, ((3, 4), (1, 2))).pairs == ((1, 2), (3, 4))
    with pytest.raises(ValueError):
        PairPartition(4, ((1, 2),))
    with pytest.raises(ValueError):
        PartialPartition(4, 2, ((1, 3), (3, 4)))
