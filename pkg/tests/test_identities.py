import itertools

import pytest

from qfock.combinatorics import PartialPartition, enumerate_partial_partitions
from qfock.fock import FockVector, SpaceConfig
from qfock.identities import (
    ColoredVector,
    alternating_claim,
    claim_scan,
    color_map,
    inclusion_exclusion_sweep,
    inclusion_exclusion_verify,
    iota_prime_identity_scan,
    two_mode_scan,
    v_nk,
    w_jnk,
)
from qfock.scalars import EXACT, QPolynomial, ScalarMode

ONE = QPolynomial.one()
Q = QPolynomial.q()


def cfg_for(n, d=2):
    return SpaceConfig(d, 1, n, EXACT)


def word_vec(cfg, word):
    return FockVector.from_word(cfg, word)


def test_level_zero_is_bare_product():
    cfg = cfg_for(3)
    left = word_vec(cfg, (0, 1))
    right = word_vec(cfg, (1,))
    combo = w_jnk(left, right, 0)
    assert combo.canonical() == {((0, 1), (1,)): ONE}
    assert v_nk(left, right).same_combination(combo)


def test_single_contraction_scalar_example():
    cfg = cfg_for(2, d=1)
    e1 = word_vec(cfg, (0,))
    combo = w_jnk(e1, e1, 1)
    assert combo.canonical() == {((), ()): ONE}


def test_level_above_either_side_is_empty():
    cfg = cfg_for(3)
    left = word_vec(cfg, (0, 1))
    right = word_vec(cfg, (0,))
    assert w_jnk(left, right, 2).canonical() == {}
    assert w_jnk(left, right, 2, "rho-sum").canonical() == {}


def test_subset_terms_by_hand():
    # left (0,1), right (0,1), one contraction: only matching letters pair up
    cfg = cfg_for(4)
    combo = w_jnk(word_vec(cfg, (0, 1)), word_vec(cfg, (0, 1)), 1)
    assert combo.canonical() == {((1,), (1,)): Q, ((0,), (0,)): Q}
    rho = w_jnk(word_vec(cfg, (0, 1)), word_vec(cfg, (0, 1)), 1, "rho-sum")
    assert combo.same_combination(rho)


def test_w_jnk_input_validation():
    cfg = cfg_for(2)
    v = word_vec(cfg, (0,))
    with pytest.raises(ValueError):
        w_jnk(v, v, -1)
    with pytest.raises(ValueError):
        w_jnk(v, v, 0, "diagonal-sum")
    mixed = v + FockVector.vacuum(cfg)
    with pytest.raises(ValueError):
        w_jnk(mixed, v, 0)
    float_cfg = SpaceConfig(2, 1, 2, ScalarMode.at(0.5))
    fv = FockVector.from_word(float_cfg, (0,))
    with pytest.raises(ValueError):
        w_jnk(fv, fv, 0)


def test_two_mode_scan_small():
    report = two_mode_scan(n_max=4, d=2)
    assert report.passed
    assert report.cases > 200


def test_two_mode_scan_fault_hook():
    report = two_mode_scan(n_max=2, d=1, fault=3)
    assert len(report.violations) == 1


def test_color_term_counts():
    from math import comb, factorial

    cfg = cfg_for(6)
    for n in range(7):
        word = tuple(i % 2 for i in range(n))
        xi = word_vec(cfg, word)
        for j in range(n + 1):
            assert color_map(xi, j, "arbitrary").term_count() == comb(n, j) * factorial(j)
            assert color_map(xi, j, "decreasing").term_count() == comb(n, j)


def test_color_zero_level_keeps_word():
    cfg = cfg_for(3)
    colored = color_map(word_vec(cfg, (0, 1, 0)), 0)
    assert colored.coeffs == {(0, 1, 0): ONE}
    assert colored.color_bound == 0


def test_single_color_modes_agree():
    cfg = cfg_for(2)
    xi = word_vec(cfg, (0, 1))
    arbitrary = color_map(xi, 1, "arbitrary")
    decreasing = color_map(xi, 1, "decreasing")
    assert arbitrary.coeffs == decreasing.coeffs
    assert decreasing.term_count() == 2


def test_decreasing_color_assignment():
    # ascending positions receive ascending colors
    cfg = SpaceConfig(3, 1, 3, EXACT)
    colored = color_map(word_vec(cfg, (0, 1, 2)), 2, "decreasing")
    expected = {
        (1 * 3 + 0, 2 * 3 + 1, 2),
        (1 * 3 + 0, 1, 2 * 3 + 2),
        (0, 1 * 3 + 1, 2 * 3 + 2),
    }
    assert set(colored.coeffs) == expected
    assert all(c == ONE for c in colored.coeffs.values())


def test_color_validation():
    cfg = cfg_for(2)
    xi = word_vec(cfg, (0, 1))
    with pytest.raises(ValueError):
        color_map(xi, 3)
    with pytest.raises(ValueError):
        color_map(xi, 1, "increasing")
    doubled = SpaceConfig(2, 2, 2, EXACT)
    with pytest.raises(ValueError):
        color_map(FockVector.from_word(doubled, (0,)), 1)
    with pytest.raises(ValueError):
        ColoredVector(d=2, color_bound=0, coeffs={(5,): ONE})


def test_inclusion_exclusion_two_term_case():
    report = inclusion_exclusion_verify(2, 1, 1)
    assert report.passed and report.cases == 1


def test_inclusion_exclusion_trivial_split():
    assert inclusion_exclusion_verify(1, 0, 2).passed
    assert inclusion_exclusion_verify(3, 0, 2).passed
    assert inclusion_exclusion_verify(3, 3, 2).passed


def test_inclusion_exclusion_sixteen_words():
    report = inclusion_exclusion_verify(4, 2, 2)
    assert report.passed and report.cases == 16


def test_inclusion_exclusion_sweep_and_fault():
    assert inclusion_exclusion_sweep(n_max=3, d=2).passed
    assert not inclusion_exclusion_sweep(n_max=3, d=2, fault=0).passed
    assert not inclusion_exclusion_verify(3, 1, 2, fault=11).passed
    with pytest.raises(ValueError):
        inclusion_exclusion_verify(2, 3, 1)


def test_claim_empty_partition_is_one():
    pi = PartialPartition(4, 2, ())
    assert alternating_claim(pi) == ONE
    assert alternating_claim(pi, "prime-prime") == ONE


def test_claim_single_pair_vanishes_both_readings():
    for n, k, pair in [(2, 1, (1, 2)), (5, 2, (2, 4)), (6, 3, (1, 6))]:
        pi = PartialPartition(n, k, (pair,))
        assert alternating_claim(pi).is_zero()
        assert alternating_claim(pi, "prime-prime").is_zero()


def test_claim_readings_diverge_on_nested_pairs():
    # the smallest case separating the two exponent conventions
    pi = PartialPartition(4, 2, ((1, 4), (2, 3)))
    assert alternating_claim(pi, "prime-plain").is_zero()
    assert str(alternating_claim(pi, "prime-prime")) == "-1 + q^2"


def test_claim_three_pair_example():
    pi = PartialPartition(8, 4, ((1, 6), (2, 5), (4, 7)))
    assert alternating_claim(pi).is_zero()


def test_claim_validation():
    with pytest.raises(ValueError):
        alternating_claim(PartialPartition(4, 2, ((1, 2),)))
    with pytest.raises(ValueError):
        alternating_claim(PartialPartition(4, 2, ((1, 3),)), "plain-plain")


def test_claim_scan_smallish():
    report = claim_scan(n_max=6, m_max=2)
    assert report.passed


def test_claim_scan_records_other_reading():
    report = claim_scan(n_max=4, m_max=2, reading="prime-prime")
    assert not report.passed
    first = report.notes["first_nonzero"]
    assert first["n"] == 4 and first["pairs"] == ((1, 4), (2, 3))
    assert first["value"] == "-1 + q^2"


def test_iota_scan():
    report = iota_prime_identity_scan(6)
    assert report.passed and report.cases == 160
    assert not iota_prime_identity_scan(6, fault=5).passed
    with pytest.raises(ValueError):
        iota_prime_identity_scan(11)


def test_apply_to_vacuum_materializes_products():
    cfg = cfg_for(4)
    left = word_vec(cfg, (0, 1))
    right = word_vec(cfg, (0,))
    combo = v_nk(left, right)
    out = combo.apply_to_vacuum(cfg)
    # W(0,1) W(0) vacuum = W(0,1) e_1: creation plus one contraction
    assert out.coeffs[(0, 1, 0)] == ONE
    assert (0,) in out.coeffs or (1,) in out.coeffs
