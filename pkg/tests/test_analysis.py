import math

import numpy as np
import pytest

from qfock.analysis import (
    DecayReport,
    block_decay,
    deformation_block_check,
    deformation_identity,
    deformation_right_side,
    deformation_scan,
    dilation_check,
    dilation_operator,
    gram_factors,
    ou_semigroup,
    ou_tail,
    phi_hk_apply,
    phi_hk_check,
    phi_hk_operator,
    phi_schatten_closed_form,
    rotation_matrix,
    schatten_norm,
    schatten_term_ratio,
    schatten_threshold,
)
from qfock.fock import BlockOperator, FockVector, SpaceConfig
from qfock.scalars import EXACT, ScalarMode


def doubled(d, n, q=0.5):
    return SpaceConfig(d, 2, n, ScalarMode.at(q))


def single(d, n, q=0.5):
    return SpaceConfig(d, 1, n, ScalarMode.at(q))


def test_rotation_matrix_is_orthogonal():
    for t in (0.0, 0.1, 0.7):
        r = rotation_matrix(t, 2)
        assert np.allclose(r @ r.T, np.eye(4), atol=1e-14)
        # first-copy column mixes e^-t into the copy and the rest upward
        assert r[0, 0] == pytest.approx(math.exp(-t))
        assert r[2, 0] == pytest.approx(math.sqrt(1 - math.exp(-2 * t)))


def test_dilation_compresses_to_semigroup():
    for d in (1, 2):
        cfg = doubled(d, 4)
        for t in (0.1, 0.5):
            assert dilation_check(t, cfg) < 1e-12


def test_semigroup_eigenvalues():
    cfg = single(2, 3)
    op = ou_semigroup(0.4, cfg)
    for n in range(4):
        assert np.allclose(op.block(n, n), math.exp(-0.4 * n) * np.eye(cfg.dim(n)))
    with pytest.raises(ValueError):
        ou_semigroup(-0.1, cfg)


def test_phi_check_small_deviation():
    for q in (0.5, -0.5, 0.9, -0.9):
        cfg = doubled(2, 4, q)
        assert phi_hk_check((1.0, 0.0), (1.0, 0.0), cfg) < 1e-10
        assert phi_hk_check((1.0, 0.0), (0.5, 0.5), cfg) < 1e-10


def test_phi_orthogonal_arguments_kill_the_map():
    cfg = doubled(2, 4)
    v = FockVector.from_word(cfg, (0, 1))
    assert phi_hk_apply((1.0, 0.0), (0.0, 1.0), v).is_zero()


def test_phi_input_validation():
    cfg = doubled(2, 3)
    with pytest.raises(ValueError):
        phi_hk_apply((1.0, 0.0), (1.0, 0.0), FockVector.from_word(cfg, (2,)))
    with pytest.raises(ValueError):
        phi_hk_check((1.0,), (1.0, 0.0), cfg)
    with pytest.raises(ValueError):
        phi_hk_check((1.0, 0.0), (1.0, 0.0), single(2, 3))
    exact_doubled = SpaceConfig(2, 2, 3, EXACT)
    with pytest.raises(ValueError):
        phi_hk_check((1.0, 0.0), (1.0, 0.0), exact_doubled)


def test_phi_operator_routes_agree():
    cfg = single(2, 3)
    vec = phi_hk_operator((1.0, 0.0), (0.7, 0.3), cfg, route="vector")
    diag = phi_hk_operator((1.0, 0.0), (0.7, 0.3), cfg, route="diagonal")
    for n in range(4):
        assert np.abs(vec.block(n, n) - diag.block(n, n)).max() < 1e-12
    with pytest.raises(ValueError):
        phi_hk_operator((1.0, 0.0), (1.0, 0.0), doubled(2, 3))
    with pytest.raises(ValueError):
        phi_hk_operator((1.0, 0.0), (1.0, 0.0), cfg, route="spectral")


def test_schatten_identity_block():
    cfg = single(2, 3)
    op = BlockOperator(cfg, {(2, 2): np.eye(4)})
    report = schatten_norm(op, 2.0, cfg)
    assert report.norm == pytest.approx(2.0)


def test_schatten_matches_closed_form():
    cfg = single(2, 6)
    hk = 0.8
    op = phi_hk_operator((1.0, 0.0), (hk, 0.0), cfg, route="diagonal")
    for p in (1.0, 2.0, 3.5):
        report = schatten_norm(op, p, cfg)
        closed = phi_schatten_closed_form(0.5, 2, p, hk, 6)
        assert abs(report.norm - closed) <= 1e-10 * closed
        assert all(b >= a - 1e-15 for a, b in zip(report.partial_norms, report.partial_norms[1:]))


def test_schatten_partial_sums_approach_geometric_limit():
    # q = 1/2, d = 2, p = 2: sum (1/2)^n -> 2, so the norm tends to sqrt(2)
    cfg = single(2, 6)
    op = phi_hk_operator((1.0, 0.0), (1.0, 0.0), cfg, route="diagonal")
    report = schatten_norm(op, 2.0, cfg)
    assert report.norm < math.sqrt(2.0)
    assert math.sqrt(2.0) - report.norm < 0.01


def test_schatten_rejects_bad_input():
    cfg = single(2, 2)
    op = BlockOperator(cfg, {(1, 0): np.ones((2, 1))})
    with pytest.raises(ValueError):
        schatten_norm(op, 2.0, cfg)
    with pytest.raises(ValueError):
        schatten_norm(BlockOperator.identity(cfg), 0.5, cfg)


def test_gram_factor_floor_fails_loudly():
    cfg = single(2, 2, q=1 - 1e-13)
    with pytest.raises(ValueError):
        gram_factors(2, cfg)


def test_threshold_values():
    assert schatten_threshold(0.5, 2) == pytest.approx(1.0)
    assert schatten_threshold(0.5, 1) == 0.0
    assert schatten_threshold(0.0, 7) == 0.0
    with pytest.raises(ValueError):
        schatten_threshold(1.0, 2)
    with pytest.raises(ValueError):
        schatten_threshold(0.5, 0)


def test_term_ratio_brackets_threshold():
    for q, d in ((0.5, 2), (0.8, 3)):
        star = schatten_threshold(q, d)
        assert schatten_term_ratio(q, d, 1.1 * star) < 1.0
        assert schatten_term_ratio(q, d, 0.9 * star) > 1.0


def test_block_decay_single_tilde_letter():
    cfg = doubled(1, 6)
    h_tilde = FockVector.from_word(cfg, (1,))
    report = block_decay(h_tilde, h_tilde, cfg)
    assert report.band_width == 2
    assert report.max_offband == 0.0
    for j, norm in report.diagonal():
        assert norm == pytest.approx(0.5 ** j)
    assert report.rate == pytest.approx(math.log(0.5), rel=1e-6)


def test_block_decay_two_tilde_letters():
    cfg = doubled(1, 8)
    xi = FockVector.from_word(cfg, (1, 1))
    report = block_decay(xi, xi, cfg)
    assert report.max_offband == 0.0
    assert abs(report.rate - 2 * math.log(0.5)) < 0.1 * abs(2 * math.log(0.5))


def test_block_decay_band_structure():
    cfg = doubled(1, 6)
    xi = FockVector.from_word(cfg, (1, 0))
    eta = FockVector.from_word(cfg, (1,))
    report = block_decay(xi, eta, cfg)
    assert report.band_width == 3
    assert report.max_offband == 0.0
    assert all(abs(i - j) <= 3 for i, j in report.block_norms)


def test_block_decay_validation():
    cfg = doubled(1, 4)
    with pytest.raises(ValueError):
        block_decay(FockVector.from_word(cfg, (1,)), FockVector.from_word(cfg, (0,)), cfg)
    mixed = FockVector.from_word(cfg, (1,)) + FockVector.from_word(cfg, (1, 1))
    with pytest.raises(ValueError):
        block_decay(mixed, FockVector.from_word(cfg, (1,)), cfg)


def test_deformation_identity_rotation_column():
    cfg = doubled(1, 2)
    h = FockVector.from_word(cfg, (0,))
    for t in (0.1, 0.4):
        left, right = deformation_identity(1, 1, t, h, h)
        assert left == pytest.approx(1 - math.exp(-2 * t))
        assert right == pytest.approx(1 - math.exp(-2 * t))


def test_deformation_identity_degree_two():
    cfg = doubled(2, 2)
    words = [(a, b) for a in range(2) for b in range(2)]
    for wx in words:
        for wy in words:
            x, y = FockVector.from_word(cfg, wx), FockVector.from_word(cfg, wy)
            for kcut in (1, 2):
                left, right = deformation_identity(2, kcut, 0.3, x, y)
                assert abs(left - right) < 1e-10


def test_deformation_identity_at_zero_time():
    cfg = doubled(1, 2)
    x = FockVector.from_word(cfg, (0, 0))
    left, right = deformation_identity(2, 1, 0.0, x, x)
    assert left == pytest.approx(0.0, abs=1e-14)
    assert right == pytest.approx(0.0, abs=1e-14)


def test_deformation_identity_validation():
    cfg = doubled(1, 2)
    x = FockVector.from_word(cfg, (0,))
    with pytest.raises(ValueError):
        deformation_identity(1, 2, 0.1, x, x)
    with pytest.raises(ValueError):
        deformation_identity(2, 1, 0.1, x, x)
    with pytest.raises(ValueError):
        deformation_identity(1, 1, 0.1, FockVector.from_word(cfg, (1,)), x)


def test_deformation_block_check_all_pairs():
    cfg = doubled(2, 3)
    for n in (1, 2, 3):
        for kcut in range(1, n + 1):
            for t in (0.05, 0.2):
                assert deformation_block_check(n, kcut, t, cfg) < 1e-12


def test_deformation_scan_first_degree_ratio():
    cfg = doubled(1, 3)
    grid = [0.05, 0.25, 0.45]
    report = deformation_scan(1, 3, grid, cfg)
    n, t, left, right, ratio = report.rows[0]
    assert (n, t) == (1, 0.05)
    expected = math.sqrt(2 * (1 - math.exp(-t)) / (1 - math.exp(-2 * t)))
    assert ratio == pytest.approx(expected)
    assert report.crosscheck_dev < 1e-10
    assert math.isfinite(report.max_ratio)


def test_deformation_scan_second_cut():
    cfg = doubled(1, 4)
    grid = [i * 0.25 / 10 for i in range(1, 10)]
    report = deformation_scan(2, 4, grid, cfg)
    assert report.max_ratio < 100
    assert report.crosscheck_dev < 1e-10


def test_deformation_scan_validation():
    cfg = doubled(1, 3)
    with pytest.raises(ValueError):
        deformation_scan(1, 0, [0.1], cfg)
    with pytest.raises(ValueError):
        deformation_scan(1, 2, [0.6], cfg)
    with pytest.raises(ValueError):
        deformation_scan(0, 2, [0.1], cfg)
    with pytest.raises(ValueError):
        deformation_scan(1, 5, [0.1], cfg)


def test_ou_tail_values():
    cfg = doubled(1, 3)
    x = FockVector.from_word(cfg, (0, 1))
    t = 0.35
    assert ou_tail(x, t, 1) == pytest.approx(math.exp(-2 * t))
    assert ou_tail(x, t, 2) == 0.0
    assert ou_tail(x, 0.0, 3) == 0.0
    with pytest.raises(ValueError):
        ou_tail(x, -1.0, 1)
    exact_cfg = SpaceConfig(1, 2, 2, EXACT)
    with pytest.raises(ValueError):
        ou_tail(FockVector.from_word(exact_cfg, (0,)), 0.1, 0)
