"""Numeric estimates on the truncated space at a fixed q in (-1, 1).

Covers the two-sided multiplier x -> E(s(h~) x s(k~)) and its diagonal
form, Schatten norms taken in the q-geometry (blocks conjugated by Gram
square roots before the SVD), band structure and decay of Wick-pair
multipliers, the rotation dilation of the Ornstein-Uhlenbeck semigroup,
and the deformation inner-product identity with its ratio scan.

Operators from the ambient doubled algebra act on vectors through the
word calculus: x W(eta) applied to the vacuum is W(x-word) eta, and the
conditional expectation onto the single-copy algebra is the restriction
to words without second-copy letters.  Identities are exact only on a
truncation budget; every entry point states the degrees it certifies.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

import numpy as np

from .fock import (
    BlockOperator,
    FockVector,
    SpaceConfig,
    apply_field,
    coordinate_projection,
    copy_count_projection,
    gram_matrix,
    q_inner,
    q_norm_squared,
    second_copy_count,
    second_quantize,
    word_basis,
)
from .wick import reversed_vector, wick_apply

GRAM_EIG_FLOOR = 1e-12


def _require_float(cfg: SpaceConfig, what: str) -> float:
    if cfg.scalar.is_exact:
        raise ValueError(f"{what} needs a numeric q")
    return cfg.scalar.q


def _require_doubled(cfg: SpaceConfig, what: str) -> None:
    if cfg.copies != 2:
        raise ValueError(f"{what} needs the doubled space")


# ---------------------------------------------------------------------------
# semigroup and dilation


def rotation_matrix(t: float, d: int) -> np.ndarray:
    """Rotation mixing the two copies: first-copy column e^-t h + sqrt(1-e^-2t) h~."""
    c = math.exp(-t)
    s = math.sqrt(max(0.0, 1.0 - c * c))
    eye = np.eye(d)
    return np.block([[c * eye, -s * eye], [s * eye, c * eye]])


def ou_semigroup(t: float, cfg: SpaceConfig) -> BlockOperator:
    """e^-nt on degree n: second quantization of e^-t times the identity."""
    if t < 0:
        raise ValueError("time must be nonnegative")
    return second_quantize(math.exp(-t) * np.eye(cfg.letters), cfg)


def dilation_operator(t: float, cfg: SpaceConfig) -> BlockOperator:
    _require_doubled(cfg, "the dilation")
    if t < 0:
        raise ValueError("time must be nonnegative")
    return second_quantize(rotation_matrix(t, cfg.d), cfg)


def dilation_check(t: float, cfg: SpaceConfig) -> float:
    """Compress the dilation to the first copy and compare with the semigroup.

    Returns the largest entry deviation over columns indexed by first-copy
    words: the compressed operator must act as e^-nt on them and send
    nothing outside the first-copy span.
    """
    _require_doubled(cfg, "the dilation check")
    _require_float(cfg, "the dilation check")
    compressed = second_quantize(coordinate_projection(cfg), cfg) @ dilation_operator(t, cfg)
    dev = 0.0
    for n in range(cfg.max_degree + 1):
        basis = word_basis(n, cfg.letters)
        first_copy = [i for i, w in enumerate(basis) if second_copy_count(w, cfg) == 0]
        block = compressed.block(n, n)
        expected = np.zeros((len(basis), len(first_copy)))
        for col, i in enumerate(first_copy):
            expected[i, col] = math.exp(-n * t)
        dev = max(dev, float(np.abs(block[:, first_copy] - expected).max()))
    return dev


# ---------------------------------------------------------------------------
# the diagonal two-sided multiplier


def _second_copy_vector(h, cfg: SpaceConfig):
    if len(h) != cfg.d:
        raise ValueError(f"one-particle vector has {len(h)} entries, expected {cfg.d}")
    return tuple(0.0 for _ in range(cfg.d)) + tuple(float(x) for x in h)


def phi_hk_apply(h, k, v: FockVector) -> FockVector:
    """E(s(h~) x s(k~)) on the vector xOmega, x in the first-copy algebra.

    Exact on components of degree at most max_degree - 2 (one creation on
    each side of x).
    """
    cfg = v.cfg
    _require_doubled(cfg, "the two-sided multiplier")
    if any(second_copy_count(w, cfg) for w in v.coeffs):
        raise ValueError("input must lie in the first-copy algebra")
    h_t = _second_copy_vector(h, cfg)
    k_t = _second_copy_vector(k, cfg)
    right = wick_apply(v, apply_field(k_t, FockVector.vacuum(cfg)))
    return copy_count_projection(apply_field(h_t, right), 0, "exact")


def phi_hk_check(h, k, cfg: SpaceConfig) -> float:
    """Deviation of the two-sided multiplier from q^n <h,k> per degree block.

    Scans every first-copy word of degree n <= max_degree - 2 and returns
    the largest coefficient deviation.
    """
    _require_doubled(cfg, "the multiplier check")
    q = _require_float(cfg, "the multiplier check")
    hk = float(np.dot(np.asarray(h, dtype=float), np.asarray(k, dtype=float)))
    dev = 0.0
    for n in range(cfg.max_degree - 1):
        for word in itertools.product(range(cfg.d), repeat=n):
            image = phi_hk_apply(h, k, FockVector.from_word(cfg, word))
            expected = FockVector.from_word(cfg, word, q ** n * hk)
            diff = image - expected
            if diff.coeffs:
                dev = max(dev, max(abs(c) for c in diff.coeffs.values()))
    return dev


def phi_hk_operator(h, k, cfg: SpaceConfig, route: str = "vector") -> BlockOperator:
    """The multiplier as a degree-block operator on the single-copy space.

    route "vector" materializes every column through the doubled space with
    a +2 degree budget (needs the dimension cap to accommodate it); route
    "diagonal" writes down q^n <h,k> directly, as certified by
    phi_hk_check.
    """
    if cfg.copies != 1:
        raise ValueError("the multiplier acts on the single-copy space")
    q = _require_float(cfg, "the multiplier")
    if route not in ("vector", "diagonal"):
        raise ValueError(f"unknown route {route!r}")
    hk = float(np.dot(np.asarray(h, dtype=float), np.asarray(k, dtype=float)))
    blocks = {}
    if route == "diagonal":
        for n in range(cfg.max_degree + 1):
            blocks[(n, n)] = q ** n * hk * np.eye(cfg.dim(n))
        return BlockOperator(cfg, blocks)
    doubled = SpaceConfig(cfg.d, 2, cfg.max_degree + 2, cfg.scalar)
    for n in range(cfg.max_degree + 1):
        basis = word_basis(n, cfg.letters)
        index = {w: i for i, w in enumerate(basis)}
        mat = np.zeros((len(basis), len(basis)))
        for j, word in enumerate(basis):
            image = phi_hk_apply(h, k, FockVector.from_word(doubled, word))
            for w, c in image.coeffs.items():
                if len(w) != n:
                    raise ValueError("multiplier produced a degree-mixing column")
                mat[index[w], j] = c
        blocks[(n, n)] = mat
    return BlockOperator(cfg, blocks)


# ---------------------------------------------------------------------------
# Schatten norms in the q-geometry


@dataclass
class SchattenReport:
    p: float
    norm: float
    degree_singular_values: list  # one ascending array per degree
    threshold: float
    partial_norms: list  # truncated norm at top degree N = 0..max_degree

    def summary(self) -> str:
        return f"S_{self.p} norm {self.norm:.12g} (threshold p* = {self.threshold:.6g})"


@lru_cache(maxsize=None)
def float_gram(degree: int, cfg: SpaceConfig) -> np.ndarray:
    """Numeric Gram block, assembled once per configuration."""
    _require_float(cfg, "Gram evaluation")
    return gram_matrix(degree, cfg)


@lru_cache(maxsize=None)
def gram_factors(degree: int, cfg: SpaceConfig) -> tuple:
    """(G^1/2, G^-1/2) of the degree block, with a loud degeneracy floor."""
    _require_float(cfg, "Gram factorization")
    vals, vecs = np.linalg.eigh(float_gram(degree, cfg))
    low = float(vals.min())
    if low <= GRAM_EIG_FLOOR:
        raise ValueError(
            f"Gram block at degree {degree} has eigenvalue {low:.3e}, "
            f"below the {GRAM_EIG_FLOOR} floor; |q| is too close to 1"
        )
    root = (vecs * np.sqrt(vals)) @ vecs.T
    inv_root = (vecs / np.sqrt(vals)) @ vecs.T
    return root, inv_root


def schatten_threshold(q: float, d: int) -> float:
    """Membership threshold: the norm sum converges iff p is above it."""
    if d < 1:
        raise ValueError("one-particle dimension must be at least 1")
    if q == 0:
        return 0.0
    if not 0 < abs(q) < 1:
        raise ValueError("threshold needs 0 < |q| < 1")
    return -math.log(d) / math.log(abs(q))


def schatten_term_ratio(q: float, d: int, p: float) -> float:
    """Ratio of successive degree terms |q|^pn d^n; below 1 means summable."""
    return abs(q) ** p * d


def schatten_norm(op: BlockOperator, p: float, cfg: SpaceConfig) -> SchattenReport:
    """Truncated Schatten p-norm with singular values taken per degree.

    Blocks are conjugated by the Gram square roots so the SVD happens in
    the q-inner geometry; a Euclidean SVD would be wrong for q != 0.
    Degree-mixing operators are rejected: the degree-wise report would
    not mean anything for them.
    """
    if p < 1:
        raise ValueError("Schatten norms need p >= 1")
    q = _require_float(cfg, "Schatten norms")
    for (ti, si), mat in op.blocks.items():
        if ti != si and np.abs(np.asarray(mat, dtype=float)).max() > 0:
            raise ValueError("operator mixes degrees; Schatten report is per degree")
    degree_svals = []
    partial_norms = []
    total = 0.0
    for n in range(cfg.max_degree + 1):
        block = op.block(n, n)
        if block is None:
            svals = np.zeros(0)
        else:
            root, inv_root = gram_factors(n, cfg)
            svals = np.linalg.svd(root @ np.asarray(block, dtype=float) @ inv_root, compute_uv=False)
        degree_svals.append(np.sort(svals))
        total += float(np.sum(svals ** p))
        partial_norms.append(total ** (1.0 / p))
    return SchattenReport(
        p=p,
        norm=partial_norms[-1],
        degree_singular_values=degree_svals,
        threshold=schatten_threshold(q, cfg.letters),
        partial_norms=partial_norms,
    )


def phi_schatten_closed_form(q: float, d: int, p: float, hk: float, top_degree: int) -> float:
    """(sum_{n<=N} |q|^pn d^n)^(1/p) |<h,k>|, the diagonal multiplier's norm."""
    return sum(abs(q) ** (p * n) * d ** n for n in range(top_degree + 1)) ** (1.0 / p) * abs(hk)


# ---------------------------------------------------------------------------
# band structure and decay of Wick-pair multipliers


@dataclass
class DecayReport:
    block_norms: dict  # (target degree, source degree) -> q-geometry 2-norm
    band_width: int
    rate: float
    constant: float
    fit_degrees: tuple  # truncation-safe diagonal degrees used in the fit
    max_offband: float

    def diagonal(self) -> list:
        return [(j, self.block_norms.get((j, j), 0.0)) for j in self.fit_degrees]


def block_decay(xi: FockVector, eta: FockVector, cfg: SpaceConfig) -> DecayReport:
    """Blockwise size of x -> E(W(xi)* x W(eta)) on the single-copy algebra.

    xi and eta must be homogeneous with the same fixed number of
    second-copy letters in every word.  Off-band blocks (degree change
    beyond deg xi + deg eta) must vanish; the diagonal norms are fitted
    to log ||block_jj|| ~ log C + j log r over the truncation-safe range.
    """
    _require_doubled(cfg, "the two-sided Wick multiplier")
    _require_float(cfg, "the two-sided Wick multiplier")
    counts = {second_copy_count(w, cfg) for v in (xi, eta) for w in v.coeffs}
    if len(counts) != 1:
        raise ValueError("need a single fixed second-copy letter count")
    if len(xi.degrees()) != 1 or len(eta.degrees()) != 1:
        raise ValueError("homogeneous tensors required")
    n1, n2 = xi.degrees()[0], eta.degrees()[0]
    band = n1 + n2
    inner = SpaceConfig(cfg.d, 1, cfg.max_degree, cfg.scalar)
    rev_xi = reversed_vector(xi)
    columns: dict = {}
    for j in range(cfg.max_degree + 1):
        for col, word in enumerate(word_basis(j, inner.letters)):
            image = wick_apply(rev_xi, wick_apply(FockVector.from_word(cfg, word), eta))
            image = copy_count_projection(image, 0, "exact")
            for w, c in image.coeffs.items():
                columns.setdefault((len(w), j), []).append((w, col, float(c)))
    block_norms = {}
    max_offband = 0.0
    for (i, j), entries in columns.items():
        rows = {w: r for r, w in enumerate(word_basis(i, inner.letters))}
        mat = np.zeros((inner.dim(i), inner.dim(j)))
        for w, col, c in entries:
            mat[rows[w], col] += c
        g_i, _ = gram_factors(i, inner)
        _, g_j_inv = gram_factors(j, inner)
        norm = float(np.linalg.norm(g_i @ mat @ g_j_inv, 2))
        if norm == 0.0:
            continue
        block_norms[(i, j)] = norm
        if abs(i - j) > band:
            max_offband = max(max_offband, norm)
    fit_degrees = tuple(
        j for j in range(cfg.max_degree - band + 1) if block_norms.get((j, j), 0.0) > 0.0
    )
    if len(fit_degrees) >= 2:
        slope, intercept = np.polyfit(
            fit_degrees, [math.log(block_norms[(j, j)]) for j in fit_degrees], 1
        )
        rate, constant = float(slope), float(math.exp(intercept))
    else:
        rate, constant = 0.0, block_norms.get((0, 0), 0.0)
    return DecayReport(
        block_norms=block_norms,
        band_width=band,
        rate=rate,
        constant=constant,
        fit_degrees=fit_degrees,
        max_offband=max_offband,
    )


# ---------------------------------------------------------------------------
# deformation estimate


@dataclass
class DeformationReport:
    kcut: int
    rows: list  # (n, t, left, right, ratio)
    max_ratio: float
    crosscheck_dev: float

    def csv_rows(self) -> list:
        return [(n, t, left, right, ratio) for n, t, left, right, ratio in self.rows]


def deformation_right_side(n: int, kcut: int, t: float, inner_xy: float) -> float:
    decay = math.exp(-2.0 * t)
    return sum(
        comb(n, m) * decay ** (n - m) * (1.0 - decay) ** m for m in range(kcut, n + 1)
    ) * inner_xy


def deformation_identity(n: int, kcut: int, t: float, x: FockVector, y: FockVector) -> tuple:
    """Both sides of <E-perp_(kcut-1) alpha_t x, E-perp_(kcut-1) alpha_t y>.

    The left side goes through the dilation matrix and the copy-count
    projection; the right side is the binomial closed form times the
    q-inner product.  x and y must be degree-n first-copy vectors.
    """
    cfg = x.cfg
    _require_doubled(cfg, "the deformation identity")
    _require_float(cfg, "the deformation identity")
    if t < 0:
        raise ValueError("time must be nonnegative")
    if kcut > n:
        raise ValueError("cut above the degree: the right side is an empty sum")
    for v in (x, y):
        if v.degrees() not in ((), (n,)):
            raise ValueError(f"need degree-{n} vectors")
        if any(second_copy_count(w, cfg) for w in v.coeffs):
            raise ValueError("inputs must lie in the first-copy space")
    alpha = dilation_operator(t, cfg)
    px = copy_count_projection(alpha.apply(x), kcut, "at-least")
    py = copy_count_projection(alpha.apply(y), kcut, "at-least")
    left = float(q_inner(px, py))
    right = deformation_right_side(n, kcut, t, float(q_inner(x, y)))
    return left, right


def deformation_block_check(n: int, kcut: int, t: float, cfg: SpaceConfig) -> float:
    """Deviation of the identity over every pair of degree-n first-copy words.

    One matrix comparison covers all pairs at once: with M the dilation
    block restricted to first-copy columns and rows masked to second-copy
    count >= kcut, the identity reads M^T G M = (binomial factor) G
    restricted, G the degree-n Gram.  Bilinearity extends the pass to all
    degree-n vectors.
    """
    _require_doubled(cfg, "the deformation identity")
    _require_float(cfg, "the deformation identity")
    if kcut > n:
        raise ValueError("cut above the degree: the right side is an empty sum")
    basis = word_basis(n, cfg.letters)
    first = [i for i, w in enumerate(basis) if second_copy_count(w, cfg) == 0]
    mask = np.array([second_copy_count(w, cfg) >= kcut for w in basis], dtype=float)
    g = float_gram(n, cfg)
    m = dilation_operator(t, cfg).block(n, n)[:, first] * mask[:, None]
    left = m.T @ g @ m
    right = deformation_right_side(n, kcut, t, 1.0) * g[np.ix_(first, first)]
    return float(np.abs(left - right).max())


def deformation_scan(kcut: int, n_max: int, t_grid, cfg: SpaceConfig) -> DeformationReport:
    """Ratio ||(alpha_(t^kcut) - id) x|| / ||E-perp_(kcut-1) alpha_t x|| per (n, t).

    Both norms depend on a degree-n vector only through its norm, so the
    rows use the scalar closed forms; one matrix evaluation per degree
    cross-checks them.  The grid must sit inside (0, 2^-kcut).
    """
    _require_doubled(cfg, "the deformation scan")
    _require_float(cfg, "the deformation scan")
    if kcut < 1:
        raise ValueError("cut level must be at least 1")
    if n_max < kcut:
        raise ValueError("degrees below the cut are rejected")
    if n_max > cfg.max_degree:
        raise ValueError("degree range exceeds the truncation")
    t_grid = [float(t) for t in t_grid]
    limit = 2.0 ** (-kcut)
    if any(not 0.0 < t < limit for t in t_grid):
        raise ValueError(f"grid must lie in (0, {limit})")
    rows = []
    for n in range(kcut, n_max + 1):
        for t in t_grid:
            left = math.sqrt(2.0 * (1.0 - math.exp(-n * t ** kcut)))
            right = math.sqrt(deformation_right_side(n, kcut, t, 1.0))
            rows.append((n, t, left, right, left / right))
    crosscheck = 0.0
    t_mid = t_grid[len(t_grid) // 2]
    alpha_small = dilation_operator(t_mid ** kcut, cfg)
    alpha_mid = dilation_operator(t_mid, cfg)
    for n in range(kcut, n_max + 1):
        x = FockVector.from_word(cfg, (0,) * n)
        norm_sq = float(q_norm_squared(x))
        moved = alpha_small.apply(x) - x
        left_matrix = math.sqrt(max(float(q_norm_squared(moved)), 0.0) / norm_sq)
        left_scalar = math.sqrt(2.0 * (1.0 - math.exp(-n * t_mid ** kcut)))
        denom = copy_count_projection(alpha_mid.apply(x), kcut, "at-least")
        right_matrix = math.sqrt(max(float(q_norm_squared(denom)), 0.0) / norm_sq)
        right_scalar = math.sqrt(deformation_right_side(n, kcut, t_mid, 1.0))
        crosscheck = max(crosscheck, abs(left_matrix - left_scalar), abs(right_matrix - right_scalar))
    return DeformationReport(
        kcut=kcut,
        rows=rows,
        max_ratio=max(r for *_rest, r in rows),
        crosscheck_dev=crosscheck,
    )


def ou_tail(x: FockVector, t: float, top: int) -> float:
    """Norm of the semigroup image above the spectral cutoff."""
    if t < 0:
        raise ValueError("time must be nonnegative")
    _require_float(x.cfg, "tail norms")
    total = 0.0
    for n in x.degrees():
        if n > top:
            total += math.exp(-2.0 * t * n) * max(float(q_norm_squared(x.component(n))), 0.0)
    return math.sqrt(total)
