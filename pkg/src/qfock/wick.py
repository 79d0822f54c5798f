"""Wick products on the truncated q-Fock space, and the moment formulas they obey.

The Wick operator of a degree-n word is the sum over subset levels k of
creation/annihilation chains: for each k-subset A of positions, annihilate
the letters at A (largest position acting first), then create the letters
at the complement (first position ending outermost), weighted by
q^iota(A) with iota(A) the inversions of the two-ascending-runs coset word
(complement first).  Applied to the vacuum this reproduces the word, which
pins the normalization.

Mixed vacuum moments of field operators are sums over pair partitions
weighted by q^crossings; the finite-N central-limit averages and the
off-diagonal coefficient are computed here by genuinely enumerating color
assignments over the partition sums, so their N-independence and their
closed forms are checked against rather than assumed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .combinatorics import (
    SubsetCoset,
    coset_data,
    crossings,
    enumerate_pair_partitions,
    enumerate_partial_partitions,
    max_pairs,
)
from .fock import (
    BlockOperator,
    FockVector,
    SpaceConfig,
    _empty_block,
    scalar_is_zero,
    word_basis,
    word_index,
    word_inner_poly,
)
from .scalars import EXACT, QPolynomial, ScalarMode


@lru_cache(maxsize=None)
def subset_iota(n: int, subset: tuple) -> int:
    return coset_data(SubsetCoset(n, subset))[1]


@lru_cache(maxsize=None)
def subset_iota_chosen(n: int, subset: tuple) -> int:
    return coset_data(SubsetCoset(n, subset), chosen_first=True)[1]


@lru_cache(maxsize=None)
def _subset_table(n: int) -> tuple:
    """(k, subset, iota) for every subset of positions {1..n}."""
    rows = []
    for k in range(n + 1):
        for subset in itertools.combinations(range(1, n + 1), k):
            rows.append((k, subset, subset_iota(n, subset)))
    return tuple(rows)


@dataclass(frozen=True)
class CosetTerm:
    k: int
    subset: tuple  # positions split off into the right factor
    coefficient: object
    left: tuple
    right: tuple


@dataclass(frozen=True)
class CosetExpansion:
    degree: int
    terms: tuple


def r_star(xi: FockVector, k: int) -> CosetExpansion:
    """Level-k coset expansion: split each word into (complement, subset) letters.

    One term per k-subset A of positions, weighted q^iota(A) times the
    word's coefficient; the subset letters (ascending positions) form the
    right factor.
    """
    degrees = xi.degrees()
    if len(degrees) != 1:
        raise ValueError("coset expansion needs a homogeneous vector")
    n = degrees[0]
    if not 0 <= k <= n:
        raise ValueError(f"level {k} outside 0..{n}")
    mode = xi.cfg.scalar
    terms = []
    for word, c in sorted(xi.coeffs.items()):
        for subset in itertools.combinations(range(1, n + 1), k):
            inside = set(subset)
            left = tuple(word[p - 1] for p in range(1, n + 1) if p not in inside)
            right = tuple(word[p - 1] for p in subset)
            coeff = c * mode.q_power(subset_iota(n, subset))
            terms.append(CosetTerm(k, subset, coeff, left, right))
    return CosetExpansion(n, tuple(terms))


@lru_cache(maxsize=None)
def wick_word_action(xi_word: tuple, source: tuple, max_degree: int) -> tuple:
    """W(word) applied to a basis word: ((target word, QPolynomial), ...).

    Exact kernel shared by every scalar mode; annihilation within each
    level happens largest split position first, then the complement
    letters are created outermost-first.
    """
    n = len(xi_word)
    total: dict = {}
    for k, subset, iota in _subset_table(n):
        cur = {source: QPolynomial.monomial(iota)}
        for pos in reversed(subset):
            code = xi_word[pos - 1]
            nxt: dict = {}
            for w, p in cur.items():
                for j, letter in enumerate(w):
                    if letter == code:
                        t = w[:j] + w[j + 1 :]
                        nxt[t] = nxt.get(t, QPolynomial.zero()) + p.shift(j)
            cur = nxt
            if not cur:
                break
        if not cur:
            continue
        inside = set(subset)
        prefix = tuple(xi_word[p - 1] for p in range(1, n + 1) if p not in inside)
        for w, p in cur.items():
            if len(prefix) + len(w) <= max_degree:
                t = prefix + w
                total[t] = total.get(t, QPolynomial.zero()) + p
    return tuple(sorted((w, p) for w, p in total.items() if not p.is_zero()))


def wick_apply(xi: FockVector, v: FockVector) -> FockVector:
    """Apply the Wick operator of xi (any degrees, linearly) to v."""
    if not xi.cfg.compatible(v.cfg):
        raise ValueError("space mismatch")
    mode = v.cfg.scalar
    out: dict = {}
    for xw, xc in xi.coeffs.items():
        for sw, sc in v.coeffs.items():
            weight = xc * sc
            if scalar_is_zero(weight):
                continue
            for tw, p in wick_word_action(xw, sw, v.cfg.max_degree):
                out[tw] = out.get(tw, 0) + weight * mode.of(p)
    return FockVector(v.cfg, out)


def wick_operator(xi: FockVector, cfg: SpaceConfig) -> BlockOperator:
    """Materialize W(xi) as degree-block matrices (homogeneous xi only)."""
    if cfg.max_degree > 6:
        raise ValueError("full Wick materialization is gated to max degree 6")
    degrees = xi.degrees()
    if len(degrees) > 1:
        raise ValueError("wick_operator needs a homogeneous vector; sum per degree instead")
    mode = cfg.scalar
    blocks: dict = {}
    for s in range(cfg.max_degree + 1):
        columns: dict = {}
        for j, source in enumerate(word_basis(s, cfg.letters)):
            for xw, xc in xi.coeffs.items():
                for tw, p in wick_word_action(xw, source, cfg.max_degree):
                    columns.setdefault(len(tw), []).append((tw, j, xc * mode.of(p)))
        for t, entries in columns.items():
            mat = blocks.setdefault((t, s), _empty_block(cfg, t, s))
            index = word_index(t, cfg.letters)
            for tw, j, val in entries:
                mat[index[tw], j] += val
    if not blocks:
        blocks[(0, 0)] = _empty_block(cfg, 0, 0)
    return BlockOperator(cfg, blocks)


def reversed_vector(xi: FockVector) -> FockVector:
    """Word-reversal; with real coefficients this realizes the Wick adjoint."""
    return FockVector(xi.cfg, {tuple(reversed(w)): c for w, c in xi.coeffs.items()})


# ---------------------------------------------------------------------------
# moments


def _delta_inner(a, b, mode: ScalarMode):
    if isinstance(a, int) and isinstance(b, int):
        return mode.one() if a == b else mode.zero()
    total = mode.zero()
    for x, y in zip(a, b):
        total = total + x * y
    return total


def moment_pair_partitions(hs, mode: ScalarMode = EXACT):
    """Sum over pair partitions of q^crossings times the paired inner products.

    Letters may be integer codes (orthonormal) or coefficient tuples.
    """
    hs = list(hs)
    m = len(hs)
    if m % 2:
        return mode.zero()
    inner = {}
    for i in range(m):
        for j in range(i + 1, m):
            inner[(i + 1, j + 1)] = _delta_inner(hs[i], hs[j], mode)
    total = mode.zero()
    for rho in enumerate_pair_partitions(m):
        term = mode.q_power(crossings(rho))
        for i, j in rho.pairs:
            term = term * inner[(i, j)]
            if scalar_is_zero(term):
                break
        else:
            total = total + term
    return total


def three_wick_trace(xi: FockVector, eta: FockVector, theta: FockVector):
    """Vacuum trace of the product of three Wick operators, by subset sums.

    For words of degrees (n, m, l) the trace is a sum over subsets
    A of {1..n}, B of {1..m}, C of {1..l} with |A| = |B| = (n+m-l)/2 and
    |C| = n - |A| of

        q^(iota(A)+iota(B)+iota(C))
          * <rev xi_A, eta_B> <rev xi_Ac, theta_C> <rev eta_Bc, theta_Cc>

    where subscripts take the subword at those positions (ascending), rev
    reverses it, iota(A) and iota(C) are complement-first coset inversion
    counts and iota(B) is chosen-first.  These orientations drop out of
    the pair-partition expansion of the product: pairs between two of the
    three letter blocks cross a pair from an overlapping block pair
    according to the subset statistics above, and crossings inside one
    block pair count the non-inversions of the matching, which the
    reversal turns back into a plain q-inner product.
    """
    for v in (eta, theta):
        if not xi.cfg.compatible(v.cfg):
            raise ValueError("space mismatch")
    mode = xi.cfg.scalar
    total = mode.zero()
    for wx, cx in xi.coeffs.items():
        for we, ce in eta.coeffs.items():
            for wt, ct in theta.coeffs.items():
                p = _three_trace_words(wx, we, wt)
                if not p.is_zero():
                    total = total + cx * ce * ct * mode.of(p)
    return total


def _subword(word: tuple, positions: tuple) -> tuple:
    return tuple(word[p - 1] for p in positions)


@lru_cache(maxsize=None)
def _three_trace_words(wx: tuple, we: tuple, wt: tuple) -> QPolynomial:
    n, m, l = len(wx), len(we), len(wt)
    total = QPolynomial.zero()
    if (n + m - l) % 2 or (n + m + l) % 2:
        return total
    a = (n + m - l) // 2
    if a < 0 or a > min(n, m) or n - a > l:
        return total
    for A in itertools.combinations(range(1, n + 1), a):
        ac = tuple(p for p in range(1, n + 1) if p not in A)
        xa = _subword(wx, tuple(reversed(A)))
        xac = _subword(wx, tuple(reversed(ac)))
        ia = subset_iota(n, A)
        for B in itertools.combinations(range(1, m + 1), a):
            first = word_inner_poly(xa, _subword(we, B))
            if first.is_zero():
                continue
            bc = tuple(p for p in range(1, m + 1) if p not in B)
            ebc = _subword(we, tuple(reversed(bc)))
            ib = subset_iota_chosen(m, B)
            for C in itertools.combinations(range(1, l + 1), n - a):
                second = word_inner_poly(xac, _subword(wt, C))
                if second.is_zero():
                    continue
                cc = tuple(p for p in range(1, l + 1) if p not in C)
                third = word_inner_poly(ebc, _subword(wt, cc))
                if third.is_zero():
                    continue
                ic = subset_iota(l, C)
                total = total + (first * second * third).shift(ia + ib + ic)
    return total


def wick_split_product(xi: FockVector, k: int) -> FockVector:
    """W(first n-k letters) W(last k letters) applied to the vacuum.

    Expands over the block partitions whose pairs straddle position n-k:
    each partition removes its paired letters (which must match) and
    contributes q^crossings times the remaining word.
    """
    degrees = xi.degrees()
    if len(degrees) != 1:
        raise ValueError("split product needs a homogeneous vector")
    n = degrees[0]
    if not 0 <= k <= n:
        raise ValueError(f"split {k} outside 0..{n}")
    mode = xi.cfg.scalar
    out: dict = {}
    for word, c in xi.coeffs.items():
        for j in range(max_pairs(n, k) + 1):
            for rho in enumerate_partial_partitions(n, k, j):
                if any(word[l - 1] != word[r - 1] for l, r in rho.pairs):
                    continue
                remaining = _subword(word, rho.singletons)
                if len(remaining) > xi.cfg.max_degree:
                    continue
                weight = c * mode.q_power(crossings(rho))
                out[remaining] = out.get(remaining, 0) + weight
    return FockVector(xi.cfg, out)


# ---------------------------------------------------------------------------
# finite-N central limit


@lru_cache(maxsize=None)
def _colored_moment(colored: tuple) -> QPolynomial:
    return moment_pair_partitions(colored, EXACT)


_COLOR_BASE = 64


def _canonical_colors(codes, coloring) -> tuple:
    """Colored letters as fresh integer codes, colors relabeled by first use."""
    relabel: dict = {}
    out = []
    for code, color in zip(codes, coloring):
        if color not in relabel:
            relabel[color] = len(relabel)
        out.append(code * _COLOR_BASE + relabel[color])
    return tuple(out)


def clt_finite(N: int, codes, mode: ScalarMode = EXACT):
    """Vacuum moment of averaged color-summed field operators, exact at finite N.

    Each letter is averaged over N colors with weight N^(-1/2); the sum
    over color assignments is enumerated explicitly (after relabeling by
    first occurrence, which leaves each term unchanged).
    """
    codes = tuple(codes)
    m = len(codes)
    if N < 1:
        raise ValueError("need at least one color")
    if m % 2:
        return mode.zero()
    total = QPolynomial.zero()
    for coloring in itertools.product(range(N), repeat=m):
        total = total + _colored_moment(_canonical_colors(codes, coloring))
    scaled = total * QPolynomial.constant(Fraction(1, N ** (m // 2)))
    return mode.of(scaled)


def falling_factorial(N: int, m: int) -> int:
    out = 1
    for j in range(m):
        out *= N - j  # hits zero once j reaches N
    return out


def offdiag_wick_coefficient(N: int, f_codes, h_codes, mode: ScalarMode = EXACT):
    """tau of (averaged letters f_m..f_1) times the distinct-color word on h_1..h_m.

    The f letters are color-averaged with weight N^(-1/2) each; the h
    letters carry pairwise distinct colors, summed with total weight
    N^(-m/2).  Both color sums are enumerated explicitly.
    """
    f_codes, h_codes = tuple(f_codes), tuple(h_codes)
    mp, m = len(f_codes), len(h_codes)
    if N < 1:
        raise ValueError("need at least one color")
    if (mp + m) % 2:
        return mode.zero()
    sequence = tuple(reversed(f_codes)) + h_codes
    total = QPolynomial.zero()
    for distinct in itertools.permutations(range(N), m):
        for ks in itertools.product(range(N), repeat=mp):
            coloring = tuple(reversed(ks)) + distinct
            total = total + _colored_moment(_canonical_colors(sequence, coloring))
    scaled = total * QPolynomial.constant(Fraction(1, N ** ((mp + m) // 2)))
    return mode.of(scaled)


def offdiag_reference(N: int, f_codes, h_codes, mode: ScalarMode = EXACT):
    """N^(-m) (N)(N-1)...(N-m+1) times the q-inner product of the two words."""
    f_codes, h_codes = tuple(f_codes), tuple(h_codes)
    m = len(h_codes)
    if len(f_codes) != m:
        return mode.zero()
    if N < m:
        return mode.zero()
    factor = Fraction(falling_factorial(N, m), N ** m)
    return mode.of(word_inner_poly(f_codes, h_codes) * QPolynomial.constant(factor))
