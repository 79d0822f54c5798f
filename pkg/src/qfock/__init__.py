"""Degree-truncated q-Fock space computations.

The package is organised bottom-up:

* :mod:`qfock.scalars` -- exact polynomials in the deformation parameter,
  and the exact/float scalar mode switch.
* :mod:`qfock.combinatorics` -- pair/singleton partitions, crossing counts,
  and the insertion statistic with its coset decomposition.
* :mod:`qfock.fock` -- truncated Fock spaces, the deformed inner product,
  ladder and field operators, second quantization.
* :mod:`qfock.wick` -- Wick products, mixed moments, splitting products,
  and finite-size central limit data.
* :mod:`qfock.identities` -- exhaustive generic-q verification of the
  splitting and inclusion-exclusion identities.
* :mod:`qfock.analysis` -- float-mode estimates: semigroup dilation,
  rank-one compressions, Schatten norms, block decay, deformation bounds.
* :mod:`qfock.render` -- arc diagrams in ASCII and SVG.
"""

from .combinatorics import (
    PairPartition,
    PartialPartition,
    crossings,
    enumerate_pair_partitions,
    enumerate_partial_partitions,
    iota_prime,
    iota_prime_closed_form,
    partition_triple,
)
from .fock import (
    BlockOperator,
    FockVector,
    SpaceConfig,
    field_operator,
    gram_matrix,
    q_inner,
    q_norm_squared,
    second_quantize,
    vacuum_expectation,
)
from .scalars import EXACT, QPolynomial, ScalarMode
from .wick import (
    clt_finite,
    moment_pair_partitions,
    three_wick_trace,
    wick_apply,
    wick_operator,
    wick_split_product,
)

__version__ = "0.1.0"

__all__ = [
    "BlockOperator",
    "EXACT",
    "FockVector",
    "PairPartition",
    "PartialPartition",
    "QPolynomial",
    "ScalarMode",
    "SpaceConfig",
    "clt_finite",
    "crossings",
    "enumerate_pair_partitions",
    "enumerate_partial_partitions",
    "field_operator",
    "gram_matrix",
    "iota_prime",
    "iota_prime_closed_form",
    "moment_pair_partitions",
    "partition_triple",
    "q_inner",
    "q_norm_squared",
    "second_quantize",
    "three_wick_trace",
    "vacuum_expectation",
    "wick_apply",
    "wick_operator",
    "wick_split_product",
]
