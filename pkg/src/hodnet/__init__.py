"""Higher-order digital nets and sequences over prime fields.

Construction of interlaced generalized-Niederreiter generating matrices,
exact digital point generation extensible in both the point count and the
dimension, order-alpha net certification through dual-net analysis, exact
Walsh-coefficient analysis of the Sobolev reproducing kernel, and
worst-case-error measurement of the resulting quadrature rules.
"""

__version__ = "0.1.0"

from .errors import NumericalConsistencyError, ResourceLimitError, UsageError
from .gf import (
    Poly,
    PrimeField,
    digits_of,
    digitwise_add,
    digitwise_sub,
    laurent_coeffs,
    monic_irreducibles,
)
from .matrices import (
    GeneratingMatrixSet,
    Provenance,
    build_matrices,
    interlace_matrix_set,
    load_matrix_set,
    niederreiter_matrix,
    niederreiter_set,
    save_matrix_set,
    t_value_bound,
)
from .points import (
    DigitPoint,
    digital_point,
    interlace_digit_vectors,
    interlace_point,
    net_points,
    net_values,
)
from .quality import (
    DualIndex,
    NetCertificate,
    certify_net,
    dick_weight,
    dual_indices,
    interpolation_gap,
    min_dual_weight,
    propagation_check,
)
from .cyclotomic import Cyclotomic
from .bernoulli import bernoulli, bernoulli_coeffs
from .walsh import (
    WalshCoeffTable,
    bernoulli_walsh_coeff,
    build_coeff_table,
    count_type_pairs,
    decay_ratio_sup,
    kernel_walsh_coeff,
    kernel_walsh_coeff_vec,
    pair_type,
    periodic_bernoulli_walsh_coeff,
    sparsity_violations,
    walsh_exponent,
    walsh_point_exponent,
)
from .kernel import (
    KernelSpec,
    kernel_1d,
    kernel_1d_exact,
    qmc_integrate,
    wce,
    wce_dual_truncated,
    wce_squared_exact,
)

__all__ = [name for name in dir() if not name.startswith("_")]
