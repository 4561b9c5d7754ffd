"""Sobolev reproducing kernel and worst-case quadrature error.

The one-dimensional kernel of smoothness alpha is

    K_alpha(x, y) = sum_{r=0}^{alpha} B_r(x) B_r(y) / (r!)**2
                    + (-1)**(alpha+1) B_{2 alpha}(|x - y|) / (2 alpha)!

and the s-dimensional kernel is the coordinatewise product.  Both the
constant function's kernel integral and the double integral equal 1 (all
Bernoulli terms have zero mean), so the squared worst-case error of an
equal-weight rule on points P is the kernel double sum over P divided by
N**2, minus 1.

Two evaluation routes: a vectorized binary64 path with deterministic
blockwise compensated summation (production), and an exact-rational path
for small point sets (roundoff oracle).  A third, independent route sums
exact Walsh coefficients of the kernel over the truncated dual net.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .bernoulli import bernoulli, bernoulli_coeffs, bernoulli_float_coeffs
from .cyclotomic import Cyclotomic
from .errors import NumericalConsistencyError, ResourceLimitError, UsageError
from .matrices import GeneratingMatrixSet
from .points import DigitPoint
from .quality import DEFAULT_WORK_LIMIT, dual_indices
from .walsh import (
    _bernoulli_cell_integrals,
    _char_exponents,
    _anti1,
    _anti2,
    kernel_walsh_coeff_vec,
)

# Squared errors this far below zero indicate real trouble, not roundoff.
WCE_NEGATIVE_TOLERANCE = 1e-9

_BLOCK_ROWS = 128


@dataclass(frozen=True)
class KernelSpec:
    """Smoothness and dimension of the tensor-product Sobolev space."""

    alpha: int
    dims: int

    def __post_init__(self) -> None:
        if self.alpha < 1 or self.dims < 1:
            raise UsageError("alpha and dims must be positive")


def kernel_1d(alpha: int, x: float, y: float) -> float:
    """One-dimensional kernel value in binary64."""
    acc = 0.0
    for r in range(alpha + 1):
        acc += bernoulli(r, x) * bernoulli(r, y) / math.factorial(r) ** 2
    per = bernoulli(2 * alpha, abs(x - y)) / math.factorial(2 * alpha)
    return acc + per if alpha % 2 else acc - per


def kernel_1d_exact(alpha: int, x: Fraction, y: Fraction) -> Fraction:
    """One-dimensional kernel value as an exact rational."""
    x, y = Fraction(x), Fraction(y)
    acc = Fraction(0)
    for r in range(alpha + 1):
        acc += (
            bernoulli(r, x) * bernoulli(r, y) / Fraction(math.factorial(r) ** 2)
        )
    per = bernoulli(2 * alpha, abs(x - y)) / math.factorial(2 * alpha)
    return acc + per if alpha % 2 else acc - per


def kernel_product(spec: KernelSpec, xs, ys) -> float:
    """Tensor-product kernel at two points given as coordinate sequences."""
    if len(xs) != spec.dims or len(ys) != spec.dims:
        raise UsageError("point dimension does not match the kernel spec")
    out = 1.0
    for x, y in zip(xs, ys):
        out *= kernel_1d(spec.alpha, float(x), float(y))
    return out


def _coords_array(points) -> np.ndarray:
    if isinstance(points, np.ndarray):
        arr = np.asarray(points, dtype=np.float64)
        if arr.ndim == 1:
            arr = arr[:, None]
        return arr
    rows = []
    for pt in points:
        if isinstance(pt, DigitPoint):
            rows.append(pt.values())
        else:
            rows.append(tuple(float(v) for v in pt))
    return np.array(rows, dtype=np.float64)


def _kernel_matrix_1d(alpha: int, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    out = np.zeros((x.size, y.size))
    for r in range(alpha + 1):
        bx = np.polyval(bernoulli_float_coeffs(r), x)
        by = np.polyval(bernoulli_float_coeffs(r), y)
        out += np.outer(bx, by) / math.factorial(r) ** 2
    diff = np.abs(x[:, None] - y[None, :])
    per = np.polyval(bernoulli_float_coeffs(2 * alpha), diff)
    per /= math.factorial(2 * alpha)
    return out + per if alpha % 2 else out - per


def wce(
    spec: KernelSpec,
    points,
    threads: int = 1,
    work_limit: int | None = None,
) -> float:
    """Worst-case quadrature error of an equal-weight rule on ``points``.

    The kernel double sum runs over fixed row blocks whose partial sums are
    combined with exact compensated summation in index order, so the result
    is identical for every thread count.
    """
    xs = _coords_array(points)
    n, dims = xs.shape
    if n < 1:
        raise UsageError("the point set must be nonempty")
    if dims != spec.dims:
        raise UsageError(
            f"points have {dims} coordinates, kernel spec wants {spec.dims}"
        )
    if work_limit is not None and n * n * dims > work_limit:
        raise ResourceLimitError(
            f"kernel double sum needs {n * n * dims} evaluations, "
            f"limit is {work_limit}"
        )

    blocks = [(lo, min(lo + _BLOCK_ROWS, n)) for lo in range(0, n, _BLOCK_ROWS)]

    def block_sum(bounds: tuple[int, int]) -> float:
        lo, hi = bounds
        acc = np.ones((hi - lo, n))
        for j in range(dims):
            acc *= _kernel_matrix_1d(spec.alpha, xs[lo:hi, j], xs[:, j])
        return float(acc.sum())

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            partials = list(pool.map(block_sum, blocks))
    else:
        partials = [block_sum(b) for b in blocks]
    total = math.fsum(partials)
    e2 = total / (n * n) - 1.0
    if e2 < -WCE_NEGATIVE_TOLERANCE:
        raise NumericalConsistencyError(
            f"squared worst-case error {e2} is negative beyond roundoff"
        )
    return math.sqrt(max(e2, 0.0))


def wce_squared_exact(spec: KernelSpec, points) -> Fraction:
    """Exact-rational squared worst-case error; the roundoff oracle.

    Intended for small sets (the double loop is quadratic with exact
    arithmetic); coordinates must be exact rationals or digit points.
    """
    coords: list[tuple[Fraction, ...]] = []
    for pt in points:
        if isinstance(pt, DigitPoint):
            coords.append(pt.fractions())
        else:
            coords.append(tuple(Fraction(v) for v in pt))
    n = len(coords)
    if n < 1:
        raise UsageError("the point set must be nonempty")
    if any(len(c) != spec.dims for c in coords):
        raise UsageError("point dimension does not match the kernel spec")
    total = Fraction(0)
    for a in coords:
        for c in coords:
            term = Fraction(1)
            for j in range(spec.dims):
                term *= kernel_1d_exact(spec.alpha, a[j], c[j])
            total += term
    return total / n**2 - 1


def qmc_integrate(f, points) -> float:
    """Equal-weight quadrature of ``f`` over the points (sanity harness)."""
    values = [f(*pt.values()) if isinstance(pt, DigitPoint) else f(*pt) for pt in points]
    return math.fsum(values) / len(values)


# ---------------------------------------------------------------------------
# Dual-space route
# ---------------------------------------------------------------------------


def _periodic_offset_integrals(base: int, r: int, g: int) -> list[Fraction]:
    """Integrals of the even periodic Bernoulli difference over cell pairs.

    Entry u is the integral of Bper_r(x - y) over any cell pair whose offset
    is congruent to u modulo b**g; translation invariance modulo one period
    makes the offset class the only parameter.
    """
    if r < 2 or r % 2:
        raise UsageError("offset integrals require even degree >= 2")
    n = base**g
    h = Fraction(1, n)
    f2 = [_anti2(r, u * h) for u in range(n + 1)]
    out = [Fraction(0)] * n
    # Offset 0 splits along the diagonal; the wrapped branch contributes the
    # mirrored triangle of B_r evaluated one period up.
    out[0] = (
        f2[1]
        - f2[0]
        - _anti1(r, Fraction(0)) * h
        + _anti1(r, Fraction(1)) * h
        - f2[n]
        + f2[n - 1]
    )
    for u in range(1, n):
        out[u] = f2[u + 1] - 2 * f2[u] + f2[u - 1]
    return out


def wce_dual_truncated(
    spec: KernelSpec,
    ms: GeneratingMatrixSet,
    m: int,
    mu1_cutoff: int,
    work_limit: int = DEFAULT_WORK_LIMIT,
) -> float:
    """Truncation of the dual-space worst-case-error identity, as a float."""
    value = dual_walsh_sum_exact(spec, ms, m, mu1_cutoff, work_limit)
    if not value.is_real():
        raise NumericalConsistencyError(
            "imaginary parts of the truncated dual sum failed to cancel"
        )
    return value.to_complex().real


def dual_walsh_sum_exact(
    spec: KernelSpec,
    ms: GeneratingMatrixSet,
    m: int,
    mu1_cutoff: int,
    work_limit: int = DEFAULT_WORK_LIMIT,
) -> Cyclotomic:
    """Exact sum of kernel Walsh coefficients over the truncated dual net.

    Sums khat over all pairs of nonzero dual vectors with weight-1 metric at
    most the cutoff.  In one dimension the sum is aggregated through
    bilinearity: per-cell character sums replace the pairwise loop, which
    keeps exact arithmetic linear in the cell count (values agree with the
    pairwise route, which remains as the oracle for small cases).
    """
    if m < 1 or m > ms.cols:
        raise UsageError(f"m must lie in [1, {ms.cols}]")
    duals = dual_indices(ms, mu1_cutoff, work_limit)
    base = ms.base
    if not duals:
        return Cyclotomic.zero(base)
    if spec.dims != ms.dims:
        raise UsageError("kernel spec and matrix set dimensions differ")
    if spec.dims == 1:
        return _dual_sum_aggregated(
            base, spec.alpha, [d.components[0] for d in duals], mu1_cutoff
        )
    if len(duals) ** 2 > work_limit:
        raise ResourceLimitError(
            f"{len(duals)}**2 dual pairs exceed the work limit {work_limit}"
        )
    acc = Cyclotomic.zero(base)
    for da in duals:
        for db in duals:
            acc = acc + kernel_walsh_coeff_vec(
                base, spec.alpha, da.components, db.components
            )
    return acc


def _dual_sum_aggregated(
    base: int, alpha: int, ks: list[int], cutoff: int
) -> Cyclotomic:
    g = cutoff
    n = base**g
    # Class counts of the aggregated character sum W(t) = sum_k w**e_k(t).
    counts = np.zeros((base, n), dtype=np.int64)
    for k in ks:
        evec = _char_exponents(base, g, k)
        for e in range(base):
            counts[e] += evec == e
    # Polynomial part: sum_r |sum_k bhat_r(k)|**2 via per-cell aggregation.
    acc = Cyclotomic.zero(base)
    for r in range(alpha + 1):
        den, nums = _bernoulli_cell_integrals(base, r, g)
        a_r = Cyclotomic.zero(base)
        for e in range(base):
            dot = sum(int(c) * num for c, num in zip(counts[e], nums))
            if dot:
                a_r = a_r + Cyclotomic.root(base, -e) * Fraction(dot, den)
        acc = acc + a_r * a_r.conjugate()
    # Periodic part: conj(W(t_x)) W(t_y) correlated against the offset table.
    r = 2 * alpha
    offsets = _periodic_offset_integrals(base, r, g)
    den_off = math.lcm(*(f.denominator for f in offsets))
    off_nums = [int(f * den_off) for f in offsets]
    per = Cyclotomic.zero(base)
    for e in range(base):
        for e2 in range(base):
            corr_dot = 0
            for u in range(n):
                corr = int(np.dot(np.roll(counts[e], -u), counts[e2]))
                if corr:
                    corr_dot += off_nums[u] * corr
            if corr_dot:
                per = per + Cyclotomic.root(base, e2 - e) * Fraction(
                    corr_dot, den_off * math.factorial(r)
                )
    return acc + per if alpha % 2 else acc - per
