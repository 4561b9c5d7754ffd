"""Walsh functions, pair types, exact kernel coefficients, count formulas."""

import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest

from hodnet.cyclotomic import Cyclotomic
from hodnet.errors import UsageError
from hodnet.gf import digits_of
from hodnet.points import DigitPoint
from hodnet.quality import nonzero_digit_terms
from hodnet.walsh import (
    _anti1,
    _anti2,
    _char_exponents,
    _exponent_matrix,
    _periodic_coeff_reference,
    bernoulli_walsh_coeff,
    build_coeff_table,
    count_type_pairs,
    decay_ratio_sup,
    iter_kernel_coeffs,
    kernel_walsh_coeff,
    kernel_walsh_coeff_vec,
    pair_type,
    periodic_bernoulli_walsh_coeff,
    sparsity_violations,
    walsh_exponent,
    walsh_point_exponent,
)


def test_walsh_exponent_examples():
    assert walsh_exponent(2, 0, (1, 0, 1)) == 0
    assert walsh_exponent(2, 1, (1,)) == 1  # x = 1/2, value -1
    assert walsh_exponent(3, 2, (1, 0)) == 2
    pt = DigitPoint(2, ((1,), (1,)))
    assert walsh_point_exponent(2, (1, 1), pt) == 0
    assert walsh_point_exponent(2, (1, 0), pt) == 1


def test_pair_type_examples():
    for k in (0, 1, 5, 12):
        assert pair_type(2, k, k) == (0, 0)
    assert pair_type(2, 5, 1) == (1, 0)
    assert pair_type(2, 1, 5) == (0, 1)
    assert pair_type(2, 5, 6) == (2, 2)
    assert pair_type(2, 85, 1) == (3, 0)


def _naive_pair_type(b, k, l):
    """Literal search over all strip depths; the suffix matcher's oracle."""
    if k == l:
        return (0, 0)
    tk = nonzero_digit_terms(k, b)
    tl = nonzero_digit_terms(l, b)

    def term_value(terms, idx):
        if idx == 0:
            return 0
        dig, pos = terms[idx - 1]
        return dig * b ** (pos - 1)

    def tail(terms, strip):
        return sum(d * b ** (c - 1) for d, c in terms[strip:])

    matches = [
        (p, q)
        for p in range(len(tk) + 1)
        for q in range(len(tl) + 1)
        if tail(tk, p) == tail(tl, q) and term_value(tk, p) != term_value(tl, q)
    ]
    assert len(matches) == 1, (k, l, matches)
    return matches[0]


@pytest.mark.parametrize("b", [2, 3])
def test_pair_type_against_naive(b):
    for k in range(b**4):
        for l in range(b**4):
            got = pair_type(b, k, l)
            assert got == _naive_pair_type(b, k, l)
            p, q = got
            v = len(nonzero_digit_terms(k, b))
            w = len(nonzero_digit_terms(l, b))
            assert v - p == w - q
            assert pair_type(b, l, k) == (q, p)


def test_bernoulli_walsh_examples():
    one = Cyclotomic.one(2)
    assert bernoulli_walsh_coeff(2, 0, 0) == one
    for k in range(1, 16):
        assert bernoulli_walsh_coeff(2, 0, k).is_zero()
    assert bernoulli_walsh_coeff(2, 1, 1) == Cyclotomic.rational(2, Fraction(-1, 4))
    for r in (1, 2, 3):
        assert bernoulli_walsh_coeff(2, r, 0).is_zero()
        assert bernoulli_walsh_coeff(3, r, 0).is_zero()


def test_periodic_coeff_zero_at_origin():
    assert periodic_bernoulli_walsh_coeff(2, 2, 0, 0).is_zero()
    assert periodic_bernoulli_walsh_coeff(3, 4, 0, 0).is_zero()


@pytest.mark.parametrize("b", [2, 3])
@pytest.mark.parametrize("r", [2, 4])
def test_periodic_production_equals_reference(b, r):
    # The linear-cost accumulation route must match the direct cell-pair
    # integration exactly, both orientations.
    for k in range(b**2 + 3):
        for l in range(b**2 + 3):
            assert periodic_bernoulli_walsh_coeff(
                b, r, k, l
            ) == _periodic_coeff_reference(b, r, k, l), (b, r, k, l)


@pytest.mark.parametrize("b", [2, 3])
def test_periodic_conjugate_symmetry_reference(b):
    rng = random.Random(3)
    for _ in range(25):
        k = rng.randrange(0, b**3)
        l = rng.randrange(0, b**3)
        a = _periodic_coeff_reference(b, 2, k, l)
        c = _periodic_coeff_reference(b, 2, l, k)
        assert c == a.conjugate()


def test_kernel_coeff_examples():
    for b in (2, 3):
        for alpha in (1, 2):
            assert kernel_walsh_coeff(b, alpha, 0, 0) == Cyclotomic.one(b)
    assert kernel_walsh_coeff(2, 1, 85, 1).is_zero()
    # Multivariate: product over coordinates, all-zero index gives 1.
    assert kernel_walsh_coeff_vec(2, 1, (0, 0), (0, 0)) == Cyclotomic.one(2)
    v = kernel_walsh_coeff_vec(2, 1, (1, 2), (1, 0))
    w = kernel_walsh_coeff(2, 1, 1, 1) * kernel_walsh_coeff(2, 1, 2, 0)
    assert v == w


def test_kernel_coeff_conjugate_symmetry():
    rng = random.Random(5)
    for b, alpha in ((2, 1), (2, 2), (3, 1)):
        for _ in range(20):
            k = rng.randrange(0, b**4)
            l = rng.randrange(0, b**4)
            assert kernel_walsh_coeff(b, alpha, l, k) == kernel_walsh_coeff(
                b, alpha, k, l
            ).conjugate()


def test_multivariate_sparsity_corollary():
    # One bad coordinate pair kills the whole product.
    val = kernel_walsh_coeff_vec(2, 1, (85, 1), (1, 1))
    assert val.is_zero()
    val = kernel_walsh_coeff_vec(3, 1, (1, 61), (1, 1))
    p, q = pair_type(3, 61, 1)
    if p + q > 2:
        assert val.is_zero()


def test_batch_engine_matches_per_pair():
    for b, alpha in ((2, 1), (3, 1), (2, 2)):
        got = {
            (k, l): (ptype, value)
            for k, l, ptype, value in iter_kernel_coeffs(b, alpha, b**2)
        }
        assert len(got) == b**4
        for (k, l), (ptype, value) in got.items():
            assert ptype == pair_type(b, k, l)
            assert value == kernel_walsh_coeff(b, alpha, k, l), (b, alpha, k, l)


def test_scan_caps():
    with pytest.raises(UsageError):
        list(iter_kernel_coeffs(2, 4, 4))
    with pytest.raises(UsageError):
        list(iter_kernel_coeffs(2, 1, 2**6))


def test_coeff_table_symmetry_and_types():
    table = build_coeff_table(2, 1, 8)
    for (k, l), (value, ptype) in table.entries.items():
        assert table.value(l, k) == value.conjugate()
        assert table.ptype(l, k) == (ptype[1], ptype[0])
        if sum(ptype) > 2:
            assert value.is_zero()


def test_sparsity_small_scans():
    assert sparsity_violations(2, 1, 2**3) == []
    assert sparsity_violations(3, 1, 3**2) == []


@pytest.mark.parametrize("b,n", [(2, 5), (3, 4)])
def test_walsh_orthonormality_exact(b, n):
    """Grid sums of wal_k * conj(wal_l) vanish exactly off the diagonal.

    Piecewise constancy makes the cell sum the exact integral; the sum of
    root-of-unity values is assembled in the cyclotomic field.
    """
    emat = _exponent_matrix(b, n)
    cells = b**n
    for k in range(cells):
        diff = (emat[k][None, :] - emat) % b
        counts = np.stack([(diff == e).sum(axis=1) for e in range(b)], axis=1)
        for l in range(cells):
            total = Cyclotomic.zero(b)
            for e in range(b):
                c = int(counts[l, e])
                if c:
                    total = total + Cyclotomic.root(b, e) * c
            if k == l:
                assert total == Cyclotomic.rational(b, cells)
            else:
                assert total.is_zero(), (k, l)


def test_decay_ratio_sup_monotone_and_stable():
    for b, alpha in ((2, 1), (2, 2), (3, 1)):
        sups = [decay_ratio_sup(b, alpha, b**g) for g in (2, 3, 4)]
        assert all(math.isfinite(s) for s in sups)
        assert sups[0] <= sups[1] <= sups[2]
        # Converged: growing the scan no longer moves the sup.
        assert sups[2] == pytest.approx(sups[1], rel=1e-12)


@pytest.mark.parametrize("b", [2, 3])
def test_count_formulas_match_bruteforce_small(b):
    for p, q in ((0, 0), (1, 0), (0, 1), (2, 0), (0, 2), (1, 1)):
        for z1 in range(5):
            for z2 in range(5):
                brute = count_type_pairs(b, p, q, z1, z2, "bruteforce")
                formula = count_type_pairs(b, p, q, z1, z2, "formula")
                assert brute == formula, (b, p, q, z1, z2)


def test_count_examples():
    assert count_type_pairs(2, 0, 0, 2, 2, "bruteforce") == 2
    assert count_type_pairs(2, 1, 0, 2, 1, "formula") == 1
    assert count_type_pairs(2, 1, 1, 1, 1, "formula") == 0
    with pytest.raises(UsageError):
        count_type_pairs(2, 3, 0, 2, 1, "formula")


def _signed_periodic_reference(base, r, k, l):
    """Walsh coefficient of the signed periodic difference kernel.

    For odd degree the periodic extension of B_r at x - y flips sign across
    the diagonal relative to B_r(|x - y|); this variant integrates the
    periodic difference itself and only backs the recursion cross-check.
    """
    g = max(len(digits_of(k, base)), len(digits_of(l, base)))
    n = base**g
    h = Fraction(1, n)
    ek = _char_exponents(base, g, k)
    el = _char_exponents(base, g, l)
    f2 = [_anti2(r, u * h) for u in range(n + 1)]
    upper_sign = -1 if r % 2 else 1
    tri = f2[1] - f2[0] - _anti1(r, Fraction(0)) * h
    diag = (1 + upper_sign) * tri
    acc: dict[int, Fraction] = {}
    for tx in range(n):
        for ty in range(n):
            u = tx - ty
            if u == 0:
                val = diag
            elif u > 0:
                val = f2[u + 1] - 2 * f2[u] + f2[u - 1]
            else:
                val = (f2[-u + 1] - 2 * f2[-u] + f2[-u - 1]) * upper_sign
            e = (int(el[ty]) - int(ek[tx])) % base
            acc[e] = acc.get(e, Fraction(0)) + val
    out = Cyclotomic.zero(base)
    for e, s in acc.items():
        if s:
            out = out + Cyclotomic.root(base, e) * (s / math.factorial(r))
    return out


@pytest.mark.parametrize(
    "b,k,l",
    [(2, 85, 1), (2, 43, 1), (3, 40, 1), (3, 35, 2)],
)
def test_periodic_recursion_cross_check(b, k, l):
    """Degree-reduction identity for the periodic coefficients, checked
    exactly on pairs whose high-index terms all vanish by sparsity.

    With (k, l) of type (p, q), adding any extra leading term to k raises p
    by one, so for p + q = r - 1 the infinite part of the identity is
    identically zero and the remaining finite combination must match.
    """
    r = 4
    p, q = pair_type(b, k, l)
    assert p + q == r - 1
    kappa1, c1 = nonzero_digit_terms(k, b)[0]
    k_stripped = k - kappa1 * b ** (c1 - 1)
    one = Cyclotomic.one(b)
    w_neg = Cyclotomic.root(b, -kappa1)
    coeff_strip = (one - w_neg).inverse()
    coeff_keep = Cyclotomic.rational(b, Fraction(1, 2)) + (w_neg - one).inverse()
    rhs = (
        coeff_strip * _signed_periodic_reference(b, r - 1, k_stripped, l)
        + coeff_keep * _signed_periodic_reference(b, r - 1, k, l)
    ) * Fraction(-1, b**c1)
    assert periodic_bernoulli_walsh_coeff(b, r, k, l) == rhs
