"""Dual enumeration, weight metrics, certification, propagation, interpolation."""

import itertools
import random
from fractions import Fraction

import numpy as np
import pytest

from hodnet.errors import ResourceLimitError, UsageError
from hodnet.gf import digitwise_add
from hodnet.matrices import (
    GeneratingMatrixSet,
    Provenance,
    build_matrices,
    niederreiter_set,
    t_value_bound,
)
from hodnet.quality import (
    DualIndex,
    certify_net,
    dick_weight,
    dual_indices,
    interpolation_gap,
    min_dual_weight,
    nonzero_digit_terms,
    propagation_check,
)


def test_dick_weight_examples():
    assert dick_weight(2, 1, 5) == 3
    assert dick_weight(2, 2, 5) == 4
    assert dick_weight(2, 3, 5) == 4
    assert dick_weight(2, 1, (5, 3)) == 5
    for alpha in (1, 2, 5):
        assert dick_weight(2, alpha, 0) == 0


def test_dick_weight_monotone_in_alpha():
    for b in (2, 3):
        for k in range(200):
            terms = nonzero_digit_terms(k, b)
            for alpha in range(1, 5):
                wa = dick_weight(b, alpha, k)
                assert wa <= dick_weight(b, alpha + 1, k)
                if terms:
                    assert wa <= alpha * terms[0][1]
            if k >= 1:
                assert dick_weight(b, 1, k) >= 1


def test_dual_examples():
    ms1 = niederreiter_set(2, 1, 1, 1)
    assert [d.components for d in dual_indices(ms1, 2)] == [(2,)]
    ms2 = niederreiter_set(2, 1, 2, 2)
    assert dual_indices(ms2, 2) == []


def test_dual_excludes_zero_and_sorted():
    ms = niederreiter_set(2, 2, 3, 3)
    out = dual_indices(ms, 5)
    assert all(any(c for c in d.components) for d in out)
    keys = [(d.mu1, d.components) for d in out]
    assert keys == sorted(keys)


def test_dual_membership_definition():
    # Every reported vector annihilates the transposed matrices; every
    # candidate below the cap that does is reported.
    ms = build_matrices(2, 2, 3, order=2)
    cap = 5
    got = {d.components for d in dual_indices(ms, cap)}
    n, m, b = ms.rows, ms.cols, ms.base

    def syndrome(vec):
        s = np.zeros(m, dtype=np.int64)
        for j, kj in enumerate(vec):
            digs = []
            x = kj
            while x:
                x, d = divmod(x, b)
                digs.append(d)
            for i, d in enumerate(digs[:n]):
                s = (s + d * ms.matrices[j][i]) % b
        return not s.any()

    brute = set()
    for k1 in range(2**cap):
        for k2 in range(2**cap):
            if (k1, k2) == (0, 0):
                continue
            w = dick_weight(b, 1, (k1, k2))
            if w <= cap and syndrome((k1, k2)):
                brute.add((k1, k2))
    assert got == brute


def test_dual_group_closure_within_shell():
    ms = niederreiter_set(2, 1, 4, 4)
    cap = 7
    got = {d.components for d in dual_indices(ms, cap)}
    members = sorted(got)
    for a in members:
        for c in members:
            s = tuple(digitwise_add(x, y, 2) for x, y in zip(a, c))
            if any(s) and dick_weight(2, 1, s) <= cap:
                assert s in got


def test_dual_work_limit():
    ms = niederreiter_set(2, 1, 4, 4)
    with pytest.raises(ResourceLimitError):
        dual_indices(ms, 12, work_limit=100)


def test_min_dual_weight_identity():
    for m in range(1, 5):
        ms = niederreiter_set(2, 1, m, m)
        assert min_dual_weight(ms, 1, m + 2) == m + 1


def test_min_dual_weight_exceeds_cap():
    ms = niederreiter_set(2, 1, 3, 3)
    assert min_dual_weight(ms, 1, 2) is None


def test_min_dual_weight_interlaced_lower_bound():
    ms = build_matrices(2, 1, 2, order=3)
    t = t_value_bound(2, 3, 1)
    rho = min_dual_weight(ms, 3, 3 * 2 + 3)
    assert rho is not None and rho > 3 * 2 - t


def test_certify_identity_nets():
    for m in range(1, 7):
        ms = niederreiter_set(2, 1, m, m)
        assert certify_net(ms, 1, 0).verdict == "certified"


def test_certify_refuted_with_witness():
    mats = [np.array([[1, 0], [1, 0]])]
    ms = GeneratingMatrixSet(2, mats, Provenance("explicit"))
    cert = certify_net(ms, 1, 0)
    assert cert.verdict == "refuted"
    ((dim, rows),) = cert.witness
    assert dim == 1
    stacked = [ms.matrices[0][i - 1] for i in rows]
    rank = np.linalg.matrix_rank(np.array(stacked))
    assert rank < len(rows)
    # The witness respects the weight budget at alpha = 1.
    assert max(rows) <= 1 * ms.cols - 0


def test_certify_vacuous():
    ms = niederreiter_set(2, 1, 1, 1)
    assert certify_net(ms, 1, 1).verdict == "certified"
    big_t = t_value_bound(2, 3, 2)
    ms2 = build_matrices(2, 2, 2, order=3)
    assert certify_net(ms2, 3, big_t).verdict == "certified"


def _naive_certify(ms, alpha, t):
    """Reference certifier: literal enumeration of every admissible selection."""
    budget = alpha * ms.cols - t
    if budget <= 0:
        return "certified"
    n, b = ms.rows, ms.base
    all_sets = []
    for size in range(0, n + 1):
        for combo in itertools.combinations(range(1, n + 1), size):
            cost = sum(sorted(combo, reverse=True)[: min(alpha, size)])
            if cost <= budget:
                all_sets.append((cost, combo))
    for picks in itertools.product(all_sets, repeat=ms.dims):
        if sum(c for c, _ in picks) > budget:
            continue
        rows = [
            ms.matrices[j][i - 1] for j, (_, combo) in enumerate(picks) for i in combo
        ]
        if not rows:
            continue
        mat = np.array(rows) % b
        if _rank_mod(mat, b) < len(rows):
            return "refuted"
    return "certified"


def _rank_mod(mat, b):
    mat = mat.copy()
    rank = 0
    rows, cols = mat.shape
    for c in range(cols):
        piv = None
        for r in range(rank, rows):
            if mat[r, c] % b:
                piv = r
                break
        if piv is None:
            continue
        mat[[rank, piv]] = mat[[piv, rank]]
        inv = pow(int(mat[rank, c]), b - 2, b)
        mat[rank] = (mat[rank] * inv) % b
        for r in range(rows):
            if r != rank and mat[r, c]:
                mat[r] = (mat[r] - mat[r, c] * mat[rank]) % b
        rank += 1
    return rank


def test_certify_matches_naive_reference():
    rng = random.Random(7)
    for b in (2, 3):
        for trial in range(12):
            mats = [
                np.array(
                    [[rng.randrange(b) for _ in range(2)] for _ in range(4)]
                )
                for _ in range(2)
            ]
            ms = GeneratingMatrixSet(b, mats, Provenance("explicit"))
            for alpha in (1, 2):
                for t in range(0, alpha * 2 + 1):
                    got = certify_net(ms, alpha, t).verdict
                    want = _naive_certify(ms, alpha, t)
                    assert got == want, (b, trial, alpha, t)


def test_certify_monotone_in_t():
    ms = build_matrices(2, 1, 3, order=2)
    verdicts = [certify_net(ms, 2, t).verdict for t in range(0, 7)]
    if "certified" in verdicts:
        first = verdicts.index("certified")
        assert all(v == "certified" for v in verdicts[first:])


def test_propagation_examples():
    ms = build_matrices(2, 1, 3, order=3)
    t = t_value_bound(2, 3, 1)
    assert certify_net(ms, 3, t).verdict == "certified"
    cert = propagation_check(ms, 3, 1, t)
    assert cert.verdict == "certified"
    assert cert.t == -(-t // 3)
    assert propagation_check(ms, 3, 2, 0).t == 0
    with pytest.raises(UsageError):
        propagation_check(ms, 3, 3, t)


def test_interpolation_gap_examples():
    assert interpolation_gap(2, 2, 0) == 0
    assert interpolation_gap(2, 2, 5) == Fraction(3, 4)
    for b, alpha in ((2, 2), (3, 3)):
        for c in range(1, 6):
            k = b ** (c - 1)  # single nonzero digit
            assert interpolation_gap(b, alpha, k) == 0
    with pytest.raises(UsageError):
        interpolation_gap(2, 1, 5)


def test_interpolation_gap_nonnegative_sampled():
    rng = random.Random(11)
    for b, alpha in ((2, 2), (2, 3), (3, 2), (3, 3)):
        for _ in range(400):
            k = rng.randrange(0, b**10)
            assert interpolation_gap(b, alpha, k) >= 0
        for _ in range(100):
            vec = tuple(rng.randrange(0, b**8) for _ in range(3))
            assert interpolation_gap(b, alpha, vec) >= 0


def test_dual_index_expansion_roundtrip():
    d = DualIndex.from_components(3, (17, 0, 5))
    for comp, terms in zip(d.components, d.expansions):
        assert sum(dig * 3 ** (pos - 1) for dig, pos in terms) == comp
        assert all(1 <= dig < 3 for dig, pos in terms)
    assert d.mu1 == dick_weight(3, 1, (17, 0, 5))
