"""Distance engine: oracle equivalence, determinism, bounds, budget."""

import numpy as np
import pytest

from homprod import BitMatrix, BudgetError, NoLogicalsError
from homprod.complexes import BoundaryOperator, canonical_boundary, random_boundary
from homprod.css import boundary_from_checks, steane_check_basis
from homprod.distance import distance, distance_parallel, distance_upper_bound
from homprod.gf2 import image_basis, kernel_basis, vector_to_bits, vector_weight
from homprod.product import product


def naive_min_nontrivial(mat: BitMatrix) -> int:
    """Oracle: scan all kernel vectors, reject image members pointwise."""
    ker = kernel_basis(mat)
    im = image_basis(mat)
    im_set = set()
    for m in range(1 << im.dim):
        acc = np.zeros_like(im.matrix.data[0]) if im.dim else np.zeros(1, dtype=np.uint64)
        for i in range(im.dim):
            if (m >> i) & 1:
                acc = acc ^ im.vectors[i]
        im_set.add(acc.tobytes())
    best = None
    for m in range(1, 1 << ker.dim):
        acc = np.zeros_like(ker.matrix.data[0])
        for i in range(ker.dim):
            if (m >> i) & 1:
                acc = acc ^ ker.vectors[i]
        if acc.tobytes() in im_set:
            continue
        w = vector_weight(acc)
        if best is None or w < best:
            best = w
    return best


def test_steane_distance():
    d = boundary_from_checks(steane_check_basis(), BitMatrix.identity(3))
    res = distance(d)
    assert res.d_z == 3 and res.d_x == 3
    assert vector_weight(res.witness_z) == 3
    assert res.cosets_scanned == 2


def test_matches_oracle_on_random_instances():
    rng = np.random.default_rng(0)
    done = 0
    while done < 40:
        m = int(rng.integers(2, 9))
        h = int(rng.integers(1, m + 1))
        if (m - h) % 2:
            continue
        d = random_boundary(m, h, rng)
        res = distance(d)
        assert res.d_z == naive_min_nontrivial(d.matrix)
        assert res.d_x == naive_min_nontrivial(d.matrix.transpose())
        done += 1


def test_matches_oracle_on_small_products():
    rng = np.random.default_rng(1)
    for _ in range(10):
        d1 = random_boundary(3, 1, rng)
        d2 = random_boundary(4, 2, rng)
        p = product(d1, d2).partial
        res = distance(p)
        assert res.d_z == naive_min_nontrivial(p.matrix)
        assert res.d_x == naive_min_nontrivial(p.matrix.transpose())


def test_distance_sandwich_on_products():
    rng = np.random.default_rng(2)
    for _ in range(12):
        while True:
            m1 = int(rng.integers(2, 6))
            h1 = int(rng.integers(1, m1 + 1))
            if (m1 - h1) % 2 == 0:
                break
        d1 = random_boundary(m1, h1, rng)
        while True:
            m2 = int(rng.integers(2, 6))
            h2 = int(rng.integers(1, m2 + 1))
            if (m2 - h2) % 2 == 0:
                break
        d2 = random_boundary(m2, h2, rng)
        r1, r2 = distance(d1), distance(d2)
        rp = distance(product(d1, d2).partial)
        assert max(r1.d_z, r2.d_z) <= rp.d_z <= r1.d_z * r2.d_z
        assert max(r1.d_x, r2.d_x) <= rp.d_x <= r1.d_x * r2.d_x


def test_zero_operator_distance_one():
    res = distance(canonical_boundary(4, 0))
    assert res.d_z == 1 and res.d_x == 1
    assert res.cosets_scanned == 2 * (2**4 - 1)


def test_no_logicals_error():
    with pytest.raises(NoLogicalsError):
        distance(canonical_boundary(0, 2))


def test_budget_error_mentions_requirement():
    d = canonical_boundary(2, 2)  # rank 2, H 2 -> 2^4 steps
    with pytest.raises(BudgetError, match="2\\^4"):
        distance(d, budget=8)


def test_upper_bound_modes():
    d = boundary_from_checks(steane_check_basis(), BitMatrix.identity(3))
    w = distance_upper_bound(d, 3)
    assert w is not None and vector_weight(w) == 3
    assert distance_upper_bound(d, 2) is None
    assert distance_upper_bound(d, 0) is None


def test_upper_bound_witness_is_nontrivial_cycle():
    from homprod.gf2 import in_span

    rng = np.random.default_rng(3)
    d = random_boundary(8, 2, rng)
    exact = distance(d).d_z
    w = distance_upper_bound(d, exact)
    assert w is not None
    assert vector_weight(w) <= exact
    bits = vector_to_bits(w, 8)
    assert not ((d.matrix.to_dense() @ bits) % 2).any()
    assert not in_span(w, image_basis(d.matrix))


def test_parallel_matches_serial():
    rng = np.random.default_rng(4)
    for _ in range(6):
        d = random_boundary(8, 2, rng)
        base = distance(d)
        for threads in (2, 4, 8):
            par = distance_parallel(d, threads)
            assert par.d_z == base.d_z and par.d_x == base.d_x
            assert np.array_equal(par.witness_z, base.witness_z)
            assert np.array_equal(par.witness_x, base.witness_x)
            assert par.cosets_scanned == base.cosets_scanned


def test_witness_tie_break_is_lex_smallest():
    # zero operator: all weight-1 vectors are nontrivial cycles; comparing
    # coordinate sequences, (0,0,1) precedes (0,1,0) and (1,0,0)
    res = distance(canonical_boundary(3, 0))
    assert vector_to_bits(res.witness_z, 3).tolist() == [0, 0, 1]


def direct_sum(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    out = np.zeros((a.rows + b.rows, a.cols + b.cols), dtype=np.uint8)
    out[: a.rows, : a.cols] = a.to_dense()
    out[a.rows :, a.cols :] = b.to_dense()
    return BitMatrix.from_dense(out)


def test_multiword_upper_bound_path():
    # a 65-coordinate operator exercises the two-word representation; the
    # second summand has no homology, so the distance is the Steane block's
    steane = boundary_from_checks(steane_check_basis(), BitMatrix.identity(3))
    filler = canonical_boundary(0, 29)
    big = BoundaryOperator(direct_sum(steane.matrix, filler.matrix))
    assert big.m == 65 and big.hom_dim == 1
    w = distance_upper_bound(big, 3, budget=1 << 34)
    assert w is not None and vector_weight(w) <= 3
