import itertools
import math
import random

import pytest

from eqpowers.cyclotomic import embed_int, make, one, zero, zeta
from eqpowers.cycmatrix import (
    CycMatrix,
    ShapeMismatch,
    anticommutator_terms,
    det,
    det_bareiss,
    det_cofactor,
    from_ints,
    gen_anticommutator,
    identity,
    kron,
    linear_combination,
    mat_pow,
    multinomial,
    scalar_mul,
    zeros,
)

from conftest import random_cycint


def random_matrix(rng, order, dim, density=1.0, lo=-3, hi=3):
    z = zero(order)
    return CycMatrix(
        order,
        [
            [random_cycint(rng, order, lo, hi) if rng.random() < density else z for _ in range(dim)]
            for _ in range(dim)
        ],
    )


def leibniz_det(a):
    """Independent oracle: sum over all permutations."""
    total = zero(a.order)
    for perm in itertools.permutations(range(a.dim)):
        inv = sum(1 for i in range(len(perm)) for j in range(i) if perm[j] > perm[i])
        term = one(a.order)
        for i, j in enumerate(perm):
            term = term * a[i, j]
        total = total + term if inv % 2 == 0 else total - term
    return total


def naive_anticommutator(factors):
    """Independent oracle: expand the multiset, dedupe permutations with a set."""
    labels = [idx for idx, (_, c) in enumerate(factors) for _ in range(c)]
    mats = [m for m, _ in factors]
    total = zeros(mats[0].dim, mats[0].order)
    count = 0
    for perm in set(itertools.permutations(labels)):
        prod = identity(mats[0].dim, mats[0].order)
        for idx in perm:
            prod = prod @ mats[idx]
        total = total + prod
        count += 1
    return total, count


def n2_pair():
    return from_ints(2, [[1, 0], [0, -1]]), from_ints(2, [[0, 1], [1, 0]])


def test_n2_product():
    a1, a2 = n2_pair()
    assert a1 @ a2 == from_ints(2, [[0, 1], [-1, 0]])
    assert a1 @ a2 == -(a2 @ a1)


def test_identity_and_powers():
    a1, a2 = n2_pair()
    assert (a1 @ a1).is_identity()
    assert mat_pow(a2, 2) == identity(2, 2)
    assert mat_pow(a2, 0) == identity(2, 2)
    assert a2**3 == a2


def test_shape_mismatch():
    with pytest.raises(ShapeMismatch, match="2x2 .* vs 3x3"):
        identity(2, 3) @ identity(3, 3)
    with pytest.raises(ValueError):
        identity(2, 3) + identity(2, 5)
    with pytest.raises(ValueError):
        CycMatrix(3, [[one(3), zero(3)]])


def test_linear_combination_and_nonzero():
    a1, a2 = n2_pair()
    m = linear_combination([3, 4], [a1, a2])
    assert m == from_ints(2, [[3, 4], [4, -3]])
    assert m @ m == scalar_mul(25, identity(2, 2))
    assert m.nonzero_count() == 4
    assert zeros(3, 3).is_zero()


def test_apply():
    a1, a2 = n2_pair()
    assert a2.apply([embed_int(2, 5), embed_int(2, 7)]) == [7, 5]


def test_kron_mixed_product(rng):
    for order in (3, 5):
        a, c = random_matrix(rng, order, 2), random_matrix(rng, order, 2)
        b, d = random_matrix(rng, order, 3), random_matrix(rng, order, 3)
        assert kron(a, b) @ kron(c, d) == kron(a @ c, b @ d)
    k = kron(identity(2, 3), identity(3, 3))
    assert k.dim == 6 and k.is_identity()


def shift_matrix(n, scale):
    w = zeta(n)
    rows = [[zero(n)] * n for _ in range(n)]
    for i in range(n):
        rows[i][(i + 1) % n] = w ** (scale * i)
    return CycMatrix(n, rows)


def test_det_of_monomial_matrix():
    # det of the cyclic shift with entries zeta^{2i}: sign(n-cycle) * zeta^{n(n-1)} = 1
    for n in (3, 5, 7):
        assert det(shift_matrix(n, 2)) == one(n)


def test_det_singular_combination():
    w = zeta(3)
    a1 = CycMatrix(3, [[zero(3), w, zero(3)], [zero(3), zero(3), w * w], [one(3), zero(3), zero(3)]])
    a2 = shift_matrix(3, 0)
    a3 = CycMatrix(3, [[zero(3), zero(3), one(3)], [w, zero(3), zero(3)], [zero(3), w * w, zero(3)]])
    m = linear_combination([3, 4, 5], [a1, a2, a3]) - scalar_mul(6, identity(3, 3))
    assert det(m).is_zero()


@pytest.mark.parametrize("order,dim", [(2, 4), (3, 4), (3, 5), (5, 5), (7, 6), (3, 7)])
def test_det_methods_agree_with_leibniz(order, dim):
    rng = random.Random(order * 100 + dim)
    for density in (1.0, 0.4):
        a = random_matrix(rng, order, dim, density)
        expected = leibniz_det(a)
        assert det_cofactor(a) == expected
        assert det_bareiss(a) == expected
        assert det(a) == expected


def test_bareiss_needs_pivoting():
    a = from_ints(3, [[0, 1, 0], [1, 0, 0], [0, 0, 1]])
    assert det_bareiss(a) == -1
    assert det_bareiss(zeros(3, 3)).is_zero()


def test_det_multiplicative(rng):
    for order in (3, 5):
        a, b = random_matrix(rng, order, 4), random_matrix(rng, order, 4)
        assert det(a @ b) == det(a) * det(b)


def test_multinomial():
    assert multinomial([2, 1]) == 3
    assert multinomial([1, 1, 1]) == 6
    assert multinomial([3, 2, 2]) == math.factorial(7) // (6 * 2 * 2)


def test_anticommutator_small_cases():
    a1, a2 = n2_pair()
    # {A, B} with one of each: AB + BA
    assert gen_anticommutator([(a1, 1), (a2, 1)]) == a1 @ a2 + a2 @ a1
    # multiplicities collapse duplicate orderings: (A^2 B)_+ = AAB + ABA + BAA
    expect = a1 @ a1 @ a2 + a1 @ a2 @ a1 + a2 @ a1 @ a1
    assert gen_anticommutator([(a1, 2), (a2, 1)]) == expect


@pytest.mark.parametrize("pattern", [(1, 2), (2, 1, 1), (1, 1, 1), (3, 1), (2, 2, 1)])
def test_anticommutator_matches_oracle(pattern):
    rng = random.Random(hash(pattern) & 0xFFFF)
    mats = [random_matrix(rng, 3, 3, 0.6) for _ in pattern]
    factors = list(zip(mats, pattern))
    got, count = anticommutator_terms(factors)
    expected, expected_count = naive_anticommutator(factors)
    assert got == expected
    assert count == expected_count == multinomial(pattern)


def test_anticommutator_symmetric_under_reordering(rng):
    mats = [random_matrix(rng, 5, 3, 0.5) for _ in range(3)]
    pattern = (2, 1, 2)
    base = gen_anticommutator(list(zip(mats, pattern)))
    for perm in itertools.permutations(range(3)):
        assert gen_anticommutator([(mats[i], pattern[i]) for i in perm]) == base


def test_anticommutator_identical_matrices_are_position_distinct():
    a1, _ = n2_pair()
    # (A^1 A^1)_+ with the same matrix twice = 2 A^2, not A^2
    assert gen_anticommutator([(a1, 1), (a1, 1)]) == scalar_mul(2, a1 @ a1)


def test_anticommutator_rejects_empty():
    with pytest.raises(ValueError):
        gen_anticommutator([])


def test_pretty_and_hash():
    m = from_ints(3, [[1, 0], [0, 1]])
    assert "1" in m.pretty()
    assert hash(m) == hash(identity(2, 3))
    assert make(3, [1]) == m[0, 0]
