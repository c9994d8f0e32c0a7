"""Canonical lattices, Smith normal form and lattice operations"""

import math
from fractions import Fraction
from itertools import product

import pytest

from iwasawa_lab.services.errors import DimensionMismatchError, NotSublatticeError, RankError
from iwasawa_lab.services.zlattice import (
    INFINITE,
    QSubspace,
    ZLattice,
    covolume_ratio,
    direct_sum,
    index_in,
    integer_left_kernel,
    intersect,
    lattice_from_generators,
    lattice_sum,
    member,
    saturate,
    scale,
    smith_normal_form,
    stable_under,
)

pytestmark = pytest.mark.unit

ROTATION = [[0, -1], [1, 0]]


def span(*rows, m=2):
    return lattice_from_generators(m, rows)


def mat_mul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


def det(m):
    if len(m) == 1:
        return m[0][0]
    return sum((-1) ** j * m[0][j] * det([row[:j] + row[j + 1 :] for row in m[1:]]) for j in range(len(m)))


def random_unimodular(rng, n, steps=8):
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        k = rng.randint(-3, 3)
        u[i] = [x + k * y for x, y in zip(u[i], u[j])]
    return u


# ------------------------------------------------------------- canonical form


def test_canonical_basis():
    assert span((2, 0), (1, 1)).basis == ((1, 1), (0, 2))


def test_duplicates_collapse():
    assert span((1, 0), (1, 0)) == span((1, 0))
    assert span((1, 0)).rank == 1


def test_empty_generators_give_rank_zero():
    lattice = lattice_from_generators(3, [])
    assert lattice.rank == 0
    assert lattice == ZLattice.zero(3)


def test_rational_generators():
    lattice = span((Fraction(1, 2), 0), (0, Fraction(1, 3)))
    assert lattice.basis == ((Fraction(1, 2), 0), (0, Fraction(1, 3)))
    assert member((Fraction(5, 2), Fraction(-2, 3)), lattice)


def test_generator_length_checked():
    with pytest.raises(DimensionMismatchError):
        ZLattice(2, [(1, 2, 3)])


def test_canonical_form_ignores_unimodular_remix(rng):
    """Generators remixed by a random unimodular matrix give the identical lattice"""
    base = [[rng.randint(-6, 6) for _ in range(4)] for _ in range(4)]
    lattice = lattice_from_generators(4, base)
    for _ in range(100):
        u = random_unimodular(rng, 4)
        assert lattice_from_generators(4, mat_mul(u, base)) == lattice


# --------------------------------------------------------------- smith form


def test_snf_identity():
    _, d, _ = smith_normal_form([[1, 0], [0, 1]])
    assert d == [[1, 0], [0, 1]]


def test_snf_diag_2_3():
    u, d, v = smith_normal_form([[2, 0], [0, 3]])
    assert d == [[1, 0], [0, 6]]
    assert mat_mul(mat_mul(u, [[2, 0], [0, 3]]), v) == d


def test_snf_zero_matrix():
    _, d, _ = smith_normal_form([[0, 0], [0, 0]])
    assert d == [[0, 0], [0, 0]]


def test_snf_random_properties(rng):
    for _ in range(40):
        rows, cols = rng.randint(1, 4), rng.randint(1, 4)
        m = [[rng.randint(-9, 9) for _ in range(cols)] for _ in range(rows)]
        u, d, v = smith_normal_form(m)
        assert mat_mul(mat_mul(u, m), v) == d
        assert abs(det(u)) == 1 and abs(det(v)) == 1
        diag = [d[i][i] for i in range(min(rows, cols))]
        assert all(x >= 0 for x in diag)
        assert all(d[i][j] == 0 for i in range(rows) for j in range(cols) if i != j)
        for a, b in zip(diag, diag[1:]):
            assert (b == 0) if a == 0 else (b % a == 0)


def test_integer_left_kernel():
    kernel = integer_left_kernel([[1, 2], [2, 4], [0, 1]])
    assert len(kernel) == 1
    x = kernel[0]
    assert x[0] + 2 * x[1] == 0 and 2 * x[0] + 4 * x[1] + x[2] == 0
    assert math.gcd(*x) == 1


# --------------------------------------------------------------- operations


def test_intersect_examples():
    z2 = ZLattice.standard(2)
    assert intersect(z2, scale(z2, 2)) == scale(z2, 2)
    assert intersect(span((1, 0)), span((0, 1))).rank == 0


def test_intersect_against_brute_force():
    a, b = span((2, 0), (1, 1)), span((0, 2), (1, 1))
    both = intersect(a, b)
    assert member((1, 1), both)
    for v in product(range(-4, 5), repeat=2):
        assert member(v, both) == (member(v, a) and member(v, b))


def test_saturate_examples():
    assert saturate(span((2, 0))) == span((1, 0))
    z2 = ZLattice.standard(2)
    assert saturate(z2) == z2
    assert saturate(span((2, 2), (0, 4))) == z2


def test_saturate_line_against_brute_force():
    line = span((2, 4, 6), m=3)
    saturated = saturate(line)
    assert saturated == span((1, 2, 3), m=3)
    assert index_in(line, saturated) == 2


def test_saturate_inside_ambient_lattice():
    ambient = span((2, 0), (0, 2))
    assert saturate(span((4, 4)), ambient=ambient) == span((2, 2))


def test_index_examples():
    z2 = ZLattice.standard(2)
    assert index_in(scale(z2, 2), z2) == 4
    assert index_in(z2, z2) == 1
    assert index_in(span((1, 1), (0, 2)), z2) == 2
    assert index_in(span((1, 0)), z2) == INFINITE


def test_index_requires_sublattice():
    with pytest.raises(NotSublatticeError):
        index_in(span((Fraction(1, 2), 0), (0, 1)), ZLattice.standard(2))


def test_index_is_multiplicative(rng):
    z3 = ZLattice.standard(3)
    for _ in range(20):
        b = lattice_from_generators(3, [[rng.randint(-3, 3) if i != j else rng.randint(1, 3) for j in range(3)] for i in range(3)])
        if b.rank < 3:
            continue
        c = scale(b, rng.randint(2, 3))
        assert index_in(c, z3) == index_in(c, b) * index_in(b, z3)


def test_membership_examples():
    assert member((0, 0), span((3, 1)))
    assert not member((Fraction(1, 2), 0), ZLattice.standard(2))
    assert member((3, 1), span((2, 0), (1, 1)))
    assert not member((1, 0), span((2, 0), (1, 1)))


def test_sum_and_direct_sum():
    assert lattice_sum(span((2, 0)), span((0, 3))) == span((2, 0), (0, 3))
    total = direct_sum(span((1, 0)), span((0, 1)))
    assert total.ambient_dim == 4
    assert total == lattice_from_generators(4, [(1, 0, 0, 0), (0, 0, 0, 1)])


def test_covolume_ratio():
    z2 = ZLattice.standard(2)
    assert covolume_ratio(scale(z2, 2), z2) == 4
    assert covolume_ratio(z2, scale(z2, 2)) == Fraction(1, 4)
    with pytest.raises(RankError):
        covolume_ratio(span((1, 0)), z2)


def test_stable_under():
    assert stable_under(span((1, 0)), [[1, 0], [0, 1]])
    assert not stable_under(QSubspace(2, [(1, 0)]), ROTATION)
    block = [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]]
    assert stable_under(QSubspace(4, [(1, 0, 0, 0), (0, 1, 0, 0)]), block)
    with pytest.raises(DimensionMismatchError):
        stable_under(span((1, 0)), block)
