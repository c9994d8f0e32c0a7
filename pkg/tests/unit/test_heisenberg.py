"""Heisenberg group arithmetic, lattice validation and the (Δ, Γ, q) correspondence"""

import math
from fractions import Fraction

import pytest

from iwasawa_lab.services.errors import CocycleConditionViolated, FieldMismatchError, NotCocompactError, RankError, ZeroVectorError
from iwasawa_lab.services.exact_fields import QuadField
from iwasawa_lab.services.heisenberg import (
    HeisPoint,
    LieVector,
    bch,
    bracket,
    check_cocycle_condition,
    cocycle,
    cocycle_rational,
    construct_iwasawa,
    extract_iwasawa,
    gram_matrix,
    heis_commutator,
    heis_exp,
    heis_inv,
    heis_log,
    heis_mul,
    heis_pow,
    primitive_in_delta,
    q_generates_gamma,
    split_over_line,
    validate_lattice,
    word_oracle,
)
from iwasawa_lab.services.zlattice import ZLattice, lattice_from_generators, member, scale

pytestmark = pytest.mark.unit

QI = QuadField(1)


def point(a=0, b=0, c=0):
    """Point with Gaussian entries given as ints or (re, im) pairs"""

    def elem(x):
        return QI(*x) if isinstance(x, tuple) else QI(x)

    return HeisPoint(QI, elem(a), elem(b), elem(c))


def lie(x=0, y=0, z=0):
    return LieVector(QI, QI(x), QI(y), QI(z))


def gaussian_generators(a_scale=1):
    return [
        point(a=a_scale),
        point(a=(0, 1)),
        point(b=1),
        point(b=(0, 1)),
        point(c=1),
        point(c=(0, 1)),
    ]


# --------------------------------------------------------------- group law


def test_multiplication():
    assert heis_mul(point(a=1), point(b=1)) == point(1, 1, 1)
    assert heis_mul(point(b=1), point(a=1)) == point(1, 1, 0)


def test_inverse():
    g = point((1, 2), (0, -1), 3)
    assert heis_mul(g, heis_inv(g)) == HeisPoint.identity(QI)
    assert heis_mul(heis_inv(g), g) == HeisPoint.identity(QI)


def test_commutator_is_central():
    c = heis_commutator(point(a=1), point(b=1))
    assert c == point(c=1)
    assert c.is_central()


def test_log_exp():
    assert heis_log(point(c=5)) == lie(z=5)
    assert heis_log(point(1, 1, 1)) == lie(1, 1, Fraction(1, 2))
    g = point((1, 1), (2, -1), (0, 3))
    assert heis_exp(heis_log(g)) == g


def test_powers_agree_with_repeated_products():
    g = point((1, 1), 2, (0, 1))
    acc = HeisPoint.identity(QI)
    for n in range(1, 5):
        acc = heis_mul(acc, g)
        assert heis_pow(g, n) == acc
    assert heis_pow(g, -1) == heis_inv(g)


def test_bch_matches_group_law():
    x, y = lie(1, 0, 0), lie(0, 1, 0)
    assert bch(x, lie()) == x
    assert bch(x, y) == lie(1, 1, Fraction(1, 2))
    assert bch(x, y) == heis_log(heis_mul(heis_exp(x), heis_exp(y)))


def test_bracket_and_cocycle():
    assert bracket(lie(1, 0, 7), lie(0, 1, 3)) == lie(z=1)
    v, w = (QI(1), QI(0)), (QI(0), QI(1))
    assert cocycle(v, w) == QI(1)
    assert cocycle(w, v) == QI(-1)
    assert cocycle(v, v) == QI(0)


def test_fields_must_match():
    other = QuadField(2)
    with pytest.raises(FieldMismatchError):
        heis_mul(point(a=1), HeisPoint.identity(other))


# -------------------------------------------------------------- validation


def test_gaussian_lattice_is_cocompact(gaussian_lattice):
    assert gaussian_lattice.delta == ZLattice.standard(4)
    assert gaussian_lattice.gamma == ZLattice.standard(2)


def test_word_oracle_agrees_on_centre(gaussian_lattice):
    oracle = word_oracle(list(gaussian_lattice.generators), max_length=2)
    assert oracle.central == gaussian_lattice.gamma
    assert HeisPoint.identity(QI) in oracle.elements


@pytest.mark.slow
def test_word_oracle_stays_in_gamma(bundled_lattice):
    oracle = word_oracle(list(bundled_lattice.generators), max_length=4)
    assert bundled_lattice.gamma.contains_lattice(oracle.central)


def test_half_generator_enlarges_centre():
    lattice = validate_lattice(gaussian_generators(a_scale=Fraction(1, 2)))
    half = ZLattice(2, [(Fraction(1, 2), 0), (0, Fraction(1, 2))])
    assert member((Fraction(1, 2), 0), lattice.gamma)
    assert lattice.gamma == half
    oracle = word_oracle(list(lattice.generators), max_length=4)
    assert member((Fraction(1, 2), 0), oracle.central)
    assert lattice.gamma.contains_lattice(oracle.central)


def test_missing_directions_not_cocompact():
    with pytest.raises(NotCocompactError) as exc:
        validate_lattice([point(a=1), point(a=(0, 1)), point(b=1)])
    assert exc.value.which == "delta"
    assert exc.value.rank == 3


def test_commutators_alone_fill_the_centre():
    lattice = validate_lattice(gaussian_generators()[:4])
    assert lattice.gamma == ZLattice.standard(2)


def test_empty_generators_rejected():
    with pytest.raises(ValueError):
        validate_lattice([])


# ------------------------------------------------------------ iwasawa data


def test_gaussian_q_values_generate_gamma(gaussian_lattice):
    data = extract_iwasawa(gaussian_lattice)
    assert lattice_from_generators(2, data.q_values()) == data.gamma
    assert q_generates_gamma(data)


def test_eisenstein_cocycle_lands_in_gamma(eisenstein_lattice):
    data = extract_iwasawa(eisenstein_lattice)
    assert all(member(value, data.gamma) for value in data.q_values())


def test_q_is_alternating(bundled_lattice):
    data = extract_iwasawa(bundled_lattice)
    n = len(data.q)
    assert all(data.q[i][i].is_zero() for i in range(n))
    assert all(data.q[i][j] == -data.q[j][i] for i in range(n) for j in range(n))


def test_construct_round_trip(gaussian_field):
    delta, gamma = ZLattice.standard(4), ZLattice.standard(2)
    lattice = construct_iwasawa(delta, gamma, gaussian_field)
    data = extract_iwasawa(lattice)
    assert (data.delta, data.gamma) == (delta, gamma)
    assert data.q == extract_iwasawa(validate_lattice(gaussian_generators())).q


@pytest.mark.parametrize("d", [1, 2, 3, 7])
def test_random_round_trips(d, rng):
    quad = QuadField(d)
    for _ in range(3):
        den = rng.choice([1, 2, 3])
        delta = ZLattice.zero(4)
        while delta.rank < 4:
            delta = ZLattice(4, [[Fraction(rng.randint(-3, 3), den) for _ in range(4)] for _ in range(4)])
        values = [cocycle_rational(quad, v, w) for i, v in enumerate(delta.basis) for w in delta.basis[i + 1 :]]
        extra = [(Fraction(1, rng.choice([1, 2, 5])), 0), (0, Fraction(rng.randint(1, 3)))]
        gamma = lattice_from_generators(2, values + extra)
        data = extract_iwasawa(construct_iwasawa(delta, gamma, quad))
        assert (data.delta, data.gamma) == (delta, gamma)
        assert data.q == gram_matrix(quad, delta)


def test_scaled_delta_is_valid(scaled_lattice):
    assert scaled_lattice.delta == scale(ZLattice.standard(4), 2)
    values = extract_iwasawa(scaled_lattice).q_values()
    assert all(member(v, scale(ZLattice.standard(2), 4)) for v in values)


def test_refined_lattice_round_trips(refined_lattice):
    data = extract_iwasawa(refined_lattice)
    assert data.delta.rank == 4
    assert member((Fraction(1, 2),) * 4, data.delta)
    assert data.gamma == ZLattice(2, [(Fraction(1, 2), Fraction(1, 2)), (Fraction(-1, 2), Fraction(1, 2))])


def test_cocycle_condition_violation(gaussian_field):
    gamma = scale(ZLattice.standard(2), 2)
    violation = check_cocycle_condition(ZLattice.standard(4), gamma, gaussian_field)
    assert violation is not None
    assert violation.indices == (0, 2)
    assert violation.value == gaussian_field.one
    with pytest.raises(CocycleConditionViolated) as exc:
        construct_iwasawa(ZLattice.standard(4), gamma, gaussian_field)
    assert exc.value.pair == ((QI(1), QI(0)), (QI(0), QI(1)))


def test_construct_checks_ranks(gaussian_field):
    with pytest.raises(RankError):
        construct_iwasawa(ZLattice(4, [(1, 0, 0, 0)]), ZLattice.standard(2), gaussian_field)
    with pytest.raises(RankError):
        construct_iwasawa(ZLattice.standard(4), ZLattice(2, [(1, 0)]), gaussian_field)


# --------------------------------------------------------------- splitting


@pytest.mark.parametrize("line", [(1, 0), (0, 1), (1, 1), (1, (0, 1)), ((2, 1), (0, -3))])
def test_split_over_line(gaussian_lattice, line):
    data = extract_iwasawa(gaussian_lattice)
    v = tuple(QI(*x) if isinstance(x, tuple) else QI(x) for x in line)
    certificate = split_over_line(data, v)
    assert certificate.holds
    assert all(z.is_zero() for z in certificate.q_restriction)


@pytest.mark.parametrize(
    "line",
    [((2, 0), (0, 2)), ((Fraction(1, 2), 0), (0, 0)), ((6, 3), (0, -9)), ((0, 0), (Fraction(-3, 4), 0))],
)
def test_split_direction_is_saturated_in_delta(scaled_lattice, line):
    data = extract_iwasawa(scaled_lattice)
    v = tuple(QI(*x) for x in line)
    certificate = split_over_line(data, v)
    assert certificate.holds
    flat_v, flat_line = QI.flatten(v), QI.flatten(certificate.line)
    coords = data.delta.coordinates(flat_line)
    assert all(c.denominator == 1 for c in coords)
    assert math.gcd(*(int(c) for c in coords)) == 1
    k = next(i for i, x in enumerate(flat_v) if x != 0)
    ratio = flat_line[k] / flat_v[k]
    assert ratio > 0
    assert flat_line == tuple(ratio * x for x in flat_v)


def test_split_is_independent_of_the_multiple(gaussian_lattice):
    data = extract_iwasawa(gaussian_lattice)
    once = split_over_line(data, (QI(1), QI(0, 1)))
    scaled = split_over_line(data, (QI(3), QI(0, 3)))
    assert once == scaled
    assert primitive_in_delta(data, (QI(Fraction(1, 5)), QI(0))) == primitive_in_delta(data, (QI(7), QI(0)))


def test_split_needs_nonzero_direction(gaussian_lattice):
    with pytest.raises(ZeroVectorError):
        split_over_line(extract_iwasawa(gaussian_lattice), (QI(0), QI(0)))
