"""Exact arithmetic in ℚ(√−d) and real algebraic fields"""

from fractions import Fraction

import pytest

from iwasawa_lab.services.errors import DivisionByZeroError, FieldMismatchError, InvalidFieldError
from iwasawa_lab.services.exact_fields import (
    QuadField,
    RealAlgField,
    compare,
    field_arith,
    scalarize,
    sign_of,
)

pytestmark = pytest.mark.unit


@pytest.mark.parametrize("d", [0, -1, 4, 12, 18])
def test_rejects_non_squarefree_or_nonpositive_d(d):
    with pytest.raises(InvalidFieldError):
        QuadField(d)


def test_rejects_non_integer_d():
    with pytest.raises(InvalidFieldError):
        QuadField(True)


def test_gaussian_arithmetic(gaussian_field):
    i = gaussian_field.sqrt_neg_d
    assert i * i == gaussian_field(-1)
    assert (gaussian_field(1, 1) * gaussian_field(1, -1)) == gaussian_field(2)
    assert gaussian_field(1, 1).norm() == 2
    assert gaussian_field(3, 4).conj() == gaussian_field(3, -4)
    assert gaussian_field(1, 1) / gaussian_field(0, 1) == gaussian_field(1, -1)


def test_eisenstein_integer_basis(eisenstein_field):
    one, omega = eisenstein_field.integer_basis()
    assert one == eisenstein_field.one
    assert omega == eisenstein_field(Fraction(1, 2), Fraction(1, 2))
    # ω is a root of x² − x + 1
    assert omega * omega - omega + 1 == eisenstein_field.zero
    assert len(eisenstein_field.units()) == 6
    assert all(u.norm() == 1 for u in eisenstein_field.units())


def test_inverse_round_trip(rng):
    quad = QuadField(5)
    for _ in range(50):
        x = quad(Fraction(rng.randint(-20, 20), rng.randint(1, 9)), Fraction(rng.randint(-20, 20), rng.randint(1, 9)))
        if x.is_zero():
            continue
        assert x * x.inverse() == quad.one


def test_division_by_zero(gaussian_field):
    with pytest.raises(DivisionByZeroError):
        gaussian_field.one / gaussian_field.zero
    with pytest.raises(ZeroDivisionError):
        gaussian_field.zero.inverse()


def test_mixed_fields_refused(gaussian_field, eisenstein_field):
    with pytest.raises(FieldMismatchError):
        gaussian_field.one + eisenstein_field.one
    with pytest.raises(FieldMismatchError):
        field_arith(gaussian_field.one, eisenstein_field.one, "mul")


def test_field_arith_dispatch(gaussian_field):
    x, y = gaussian_field(1, 2), gaussian_field(3, -1)
    assert field_arith(x, y, "add") == gaussian_field(4, 1)
    assert field_arith(x, y, "sub") == gaussian_field(-2, 3)
    assert field_arith(x, y, "mul") == x * y
    assert field_arith(x, y, "div") * y == x
    assert field_arith(x, None, "conj") == gaussian_field(1, -2)
    assert field_arith(x, None, "norm") == 5
    with pytest.raises(ValueError):
        field_arith(x, y, "pow")


def test_mu_matrix_squares_to_minus_d():
    quad = QuadField(7)
    mu = quad.mu_matrix(1)
    square = [[sum(mu[i][k] * mu[k][j] for k in range(2)) for j in range(2)] for i in range(2)]
    assert square == [[-7, 0], [0, -7]]


def test_flatten_unflatten(gaussian_field):
    v = (gaussian_field(1, 2), gaussian_field(Fraction(-1, 3), 0))
    flat = gaussian_field.flatten(v)
    assert flat == (1, 2, Fraction(-1, 3), 0)
    assert gaussian_field.unflatten(flat) == v


# ------------------------------------------------------------- real fields


def test_reducible_polynomial_rejected():
    with pytest.raises(InvalidFieldError):
        RealAlgField((Fraction(-4), Fraction(0), Fraction(1)), (Fraction(1), Fraction(3)))


def test_interval_must_isolate_one_root():
    with pytest.raises(InvalidFieldError):
        RealAlgField((Fraction(-2), Fraction(0), Fraction(1)), (Fraction(-2), Fraction(2)))


def test_non_monic_rejected():
    with pytest.raises(InvalidFieldError):
        RealAlgField((Fraction(-2), Fraction(0), Fraction(2)), (Fraction(0), Fraction(2)))


def test_sqrt_of_square_collapses_to_rationals():
    assert RealAlgField.sqrt(1).is_rational_field()
    assert RealAlgField.sqrt(9) == RealAlgField.rational()


def test_sqrt2_arithmetic(sqrt2_field):
    root = sqrt2_field.theta()
    assert root * root == sqrt2_field.from_rational(2)
    assert (root + 1) * (root - 1) == sqrt2_field.one
    assert (root + 1).inverse() == root - 1
    assert root.norm() == -2
    assert (root + 1).norm() == -1


def test_signs_are_exact(sqrt2_field):
    root = sqrt2_field.theta()
    assert sign_of(root) == 1
    assert sign_of(-root) == -1
    assert sign_of(root - Fraction(1414, 1000)) == 1
    assert sign_of(root - Fraction(1415, 1000)) == -1
    assert sign_of(sqrt2_field.zero) == 0
    assert compare(root, sqrt2_field.from_rational(1)) == 1


def test_cube_root_field():
    fld = RealAlgField((Fraction(-2), Fraction(0), Fraction(0), Fraction(1)), (Fraction(1), Fraction(2)))
    t = fld.theta()
    assert t * t * t == fld.from_rational(2)
    assert t * t.inverse() == fld.one


def test_scalarize_splits_power_basis(sqrt2_field):
    root = sqrt2_field.theta()
    # (1 + √2)·x + y = 3 + √2 with x, y rational forces x = 1, y = 2
    system = scalarize([[root + 1, sqrt2_field.one]], [root + 3])
    assert system.unknowns == 2
    assert system.is_satisfied_by([Fraction(1), Fraction(2)])
    assert not system.is_satisfied_by([Fraction(2), Fraction(1)])


def test_scalarize_refuses_mixed_fields(sqrt2_field):
    other = RealAlgField.sqrt(3)
    with pytest.raises(FieldMismatchError):
        scalarize([[sqrt2_field.theta(), other.theta()]])


def random_rational(rng):
    return Fraction(rng.randint(-12, 12), rng.randint(1, 6))


def test_scalarize_separates_rational_and_root_parts(sqrt2_field):
    root = sqrt2_field.theta()
    # (1 + √2)·x + √2·y = 0 becomes x = 0 and x + y = 0
    system = scalarize([[root + 1, root]])
    assert system.rows == ((Fraction(1), Fraction(0)), (Fraction(1), Fraction(1)))
    assert system.rhs == (Fraction(0), Fraction(0))


def test_scalarize_keeps_the_solution_set(rng):
    fld = RealAlgField((Fraction(-2), Fraction(0), Fraction(0), Fraction(1)), (Fraction(1), Fraction(2)))

    def element():
        return fld.element([random_rational(rng) for _ in range(fld.degree)])

    def satisfies(rows, rhs, x):
        return all(
            sum((c * fld.from_rational(v) for c, v in zip(row, x)), fld.zero) == b for row, b in zip(rows, rhs)
        )

    for _ in range(10):
        rows = [[element() for _ in range(4)] for _ in range(2)]
        solution = [random_rational(rng) for _ in range(4)]
        rhs = [sum((c * fld.from_rational(v) for c, v in zip(row, solution)), fld.zero) for row in rows]
        system = scalarize(rows, rhs)
        assert system.is_satisfied_by(solution)
        for _ in range(5):
            other = [random_rational(rng) for _ in range(4)]
            assert system.is_satisfied_by(other) == satisfies(rows, rhs, other)


# ------------------------------------------------------------- field axioms


@pytest.mark.parametrize("d", [1, 2, 3, 7])
def test_quadratic_field_axioms(rng, d):
    quad = QuadField(d)
    for _ in range(30):
        x, y, z = (quad(random_rational(rng), random_rational(rng)) for _ in range(3))
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
        assert x * y == y * x
        assert (x * y).norm() == x.norm() * y.norm()
        assert (x * y).conj() == x.conj() * y.conj()


@pytest.mark.parametrize(
    "build",
    [
        lambda: RealAlgField.sqrt(2),
        lambda: RealAlgField.sqrt(5),
        lambda: RealAlgField((Fraction(-2), Fraction(0), Fraction(0), Fraction(1)), (Fraction(1), Fraction(2))),
    ],
)
def test_real_field_axioms(rng, build):
    fld = build()
    for _ in range(15):
        x, y, z = (fld.element([random_rational(rng) for _ in range(fld.degree)]) for _ in range(3))
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
        assert (x * y).norm() == x.norm() * y.norm()
        assert sign_of(x * y) == sign_of(x) * sign_of(y)
