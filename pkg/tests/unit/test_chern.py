"""The cocycle form: holomorphic type, restriction to subtori, bracket consistency"""

from fractions import Fraction

import pytest

from iwasawa_lab.services.chern import bracket_consistency, chern_form, restrict_to_subtorus, verify_holomorphic_type
from iwasawa_lab.services.errors import NotComplexLineError, NotSublatticeError, RankError
from iwasawa_lab.services.heisenberg import extract_iwasawa
from iwasawa_lab.services.tori_hodge import enumerate_elliptic_subtori
from iwasawa_lab.services.zlattice import ZLattice
from tests.factories import perturbed_cocycle, with_cocycle

pytestmark = pytest.mark.unit


def form_of(lattice):
    return chern_form(extract_iwasawa(lattice))


def test_cocycle_form_is_holomorphic(bundled_lattice):
    certificate = verify_holomorphic_type(form_of(bundled_lattice))
    assert certificate.passed
    assert certificate.values_in_gamma
    assert certificate.to_dict()["passed"] is True


def test_evaluate_matches_gram(gaussian_lattice, gaussian_field):
    form = form_of(gaussian_lattice)
    assert form.evaluate((1, 0, 0, 0), (0, 0, 1, 0)) == gaussian_field.one
    assert form.evaluate((1, 0, 0, 0), (0, 0, 0, 1)) == gaussian_field.sqrt_neg_d
    half = Fraction(1, 2)
    assert form.evaluate((half, 0, 0, 0), (0, 0, 1, 0)) == gaussian_field(half)


def test_perturbed_cocycle_is_not_k_bilinear(gaussian_lattice):
    form = form_of(perturbed_cocycle(gaussian_lattice))
    certificate = verify_holomorphic_type(form)
    assert certificate.alternating
    assert not certificate.k_bilinear
    assert not certificate.passed
    assert "k_bilinear" in certificate.witnesses
    assert not bracket_consistency(form)


def test_non_alternating_gram_detected(gaussian_lattice, gaussian_field):
    rows = [list(row) for row in gaussian_lattice.q]
    rows[0][2] = rows[0][2] + gaussian_field.one
    form = form_of(with_cocycle(gaussian_lattice, tuple(tuple(row) for row in rows)))
    certificate = verify_holomorphic_type(form)
    assert not certificate.alternating
    assert "alternating" in certificate.witnesses


def test_zero_form_is_degenerate(gaussian_lattice, gaussian_field):
    zero = tuple(tuple(gaussian_field.zero for _ in range(4)) for _ in range(4))
    certificate = verify_holomorphic_type(form_of(with_cocycle(gaussian_lattice, zero)))
    assert certificate.alternating and certificate.k_bilinear
    assert not certificate.nondegenerate
    assert certificate.witnesses["nondegenerate"] == {"gram_determinant": "0"}


def test_restriction_to_every_subtorus_vanishes(bundled_lattice):
    form = form_of(bundled_lattice)
    for subtorus in enumerate_elliptic_subtori(bundled_lattice.base_torus(), 2):
        assert restrict_to_subtorus(form, subtorus.lattice).is_zero


def test_restriction_preconditions(gaussian_lattice):
    form = form_of(gaussian_lattice)
    with pytest.raises(NotComplexLineError):
        restrict_to_subtorus(form, ZLattice(4, [(1, 0, 0, 0), (0, 0, 1, 0)]))
    with pytest.raises(RankError):
        restrict_to_subtorus(form, ZLattice(4, [(1, 0, 0, 0)]))
    half = Fraction(1, 2)
    with pytest.raises(NotSublatticeError):
        restrict_to_subtorus(form, ZLattice(4, [(half, 0, 0, 0), (0, half, 0, 0)]))


def test_bracket_consistency(bundled_lattice):
    assert bracket_consistency(form_of(bundled_lattice))
