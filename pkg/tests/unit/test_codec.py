"""Text codecs for exact values"""

from fractions import Fraction

import pytest

from iwasawa_lab.services.errors import FieldMismatchError
from iwasawa_lab.services.exact_fields import QuadField, RealAlgField
from iwasawa_lab.services.zlattice import ZLattice
from iwasawa_lab.utils.codec import (
    decode_real,
    dumps,
    encode_quad,
    encode_real,
    jsonable,
    loads,
    parse_rational,
)

pytestmark = pytest.mark.unit


@pytest.mark.parametrize(
    "text, value",
    [("3", Fraction(3)), ("-1/2", Fraction(-1, 2)), (" 4 / 6 ", Fraction(2, 3)), ("+7", Fraction(7)), (5, Fraction(5))],
)
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("text", ["1/0", "0.5", "abc", "1/-2", "", True, 0.5, None])
def test_parse_rational_rejects(text):
    with pytest.raises(ValueError):
        parse_rational(text)


def test_quad_codec():
    quad = QuadField(3)
    z = quad(Fraction(1, 2), -2)
    assert encode_quad(z) == {"a": "1/2", "b": "-2"}
    assert encode_quad(z, with_field=True)["d"] == 3
    assert encode_quad(quad.sqrt_neg_d) == {"a": "0", "b": "1"}


def test_real_codec():
    fld = RealAlgField.sqrt(2)
    x = fld(Fraction(1, 3), -1)
    encoded = encode_real(x)
    assert encoded["coeffs"] == ["1/3", "-1"]
    assert encoded["minpoly"] == ["-2", "0", "1"]
    assert encoded["interval"] == ["1", "2"]
    assert decode_real(encoded["coeffs"], fld) == x
    assert decode_real(encoded) == x
    assert decode_real(encoded, fld) == x


def test_real_codec_defaults_to_the_rationals():
    assert decode_real(["3/4"]) == RealAlgField.rational().from_rational(Fraction(3, 4))


def test_real_codec_rejects_a_foreign_field():
    encoded = encode_real(RealAlgField.sqrt(3)(0, 1))
    with pytest.raises(FieldMismatchError):
        decode_real(encoded, RealAlgField.sqrt(2))


def test_real_codec_rejects_a_bad_field():
    with pytest.raises(ValueError):
        decode_real({"minpoly": ["-2", "0", "1"], "interval": ["2", "3"], "coeffs": ["1"]})


def test_lattice_to_dict():
    lattice = ZLattice(2, [(2, 0), (1, 1)])
    assert lattice.to_dict() == {"ambient_dim": 2, "basis": [["1", "1"], ["0", "2"]]}


def test_dumps_is_deterministic():
    payload = {"b": Fraction(1, 2), "a": [ZLattice(1, [(3,)])]}
    text = dumps(payload)
    assert text == dumps(dict(reversed(list(payload.items()))))
    assert text.index('"a"') < text.index('"b"')
    assert loads(text) == {"a": [{"ambient_dim": 1, "basis": [["3"]]}], "b": "1/2"}


def test_jsonable_converts_nested_values():
    assert jsonable({"x": (Fraction(3, 4), frozenset({2, 1}))}) == {"x": ["3/4", [1, 2]]}


def test_dumps_refuses_unknown_objects():
    with pytest.raises(TypeError):
        dumps({"x": object()})
