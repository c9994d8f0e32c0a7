"""
Text codecs for exact values

Rationals travel as "p/q" or "p" strings (integers are accepted on input);
field elements and lattices are nested lists and objects of those strings.
"""

import re
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Union

import orjson

from iwasawa_lab.services.errors import FieldMismatchError
from iwasawa_lab.services.exact_fields import QuadElem, RealAlgElem, RealAlgField

_RATIONAL = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def parse_rational(value: Union[str, int, Fraction]) -> Fraction:
    """Parse "p/q", "p" or an integer; floats are rejected"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if not isinstance(value, str):
        raise ValueError(f"rationals are written as \"p/q\" strings, got {type(value).__name__}")
    match = _RATIONAL.match(value)
    if not match:
        raise ValueError(f"not a rational: {value!r}")
    numerator, denominator = match.group(1), match.group(2)
    if denominator is not None and int(denominator) == 0:
        raise ValueError(f"zero denominator in {value!r}")
    return Fraction(int(numerator), int(denominator or 1))


def format_rational(x: Fraction) -> str:
    return str(Fraction(x))


def encode_quad(z: QuadElem, with_field: bool = False) -> Dict[str, Any]:
    out: Dict[str, Any] = {"a": format_rational(z.a), "b": format_rational(z.b)}
    if with_field:
        out["d"] = z.field.d
    return out


def encode_real(x: RealAlgElem) -> Dict[str, Any]:
    return {
        "minpoly": [format_rational(c) for c in x.field.minpoly],
        "interval": [format_rational(v) for v in x.field.interval],
        "coeffs": [format_rational(c) for c in x.coeffs],
    }


def decode_real(data: Union[Sequence[Any], Dict[str, Any]], fld: Optional[RealAlgField] = None) -> RealAlgElem:
    """
    A coefficient list in ``fld``, or a self-describing ``{minpoly, interval, coeffs}``
    object. An object must name ``fld`` itself when both are given; with neither the
    field is ℚ.
    """
    if isinstance(data, dict):
        own = RealAlgField(
            tuple(parse_rational(c) for c in data["minpoly"]),
            tuple(parse_rational(v) for v in data["interval"]),
        )
        if fld is not None and own != fld:
            raise FieldMismatchError(
                f"element with minimal polynomial {data['minpoly']} on {data['interval']} lies outside the expected field"
            )
        fld, data = own, data["coeffs"]
    if fld is None:
        fld = RealAlgField.rational()
    return fld.element([parse_rational(c) for c in data])


def _default(obj: Any) -> Any:
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(payload: Any) -> str:
    """Deterministic JSON text: sorted keys, two-space indentation"""
    return orjson.dumps(payload, default=_default, option=orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS).decode()


def loads(text: Union[str, bytes]) -> Any:
    return orjson.loads(text)


def jsonable(payload: Any) -> Any:
    """Round-trip through the encoder so nested values become plain JSON types"""
    return loads(dumps(payload))


def rows_to_strings(rows: Sequence[Sequence[Fraction]]) -> List[List[str]]:
    return [[format_rational(x) for x in row] for row in rows]
