"""
Shared pytest configuration and fixtures for iwasawa-lab tests.
"""

import random

import pytest

from iwasawa_lab.config import reset_settings
from iwasawa_lab.services.ce_cohomology import abelian_algebra, iwasawa_algebra
from iwasawa_lab.services.exact_fields import QuadField, RealAlgField
from iwasawa_lab.services.heisenberg import construct_iwasawa, validate_lattice
from iwasawa_lab.services.tori_hodge import torus_from_klattice, torus_from_period
from iwasawa_lab.utils.load_input import load_input
from tests.factories import integral_square


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch, tmp_path):
    """Every test starts from default settings, independent of the working directory"""
    monkeypatch.setenv("IWASAWA_LAB_CONFIG", str(tmp_path / "missing-config.json"))
    for name in ("CORPUS_DIR", "LOG_LEVEL", "LOG_JSON", "DEFAULT_HEIGHT", "DEFAULT_RMAX", "MAX_WORKERS", "ORACLE_WORD_LENGTH"):
        monkeypatch.delenv(f"IWASAWA_LAB_{name}", raising=False)
    reset_settings()
    yield
    reset_settings()


@pytest.fixture
def rng():
    """Seeded generator for randomized properties"""
    return random.Random(20240611)


# ------------------------------------------------------------------ fields


@pytest.fixture
def gaussian_field():
    return QuadField(1)


@pytest.fixture
def eisenstein_field():
    return QuadField(3)


@pytest.fixture
def sqrt2_field():
    return RealAlgField.sqrt(2)


# ---------------------------------------------------------------- lattices


@pytest.fixture
def gaussian_lattice():
    return validate_lattice(load_input("corpus:gaussian").points())


@pytest.fixture
def eisenstein_lattice():
    return validate_lattice(load_input("corpus:eisenstein").points())


@pytest.fixture
def refined_lattice():
    return construct_iwasawa(*load_input("corpus:gaussian-refined").lattice_data())


@pytest.fixture
def scaled_lattice():
    return construct_iwasawa(*load_input("corpus:gaussian-scaled").lattice_data())


@pytest.fixture(params=["gaussian", "eisenstein", "gaussian-half", "gaussian-scaled", "gaussian-refined"])
def bundled_lattice(request):
    """Every bundled lattice that passes the full suite"""
    document = load_input(f"corpus:{request.param}")
    if document.kind == "heisenberg":
        return validate_lattice(document.points())
    return construct_iwasawa(*document.lattice_data())


# ------------------------------------------------------------------- tori


@pytest.fixture
def gaussian_surface(gaussian_field):
    return torus_from_klattice(integral_square(gaussian_field), gaussian_field)


@pytest.fixture
def eisenstein_surface(eisenstein_field):
    return torus_from_klattice(integral_square(eisenstein_field), eisenstein_field)


@pytest.fixture
def noncm_curve(sqrt2_field):
    """Period √2 + i"""
    theta = sqrt2_field.theta()
    return torus_from_period(theta, sqrt2_field.one)


@pytest.fixture
def noncm_curve_2i(sqrt2_field):
    """Period √2 + 2i, not isogenous to the curve with period √2 + i"""
    theta = sqrt2_field.theta()
    return torus_from_period(theta, sqrt2_field.from_rational(2))


# -------------------------------------------------------------- algebras


@pytest.fixture
def iwasawa_model():
    return iwasawa_algebra()


@pytest.fixture
def abelian_model():
    return abelian_algebra(6)
