"""
Shared fixtures: the GF(4) toy scheme (m=3, p=2, e=2) and the GF(9)
scheme (m=4, p=3, e=3).
"""
from pathlib import Path

import pytest

from algebra.field import GF4, GF9, GF512
from model.decoding import DecodingPoly, decoding_validate
from model.fixtures import DEFAULT_CACHE, DecoderCache
from model.mvf import MvFamily, canonical_set
from model.params import Database, params_build

REPO_ROOT = Path(__file__).resolve().parent.parent
TOY_BUNDLE = REPO_ROOT / "bundles" / "toy" / "bundle.yaml"


@pytest.fixture
def gf4():
    return GF4


@pytest.fixture
def gf9():
    return GF9


@pytest.fixture
def gf512():
    return GF512


@pytest.fixture
def gamma():
    """x in GF(4), the primitive cube root of unity."""
    return GF4.element(2)


@pytest.fixture
def toy_family():
    return MvFamily(6, (0, 1, 3, 4), ((1, 0), (0, 1)), ((0, 1), (1, 0)))


@pytest.fixture
def toy_decoder():
    # gamma^2 + gamma * Y
    return DecodingPoly(3, GF4, (0, 1), ((0, GF4.element(3)), (1, GF4.element(2))))


@pytest.fixture
def toy_params(toy_family, toy_decoder):
    return params_build(3, 2, 2, toy_family, toy_decoder)


@pytest.fixture
def toy_db():
    return Database(GF4, (GF4.one, GF4.element(2)))


@pytest.fixture
def gf9_decoder():
    # x + (2x + 1) Y over GF(9) = GF(3)[x]/(x^2 + 2x + 2)
    return DecodingPoly(4, GF9, (0, 1), ((0, GF9.element(3)), (1, GF9.element(7))))


@pytest.fixture
def gf9_params(gf9_decoder):
    family = MvFamily(12, canonical_set(12).elements, ((1, 0), (0, 1)), ((0, 1), (1, 0)))
    return params_build(4, 3, 3, family, gf9_decoder)


@pytest.fixture
def gf9_db():
    return Database(GF9, (GF9.element(5), GF9.element(8)))


@pytest.fixture
def toy_bundle_path():
    return TOY_BUNDLE


@pytest.fixture(scope="session")
def gf512_decoder():
    """3-sparse decoder for m=511, read from the shipped fixture file."""
    S = canonical_set(511)
    P = DecoderCache(DEFAULT_CACHE).lookup(511, S, GF512)
    assert P is not None
    assert decoding_validate(P, S) is None
    return P
