"""Shared fixtures for the singularity engine tests."""

import pytest

from singcat.config import get_settings
from singcat.parser import parse_poly
from singcat.ring import RingContext
from singcat.singularity import Germ

# label, variables, germ, mu
ADE_SUITE = [
    ("A1", "x,y", "x^2 + y^2", 1),
    ("A2", "x,y", "x^3 + y^2", 2),
    ("A3", "x,y", "x^4 + y^2", 3),
    ("A4", "x,y", "x^5 + y^2", 4),
    ("A5", "x,y", "x^6 + y^2", 5),
    ("A6", "x,y", "x^7 + y^2", 6),
    ("D4", "x,y", "x^2*y + y^3", 4),
    ("D5", "x,y", "x^2*y + y^4", 5),
    ("D6", "x,y", "x^2*y + y^5", 6),
    ("E6", "x,y", "x^3 + y^4", 6),
    ("E7", "x,y", "x^3 + x*y^3", 7),
    ("E8", "x,y", "x^3 + y^5", 8),
]


def make_germ(text: str, variables: str) -> Germ:
    return Germ(parse_poly(text, RingContext.of(variables)))


@pytest.fixture(autouse=True)
def reset_settings_cache():
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def ring_x() -> RingContext:
    return RingContext.of("x")


@pytest.fixture
def ring_xy() -> RingContext:
    return RingContext.of("x,y")


@pytest.fixture
def germ():
    return make_germ
