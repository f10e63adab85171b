from pathlib import Path

import pytest

from ainfty.contraction import cohomology
from ainfty.dga import build_dga, genpoly_from_words
from ainfty.dgaio import parse_source

DATA = Path(__file__).resolve().parents[1] / "data"


@pytest.fixture(scope="session")
def src33():
    return parse_source((DATA / "example-3.3.dga").read_text())


@pytest.fixture(scope="session")
def dga33(src33):
    return build_dga(src33.spec)


@pytest.fixture(scope="session")
def canon33(dga33):
    return cohomology(dga33)


@pytest.fixture(scope="session")
def classes33(src33, dga33, canon33):
    out = []
    for name in ["a01", "a12", "a23"]:
        deg, v = dga33.element_from_genpoly(genpoly_from_words(src33.spec, [(1, [name])]))
        out.append((deg, canon33.coords(deg, v)))
    return out


@pytest.fixture(scope="session")
def src26():
    return parse_source((DATA / "example-2.6.dga").read_text())


@pytest.fixture(scope="session")
def dga26(src26):
    return build_dga(src26.spec)


@pytest.fixture(scope="session")
def canon26(dga26):
    return cohomology(dga26)


@pytest.fixture(scope="session")
def classes26(src26, dga26, canon26):
    out = []
    for name in ["a01", "a12", "a23", "a34"]:
        deg, v = dga26.element_from_genpoly(genpoly_from_words(src26.spec, [(1, [name])]))
        out.append((deg, canon26.coords(deg, v)))
    return out


def class_of(src, dga, canon, words):
    """Canonical class of a sum of monomial words, e.g. [["a01","a14"], ...]."""
    deg, v = dga.element_from_genpoly(genpoly_from_words(src.spec, [(1, w) for w in words]))
    return deg, canon.coords(deg, v)
