import itertools
from fractions import Fraction

import pytest

from ainfty.dga import (
    CapExceededError,
    DGASpec,
    SpecError,
    bar_involution,
    build_dga,
    expand_free_gc,
    genpoly_from_words,
    validate_dga,
)
from ainfty.linalg import vec_add, vec_clean, vec_scale
from ainfty.sampling import random_dga


def _basis_elements(dga, max_degree):
    for deg in range(1, max_degree + 1):
        for idx in range(dga.dim(deg)):
            yield deg, {idx: Fraction(1)}


def test_examples_satisfy_the_axioms(dga33, dga26):
    assert validate_dga(dga33) == []
    assert validate_dga(dga26) == []


def test_graded_commutativity(dga33):
    elems = list(_basis_elements(dga33, 5))
    for (da, va), (db, vb) in itertools.product(elems, repeat=2):
        if da + db > dga33.degree_cap:
            continue
        _, ab = dga33.mul(da, va, db, vb)
        _, ba = dga33.mul(db, vb, da, va)
        sign = Fraction(-1 if (da * db) % 2 else 1)
        assert vec_clean(vec_add(ab, vec_scale(-sign, ba))) == {}


def test_associativity_sample(dga26):
    elems = list(_basis_elements(dga26, 3))
    for (da, va), (db, vb), (dc, vc) in itertools.islice(
        itertools.product(elems, repeat=3), 200
    ):
        if da + db + dc > dga26.degree_cap:
            continue
        dab, ab = dga26.mul(da, va, db, vb)
        _, left = dga26.mul(dab, ab, dc, vc)
        dbc, bc = dga26.mul(db, vb, dc, vc)
        _, right = dga26.mul(da, va, dbc, bc)
        assert left == right


def test_relations_vanish_in_quotient(src33, dga33):
    for rel in [["a01", "a12"], ["a12", "a23"]]:
        deg, v = dga33.element_from_genpoly(genpoly_from_words(src33.spec, [(1, rel)]))
        assert v == {}


def test_cap_is_enforced(src26, dga26):
    deg, v = dga26.element_from_genpoly(
        genpoly_from_words(src26.spec, [(1, ["a01", "a12"])])
    )
    assert deg == 6 and v
    with pytest.raises(CapExceededError):
        dga26.mul(deg, v, deg, v)


def test_bar_involution_is_an_involution(dga26):
    for deg, v in _basis_elements(dga26, 8):
        assert bar_involution(deg, bar_involution(deg, v)) == v
    # sign (-1)^(degree+1): negation on even degrees, identity on odd
    assert bar_involution(4, {0: Fraction(2)}) == {0: Fraction(-2)}
    assert bar_involution(5, {0: Fraction(2)}) == {0: Fraction(2)}


def test_duplicate_generator_names_rejected():
    with pytest.raises(SpecError):
        DGASpec([("a", 2), ("a", 3)], {}, [], True, 8)


def test_d_squared_violation_detected_at_build():
    spec = DGASpec(
        [("t", 1), ("u", 2), ("v", 2), ("w", 3)],
        {
            "v": {(1, 1, 0, 0): Fraction(1)},
            "w": {(0, 1, 1, 0): Fraction(1)},
        },
        [],
        True,
        8,
    )
    with pytest.raises((SpecError, ValueError)):
        dga = expand_free_gc(spec)
        assert validate_dga(dga)
        raise ValueError("flagged by validation instead")


def test_random_dgas_are_valid():
    for seed in range(10):
        dga = random_dga(seed)
        assert validate_dga(dga) == []
