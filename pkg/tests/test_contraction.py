from fractions import Fraction

import pytest

from ainfty.contraction import (
    DecompositionError,
    canonical_decomposition,
    cohomology,
    complete_decomposition,
    contraction_from_decomposition,
    contraction_to_decomposition,
    random_decomposition,
    validate_contraction,
    validate_decomposition,
)
from ainfty.dgaio import decomposition_from_table
from ainfty.sampling import random_dga


def test_canonical_decomposition_examples(dga33, dga26):
    for dga in [dga33, dga26]:
        dec = canonical_decomposition(dga)
        assert validate_decomposition(dec) == []
        c = contraction_from_decomposition(dga, dec)
        assert validate_contraction(c) == []


def test_table_decomposition_26(src26, dga26):
    dec = decomposition_from_table(dga26, src26.table)
    assert validate_decomposition(dec) == []
    c = contraction_from_decomposition(dga26, dec)
    assert validate_contraction(c) == []


def test_random_decompositions():
    for seed in range(8):
        dga = random_dga(seed)
        dec = random_decomposition(dga, seed + 100)
        assert validate_decomposition(dec) == []
        c = contraction_from_decomposition(dga, dec)
        assert validate_contraction(c) == []


def test_decomposition_contraction_round_trip(dga26, src26):
    # a contraction remembers exactly the splitting it was built from
    for dec in [
        canonical_decomposition(dga26),
        decomposition_from_table(dga26, src26.table),
    ]:
        c = contraction_from_decomposition(dga26, dec)
        back = contraction_to_decomposition(c)
        assert dec.same_subspaces(back)
        c2 = contraction_from_decomposition(dga26, back)
        assert validate_contraction(c2) == []


def test_cohomology_degree_10_of_26(dga26, canon26):
    assert canon26.dim(10) == 2


def test_cohomology_cup_is_graded_commutative(dga33, canon33):
    h3 = [{k: Fraction(1)} for k in range(canon33.dim(3))]
    for a in h3:
        for b in h3:
            ab = canon33.cup(3, a, 3, b)
            ba = canon33.cup(3, b, 3, a)
            # odd degree classes anticommute
            assert ab == {k: -v for k, v in ba.items()}


def test_complete_decomposition_rejects_non_cocycle_c(dga26):
    # a02 has d(a02) = a01*a12, so it cannot represent cohomology
    names = dga26.space.names(5)
    idx = names.index("a02")
    with pytest.raises(DecompositionError):
        complete_decomposition(dga26, {}, {5: [{idx: Fraction(1)}]})


def test_complete_decomposition_rejects_b_meeting_kernel(dga33):
    # a cocycle cannot be used as a complement of the kernel
    names = dga33.space.names(3)
    idx = names.index("a01")
    with pytest.raises(DecompositionError):
        complete_decomposition(dga33, {3: [{idx: Fraction(1)}]}, {})


def test_homotopy_annihilates_section(dga26, src26):
    dec = decomposition_from_table(dga26, src26.table)
    c = contraction_from_decomposition(dga26, dec)
    for deg in c.H.degrees():
        for k in range(c.H.dim(deg)):
            ideg, iv = c.apply_i(deg, {k: Fraction(1)})
            kdeg, kv = c.apply_K(ideg, iv)
            assert kv == {}
