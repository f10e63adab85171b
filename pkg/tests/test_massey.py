from fractions import Fraction

import pytest

from ainfty.contraction import (
    canonical_decomposition,
    contraction_from_decomposition,
    random_decomposition,
)
from ainfty.dgaio import decomposition_from_table
from ainfty.linalg import SubspaceSlice, vec_add, vec_scale
from ainfty.massey import (
    CanonicalSystemFailure,
    build_adapted_contraction,
    check_vanishing_hypothesis,
    defining_system_canonical,
    entry_degree,
    higher_massey,
    indeterminacy,
    is_adapted,
    massey_signs,
    triple_massey,
    validate_defining_system,
    verify_recovery,
    _build_symbolic_system,
)
from ainfty.transfer import kadeishvili_recover, transfer_ainfinity

from conftest import class_of


def test_signs_table():
    s4 = massey_signs(4, (3, 3, 3, 3))
    assert (s4.adapted, s4.general) == (-1, 1)
    s3 = massey_signs(3, (3, 3, 3))
    assert (s3.adapted, s3.general) == (1, -1)


def test_entry_degrees(classes26):
    degrees = [d for d, _ in classes26]
    assert entry_degree(degrees, 0, 1) == 3
    assert entry_degree(degrees, 0, 2) == 5
    assert entry_degree(degrees, 0, 4) == 9


def test_triple_massey_33(src33, dga33, canon33, classes33):
    x1, x2, x3 = classes33
    desc = triple_massey(dga33, canon33, x1, x2, x3)
    assert desc.kind == "coset"
    assert desc.base == {}
    assert desc.subspace.dim == 4
    # the family spans exactly the products of the outer classes with H^5
    vecs = [
        class_of(src33, dga33, canon33, [w])[1]
        for w in [["a01", "a02"], ["a01", "a13"], ["a02", "a23"], ["a13", "a23"]]
    ]
    assert SubspaceSlice.from_vectors(vecs, canon33.dim(8)) == desc.subspace
    assert desc.contains({}) and desc.contains(vecs[0])
    ind = indeterminacy(dga33, canon33, x1, x2, x3)
    assert ind == desc.subspace


def test_sampled_values_are_members(dga33, canon33, classes33):
    desc = higher_massey(dga33, canon33, classes33, mode="symbolic")
    sampled = higher_massey(dga33, canon33, classes33, mode="sampled", seed=3, count=6)
    assert sampled.samples
    for s in sampled.samples:
        assert desc.contains(s)


def test_canonical_mode_is_a_single_member(dga33, canon33, classes33):
    desc = higher_massey(dga33, canon33, classes33, mode="symbolic")
    canon_pt = higher_massey(dga33, canon33, classes33, mode="canonical")
    assert canon_pt.is_single_point()
    assert desc.contains(canon_pt.base)


def test_massey_set_26_is_one_point(src26, dga26, canon26, classes26):
    desc = higher_massey(dga26, canon26, classes26, mode="symbolic")
    assert desc.kind == "coset" and desc.subspace.dim == 0
    x = class_of(
        src26, dga26, canon26,
        [["a01", "a14"], ["a02", "a24"], ["a03", "a34"]],
    )[1]
    assert desc.base == x
    assert x  # nonzero
    assert desc.is_single_point()


def test_empty_set_when_lower_product_obstructs(src33, dga33, canon33):
    # <[a02], [a12], [a23]> has [a02][a12] != 0, so no defining system exists
    bad = class_of(src33, dga33, canon33, [["a02"]])
    x2 = class_of(src33, dga33, canon33, [["a12"]])
    x3 = class_of(src33, dga33, canon33, [["a23"]])
    desc = higher_massey(dga33, canon33, [bad, x2, x3], mode="symbolic")
    assert desc.kind == "empty"
    assert desc.contains({}) is False


def test_validate_defining_system_catches_tampering(dga33, canon33, classes33):
    ds, _ = _build_symbolic_system(dga33, canon33, classes33)
    conc = ds.substitute({p: 0 for p in ds.parameters})
    assert validate_defining_system(conc, canon33) == []
    (i, j), (deg, v) = next(
        ((k, e) for k, e in conc.entries.items() if k[1] - k[0] == 1)
    )
    conc.entries[(i, j)] = (deg, vec_scale(Fraction(2), v))
    assert validate_defining_system(conc, canon33)


def test_canonical_system_33_is_adapted(dga33, canon33, classes33):
    c = contraction_from_decomposition(dga33, canonical_decomposition(dga33))
    ds = defining_system_canonical(c, classes33, canon33)
    assert not isinstance(ds, CanonicalSystemFailure)
    assert validate_defining_system(ds, canon33) == []
    adapted, witness = is_adapted(c, ds)
    assert adapted and witness is None


def test_canonical_system_fails_on_table_26(src26, dga26, canon26, classes26):
    dec = decomposition_from_table(dga26, src26.table)
    ct = contraction_from_decomposition(dga26, dec)
    fail = defining_system_canonical(ct, classes26, canon26)
    assert isinstance(fail, CanonicalSystemFailure)
    assert (fail.i, fail.j) == (0, 3)
    assert fail.residual


def test_adapted_branch_26(src26, dga26, canon26, classes26):
    desc = higher_massey(dga26, canon26, classes26, mode="symbolic")
    ds, _ = _build_symbolic_system(dga26, canon26, classes26)
    assert ds.parameters == ()  # the defining system is unique
    conc = ds.substitute({})
    dec = decomposition_from_table(dga26, src26.table)
    ct = contraction_from_decomposition(dga26, dec)
    adapted_t, witness_t = is_adapted(ct, conc)
    assert not adapted_t and witness_t

    ca = build_adapted_contraction(dga26, conc)
    adapted_a, _ = is_adapted(ca, conc)
    assert adapted_a
    struct_a, _ = transfer_ainfinity(ca, 4)
    verdict = verify_recovery(struct_a, ca, canon26, classes26, desc)
    eps = massey_signs(4, [d for d, _ in classes26]).adapted
    assert eps == -1
    # m4 = eps * x: the adapted transfer recovers the Massey element
    assert verdict.m_value == vec_scale(Fraction(eps), desc.base)
    assert verdict.recovers and -1 in verdict.recover_sigmas
    # and the canonical system assembles on the adapted contraction
    ds2 = defining_system_canonical(ca, classes26, canon26)
    assert not isinstance(ds2, CanonicalSystemFailure)


def test_recovery_verdict_on_table_26(src26, dga26, canon26, classes26):
    desc = higher_massey(dga26, canon26, classes26, mode="symbolic")
    dec = decomposition_from_table(dga26, src26.table)
    ct = contraction_from_decomposition(dga26, dec)
    struct, _ = transfer_ainfinity(ct, 4)
    verdict = verify_recovery(struct, ct, canon26, classes26, desc)
    assert not verdict.detects and not verdict.recovers
    assert verdict.gamma_check and -1 in verdict.gamma_sigmas
    zz = class_of(src26, dga26, canon26, [["z1", "z2"]])[1]
    assert verdict.gamma_witnesses[-1] == zz


def test_m3_vanishes_for_33_contractions(dga33, canon33, classes33):
    desc = higher_massey(dga33, canon33, classes33, mode="symbolic")
    for seed in [None, 0, 1, 2]:
        dec = (
            canonical_decomposition(dga33)
            if seed is None
            else random_decomposition(dga33, seed)
        )
        c = contraction_from_decomposition(dga33, dec)
        struct, _ = transfer_ainfinity(c, 3)
        verdict = verify_recovery(struct, c, canon33, classes33, desc)
        assert verdict.m_value == {}
        assert verdict.detects


def test_vanishing_hypothesis(src26, dga26, dga33):
    dec = decomposition_from_table(dga26, src26.table)
    ct = contraction_from_decomposition(dga26, dec)
    struct26, _ = transfer_ainfinity(ct, 4)
    assert not check_vanishing_hypothesis(struct26, 4)
    c33 = contraction_from_decomposition(dga33, canonical_decomposition(dga33))
    struct33, _ = transfer_ainfinity(c33, 3)
    assert check_vanishing_hypothesis(struct33, 3)


def test_inductive_recovery_oracle_26(dga26, canon26, classes26):
    ds, _ = _build_symbolic_system(dga26, canon26, classes26)
    conc = ds.substitute({})
    part = kadeishvili_recover(dga26, canon26, classes26, conc.entries, 4)
    deg, m4 = part.pinned_m[(4, 0)]
    assert deg == 10
    desc = higher_massey(dga26, canon26, classes26, mode="symbolic")
    eps = massey_signs(4, [d for d, _ in classes26]).adapted
    assert vec_scale(Fraction(eps), m4) == desc.base


def test_inductive_recovery_oracle_33(dga33, canon33, classes33):
    ds, _ = _build_symbolic_system(dga33, canon33, classes33)
    eps = massey_signs(3, [d for d, _ in classes33]).adapted
    for vals in [0, 1, -2]:
        conc = ds.substitute({p: vals for p in ds.parameters})
        vdeg, vval = conc.value()
        value_class = canon33.coords(vdeg, vval)
        part = kadeishvili_recover(dga33, canon33, classes33, conc.entries, 3)
        _, m3 = part.pinned_m[(3, 0)]
        assert m3 == vec_scale(Fraction(eps), value_class)


def test_recovery_oracle_rejects_broken_systems(dga26, canon26, classes26):
    ds, _ = _build_symbolic_system(dga26, canon26, classes26)
    conc = ds.substitute({})
    entries = dict(conc.entries)
    key = next(k for k in entries if k[1] - k[0] == 2)
    deg, v = entries[key]
    # perturb by a non-cocycle so the entry no longer solves its equation
    names = dga26.space.names(deg)
    bad = {names.index("a02"): Fraction(1)}
    entries[key] = (deg, vec_add(v, bad))
    with pytest.raises(ValueError):
        kadeishvili_recover(dga26, canon26, classes26, entries, 4)
