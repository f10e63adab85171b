from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ainfty.contraction import contraction_from_decomposition, validate_decomposition
from ainfty.dga import SpecError, build_dga
from ainfty.dgaio import (
    ParseError,
    decomposition_from_table,
    format_terms,
    parse_dga,
    parse_source,
    parse_terms,
    serialize_decomposition,
    serialize_source,
    serialize_spec,
    terms_from_vec,
)
from ainfty.sampling import random_dga_spec

from conftest import DATA


def test_spec_round_trip_shipped_files():
    for name in ["example-2.6.dga", "example-3.3.dga"]:
        text = (DATA / name).read_text()
        src = parse_source(text)
        again = parse_source(serialize_source(src.spec))
        assert again.spec.generators == src.spec.generators
        assert again.spec.differential == src.spec.differential
        assert again.spec.relations == src.spec.relations
        assert again.spec.degree_cap == src.spec.degree_cap


def test_decomposition_round_trip_26(src26, dga26):
    dec = decomposition_from_table(dga26, src26.table)
    assert validate_decomposition(dec) == []
    text = serialize_source(src26.spec, dec)
    again = parse_source(text)
    dec2 = decomposition_from_table(dga26, again.table)
    assert dec.same_subspaces(dec2)
    # explicit tables must reproduce the same splitting exactly
    for deg in set(dec.B) | set(dec2.B):
        assert dec.b_slice(deg) == dec2.b_slice(deg)
        assert dec.c_slice(deg) == dec2.c_slice(deg)


def test_random_spec_round_trip():
    for seed in range(15):
        spec = random_dga_spec(seed)
        again = parse_dga(serialize_spec(spec))
        assert again.generators == spec.generators
        assert again.differential == spec.differential


def test_element_round_trip(src26, dga26):
    for deg in [3, 5, 6, 7, 8, 10]:
        for idx in range(dga26.dim(deg)):
            v = {idx: Fraction(1, 3)}
            terms = terms_from_vec(dga26, deg, v)
            deg2, v2 = dga26.element_from_genpoly(
                {tuple(): Fraction(0)} if not terms else _to_genpoly(src26.spec, terms)
            )
            assert (deg2, v2) == (deg, v)


def _to_genpoly(spec, terms):
    from ainfty.dga import genpoly_from_words

    return genpoly_from_words(spec, terms)


def test_parse_errors_carry_location():
    with pytest.raises(ParseError) as exc:
        parse_dga("dga {\n  degree_cap: x;\n}")
    assert exc.value.line == 2


def test_semantic_errors():
    with pytest.raises(ParseError):
        parse_dga("dga { generators { a: 2; } d { b = 0; } }")  # unknown name
    with pytest.raises(ParseError):
        parse_dga("dga { generators { a: 2; b: 4; } d { b = a; } }")  # wrong degree


@given(st.text(max_size=60))
@settings(max_examples=300, deadline=None)
def test_parser_never_panics_on_arbitrary_text(text):
    try:
        parse_source(text)
    except (ParseError, SpecError):
        pass


@given(st.binary(max_size=60))
@settings(max_examples=200, deadline=None)
def test_parser_never_panics_on_arbitrary_bytes(data):
    try:
        parse_source(data.decode("utf-8", errors="replace"))
    except (ParseError, SpecError):
        pass


@given(st.text(alphabet="ab01+-*/^ 23{};:=", max_size=40))
@settings(max_examples=300, deadline=None)
def test_expression_parser_never_panics(text):
    try:
        parse_terms(text)
    except ParseError:
        pass


def test_format_terms_output_reparses():
    for seed in range(10):
        spec = random_dga_spec(seed)
        dga = build_dga(spec)
        for deg in range(1, dga.degree_cap):
            for idx in range(min(dga.dim(deg), 3)):
                v = {idx: Fraction(-7, 2)}
                text = format_terms(terms_from_vec(dga, deg, v))
                terms = parse_terms(text)
                deg2, v2 = dga.element_from_genpoly(_to_genpoly(spec, terms))
                assert (deg2, v2) == (deg, v)
