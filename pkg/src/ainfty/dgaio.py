"""Text format for DGA specifications and decomposition tables.

Grammar (whitespace-insensitive, ``#`` line comments)::

    file          := dga_block decomposition_block?
    dga_block     := "dga" "{" item* "}"
    item          := "degree_cap" ":" INT ";"
                   | "commutative" ":" ("true"|"false") ";"
                   | "generators" "{" (NAME ":" INT ";"?)* "}"
                   | "d" "{" (NAME "=" poly ";")* "}"
                   | "relations" "{" (poly ";")* "}"
    decomposition_block := "decomposition" "{" degree_block* "}"
    degree_block  := "degree" INT "{" ("B" "{" polys "}")? ("C" "{" polys "}")? "}"
    polys         := (poly ";")*
    poly          := ["+"|"-"] term (("+"|"-") term)*
    term          := rational | [rational "*"] factor ("*" factor)*
    factor        := NAME ["^" INT]

A degree block with an explicit B or C section is taken as the complete
list for that degree; omitted sections and omitted degrees are filled
canonically when the table is turned into a decomposition.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .contraction import (
    Decomposition,
    DecompositionError,
    complete_decomposition,
    validate_decomposition,
)
from .dga import DGA, DGASpec, GenPoly, SpecError, genpoly_from_words
from .linalg import Vec, vec_clean

# terms are (coefficient, word of generator names); the parse-level
# representation of a polynomial before Koszul reordering
Terms = list[tuple[Fraction, list[str]]]


class ParseError(ValueError):
    def __init__(self, msg: str, line: int, col: int):
        self.line = line
        self.col = col
        super().__init__(f"{msg} at line {line}, column {col}")


_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+|\#[^\n]*)
      | (?P<int>\d+)
      | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
      | (?P<sym>[{}:;=+\-*/^])
    """,
    re.VERBOSE,
)


@dataclass
class Token:
    kind: str  # "int" | "name" | "sym" | "eof"
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos, line, col = 0, 1, 1
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        chunk = m.group()
        if kind != "ws":
            out.append(Token(kind, chunk, line, col))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            col = len(chunk) - chunk.rfind("\n")
        else:
            col += len(chunk)
        pos = m.end()
    out.append(Token("eof", "", line, col))
    return out


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, msg: str):
        tok = self.peek()
        raise ParseError(msg, tok.line, tok.col)

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if tok.text != text:
            self.fail(f"expected {text!r}, found {tok.text!r}")
        return self.next()

    def expect_int(self) -> int:
        tok = self.peek()
        if tok.kind != "int":
            self.fail(f"expected an integer, found {tok.text!r}")
        return int(self.next().text)

    def expect_name(self) -> str:
        tok = self.peek()
        if tok.kind != "name":
            self.fail(f"expected a name, found {tok.text!r}")
        return self.next().text

    # polynomials ----------------------------------------------------

    def parse_poly(self) -> Terms:
        terms: Terms = []
        sign = Fraction(1)
        if self.peek().text in ("+", "-"):
            if self.next().text == "-":
                sign = Fraction(-1)
        terms.append(self.parse_term(sign))
        while self.peek().text in ("+", "-"):
            sign = Fraction(1) if self.next().text == "+" else Fraction(-1)
            terms.append(self.parse_term(sign))
        return terms

    def parse_term(self, sign: Fraction) -> tuple[Fraction, list[str]]:
        coeff = sign
        word: list[str] = []
        if self.peek().kind == "int":
            num = self.expect_int()
            den = 1
            if self.peek().text == "/":
                self.next()
                den = self.expect_int()
                if den == 0:
                    self.fail("zero denominator")
            coeff *= Fraction(num, den)
            if self.peek().text != "*":
                return coeff, word
            self.next()
        while True:
            name = self.expect_name()
            exp = 1
            if self.peek().text == "^":
                self.next()
                exp = self.expect_int()
            word.extend([name] * exp)
            if self.peek().text != "*":
                return coeff, word
            self.next()

    # blocks ---------------------------------------------------------

    def parse_dga_block(self) -> DGASpec:
        self.expect("dga")
        self.expect("{")
        degree_cap = 10
        commutative = True
        generators: list[tuple[str, int]] = []
        d_entries: list[tuple[str, Terms, Token]] = []
        rel_entries: list[tuple[Terms, Token]] = []
        while self.peek().text != "}":
            tok = self.peek()
            key = self.expect_name()
            if key == "degree_cap":
                self.expect(":")
                degree_cap = self.expect_int()
                self.expect(";")
            elif key == "commutative":
                self.expect(":")
                word = self.expect_name()
                if word not in ("true", "false"):
                    raise ParseError(f"expected true or false, found {word!r}", tok.line, tok.col)
                commutative = word == "true"
                self.expect(";")
            elif key == "generators":
                self.expect("{")
                while self.peek().text != "}":
                    name = self.expect_name()
                    self.expect(":")
                    deg = self.expect_int()
                    generators.append((name, deg))
                    if self.peek().text == ";":
                        self.next()
                self.expect("}")
            elif key == "d":
                self.expect("{")
                while self.peek().text != "}":
                    start = self.peek()
                    name = self.expect_name()
                    self.expect("=")
                    d_entries.append((name, self.parse_poly(), start))
                    self.expect(";")
                self.expect("}")
            elif key == "relations":
                self.expect("{")
                while self.peek().text != "}":
                    start = self.peek()
                    rel_entries.append((self.parse_poly(), start))
                    self.expect(";")
                self.expect("}")
            else:
                raise ParseError(f"unknown section {key!r}", tok.line, tok.col)
        self.expect("}")
        spec = DGASpec(generators, {}, [], commutative, degree_cap)

        def to_genpoly(terms: Terms, where: Token, expected_degree: Optional[int], what: str) -> GenPoly:
            degrees = dict(generators)
            seen = None
            for _, word in terms:
                for w in word:
                    if w not in degrees:
                        raise ParseError(f"unknown generator {w!r}", where.line, where.col)
                deg = sum(degrees[w] for w in word)
                if seen is None:
                    seen = deg
                elif seen != deg:
                    raise ParseError(f"inhomogeneous {what}", where.line, where.col)
            if expected_degree is not None and seen is not None and seen != expected_degree:
                raise ParseError("d must raise degree by 1", where.line, where.col)
            return genpoly_from_words(spec, terms)

        for name, terms, where in d_entries:
            if name not in dict(generators):
                raise ParseError(f"unknown generator {name!r}", where.line, where.col)
            poly = to_genpoly(terms, where, dict(generators)[name] + 1, "differential")
            if poly:
                spec.differential[name] = poly
        for terms, where in rel_entries:
            poly = to_genpoly(terms, where, None, "relation")
            if poly:
                spec.relations.append(poly)
        return spec

    def parse_decomposition_block(self) -> dict[int, dict[str, Optional[list[Terms]]]]:
        self.expect("decomposition")
        self.expect("{")
        table: dict[int, dict[str, Optional[list[Terms]]]] = {}
        while self.peek().text != "}":
            tok = self.peek()
            self.expect("degree")
            deg = self.expect_int()
            if deg in table:
                raise ParseError(f"duplicate degree block {deg}", tok.line, tok.col)
            self.expect("{")
            entry: dict[str, Optional[list[Terms]]] = {"B": None, "C": None}
            while self.peek().text != "}":
                part = self.expect_name()
                if part not in ("B", "C") or entry[part] is not None:
                    self.fail(f"expected a single B or C section, found {part!r}")
                self.expect("{")
                polys: list[Terms] = []
                while self.peek().text != "}":
                    polys.append(self.parse_poly())
                    self.expect(";")
                self.expect("}")
                entry[part] = polys
            self.expect("}")
            table[deg] = entry
        self.expect("}")
        return table


@dataclass
class SourceFile:
    spec: DGASpec
    table: Optional[dict[int, dict[str, Optional[list[Terms]]]]] = None


def parse_source(text: str) -> SourceFile:
    p = _Parser(text)
    spec = p.parse_dga_block()
    table = None
    if p.peek().text == "decomposition":
        table = p.parse_decomposition_block()
    if p.peek().kind != "eof":
        p.fail(f"unexpected trailing input {p.peek().text!r}")
    return SourceFile(spec, table)


def parse_terms(text: str) -> Terms:
    """A standalone polynomial expression, e.g. ``a01*a14 + 2*z1^2``."""
    p = _Parser(text)
    terms = p.parse_poly()
    if p.peek().kind != "eof":
        p.fail(f"unexpected trailing input {p.peek().text!r}")
    return terms


def parse_dga(text: str) -> DGASpec:
    return parse_source(text).spec


def decomposition_from_table(
    dga: DGA, table: dict[int, dict[str, Optional[list[Terms]]]]
) -> Decomposition:
    """Turn a parsed table into a decomposition; explicit sections are exact,
    missing ones are filled canonically; the result is validated."""
    B_partial: dict[int, list[Vec]] = {}
    C_partial: dict[int, list[Vec]] = {}
    exact_B: set[int] = set()
    exact_C: set[int] = set()
    for deg, entry in table.items():
        for part, store, exact in (("B", B_partial, exact_B), ("C", C_partial, exact_C)):
            polys = entry[part]
            if polys is None:
                continue
            exact.add(deg)
            vecs = []
            for terms in polys:
                poly = genpoly_from_words(dga.spec if dga.parent is None else dga.parent.spec, terms)
                pdeg, v = dga.element_from_genpoly(poly)
                if pdeg != deg:
                    raise DecompositionError(
                        f"degree {deg}: listed element has degree {pdeg}"
                    )
                vecs.append(v)
            store[deg] = vecs
    dec = complete_decomposition(dga, B_partial, C_partial, exact_B, exact_C)
    problems = validate_decomposition(dec)
    if problems:
        raise DecompositionError("; ".join(problems))
    return dec


def parse_decomposition(text: str, dga: DGA) -> Decomposition:
    src = parse_source(text)
    if src.table is None:
        return decomposition_from_table(dga, {})
    return decomposition_from_table(dga, src.table)


# ---------------------------------------------------------------------------
# serialization

def format_terms(terms: Terms) -> str:
    if not terms:
        return "0"
    out = ""
    for pos, (coeff, word) in enumerate(terms):
        c = abs(Fraction(coeff))
        factors = []
        if c != 1 or not word:
            factors.append(str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}")
        i = 0
        while i < len(word):
            j = i
            while j < len(word) and word[j] == word[i]:
                j += 1
            factors.append(word[i] if j - i == 1 else f"{word[i]}^{j - i}")
            i = j
        body = "*".join(factors)
        if pos == 0:
            out = body if coeff > 0 else "-" + body
        else:
            out += (" + " if coeff > 0 else " - ") + body
    return out


def terms_from_vec(dga: DGA, degree: int, v: Vec) -> Terms:
    """A homogeneous element as written terms over the free monomial basis."""
    base = dga if dga.parent is None else dga.parent
    lifted = dga.lift(degree, v) if dga.parent is not None else v
    names = [n for n, _ in base.spec.generators]
    terms: Terms = []
    for idx in sorted(lifted):
        expts = base.monomials[degree][idx]
        word = []
        for name, e in zip(names, expts):
            word.extend([name] * e)
        terms.append((Fraction(lifted[idx]), word))
    return terms


def serialize_spec(spec: DGASpec) -> str:
    lines = ["dga {"]
    lines.append(f"  degree_cap: {spec.degree_cap};")
    lines.append(f"  commutative: {'true' if spec.commutative else 'false'};")
    lines.append("  generators {")
    for name, deg in spec.generators:
        lines.append(f"    {name}: {deg};")
    lines.append("  }")
    d_items = [(g, p) for g, p in spec.differential.items() if p]
    if d_items:
        lines.append("  d {")
        order = {n: k for k, (n, _) in enumerate(spec.generators)}
        for g, poly in sorted(d_items, key=lambda t: order[t[0]]):
            lines.append(f"    {g} = {format_terms(_genpoly_terms(spec, poly))};")
        lines.append("  }")
    if spec.relations:
        lines.append("  relations {")
        for poly in spec.relations:
            lines.append(f"    {format_terms(_genpoly_terms(spec, poly))};")
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _genpoly_terms(spec: DGASpec, poly: GenPoly) -> Terms:
    names = [n for n, _ in spec.generators]
    terms: Terms = []
    for expts in sorted(poly, reverse=True):
        word = []
        for name, e in zip(names, expts):
            word.extend([name] * e)
        terms.append((Fraction(poly[expts]), word))
    return terms


def serialize_decomposition(dec: Decomposition) -> str:
    dga = dec.dga
    lines = ["decomposition {"]
    for deg in range(dga.degree_cap + 1):
        B = dec.B.get(deg, [])
        C = dec.C.get(deg, [])
        if not B and not C:
            continue
        lines.append(f"  degree {deg} {{")
        for label, vecs in (("B", B), ("C", C)):
            lines.append(f"    {label} {{")
            for v in vecs:
                lines.append(f"      {format_terms(terms_from_vec(dga, deg, v))};")
            lines.append("    }")
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"


def serialize_source(spec: DGASpec, dec: Optional[Decomposition] = None) -> str:
    text = serialize_spec(spec)
    if dec is not None:
        text += serialize_decomposition(dec)
    return text
