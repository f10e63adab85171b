"""Differential graded algebras over Q with a finite degree cap.

Algebras are built from free graded-commutative specifications (odd
generators square to zero), optionally quotiented by a differential ideal.
The monomial basis is ordered graded-lex with generator significance given by
declaration order, so every downstream "choose" is reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .linalg import (
    GradedMap,
    GradedVectorSpace,
    SubspaceSlice,
    Vec,
    vec_add,
    vec_clean,
    vec_scale,
    vec_sparse,
    vec_dense,
)

# Formal polynomial in the generators: {exponent tuple: coefficient}.
GenPoly = dict[tuple, Fraction]


class SpecError(ValueError):
    pass


class CapExceededError(ValueError):
    """A computation needs a degree beyond the algebra's cap."""

    def __init__(self, degree: int, cap: int, what: str = ""):
        self.degree = degree
        self.cap = cap
        super().__init__(
            f"degree {degree} exceeds cap {cap}" + (f" while computing {what}" if what else "")
        )


@dataclass
class DGASpec:
    generators: list[tuple[str, int]]
    differential: dict[str, GenPoly]
    relations: list[GenPoly] = field(default_factory=list)
    commutative: bool = True
    degree_cap: int = 10

    def __post_init__(self):
        names = [n for n, _ in self.generators]
        if len(set(names)) != len(names):
            raise SpecError("duplicate generator names")
        for n, d in self.generators:
            if d < 1:
                raise SpecError(f"generator {n} has degree {d}; degrees must be >= 1")
        for g in self.differential:
            if g not in names:
                raise SpecError(f"differential given for unknown generator {g}")

    def gen_degree(self, name: str) -> int:
        for n, d in self.generators:
            if n == name:
                return d
        raise SpecError(f"unknown generator {name}")


def _mono_degree(expts: tuple, degrees: list[int]) -> int:
    return sum(e * d for e, d in zip(expts, degrees))


def _mono_name(expts: tuple, names: list[str]) -> str:
    if not any(expts):
        return "1"
    parts = []
    for name, e in zip(names, expts):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def _merge_sign(ea: tuple, eb: tuple, odd: list[bool]) -> Optional[int]:
    """Koszul sign for merging two sorted monomial words; None when an odd
    generator would repeat."""
    sign = 0
    for i in range(len(ea)):
        if not odd[i]:
            continue
        if ea[i] and eb[i]:
            return None
        if eb[i]:
            # move this odd letter left past the odd letters of ea with
            # larger generator index
            sign += sum(ea[j] for j in range(i + 1, len(ea)) if odd[j])
    return -1 if sign % 2 else 1


@dataclass
class DGA:
    spec: DGASpec
    space: GradedVectorSpace
    d: GradedMap
    commutative: bool
    degree_cap: int
    # free-algebra data (None on quotients)
    monomials: Optional[dict[int, list[tuple]]] = None
    # quotient data
    parent: Optional["DGA"] = None
    ideal: Optional[dict[int, SubspaceSlice]] = None
    surviving: Optional[dict[int, list[int]]] = None
    _mul_cache: dict = field(default_factory=dict, repr=False)

    # -- multiplication -----------------------------------------------------

    def mul_basis(self, da: int, ia: int, db: int, ib: int) -> Vec:
        key = (da, ia, db, ib)
        out = self._mul_cache.get(key)
        if out is None:
            out = self._mul_basis_raw(da, ia, db, ib)
            self._mul_cache[key] = out
        return out

    def _mul_basis_raw(self, da, ia, db, ib) -> Vec:
        if da + db > self.degree_cap:
            raise CapExceededError(da + db, self.degree_cap, "a product")
        if self.parent is not None:
            pa = self._lift_basis(da, ia)
            pb = self._lift_basis(db, ib)
            _, prod = self.parent.mul(da, pa, db, pb)
            return self.project(da + db, prod)
        ea = self.monomials[da][ia]
        eb = self.monomials[db][ib]
        odd = [d % 2 == 1 for _, d in self.spec.generators]
        sign = _merge_sign(ea, eb, odd)
        if sign is None:
            return {}
        merged = tuple(a + b for a, b in zip(ea, eb))
        idx = self._mono_index(da + db, merged)
        return {idx: Fraction(sign)}

    def mul(self, da: int, va: Vec, db: int, vb: Vec) -> tuple[int, Vec]:
        va, vb = vec_clean(va), vec_clean(vb)
        if not va or not vb:
            return da + db, {}
        if da + db > self.degree_cap:
            raise CapExceededError(da + db, self.degree_cap, "a product")
        out: Vec = {}
        for ia, ca in va.items():
            for ib, cb in vb.items():
                for j, x in self.mul_basis(da, ia, db, ib).items():
                    s = out.get(j, 0) + ca * cb * x
                    if s:
                        out[j] = s
                    else:
                        out.pop(j, None)
        return da + db, out

    # -- structure ----------------------------------------------------------

    @property
    def unit(self) -> tuple[int, Vec]:
        return 0, {0: Fraction(1)}

    def dim(self, degree: int) -> int:
        return self.space.dim(degree)

    def apply_d(self, degree: int, v: Vec) -> tuple[int, Vec]:
        return self.d.apply(degree, v)

    def _mono_index(self, degree: int, expts: tuple) -> int:
        return self.monomials[degree].index(expts)

    def _lift_basis(self, degree: int, index: int) -> Vec:
        """Representative of a quotient basis element in the parent basis."""
        return {self.surviving[degree][index]: Fraction(1)}

    def lift(self, degree: int, v: Vec) -> Vec:
        if self.parent is None:
            return v
        out: Vec = {}
        for i, c in v.items():
            out[self.surviving[degree][i]] = c
        return out

    def project(self, degree: int, v: Vec) -> Vec:
        """Project a parent-coordinates vector to quotient coordinates."""
        if self.parent is None:
            return v
        sl = self.ideal[degree]
        red = sl.reduce(v)
        cols = {col: pos for pos, col in enumerate(self.surviving[degree])}
        out: Vec = {}
        for i, c in red.items():
            if i not in cols:
                raise AssertionError("reduction left support on an ideal pivot")
            out[cols[i]] = c
        return out

    # -- evaluation of formal generator polynomials -------------------------

    def element_from_genpoly(self, poly: GenPoly) -> tuple[int, Vec]:
        """Evaluate a formal polynomial in the generators to a homogeneous
        element; raises SpecError on inhomogeneous input."""
        base = self if self.parent is None else self.parent
        degrees = [d for _, d in base.spec.generators]
        degree = None
        v: Vec = {}
        for expts, coeff in poly.items():
            if not coeff:
                continue
            mdeg = _mono_degree(expts, degrees)
            if degree is None:
                degree = mdeg
            elif degree != mdeg:
                raise SpecError("inhomogeneous polynomial")
            if mdeg > base.degree_cap:
                raise CapExceededError(mdeg, base.degree_cap, "a monomial")
            odd = [d % 2 == 1 for d in degrees]
            if any(o and e > 1 for o, e in zip(odd, expts)):
                continue  # odd square: zero
            idx = base._mono_index(mdeg, tuple(expts))
            v[idx] = v.get(idx, Fraction(0)) + coeff
        if degree is None:
            raise SpecError("zero polynomial has no degree")
        v = vec_clean(v)
        if self.parent is not None:
            v = self.project(degree, v)
        return degree, v


def genpoly_from_words(
    spec: DGASpec, terms: list[tuple[Fraction, list[str]]]
) -> GenPoly:
    """Build a GenPoly from written terms (coefficient, ordered generator word).

    The written word is sorted into declaration order; swapping two odd
    generators contributes a Koszul sign, and a repeated odd generator kills
    the term.
    """
    names = [n for n, _ in spec.generators]
    degrees = [d for _, d in spec.generators]
    out: GenPoly = {}
    for coeff, word in terms:
        idxs = []
        for w in word:
            if w not in names:
                raise SpecError(f"unknown generator {w}")
            idxs.append(names.index(w))
        # count inversions among odd letters while stably sorting
        sign = 1
        expts = [0] * len(names)
        ok = True
        for pos, gi in enumerate(idxs):
            if degrees[gi] % 2 == 1:
                if expts[gi] >= 1:
                    ok = False
                    break
                # odd letters already placed with larger generator index
                swaps = sum(
                    1 for gj in idxs[:pos] if gj > gi and degrees[gj] % 2 == 1
                )
                if swaps % 2:
                    sign = -sign
            expts[gi] += 1
        if not ok:
            continue
        key = tuple(expts)
        out[key] = out.get(key, Fraction(0)) + Fraction(coeff) * sign
    return {k: v for k, v in out.items() if v}


def bar_involution(degree: int, v: Vec) -> Vec:
    """The bar operation on a homogeneous element: (-1)^{|v|+1} v."""
    return vec_scale(Fraction(-1 if degree % 2 == 0 else 1), v)


# ---------------------------------------------------------------------------
# free graded-commutative expansion

def _enumerate_monomials(degrees: list[int], cap: int) -> dict[int, list[tuple]]:
    """All graded-commutative monomials of total degree <= cap, graded-lex."""
    n = len(degrees)
    out: dict[int, list[tuple]] = {d: [] for d in range(cap + 1)}

    def rec(i: int, expts: list[int], deg: int):
        if i == n:
            out[deg].append(tuple(expts))
            return
        max_e = 1 if degrees[i] % 2 == 1 else (cap - deg) // degrees[i]
        for e in range(min(max_e, (cap - deg) // degrees[i]) + 1):
            expts.append(e)
            rec(i + 1, expts, deg + e * degrees[i])
            expts.pop()

    rec(0, [], 0)
    for d in out:
        out[d].sort(reverse=True)
    return out


def expand_free_gc(spec: DGASpec) -> DGA:
    """Expand a free graded-commutative spec into a concrete DGA.

    The differential is extended as a derivation; d^2 = 0 is verified during
    expansion up to the cap.
    """
    if not spec.commutative:
        raise SpecError("only graded-commutative specs can be expanded")
    names = [n for n, _ in spec.generators]
    degrees = [d for _, d in spec.generators]
    cap = spec.degree_cap
    monomials = _enumerate_monomials(degrees, cap)
    basis = {
        deg: [_mono_name(e, names) for e in monos]
        for deg, monos in monomials.items()
        if monos
    }
    space = GradedVectorSpace(cap, basis)
    dga = DGA(spec, space, GradedMap(space, space, 1, {}), spec.commutative, cap,
              monomials=monomials)

    # differential on generators, as vectors
    d_gen: dict[int, tuple[int, Vec]] = {}
    for gi, (name, gdeg) in enumerate(spec.generators):
        poly = spec.differential.get(name)
        if poly is None or not any(poly.values()):
            continue
        ddeg, dv = dga.element_from_genpoly(poly)
        if ddeg != gdeg + 1:
            raise SpecError(f"d must raise degree by 1: d({name}) has degree {ddeg}, expected {gdeg + 1}")
        d_gen[gi] = (ddeg, dv)

    # extend as a derivation on the monomial basis
    matrices: dict[int, list[Vec]] = {}
    for deg in range(cap):  # d: deg -> deg + 1 stays within cap
        cols = []
        for expts in monomials.get(deg, []):
            word: list[int] = []
            for gi, e in enumerate(expts):
                word.extend([gi] * e)
            total: Vec = {}
            prefix_deg = 0
            for pos, gi in enumerate(word):
                if gi in d_gen:
                    sign = Fraction(-1 if prefix_deg % 2 else 1)
                    ddeg, dv = d_gen[gi]
                    # prefix * d(g) * suffix
                    pdeg, pv = _word_monomial(word[:pos], degrees, monomials, dga)
                    sdeg, sv = _word_monomial(word[pos + 1:], degrees, monomials, dga)
                    t1deg, t1 = dga.mul(pdeg, pv, ddeg, dv)
                    t2deg, t2 = dga.mul(t1deg, t1, sdeg, sv)
                    total = vec_add(total, vec_scale(sign, t2))
                prefix_deg += degrees[gi]
            cols.append(vec_clean(total))
        if cols:
            matrices[deg] = cols
    dga.d = GradedMap(space, space, 1, matrices)

    # verify d^2 = 0 where both applications are in cap
    for deg in range(cap - 1):
        for i, name in enumerate(space.names(deg)):
            _, dv = dga.d.apply(deg, {i: Fraction(1)})
            _, ddv = dga.d.apply(deg + 1, dv)
            if ddv:
                raise SpecError(f"d^2 != 0 on basis element {name} in degree {deg}")
    return dga


def _word_monomial(word: list[int], degrees, monomials, dga: DGA) -> tuple[int, Vec]:
    expts = [0] * len(degrees)
    for gi in word:
        expts[gi] += 1
    deg = sum(degrees[gi] for gi in word)
    idx = dga._mono_index(deg, tuple(expts))
    return deg, {idx: Fraction(1)}


# ---------------------------------------------------------------------------
# ideal quotients

class IdealError(ValueError):
    pass


def quotient_by_ideal(dga: DGA, gens: list[tuple[int, Vec]]) -> DGA:
    """Quotient by the two-sided ideal generated by homogeneous elements.

    The ideal must be closed under d within the cap; the quotient keeps the
    surviving parent monomial names.
    """
    if dga.parent is not None:
        raise IdealError("nested quotients are not supported")
    if not gens:
        return dga
    cap = dga.degree_cap
    # per-degree spanning vectors of the ideal
    span: dict[int, list[Vec]] = {n: [] for n in range(cap + 1)}
    for gdeg, gv in gens:
        gv = vec_clean(gv)
        if not gv:
            continue
        if gdeg == 0:
            raise IdealError("ideal containing a unit multiple is degenerate; refusing")
        for mdeg in range(0, cap - gdeg + 1):
            for mi in range(dga.dim(mdeg)):
                m = {mi: Fraction(1)}
                _, left = dga.mul(mdeg, m, gdeg, gv)
                _, right = dga.mul(gdeg, gv, mdeg, m)
                if left:
                    span[gdeg + mdeg].append(left)
                if right:
                    span[gdeg + mdeg].append(right)
    ideal: dict[int, SubspaceSlice] = {}
    for n in range(cap + 1):
        ideal[n] = SubspaceSlice.from_vectors(span[n], dga.dim(n))
        if n == 0 and ideal[n].dim:
            raise IdealError("ideal contains the unit in degree 0; quotient is degenerate")
    # d-closure
    for n in range(cap):
        for row in ideal[n].rows:
            _, dv = dga.d.apply(n, vec_sparse(row))
            if not ideal[n + 1].contains(dv):
                raise IdealError(
                    f"ideal not closed under d in degree {n}: "
                    f"d of an ideal element escapes the ideal in degree {n + 1}"
                )
    # surviving monomials: non-pivot columns, in basis order
    surviving = {
        n: [j for j in range(dga.dim(n)) if j not in ideal[n].pivots]
        for n in range(cap + 1)
    }
    basis = {
        n: [dga.space.names(n)[j] for j in surviving[n]]
        for n in range(cap + 1)
        if surviving[n]
    }
    space = GradedVectorSpace(cap, basis)
    quo = DGA(dga.spec, space, GradedMap(space, space, 1, {}), dga.commutative, cap,
              parent=dga, ideal=ideal, surviving=surviving)
    matrices: dict[int, list[Vec]] = {}
    for n in range(cap):
        cols = []
        for j in surviving[n]:
            _, dv = dga.d.apply(n, {j: Fraction(1)})
            cols.append(quo.project(n + 1, dv))
        if cols:
            matrices[n] = cols
    quo.d = GradedMap(space, space, 1, matrices)
    return quo


def build_dga(spec: DGASpec) -> DGA:
    """Expand the free algebra and quotient by the relation ideal, if any."""
    dga = expand_free_gc(spec)
    if spec.relations:
        gens = [dga.element_from_genpoly(p) for p in spec.relations]
        dga = quotient_by_ideal(dga, gens)
    return dga


# ---------------------------------------------------------------------------
# validation

def validate_dga(dga: DGA) -> list[str]:
    """Check every DGA axiom on the basis within the cap; returns violations
    with witnesses (empty list = valid)."""
    report: list[str] = []
    cap = dga.degree_cap
    space = dga.space

    def name(deg, i):
        return space.names(deg)[i]

    # d^2 = 0
    for deg in range(cap - 1):
        for i in range(space.dim(deg)):
            _, dv = dga.d.apply(deg, {i: Fraction(1)})
            _, ddv = dga.d.apply(deg + 1, dv)
            if ddv:
                report.append(f"d^2 != 0 on {name(deg, i)} (degree {deg})")

    # unit law
    for deg in range(cap + 1):
        for i in range(space.dim(deg)):
            v = {i: Fraction(1)}
            _, left = dga.mul(0, {0: Fraction(1)}, deg, v)
            _, right = dga.mul(deg, v, 0, {0: Fraction(1)})
            if left != v or right != v:
                report.append(f"unit law fails on {name(deg, i)}")

    # Leibniz
    for da in range(1, cap):
        for db in range(1, cap - da + 1):
            if da + db > cap - 1:
                continue
            for ia in range(space.dim(da)):
                for ib in range(space.dim(db)):
                    a = {ia: Fraction(1)}
                    b = {ib: Fraction(1)}
                    _, ab = dga.mul(da, a, db, b)
                    _, dab = dga.d.apply(da + db, ab)
                    _, da_ = dga.d.apply(da, a)
                    _, db_ = dga.d.apply(db, b)
                    _, t1 = dga.mul(da + 1, da_, db, b)
                    _, t2 = dga.mul(da, a, db + 1, db_)
                    rhs = vec_add(t1, vec_scale(Fraction(-1 if da % 2 else 1), t2))
                    if dab != rhs:
                        report.append(f"Leibniz fails on ({name(da, ia)}, {name(db, ib)})")

    # associativity
    for da in range(1, cap):
        for db in range(1, cap - da + 1):
            for dc in range(1, cap - da - db + 1):
                for ia in range(space.dim(da)):
                    for ib in range(space.dim(db)):
                        _, ab = dga.mul(da, {ia: Fraction(1)}, db, {ib: Fraction(1)})
                        for ic in range(space.dim(dc)):
                            c = {ic: Fraction(1)}
                            _, abc1 = dga.mul(da + db, ab, dc, c)
                            _, bc = dga.mul(db, {ib: Fraction(1)}, dc, c)
                            _, abc2 = dga.mul(da, {ia: Fraction(1)}, db + dc, bc)
                            if abc1 != abc2:
                                report.append(
                                    f"associativity fails on ({name(da, ia)}, {name(db, ib)}, {name(dc, ic)})"
                                )

    # graded commutativity
    if dga.commutative:
        for da in range(1, cap):
            for db in range(da, cap - da + 1):
                for ia in range(space.dim(da)):
                    for ib in range(space.dim(db)):
                        _, ab = dga.mul(da, {ia: Fraction(1)}, db, {ib: Fraction(1)})
                        _, ba = dga.mul(db, {ib: Fraction(1)}, da, {ia: Fraction(1)})
                        sign = Fraction(-1 if (da * db) % 2 else 1)
                        if ab != vec_scale(sign, ba):
                            report.append(
                                f"graded commutativity fails on ({name(da, ia)}, {name(db, ib)})"
                            )
    return report
