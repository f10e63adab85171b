"""Exact graded linear algebra over Q.

Vectors within a fixed degree are sparse dicts ``{basis index: coefficient}``
with coefficients in Q (``Fraction``) or in ``PolyQ``.  Subspaces are kept in
reduced row-echelon form so that equality and membership are canonical.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .scalars import PolyQ, as_polyq

Vec = dict  # {index: coefficient}


class DegreeError(ValueError):
    """Degree outside the range supported by a space or map."""


class DimensionError(ValueError):
    pass


class ContainmentError(ValueError):
    """A claimed subspace containment fails; carries the offending degree."""

    def __init__(self, degree: int, msg: str = ""):
        self.degree = degree
        super().__init__(msg or f"containment violated in degree {degree}")


# ---------------------------------------------------------------------------
# sparse vector helpers

def vec_clean(v: Vec) -> Vec:
    return {i: c for i, c in v.items() if c}


def vec_add(u: Vec, v: Vec) -> Vec:
    out = dict(u)
    for i, c in v.items():
        s = out.get(i, 0) + c
        if s:
            out[i] = s
        else:
            out.pop(i, None)
    return out


def vec_sub(u: Vec, v: Vec) -> Vec:
    return vec_add(u, vec_scale(-1, v))


def vec_scale(c, v: Vec) -> Vec:
    if not c:
        return {}
    return {i: c * x for i, x in v.items()}


def vec_eq(u: Vec, v: Vec) -> bool:
    return vec_clean(u) == vec_clean(v)


def vec_dense(v: Vec, dim: int) -> list:
    out = [Fraction(0)] * dim
    for i, c in v.items():
        if i >= dim:
            raise DimensionError(f"index {i} outside dimension {dim}")
        out[i] = c
    return out


def vec_sparse(dense) -> Vec:
    return {i: c for i, c in enumerate(dense) if c}


def vec_is_rational(v: Vec) -> bool:
    return all(not isinstance(c, PolyQ) for c in v.values())


def vec_to_polyq(v: Vec) -> Vec:
    return {i: as_polyq(c) for i, c in v.items()}


def polyq_vec_components(v: Vec) -> dict:
    """Split a PolyQ-coefficient vector into per-monomial rational vectors."""
    comps: dict[tuple, Vec] = {}
    for i, c in v.items():
        p = as_polyq(c)
        for mono, coeff in p.terms:
            comps.setdefault(mono, {})[i] = coeff
    return comps


def polyq_vec_from_components(comps: dict) -> Vec:
    out: Vec = {}
    for mono, vec in comps.items():
        for i, c in vec.items():
            out[i] = out.get(i, PolyQ()) + PolyQ({mono: c})
    return {i: c for i, c in out.items() if c}


# ---------------------------------------------------------------------------
# row echelon machinery (dense rows of Fractions)

def rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, len(m)):
            if m[i][c]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        inv = Fraction(1) / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def reduce_vector(rows: list[list[Fraction]], pivots: list[int], v: list) -> list:
    """Reduce a dense vector against echelon rows (works for PolyQ entries)."""
    v = list(v)
    for row, p in zip(rows, pivots):
        c = v[p]
        if c:
            v = [a - c * b for a, b in zip(v, row)]
    return v


def in_row_span(rows, pivots, v) -> bool:
    return not any(reduce_vector(rows, pivots, v))


@dataclass
class SubspaceSlice:
    """Echelonized spanning set of a subspace of one graded degree."""

    dim_ambient: int
    rows: list[list[Fraction]] = field(default_factory=list)
    pivots: list[int] = field(default_factory=list)

    @staticmethod
    def from_vectors(vectors: list[Vec], dim_ambient: int) -> "SubspaceSlice":
        dense = [vec_dense(v, dim_ambient) for v in vectors]
        rows, pivots = rref(dense)
        return SubspaceSlice(dim_ambient, rows, pivots)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def contains(self, v: Vec) -> bool:
        return in_row_span(self.rows, self.pivots, vec_dense(v, self.dim_ambient))

    def contains_slice(self, other: "SubspaceSlice") -> bool:
        return all(in_row_span(self.rows, self.pivots, r) for r in other.rows)

    def reduce(self, v: Vec) -> Vec:
        return vec_sparse(reduce_vector(self.rows, self.pivots, vec_dense(v, self.dim_ambient)))

    def basis_vectors(self) -> list[Vec]:
        return [vec_sparse(r) for r in self.rows]

    def sum(self, other: "SubspaceSlice") -> "SubspaceSlice":
        rows, pivots = rref(self.rows + other.rows)
        return SubspaceSlice(self.dim_ambient, rows, pivots)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SubspaceSlice):
            return NotImplemented
        return self.dim_ambient == other.dim_ambient and self.rows == other.rows


# ---------------------------------------------------------------------------
# graded spaces, maps and subspaces

@dataclass
class GradedVectorSpace:
    degree_cap: int
    basis: dict[int, list[str]]

    def __post_init__(self):
        for n, names in self.basis.items():
            if n < 0 or n > self.degree_cap:
                raise DegreeError(f"basis degree {n} outside [0, {self.degree_cap}]")
            if len(set(names)) != len(names):
                raise ValueError(f"duplicate basis names in degree {n}")

    def dim(self, degree: int) -> int:
        return len(self.basis.get(degree, []))

    def names(self, degree: int) -> list[str]:
        return self.basis.get(degree, [])

    def degrees(self):
        return sorted(d for d, names in self.basis.items() if names)


@dataclass
class GradedMap:
    """Degree-homogeneous linear map; ``matrices[n]`` lists, per source basis
    index of degree n, the image vector in target degree ``n + shift``.
    Degrees without a stored matrix map to zero."""

    source: GradedVectorSpace
    target: GradedVectorSpace
    shift: int
    matrices: dict[int, list[Vec]]

    def apply_basis(self, degree: int, index: int) -> Vec:
        cols = self.matrices.get(degree)
        if cols is None:
            return {}
        return cols[index]

    def apply(self, degree: int, v: Vec) -> tuple[int, Vec]:
        cols = self.matrices.get(degree)
        out: Vec = {}
        if cols is not None:
            for i, c in v.items():
                for j, x in cols[i].items():
                    s = out.get(j, 0) + c * x
                    if s:
                        out[j] = s
                    else:
                        out.pop(j, None)
        return degree + self.shift, out

    def dense_columns(self, degree: int) -> list[list[Fraction]]:
        tdim = self.target.dim(degree + self.shift)
        cols = self.matrices.get(degree)
        n = self.source.dim(degree)
        if cols is None:
            return [[Fraction(0)] * tdim for _ in range(n)]
        return [vec_dense(c, tdim) for c in cols]


@dataclass
class Subspace:
    ambient: GradedVectorSpace
    slices: dict[int, SubspaceSlice] = field(default_factory=dict)

    def slice(self, degree: int) -> SubspaceSlice:
        s = self.slices.get(degree)
        if s is None:
            s = SubspaceSlice(self.ambient.dim(degree))
            self.slices[degree] = s
        return s

    def dim(self, degree: int) -> int:
        return self.slice(degree).dim

    def contains(self, degree: int, v: Vec) -> bool:
        return self.slice(degree).contains(v)


# ---------------------------------------------------------------------------
# the core subspace operations

def kernel(f: GradedMap, degree: int) -> SubspaceSlice:
    """Echelonized basis of {v : f(v) = 0} in the given source degree."""
    if degree > f.source.degree_cap or degree < 0:
        raise DegreeError(f"degree {degree} outside source cap {f.source.degree_cap}")
    n = f.source.dim(degree)
    cols = f.dense_columns(degree)
    tdim = f.target.dim(degree + f.shift)
    # Row-reduce the transpose-augmented system: solve A v = 0.
    rows = [[cols[j][i] for j in range(n)] for i in range(tdim)]
    red, pivots = rref(rows)
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for j in free:
        v = [Fraction(0)] * n
        v[j] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[j]
        basis.append(v)
    out_rows, out_piv = rref(basis)
    return SubspaceSlice(n, out_rows, out_piv)


def image(f: GradedMap, degree: int) -> SubspaceSlice:
    """Echelonized image of degree-``degree`` sources, inside target degree
    ``degree + shift``."""
    if degree > f.source.degree_cap or degree < 0:
        raise DegreeError(f"degree {degree} outside source cap {f.source.degree_cap}")
    tdim = f.target.dim(degree + f.shift)
    cols = f.dense_columns(degree)
    rows, pivots = rref(cols)
    return SubspaceSlice(tdim, rows, pivots)


def full_slice(dim: int) -> SubspaceSlice:
    rows = [[Fraction(1 if i == j else 0) for j in range(dim)] for i in range(dim)]
    return SubspaceSlice(dim, rows, list(range(dim)))


def choose_complement_slice(sub: SubspaceSlice, inside: SubspaceSlice) -> SubspaceSlice:
    """Deterministic complement of ``sub`` in ``inside``.

    Extends sub's echelon basis first by standard basis vectors (reverse index
    order) lying in ``inside``, then by inside's own echelon rows.
    """
    if not inside.contains_slice(sub):
        raise ContainmentError(-1, "sub not contained in inside")
    dim = sub.dim_ambient
    current_rows = [list(r) for r in sub.rows]
    current_piv = list(sub.pivots)
    picked: list[list[Fraction]] = []
    need = inside.dim - sub.dim

    def try_add(cand):
        nonlocal current_rows, current_piv
        red = reduce_vector(current_rows, current_piv, cand)
        if any(red):
            picked.append(list(cand))
            current_rows, current_piv = rref(current_rows + [list(cand)])
            return True
        return False

    for j in range(dim - 1, -1, -1):
        if len(picked) == need:
            break
        e = [Fraction(1 if i == j else 0) for i in range(dim)]
        if in_row_span(inside.rows, inside.pivots, e):
            try_add(e)
    if len(picked) < need:
        for r in inside.rows:
            if len(picked) == need:
                break
            try_add(r)
    rows, pivots = rref(picked)
    return SubspaceSlice(dim, rows, pivots)


def choose_complement(sub: Subspace, inside: Subspace) -> Subspace:
    out = Subspace(sub.ambient)
    for degree in range(sub.ambient.degree_cap + 1):
        s, ins = sub.slice(degree), inside.slice(degree)
        if not ins.contains_slice(s):
            raise ContainmentError(degree)
        out.slices[degree] = choose_complement_slice(s, ins)
    return out


def solve_linear(cols: list[list[Fraction]], b: list) -> Optional[list]:
    """One exact solution of A x = b with A given by dense columns; free
    coordinates are set to zero.  Returns None when inconsistent."""
    n = len(cols)
    tdim = len(b)
    if any(len(c) != tdim for c in cols):
        raise DimensionError("column/target dimension mismatch")
    rows = [[cols[j][i] for j in range(n)] + [b[i]] for i in range(tdim)]
    red, pivots = rref(rows)
    x = [Fraction(0)] * n
    for row, p in zip(red, pivots):
        if p == n:
            return None  # pivot in the augmented column: inconsistent
        x[p] = row[n]
    return x


def solve_preimage(f: GradedMap, target_degree: int, target: Vec) -> Optional[Vec]:
    """Deterministic v with f(v) = target, or None when target is not in the
    image.  PolyQ right-hand sides are solved per parameter monomial."""
    degree = target_degree - f.shift
    if degree < 0 or degree > f.source.degree_cap:
        if not target:
            return {}
        return None
    tdim = f.target.dim(target_degree)
    cols = f.dense_columns(degree)
    if vec_is_rational(target):
        x = solve_linear(cols, vec_dense(target, tdim))
        return None if x is None else vec_sparse(x)
    comps = polyq_vec_components(target)
    solved = {}
    for mono, vec in sorted(comps.items()):
        x = solve_linear(cols, vec_dense(vec, tdim))
        if x is None:
            return None
        solved[mono] = vec_sparse(x)
    return polyq_vec_from_components(solved)
