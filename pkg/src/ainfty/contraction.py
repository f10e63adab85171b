"""Cohomology, decompositions A = B + dB + C, and contractions (i, q, K).

The correspondence implemented here: given a decomposition, i includes C,
q projects onto C along B + dB, K is zero on B and C and inverts d from dB
back to B.  Conversely B = KdA and C = Im i.  The homotopy convention is
``identity - i q = dK + Kd``.

Degrees at the cap are truncation-fragile: d out of the top degree is not
available, so the top degree is treated as consisting of cocycles and
cohomology is only reported up to cap - 1.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .dga import DGA
from .linalg import (
    SubspaceSlice,
    GradedVectorSpace,
    Vec,
    choose_complement_slice,
    full_slice,
    kernel,
    image,
    polyq_vec_components,
    polyq_vec_from_components,
    rref,
    solve_linear,
    vec_add,
    vec_clean,
    vec_dense,
    vec_eq,
    vec_is_rational,
    vec_scale,
    vec_sparse,
)


class DecompositionError(ValueError):
    pass


def _kernel_slice(dga: DGA, degree: int) -> SubspaceSlice:
    """Ker d in one degree; the top degree is all-kernel by truncation."""
    if degree >= dga.degree_cap:
        return full_slice(dga.dim(degree))
    return kernel(dga.d, degree)


def _image_slice(dga: DGA, degree: int) -> SubspaceSlice:
    """Im d landing in the given degree."""
    if degree == 0:
        return SubspaceSlice(dga.dim(0))
    return image(dga.d, degree - 1)


@dataclass
class Decomposition:
    """Ordered bases for B and C per degree; dB is derived as d(B)."""

    dga: DGA
    B: dict[int, list[Vec]]
    C: dict[int, list[Vec]]

    def dB(self, degree: int) -> list[Vec]:
        out = []
        for b in self.B.get(degree - 1, []):
            _, db = self.dga.d.apply(degree - 1, b)
            out.append(db)
        return out

    def b_slice(self, degree: int) -> SubspaceSlice:
        return SubspaceSlice.from_vectors(self.B.get(degree, []), self.dga.dim(degree))

    def c_slice(self, degree: int) -> SubspaceSlice:
        return SubspaceSlice.from_vectors(self.C.get(degree, []), self.dga.dim(degree))

    def db_slice(self, degree: int) -> SubspaceSlice:
        return SubspaceSlice.from_vectors(self.dB(degree), self.dga.dim(degree))

    def same_subspaces(self, other: "Decomposition") -> bool:
        for n in range(self.dga.degree_cap + 1):
            if self.b_slice(n) != other.b_slice(n) or self.c_slice(n) != other.c_slice(n):
                return False
        return True


def validate_decomposition(dec: Decomposition) -> list[str]:
    """All decomposition axioms per degree; returns violations."""
    dga = dec.dga
    report = []
    for n in range(dga.degree_cap + 1):
        dim = dga.dim(n)
        ker = _kernel_slice(dga, n)
        B = dec.B.get(n, [])
        C = dec.C.get(n, [])
        dB = dec.dB(n)
        # d injective on B (B independent of Ker d)
        bsl = SubspaceSlice.from_vectors(B, dim)
        if bsl.dim != len(B):
            report.append(f"degree {n}: B vectors dependent")
        joint = SubspaceSlice.from_vectors(ker.basis_vectors() + B, dim)
        if joint.dim != ker.dim + len(B):
            report.append(f"degree {n}: B meets Ker d")
        for k, c in enumerate(C):
            if not ker.contains(c):
                report.append(f"degree {n}: C[{k}] is not a cocycle")
        allv = SubspaceSlice.from_vectors(B + dB + C, dim)
        if allv.dim != len(B) + len(dB) + len(C) or allv.dim != dim:
            defect = dim - allv.dim
            report.append(
                f"degree {n}: B+dB+C is not a direct-sum decomposition "
                f"(dim {allv.dim} of {dim}, defect {defect})"
            )
    return report


def canonical_decomposition(dga: DGA) -> Decomposition:
    """Fully deterministic decomposition by the pivot rule."""
    B: dict[int, list[Vec]] = {}
    C: dict[int, list[Vec]] = {}
    for n in range(dga.degree_cap + 1):
        dim = dga.dim(n)
        if dim == 0:
            continue
        ker = _kernel_slice(dga, n)
        im = _image_slice(dga, n)
        bsl = choose_complement_slice(ker, full_slice(dim))
        csl = choose_complement_slice(im, ker)
        if bsl.dim:
            B[n] = bsl.basis_vectors()
        if csl.dim:
            C[n] = csl.basis_vectors()
    return Decomposition(dga, B, C)


def complete_decomposition(
    dga: DGA,
    B_partial: dict[int, list[Vec]],
    C_partial: dict[int, list[Vec]],
    exact_B: frozenset[int] | set[int] = frozenset(),
    exact_C: frozenset[int] | set[int] = frozenset(),
) -> Decomposition:
    """Extend a partial table of B and C vectors to a full decomposition.

    Given vectors are kept first, in order; the missing directions are
    filled by the canonical pivot rule, except in degrees listed in
    exact_B / exact_C, where the given vectors are taken as the complete
    list (defects then surface in validation).  Raises DecompositionError
    when the given vectors cannot be part of any decomposition (a C vector
    that is not a cocycle or is dependent modulo coboundaries, or a B
    vector that meets Ker d).
    """
    B: dict[int, list[Vec]] = {}
    C: dict[int, list[Vec]] = {}
    for n in range(dga.degree_cap + 1):
        dim = dga.dim(n)
        if dim == 0:
            continue
        ker = _kernel_slice(dga, n)
        im = _image_slice(dga, n)
        cvecs = [vec_clean(v) for v in C_partial.get(n, [])]
        for k, v in enumerate(cvecs):
            if not ker.contains(v):
                raise DecompositionError(f"degree {n}: C[{k}] is not a cocycle")
        csub = im
        for v in cvecs:
            grown = csub.sum(SubspaceSlice.from_vectors([v], dim))
            if grown.dim != csub.dim + 1:
                raise DecompositionError(
                    f"degree {n}: C vectors dependent modulo coboundaries"
                )
            csub = grown
        if n in exact_C:
            cfull = cvecs
        else:
            cfull = cvecs + choose_complement_slice(csub, ker).basis_vectors()
        bvecs = [vec_clean(v) for v in B_partial.get(n, [])]
        bsub = ker
        for k, v in enumerate(bvecs):
            grown = bsub.sum(SubspaceSlice.from_vectors([v], dim))
            if grown.dim != bsub.dim + 1:
                raise DecompositionError(
                    f"degree {n}: B[{k}] meets Ker d + span of earlier B"
                )
            bsub = grown
        if n in exact_B:
            bfull = bvecs
        else:
            bfull = bvecs + choose_complement_slice(bsub, full_slice(dim)).basis_vectors()
        if bfull:
            B[n] = bfull
        if cfull:
            C[n] = cfull
    return Decomposition(dga, B, C)


def random_decomposition(dga: DGA, seed: int) -> Decomposition:
    """Seeded shear perturbation of the canonical decomposition.

    B vectors move by random cocycles and C vectors by random coboundaries,
    which keeps every decomposition axiom by construction.
    """
    rng = random.Random(seed)
    base = canonical_decomposition(dga)
    B: dict[int, list[Vec]] = {}
    C: dict[int, list[Vec]] = {}
    for n, vecs in base.B.items():
        ker = _kernel_slice(dga, n).basis_vectors()
        out = []
        for v in vecs:
            shear = {}
            for z in ker:
                c = rng.randint(-2, 2)
                if c:
                    shear = vec_add(shear, vec_scale(Fraction(c), z))
            out.append(vec_add(v, shear))
        B[n] = out
    for n, vecs in base.C.items():
        out = []
        srcdim = dga.dim(n - 1)
        for v in vecs:
            w = {i: Fraction(rng.randint(-2, 2)) for i in range(srcdim)}
            _, dw = dga.d.apply(n - 1, vec_clean(w))
            out.append(vec_add(v, dw))
        C[n] = out
    return Decomposition(dga, B, C)


# ---------------------------------------------------------------------------
# canonical cohomology (the fixed coordinate system for classes)

@dataclass
class CanonicalCohomology:
    """Cohomology with pivot-canonical representative cocycles.

    Classes are only trustworthy up to degree cap - 1.  The representative
    coordinates here are the shared currency for Massey descriptors and for
    comparing transferred structures across contractions.
    """

    dga: DGA
    space: GradedVectorSpace
    representatives: dict[int, list[Vec]]
    _solvers: dict = field(default_factory=dict, repr=False)

    def dim(self, degree: int) -> int:
        return self.space.dim(degree)

    def representative(self, degree: int, h: Vec) -> Vec:
        out: Vec = {}
        for k, c in h.items():
            out = vec_add(out, vec_scale(c, self.representatives[degree][k]))
        return out

    def _solver(self, degree: int):
        data = self._solvers.get(degree)
        if data is None:
            dim = self.dga.dim(degree)
            reps = self.representatives.get(degree, [])
            im = _image_slice(self.dga, degree)
            cols = [vec_dense(r, dim) for r in reps] + [list(r) for r in im.rows]
            data = (cols, len(reps), dim)
            self._solvers[degree] = data
        return data

    def coords(self, degree: int, v: Vec) -> Vec:
        """Class of a cocycle in representative coordinates."""
        if degree >= self.dga.degree_cap:
            raise DecompositionError(
                f"degree {degree} beyond the trustworthy range (cap {self.dga.degree_cap})"
            )
        ddeg, dv = self.dga.d.apply(degree, v)
        if dv and vec_is_rational(v):
            raise DecompositionError("coords of a non-cocycle")
        cols, nreps, dim = self._solver(degree)
        if vec_is_rational(v):
            x = solve_linear(cols, vec_dense(v, dim))
            if x is None:
                raise DecompositionError("cocycle not expressible; internal error")
            return vec_sparse(x[:nreps])
        comps = polyq_vec_components(v)
        out = {}
        for mono, vecc in sorted(comps.items()):
            x = solve_linear(cols, vec_dense(vecc, dim))
            if x is None:
                raise DecompositionError("cocycle not expressible; internal error")
            out[mono] = vec_sparse(x[:nreps])
        return polyq_vec_from_components(out)

    def cup(self, deg1: int, h1: Vec, deg2: int, h2: Vec) -> Vec:
        """Cup product of classes, in canonical coordinates."""
        r1 = self.representative(deg1, h1)
        r2 = self.representative(deg2, h2)
        _, prod = self.dga.mul(deg1, r1, deg2, r2)
        return self.coords(deg1 + deg2, prod)


def cohomology(dga: DGA) -> CanonicalCohomology:
    """H^n = Ker d^n / Im d^{n-1} for n <= cap - 1, pivot-canonical reps."""
    basis: dict[int, list[str]] = {}
    reps: dict[int, list[Vec]] = {}
    for n in range(dga.degree_cap):
        ker = kernel(dga.d, n) if n < dga.degree_cap else full_slice(dga.dim(n))
        im = _image_slice(dga, n)
        csl = choose_complement_slice(im, ker)
        if csl.dim:
            basis[n] = [f"h{n}_{k}" for k in range(csl.dim)]
            reps[n] = csl.basis_vectors()
    space = GradedVectorSpace(max(0, dga.degree_cap - 1), basis)
    return CanonicalCohomology(dga, space, reps)


# ---------------------------------------------------------------------------
# contractions

@dataclass
class Contraction:
    dga: DGA
    decomposition: Decomposition
    H: GradedVectorSpace
    representatives: dict[int, list[Vec]]  # i on H basis = C vectors
    homotopy_sign: int = 1
    _solvers: dict = field(default_factory=dict, repr=False)

    def _solver(self, degree: int):
        """Per degree: dense columns [B | dB | C] and the section sizes."""
        data = self._solvers.get(degree)
        if data is None:
            dim = self.dga.dim(degree)
            B = self.decomposition.B.get(degree, [])
            dB = self.decomposition.dB(degree)
            C = self.decomposition.C.get(degree, [])
            cols = [vec_dense(v, dim) for v in B + dB + C]
            data = (cols, len(B), len(dB), len(C), dim)
            self._solvers[degree] = data
        return data

    def _coefficients(self, degree: int, v: Vec):
        cols, nb, ndb, nc, dim = self._solver(degree)
        if vec_is_rational(v):
            x = solve_linear(cols, vec_dense(v, dim))
            if x is None:
                raise DecompositionError(f"decomposition incomplete in degree {degree}")
            return x, nb, ndb, nc
        comps = polyq_vec_components(v)
        acc = [0] * (nb + ndb + nc)
        for mono, vecc in sorted(comps.items()):
            x = solve_linear(cols, vec_dense(vecc, dim))
            if x is None:
                raise DecompositionError(f"decomposition incomplete in degree {degree}")
            from .scalars import PolyQ

            for k, c in enumerate(x):
                if c:
                    acc[k] = acc[k] + PolyQ({mono: c})
        return acc, nb, ndb, nc

    def apply_i(self, degree: int, h: Vec) -> tuple[int, Vec]:
        out: Vec = {}
        for k, c in h.items():
            out = vec_add(out, vec_scale(c, self.representatives[degree][k]))
        return degree, out

    def apply_q(self, degree: int, v: Vec) -> tuple[int, Vec]:
        v = vec_clean(v)
        if not v:
            return degree, {}
        x, nb, ndb, nc = self._coefficients(degree, v)
        return degree, vec_clean({k: x[nb + ndb + k] for k in range(nc)})

    def apply_K(self, degree: int, v: Vec) -> tuple[int, Vec]:
        v = vec_clean(v)
        if not v:
            return degree - 1, {}
        x, nb, ndb, nc = self._coefficients(degree, v)
        Bprev = self.decomposition.B.get(degree - 1, [])
        out: Vec = {}
        for k in range(ndb):
            c = x[nb + k]
            if c:
                out = vec_add(out, vec_scale(c * self.homotopy_sign, Bprev[k]))
        return degree - 1, out

    def class_in_own_coords(self, degree: int, cocycle: Vec) -> Vec:
        """The class of a cocycle in this contraction's H basis (= q)."""
        _, h = self.apply_q(degree, cocycle)
        return h


def contraction_from_decomposition(
    dga: DGA, dec: Decomposition, homotopy_sign: int = 1
) -> Contraction:
    problems = validate_decomposition(dec)
    if problems:
        raise DecompositionError("; ".join(problems))
    basis = {
        n: [f"h{n}_{k}" for k in range(len(vecs))]
        for n, vecs in sorted(dec.C.items())
        if vecs
    }
    H = GradedVectorSpace(dga.degree_cap, basis)
    return Contraction(dga, dec, H, {n: list(v) for n, v in dec.C.items()},
                       homotopy_sign=homotopy_sign)


def contraction_to_decomposition(c: Contraction) -> Decomposition:
    """B = K d A and C = Im i, echelonized per degree."""
    dga = c.dga
    B: dict[int, list[Vec]] = {}
    C: dict[int, list[Vec]] = {}
    for n in range(dga.degree_cap + 1):
        dim = dga.dim(n)
        if dim == 0:
            continue
        kd = []
        for i in range(dim):
            ddeg, dv = dga.d.apply(n, {i: Fraction(1)})
            if n < dga.degree_cap:
                _, kv = c.apply_K(ddeg, dv)
                if kv:
                    kd.append(kv)
        bsl = SubspaceSlice.from_vectors(kd, dim)
        if bsl.dim:
            B[n] = bsl.basis_vectors()
        im_i = SubspaceSlice.from_vectors(
            c.representatives.get(n, []), dim
        )
        if im_i.dim:
            C[n] = im_i.basis_vectors()
    return Decomposition(dga, B, C)


def validate_contraction(c: Contraction) -> list[str]:
    """All five contraction identities on every basis element within cap."""
    dga = c.dga
    report = []
    for n in range(dga.degree_cap + 1):
        # q i = id on H
        for k in range(c.H.dim(n)):
            _, rep = c.apply_i(n, {k: Fraction(1)})
            _, qik = c.apply_q(n, rep)
            if not vec_eq(qik, {k: Fraction(1)}):
                report.append(f"q i != id at H^{n} basis {k}")
        for i in range(dga.dim(n)):
            v = {i: Fraction(1)}
            # identity - i q = dK + Kd
            _, qv = c.apply_q(n, v)
            _, iqv = c.apply_i(n, qv)
            _, kv = c.apply_K(n, v)
            dkdeg, dkv = dga.d.apply(n - 1, kv) if n >= 1 else (n, {})
            ddeg, dv = dga.d.apply(n, v)
            _, kdv = c.apply_K(ddeg, dv)
            lhs = vec_add(vec_scale(Fraction(-1), iqv), v)
            rhs = vec_add(dkv, kdv)
            if not vec_eq(lhs, rhs):
                report.append(f"id - iq != dK + Kd on basis {i} of degree {n}")
            # K^2 = 0
            _, kkv = c.apply_K(n - 1, kv)
            if kkv:
                report.append(f"K^2 != 0 on basis {i} of degree {n}")
            # qK = 0
            _, qkv = c.apply_q(n - 1, kv)
            if qkv:
                report.append(f"qK != 0 on basis {i} of degree {n}")
        # Ki = 0
        for k in range(c.H.dim(n)):
            _, rep = c.apply_i(n, {k: Fraction(1)})
            _, kiv = c.apply_K(n, rep)
            if kiv:
                report.append(f"Ki != 0 at H^{n} basis {k}")
    return report


def contraction_classes_to_canonical(
    c: Contraction, canon: CanonicalCohomology, degree: int, h: Vec
) -> Vec:
    """Convert a class in the contraction's H coordinates to canonical ones."""
    _, rep = c.apply_i(degree, h)
    return canon.coords(degree, rep)


def canonical_classes_to_contraction(
    c: Contraction, canon: CanonicalCohomology, degree: int, h: Vec
) -> Vec:
    rep = canon.representative(degree, h)
    return c.class_in_own_coords(degree, rep)
