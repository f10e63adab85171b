"""Defining systems, Massey product sets, adaptedness, and the verdicts
relating them to transferred higher multiplications.

Coordinates: classes handed to this module are always in the canonical
cohomology basis (see contraction.cohomology); conversion helpers exist for
contraction-specific coordinates.  Defining-system entries are vectors in
the algebra whose coefficients may be rationals or PolyQ polynomials in
named free parameters.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .contraction import (
    CanonicalCohomology,
    Contraction,
    DecompositionError,
    canonical_classes_to_contraction,
    complete_decomposition,
    contraction_classes_to_canonical,
    contraction_from_decomposition,
)
from .dga import DGA, CapExceededError, bar_involution
from .linalg import (
    SubspaceSlice,
    Vec,
    kernel,
    rref,
    solve_preimage,
    vec_add,
    vec_clean,
    vec_eq,
    vec_is_rational,
    vec_scale,
)
from .scalars import PolyQ, as_polyq
from .transfer import (
    AInfinityStructure,
    TransferredAInfinity,
    adapted_sign,
    basis_tuples,
    general_sign,
)

Class = tuple[int, Vec]  # (degree, canonical H coordinates)


@dataclass(frozen=True)
class MasseySigns:
    n: int
    degrees: tuple[int, ...]
    adapted: int  # (-1)^{1+|x_{n-1}|+|x_{n-3}|+...}
    general: int  # (-1)^{sum (n-j)|x_j|}


def massey_signs(n: int, degrees) -> MasseySigns:
    if n < 3:
        raise ValueError("Massey products need n >= 3")
    degrees = tuple(degrees)
    if len(degrees) != n:
        raise ValueError("degree list length must equal n")
    return MasseySigns(n, degrees, adapted_sign(list(degrees)), general_sign(list(degrees)))


# ---------------------------------------------------------------------------
# defining systems

def entry_degree(degrees: list[int], i: int, j: int) -> int:
    return sum(degrees[i:j]) - (j - i - 1)


@dataclass
class DefiningSystem:
    """Triangular array a_ij, 0 <= i < j <= n, j - i <= n - 1, satisfying
    d(a_ij) = sum_{i<k<j} bar(a_ik) a_kj; coefficients may carry parameters."""

    dga: DGA
    classes: list[Class]
    entries: dict[tuple[int, int], tuple[int, Vec]]
    parameters: tuple[str, ...] = ()

    @property
    def n(self) -> int:
        return len(self.classes)

    def degrees(self) -> list[int]:
        return [d for d, _ in self.classes]

    def is_concrete(self) -> bool:
        return all(vec_is_rational(v) for _, v in self.entries.values())

    def entry(self, i: int, j: int) -> tuple[int, Vec]:
        return self.entries[(i, j)]

    def rhs(self, i: int, j: int) -> tuple[int, Vec]:
        """sum_{i<k<j} bar(a_ik) a_kj, the required differential of a_ij."""
        total: Vec = {}
        out_degree = entry_degree(self.degrees(), i, j) + 1
        for k in range(i + 1, j):
            dl, left = self.entries[(i, k)]
            dr, right = self.entries[(k, j)]
            _, prod = self.dga.mul(dl, bar_involution(dl, left), dr, right)
            total = vec_add(total, prod)
        return out_degree, vec_clean(total)

    def value(self) -> tuple[int, Vec]:
        """sum_{0<k<n} bar(a_0k) a_kn, a cocycle representing the product."""
        return self.rhs(0, self.n)

    def substitute(self, assignment: dict[str, Fraction]) -> "DefiningSystem":
        entries = {}
        for key, (deg, v) in self.entries.items():
            out: Vec = {}
            for idx, c in v.items():
                val = as_polyq(c).substitute(assignment) if isinstance(c, PolyQ) else Fraction(c)
                if val:
                    out[idx] = val
            entries[key] = (deg, out)
        return DefiningSystem(self.dga, list(self.classes), entries, ())


def validate_defining_system(ds: DefiningSystem, canon: CanonicalCohomology) -> list[str]:
    report = []
    degrees = ds.degrees()
    n = ds.n
    for j in range(1, n + 1):
        key = (j - 1, j)
        if key not in ds.entries:
            report.append(f"missing entry a_{j-1}{j}")
            continue
        deg, v = ds.entries[key]
        if deg != degrees[j - 1]:
            report.append(f"entry a_{j-1}{j} has degree {deg}, class degree {degrees[j-1]}")
            continue
        _, dv = ds.dga.d.apply(deg, v)
        if vec_clean(dv):
            report.append(f"entry a_{j-1}{j} is not a cocycle")
            continue
        coords = canon.coords(deg, v)
        if not vec_eq(coords, ds.classes[j - 1][1]):
            report.append(f"entry a_{j-1}{j} does not represent class {j}")
    for (i, j), (deg, v) in sorted(ds.entries.items()):
        if j - i < 2:
            continue
        want = entry_degree(degrees, i, j)
        if deg != want:
            report.append(f"entry a_{i}{j} has degree {deg}, expected {want}")
            continue
        _, dv = ds.dga.d.apply(deg, v)
        _, need = ds.rhs(i, j)
        if not vec_eq(dv, need):
            report.append(f"d(a_{i}{j}) != sum bar(a_ik) a_kj")
    return report


# ---------------------------------------------------------------------------
# Massey set descriptors

@dataclass
class MasseySetDescriptor:
    """Symbolic description of the set of values of all defining systems.

    kind "empty": no defining system exists.  kind "coset": base + every
    combination of the subspace rows.  kind "polynomial": value coordinates
    are genuinely nonlinear in the parameters.  kind "unresolved": an
    extension obstruction was nonlinear in the parameters and the set could
    not be described.
    """

    kind: str  # "empty" | "coset" | "polynomial" | "unresolved"
    degree: int
    base: Optional[Vec] = None
    subspace: Optional[SubspaceSlice] = None
    value: Optional[Vec] = None  # PolyQ coordinates, kinds polynomial/coset
    parameters: tuple[str, ...] = ()
    notes: list[str] = field(default_factory=list)
    samples: list[Vec] = field(default_factory=list)

    def contains(self, h: Vec) -> Optional[bool]:
        """Membership; None when undecidable from this description."""
        if self.kind == "empty":
            return False
        if self.kind == "coset":
            diff = vec_add(h, vec_scale(Fraction(-1), self.base or {}))
            return self.subspace.contains(diff)
        return None

    def is_single_point(self) -> bool:
        return self.kind == "coset" and self.subspace.dim == 0


def _vec_substitute_params(v: Vec, mapping: dict[str, PolyQ]) -> Vec:
    out: Vec = {}
    for idx, c in v.items():
        if isinstance(c, PolyQ):
            c = c.substitute_params(mapping)
            if c.is_constant():
                c = c.constant_value()
        if c:
            out[idx] = c
    return out


def _solve_affine(equations: list[tuple[dict[str, Fraction], Fraction]],
                  params: list[str]) -> Optional[dict[str, PolyQ]]:
    """Solve sum coeff_p * p + const = 0; returns a substitution expressing
    pivot parameters through free ones, or None when inconsistent."""
    if not equations:
        return {}
    cols = {p: k for k, p in enumerate(params)}
    rows = []
    for lin, const in equations:
        row = [Fraction(0)] * (len(params) + 1)
        for p, c in lin.items():
            row[cols[p]] = Fraction(c)
        row[-1] = Fraction(const)
        rows.append(row)
    red, pivots = rref(rows)
    mapping: dict[str, PolyQ] = {}
    for row, pivot in zip(red, pivots):
        if pivot == len(params):
            return None  # 0 = nonzero constant
        expr = PolyQ.const(-row[-1])
        for k in range(pivot + 1, len(params)):
            if row[k]:
                expr = expr + PolyQ({((params[k], 1),): -row[k]})
        mapping[params[pivot]] = expr
    return mapping


class SymbolicObstruction(Exception):
    def __init__(self, i, j, polys):
        self.i, self.j, self.polys = i, j, polys
        super().__init__(f"nonlinear obstruction at a_{i}{j}")


def _build_symbolic_system(
    dga: DGA, canon: CanonicalCohomology, classes: list[Class]
) -> tuple[Optional[DefiningSystem], list[str]]:
    """Level-by-level construction of the universal parameterized defining
    system.  Returns (system, notes); system None means the set is empty.
    Raises SymbolicObstruction when an obstruction is nonlinear."""
    n = len(classes)
    degrees = [d for d, _ in classes]
    notes: list[str] = []
    entries: dict[tuple[int, int], tuple[int, Vec]] = {}
    for j in range(1, n + 1):
        deg, coords = classes[j - 1]
        entries[(j - 1, j)] = (deg, canon.representative(deg, coords))
    params: list[str] = []
    ds = DefiningSystem(dga, classes, entries)
    for gap in range(2, n):
        # collect obstructions for this level and solve them jointly
        equations: list[tuple[dict[str, Fraction], Fraction]] = []
        rhs_cache: dict[tuple[int, int], tuple[int, Vec]] = {}
        for i in range(0, n - gap + 1):
            j = i + gap
            rdeg, rhs = ds.rhs(i, j)
            rhs_cache[(i, j)] = (rdeg, rhs)
            obstruction = canon.coords(rdeg, rhs)
            for _, coeff in sorted(obstruction.items()):
                poly = as_polyq(coeff)
                const, lin, higher = poly.decompose()
                if higher:
                    raise SymbolicObstruction(i, j, [poly])
                if lin or const:
                    equations.append((lin, const))
        if equations:
            mapping = _solve_affine(equations, params)
            if mapping is None:
                notes.append(
                    f"level {gap}: obstructions unsatisfiable; no defining system exists"
                )
                return None, notes
            if mapping:
                notes.append(
                    f"level {gap}: solved {len(equations)} obstruction equations, "
                    f"fixed {len(mapping)} parameters"
                )
                for key, (deg, v) in list(entries.items()):
                    entries[key] = (deg, vec_clean(_vec_substitute_params(v, mapping)))
                for key, (deg, v) in list(rhs_cache.items()):
                    rhs_cache[key] = (deg, vec_clean(_vec_substitute_params(v, mapping)))
                params = [p for p in params if p not in mapping]
        # extend: particular preimage + fresh cocycle parameters
        for i in range(0, n - gap + 1):
            j = i + gap
            rdeg, rhs = rhs_cache[(i, j)]
            particular = solve_preimage(dga.d, rdeg, rhs)
            if particular is None:
                notes.append(f"no preimage for a_{i}{j} after constraint solving")
                return None, notes
            adeg = rdeg - 1
            general: Vec = dict(particular)
            for k, z in enumerate(kernel(dga.d, adeg).basis_vectors()):
                name = f"c{i}_{j}_{k}"
                params.append(name)
                general = vec_add(general, vec_scale(PolyQ.var(name), z))
            entries[(i, j)] = (adeg, vec_clean(general))
        ds = DefiningSystem(dga, classes, entries, tuple(params))
    return ds, notes


def _descriptor_from_value(
    degree: int, coords: Vec, dim: int, params: tuple[str, ...], notes: list[str]
) -> MasseySetDescriptor:
    base: Vec = {}
    directions: dict[str, Vec] = {}
    nonlinear = False
    for idx, coeff in coords.items():
        poly = as_polyq(coeff)
        const, lin, higher = poly.decompose()
        if higher:
            nonlinear = True
        if const:
            base[idx] = const
        for p, c in lin.items():
            directions.setdefault(p, {})[idx] = c
    if nonlinear:
        return MasseySetDescriptor(
            "polynomial", degree, value=coords, parameters=params, notes=notes
        )
    sub = SubspaceSlice.from_vectors(list(directions.values()), dim)
    return MasseySetDescriptor(
        "coset", degree, base=vec_clean(base), subspace=sub, value=coords,
        parameters=params, notes=notes,
    )


def higher_massey(
    dga: DGA,
    canon: CanonicalCohomology,
    classes: list[Class],
    mode: str = "symbolic",
    seed: int = 0,
    count: int = 10,
) -> MasseySetDescriptor:
    """The n-fold Massey product set of the given canonical classes."""
    import random

    n = len(classes)
    if n < 3:
        raise ValueError("Massey products need n >= 3")
    degrees = [d for d, _ in classes]
    out_degree = sum(degrees) + 2 - n
    try:
        ds, notes = _build_symbolic_system(dga, canon, classes)
    except SymbolicObstruction as obs:
        desc = MasseySetDescriptor(
            "unresolved", out_degree,
            notes=[f"nonlinear obstruction at a_{obs.i}{obs.j}: "
                   + "; ".join(str(p) for p in obs.polys)],
        )
        if mode == "sampled":
            desc.samples = _sampled_search(dga, canon, classes, seed, count)
            desc.notes.append("samples from randomized concrete systems")
        return desc
    if ds is None:
        return MasseySetDescriptor("empty", out_degree, notes=notes)
    vdeg, vvec = ds.value()
    coords = canon.coords(vdeg, vvec)
    dim = canon.dim(vdeg)
    desc = _descriptor_from_value(vdeg, coords, dim, ds.parameters, notes)
    if mode == "symbolic":
        return desc
    if mode == "canonical":
        zero = {p: Fraction(0) for p in ds.parameters}
        point = {
            idx: (as_polyq(c).substitute(zero) if isinstance(c, PolyQ) else c)
            for idx, c in coords.items()
        }
        return MasseySetDescriptor(
            "coset", vdeg, base=vec_clean(point),
            subspace=SubspaceSlice(dim), parameters=(),
            notes=notes + ["canonical element: all free parameters set to 0"],
        )
    if mode == "sampled":
        rng = random.Random(seed)
        samples = []
        for _ in range(count):
            assignment = {p: Fraction(rng.randint(-3, 3)) for p in ds.parameters}
            point = {
                idx: (as_polyq(c).substitute(assignment) if isinstance(c, PolyQ) else c)
                for idx, c in coords.items()
            }
            point = vec_clean(point)
            if point not in samples:
                samples.append(point)
        desc.samples = samples
        return desc
    raise ValueError(f"unknown mode {mode!r}")


def _sampled_search(
    dga: DGA, canon: CanonicalCohomology, classes: list[Class], seed: int, count: int
) -> list[Vec]:
    """Random concrete defining systems: every free choice is drawn at once
    and a run is discarded when an obstruction fails to vanish."""
    import random

    rng = random.Random(seed)
    n = len(classes)
    degrees = [d for d, _ in classes]
    found: list[Vec] = []
    for _ in range(count):
        entries: dict[tuple[int, int], tuple[int, Vec]] = {}
        for j in range(1, n + 1):
            deg, coords = classes[j - 1]
            entries[(j - 1, j)] = (deg, canon.representative(deg, coords))
        ds = DefiningSystem(dga, classes, entries)
        ok = True
        for gap in range(2, n):
            for i in range(0, n - gap + 1):
                j = i + gap
                rdeg, rhs = ds.rhs(i, j)
                particular = solve_preimage(dga.d, rdeg, rhs)
                if particular is None:
                    ok = False
                    break
                general: Vec = dict(particular)
                for z in kernel(dga.d, rdeg - 1).basis_vectors():
                    c = rng.randint(-2, 2)
                    if c:
                        general = vec_add(general, vec_scale(Fraction(c), z))
                entries[(i, j)] = (rdeg - 1, vec_clean(general))
            if not ok:
                break
            ds = DefiningSystem(dga, classes, entries)
        if not ok:
            continue
        vdeg, vvec = ds.value()
        point = vec_clean(canon.coords(vdeg, vvec))
        if point not in found:
            found.append(point)
    return found


def indeterminacy(
    dga: DGA, canon: CanonicalCohomology, x1: Class, x2: Class, x3: Class
) -> SubspaceSlice:
    """x1 * H^{|x2|+|x3|-1} + H^{|x1|+|x2|-1} * x3 in canonical coordinates."""
    (d1, v1), (d2, v2), (d3, v3) = x1, x2, x3
    out_degree = d1 + d2 + d3 - 1
    dim = canon.dim(out_degree)
    vectors = []
    left_degree = d2 + d3 - 1
    for k in range(canon.dim(left_degree)):
        vectors.append(canon.cup(d1, v1, left_degree, {k: Fraction(1)}))
    right_degree = d1 + d2 - 1
    for k in range(canon.dim(right_degree)):
        vectors.append(canon.cup(right_degree, {k: Fraction(1)}, d3, v3))
    return SubspaceSlice.from_vectors([vec_clean(v) for v in vectors], dim)


def triple_massey(
    dga: DGA, canon: CanonicalCohomology, x1: Class, x2: Class, x3: Class
) -> MasseySetDescriptor:
    return higher_massey(dga, canon, [x1, x2, x3], mode="symbolic")


# ---------------------------------------------------------------------------
# canonical (transfer-induced) defining systems, adaptedness

@dataclass
class CanonicalSystemFailure:
    i: int
    j: int
    residual_degree: int
    residual: Vec

    def __str__(self):
        return (
            f"K-lambda elements do not assemble: d(a_{self.i}{self.j}) "
            f"- sum bar(a_ik) a_kj has residual {self.residual}"
        )


def defining_system_canonical(
    c: Contraction, classes: list[Class], canon: CanonicalCohomology
):
    """Candidate defining system a_ij = (sign) K lambda_{j-i}(x_{i+1}..x_j)
    with a_{j-1,j} = i(x_j); returns the DefiningSystem or the first failure."""
    n = len(classes)
    struct = TransferredAInfinity(c, max(2, n - 1))
    own = [
        (deg, canonical_classes_to_contraction(c, canon, deg, v))
        for deg, v in classes
    ]
    degrees = [d for d, _ in classes]
    entries: dict[tuple[int, int], tuple[int, Vec]] = {}
    for j in range(1, n + 1):
        deg, h = own[j - 1]
        entries[(j - 1, j)] = c.apply_i(deg, h)
    ds = DefiningSystem(c.dga, classes, entries)
    for gap in range(2, n):
        for i in range(0, n - gap + 1):
            j = i + gap
            window = own[i:j]
            # multilinear K lambda over the window's class vectors
            kdeg = entry_degree(degrees, i, j)
            total: Vec = {}
            import itertools
            for combo in itertools.product(*[sorted(h.items()) for _, h in window]):
                coeff = Fraction(1)
                for _, x in combo:
                    coeff *= x
                args = tuple((window[t][0], combo[t][0]) for t in range(gap))
                _, kv = struct.k_lambda(args)
                total = vec_add(total, vec_scale(coeff, kv))
            sign = adapted_sign([d for d, _ in window])
            entries[(i, j)] = (kdeg, vec_clean(vec_scale(Fraction(sign), total)))
            ds = DefiningSystem(c.dga, classes, entries)
            _, da = c.dga.d.apply(kdeg, entries[(i, j)][1])
            rdeg, need = ds.rhs(i, j)
            residual = vec_clean(vec_add(da, vec_scale(Fraction(-1), need)))
            if residual:
                return CanonicalSystemFailure(i, j, rdeg, residual)
    return ds


def is_adapted(c: Contraction, ds: DefiningSystem) -> tuple[bool, Optional[str]]:
    """Definition: i(x_j) = a_{j-1,j} for every j and all higher entries lie
    in B = K d A."""
    if not ds.is_concrete():
        raise ValueError("adaptedness is defined for concrete defining systems")
    canon_irrelevant = None
    for j in range(1, ds.n + 1):
        deg, v = ds.entries[(j - 1, j)]
        h = c.class_in_own_coords(deg, v)
        _, rep = c.apply_i(deg, h)
        if not vec_eq(rep, v):
            return False, f"a_{j-1}{j} is not in the image of i"
    for (i, j), (deg, v) in sorted(ds.entries.items()):
        if j - i < 2 or not vec_clean(v):
            continue
        if not c.decomposition.b_slice(deg).contains(v):
            return False, f"a_{i}{j} is not in B = KdA (degree {deg})"
    return True, canon_irrelevant


def build_adapted_contraction(dga: DGA, ds: DefiningSystem) -> Contraction:
    """A contraction adapted to the given concrete defining system: B holds
    the higher entries, C holds the consecutive representatives; the rest is
    filled canonically.  Raises DecompositionError on dependence."""
    if not ds.is_concrete():
        raise ValueError("need a concrete defining system")
    B_partial: dict[int, list[Vec]] = {}
    C_partial: dict[int, list[Vec]] = {}
    for (i, j), (deg, v) in sorted(ds.entries.items()):
        v = vec_clean(v)
        if not v:
            continue
        store = C_partial if j - i == 1 else B_partial
        bucket = store.setdefault(deg, [])
        if not any(vec_eq(v, u) for u in bucket):
            bucket.append(v)
    dec = complete_decomposition(dga, B_partial, C_partial)
    return contraction_from_decomposition(dga, dec)


# ---------------------------------------------------------------------------
# verdicts

@dataclass
class RecoveryVerdict:
    m_value: Vec  # canonical coordinates of m_n(x_1..x_n)
    detects: bool
    detect_sigmas: tuple[int, ...]
    recovers: bool
    recover_sigmas: tuple[int, ...]
    gamma_check: bool
    gamma_sigmas: tuple[int, ...]
    gamma_witnesses: dict = field(default_factory=dict)  # sigma -> Gamma


def image_span(
    struct: AInfinityStructure,
    c: Contraction,
    canon: CanonicalCohomology,
    degree: int,
    max_arity: int,
) -> SubspaceSlice:
    """Span of all values m_j(basis tuples), 2 <= j <= max_arity, landing in
    the given degree, in canonical coordinates."""
    dim = canon.dim(degree)
    vectors = []
    for j in range(2, max_arity + 1):
        max_total = degree + j - 2
        for args in basis_tuples(struct.space, j, max_total):
            if sum(d for d, _ in args) + 2 - j != degree:
                continue
            try:
                _, val = struct.value(args)
            except CapExceededError:
                continue
            if val:
                vectors.append(contraction_classes_to_canonical(c, canon, degree, val))
    return SubspaceSlice.from_vectors(vectors, dim)


def verify_recovery(
    struct: AInfinityStructure,
    c: Contraction,
    canon: CanonicalCohomology,
    classes: list[Class],
    descriptor: MasseySetDescriptor,
) -> RecoveryVerdict:
    n = len(classes)
    own = [
        (deg, canonical_classes_to_contraction(c, canon, deg, v))
        for deg, v in classes
    ]
    vdeg, value = struct.eval_multi(n, [(deg, h) for deg, h in own])
    m_canonical = contraction_classes_to_canonical(c, canon, vdeg, value)
    detect, recover, gamma = [], [], []
    span = image_span(struct, c, canon, vdeg, n - 1)
    witnesses: dict = {}
    for sigma in (1, -1):
        sm = vec_scale(Fraction(sigma), m_canonical)
        member = descriptor.contains(sm)
        if member:
            detect.append(sigma)
        if descriptor.is_single_point() and vec_eq(sm, descriptor.base or {}):
            recover.append(sigma)
        if descriptor.kind == "coset":
            diff = vec_clean(vec_add(sm, vec_scale(Fraction(-1), descriptor.base or {})))
            sub_ok = all(
                span.contains(row_vec)
                for row_vec in (descriptor.subspace.basis_vectors() if descriptor.subspace else [])
            )
            if span.contains(diff) and sub_ok:
                gamma.append(sigma)
                witnesses[sigma] = diff
    return RecoveryVerdict(
        m_canonical,
        bool(detect), tuple(detect),
        bool(recover), tuple(recover),
        bool(gamma), tuple(gamma),
        witnesses,
    )


def check_vanishing_hypothesis(struct: AInfinityStructure, n: int) -> bool:
    """True iff m_k = 0 identically (in cap) for 1 <= k <= n - 2."""
    for k in range(1, n - 1):
        max_total = struct.degree_cap + k - 2
        for args in basis_tuples(struct.space, k, max_total):
            try:
                _, val = struct.value(args)
            except CapExceededError:
                continue
            if vec_clean(val):
                return False
    return True
