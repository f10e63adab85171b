"""Homotopy transfer, Stasheff/morphism identity checkers, and the inductive
construction that recovers a prescribed Massey element.

Sign conventions, fixed once for the whole package:

* Koszul evaluation rule: (f (x) g)(u (x) v) = (-1)^{|g||u|} f(u) (x) g(v),
  extended associatively to longer tensors.
* Transfer recursion: lambda_k = m(sum_s (-1)^{s+1} K lambda_s (x) K
  lambda_{k-s}) with the formal convention K lambda_1 = -i; then m_k =
  q lambda_k and I_k = K lambda_k.
* Stasheff residual: sum_{k,n} (-1)^{k+n+kn} m_{i-k+1}(id^n (x) m_k (x)
  id^{i-k-n}), the inner map moving past the prefix with the Koszul rule.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .contraction import CanonicalCohomology, Contraction
from .dga import DGA, CapExceededError
from .linalg import GradedVectorSpace, Vec, vec_add, vec_clean, vec_eq, vec_scale

BasisElt = tuple[int, int]  # (degree, index)


def _sign(exponent: int) -> Fraction:
    return Fraction(-1 if exponent % 2 else 1)


def adapted_sign(degrees: list[int]) -> int:
    """(-1)^{1 + |x_{k-1}| + |x_{k-3}| + ...} for a window of class degrees;
    +1 for a single class (bare representative choice)."""
    k = len(degrees)
    if k == 1:
        return 1
    e = 1
    t = k - 1
    while t >= 1:
        e += degrees[t - 1]
        t -= 2
    return -1 if e % 2 else 1


def general_sign(degrees: list[int]) -> int:
    """(-1)^{sum_{j=1}^{n-1} (n-j)|x_j|}."""
    n = len(degrees)
    e = sum((n - j) * degrees[j - 1] for j in range(1, n))
    return -1 if e % 2 else 1


# ---------------------------------------------------------------------------
# A-infinity structures

class AInfinityStructure:
    """Family {m_k} on a graded space, evaluated on basis tuples.

    ``value`` raises CapExceededError when the output degree exceeds the
    degree cap; within the cap a missing entry is zero.
    """

    def __init__(self, space: GradedVectorSpace, degree_cap: int, arity_cap: int):
        self.space = space
        self.degree_cap = degree_cap
        self.arity_cap = arity_cap

    def out_degree(self, args: tuple[BasisElt, ...]) -> int:
        return sum(d for d, _ in args) + 2 - len(args)

    def value(self, args: tuple[BasisElt, ...]) -> tuple[int, Vec]:
        raise NotImplementedError

    def eval_multi(self, k: int, args: list[tuple[int, Vec]]) -> tuple[int, Vec]:
        """Multilinear extension of m_k to general homogeneous vectors."""
        outdeg = sum(d for d, _ in args) + 2 - k
        total: Vec = {}
        for combo in itertools.product(*[sorted(v.items()) for _, v in args]):
            coeff = Fraction(1)
            for _, c in combo:
                coeff *= c
            basis_args = tuple((args[j][0], combo[j][0]) for j in range(k))
            _, val = self.value(basis_args)
            total = vec_add(total, vec_scale(coeff, val))
        return outdeg, vec_clean(total)


class TableAInfinity(AInfinityStructure):
    def __init__(self, space, degree_cap, arity_cap, table: dict):
        super().__init__(space, degree_cap, arity_cap)
        self.table = table  # {(basis tuple): Vec}

    def value(self, args):
        outdeg = self.out_degree(args)
        if outdeg > self.degree_cap:
            raise CapExceededError(outdeg, self.degree_cap, f"m_{len(args)}")
        if len(args) == 1:
            return outdeg, dict(self.table.get(args, {}))
        return outdeg, dict(self.table.get(args, {}))


class DGAAsAInfinity(AInfinityStructure):
    """A DGA viewed as an A-infinity algebra: m_1 = d, m_2 = product."""

    def __init__(self, dga: DGA, arity_cap: int = 4):
        super().__init__(dga.space, dga.degree_cap, arity_cap)
        self.dga = dga

    def value(self, args):
        outdeg = self.out_degree(args)
        if outdeg > self.degree_cap:
            raise CapExceededError(outdeg, self.degree_cap, f"m_{len(args)}")
        k = len(args)
        if k == 1:
            deg, i = args[0]
            return self.dga.d.apply(deg, {i: Fraction(1)})
        if k == 2:
            (da, ia), (db, ib) = args
            return da + db, dict(self.dga.mul_basis(da, ia, db, ib))
        return outdeg, {}


class TransferredAInfinity(AInfinityStructure):
    """Minimal structure on H obtained from a contraction by the
    lambda-recursion; values are computed lazily and memoized."""

    def __init__(self, contraction: Contraction, arity_cap: int):
        dga = contraction.dga
        basis = {
            n: names
            for n, names in contraction.H.basis.items()
            if n <= dga.degree_cap - 1
        }
        space = GradedVectorSpace(dga.degree_cap - 1, basis)
        super().__init__(space, dga.degree_cap - 1, arity_cap)
        self.contraction = contraction
        self.dga = dga
        self._lambda_cache: dict = {}

    # lambda_k on basis tuples, with K lambda_1 = -i

    def k_lambda(self, args: tuple[BasisElt, ...]) -> tuple[int, Vec]:
        if len(args) == 1:
            deg, i = args[0]
            _, rep = self.contraction.apply_i(deg, {i: Fraction(1)})
            return deg, vec_scale(Fraction(-1), rep)
        ldeg, lam = self.lambda_value(args)
        return self.contraction.apply_K(ldeg, lam)

    def lambda_value(self, args: tuple[BasisElt, ...]) -> tuple[int, Vec]:
        cached = self._lambda_cache.get(args)
        if cached is not None:
            return cached
        k = len(args)
        degs = [d for d, _ in args]
        outdeg = sum(degs) + 2 - k
        total: Vec = {}
        for s in range(1, k):
            ldeg, left = self.k_lambda(args[:s])
            rdeg, right = self.k_lambda(args[s:])
            sign = _sign((s + 1) + (s - k + 1) * sum(degs[:s]))
            _, prod = self.dga.mul(ldeg, left, rdeg, right)
            total = vec_add(total, vec_scale(sign, prod))
        result = (outdeg, vec_clean(total))
        self._lambda_cache[args] = result
        return result

    def value(self, args):
        outdeg = self.out_degree(args)
        if len(args) == 1:
            return outdeg, {}  # minimal
        if outdeg > self.degree_cap:
            raise CapExceededError(outdeg, self.degree_cap, f"m_{len(args)}")
        ldeg, lam = self.lambda_value(args)
        _, h = self.contraction.apply_q(ldeg, lam)
        return outdeg, h

    def morphism_component(self, args: tuple[BasisElt, ...]) -> tuple[int, Vec]:
        """Uniformly I_k = -K lambda_k, so I_1 = i by the formal convention
        K lambda_1 = -i."""
        deg, val = self.k_lambda(args)
        return deg, vec_scale(Fraction(-1), val)


@dataclass
class AInfinityMorphism:
    source: AInfinityStructure
    target: AInfinityStructure
    component: Callable[[tuple[BasisElt, ...]], tuple[int, Vec]]
    arity_cap: int

    def eval_multi(self, k: int, args: list[tuple[int, Vec]]) -> tuple[int, Vec]:
        outdeg = sum(d for d, _ in args) + 1 - k
        total: Vec = {}
        for combo in itertools.product(*[sorted(v.items()) for _, v in args]):
            coeff = Fraction(1)
            for _, c in combo:
                coeff *= c
            basis_args = tuple((args[j][0], combo[j][0]) for j in range(k))
            _, val = self.component(basis_args)
            total = vec_add(total, vec_scale(coeff, val))
        return outdeg, vec_clean(total)


def transfer_ainfinity(
    c: Contraction, arity_cap: int
) -> tuple[TransferredAInfinity, AInfinityMorphism]:
    """Minimal A-infinity structure on H and the quasi-isomorphism into A."""
    structure = TransferredAInfinity(c, arity_cap)
    target = DGAAsAInfinity(c.dga, arity_cap)
    morphism = AInfinityMorphism(structure, target, structure.morphism_component, arity_cap)
    return structure, morphism


def identity_morphism(a: AInfinityStructure) -> AInfinityMorphism:
    def component(args):
        if len(args) == 1:
            deg, i = args[0]
            return deg, {i: Fraction(1)}
        return a.out_degree(args) - 1, {}

    return AInfinityMorphism(a, a, component, a.arity_cap)


# ---------------------------------------------------------------------------
# basis tuple enumeration

def basis_tuples(space: GradedVectorSpace, length: int, max_total_degree: int):
    elements = [
        (deg, idx)
        for deg in space.degrees()
        for idx in range(space.dim(deg))
    ]

    def rec(prefix, total):
        if len(prefix) == length:
            yield tuple(prefix)
            return
        for e in elements:
            if total + e[0] <= max_total_degree:
                prefix.append(e)
                yield from rec(prefix, total + e[0])
                prefix.pop()

    yield from rec([], 0)


# ---------------------------------------------------------------------------
# identity checkers

@dataclass
class IdentityViolation:
    arity: int
    args: tuple[BasisElt, ...]
    residual_degree: int
    residual: Vec

    def __str__(self):
        return f"identity i={self.arity} fails on {self.args}: residual {self.residual}"


@dataclass
class CheckReport:
    violations: list[IdentityViolation] = field(default_factory=list)
    checked: int = 0
    skipped_out_of_cap: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations


def stasheff_residual(a: AInfinityStructure, args: tuple[BasisElt, ...]) -> tuple[int, Vec]:
    i = len(args)
    degs = [d for d, _ in args]
    outdeg = sum(degs) + 3 - i
    total: Vec = {}
    for k in range(1, i + 1):
        for n in range(0, i - k + 1):
            inner_args = args[n:n + k]
            in_deg, inner = a.value(inner_args)
            sign = _sign(k + n + k * n) * _sign(k * sum(degs[:n]))
            if not inner:
                continue
            outer_args = (
                [(d, {j: Fraction(1)}) for d, j in args[:n]]
                + [(in_deg, inner)]
                + [(d, {j: Fraction(1)}) for d, j in args[n + k:]]
            )
            _, val = a.eval_multi(i - k + 1, outer_args)
            total = vec_add(total, vec_scale(sign, val))
    return outdeg, vec_clean(total)


def check_stasheff(a: AInfinityStructure, arity_cap: Optional[int] = None) -> CheckReport:
    """Evaluate every Stasheff identity i <= arity_cap on all in-cap basis
    tuples; out-of-cap tuples are skipped, not asserted."""
    arity_cap = arity_cap or a.arity_cap
    report = CheckReport()
    for i in range(1, arity_cap + 1):
        max_total = a.degree_cap + i - 3
        for args in basis_tuples(a.space, i, max_total):
            try:
                outdeg, res = stasheff_residual(a, args)
            except CapExceededError:
                report.skipped_out_of_cap += 1
                continue
            report.checked += 1
            if res:
                report.violations.append(IdentityViolation(i, args, outdeg, res))
    return report


def _compositions(i: int, r: int):
    """All (i_1, ..., i_r) of positive integers summing to i."""
    if r == 1:
        yield (i,)
        return
    for first in range(1, i - r + 2):
        for rest in _compositions(i - first, r - 1):
            yield (first,) + rest


def morphism_residual(
    f: AInfinityMorphism, args: tuple[BasisElt, ...]
) -> tuple[int, Vec]:
    i = len(args)
    degs = [d for d, _ in args]
    lhs: Vec = {}
    outdeg = sum(degs) + 2 - i
    # sum over r + s + t = i of f_{r+1+t}(id^r (x) m_s (x) id^t)
    for s in range(1, i + 1):
        for r in range(0, i - s + 1):
            t = i - s - r
            in_deg, inner = f.source.value(args[r:r + s])
            sign = _sign(r + s * t) * _sign(s * sum(degs[:r]))
            if not inner:
                continue
            outer_args = (
                [(d, {j: Fraction(1)}) for d, j in args[:r]]
                + [(in_deg, inner)]
                + [(d, {j: Fraction(1)}) for d, j in args[r + s:]]
            )
            _, val = f.eval_multi(r + 1 + t, outer_args)
            lhs = vec_add(lhs, vec_scale(sign, val))
    # sum over compositions of m_r(f_{i_1} (x) ... (x) f_{i_r})
    rhs: Vec = {}
    for r in range(1, i + 1):
        for comp in _compositions(i, r):
            s_exp = sum(l * (comp[r - 1 - l] - 1) for l in range(1, r))
            blocks = []
            pos = 0
            koszul = 0
            deg_before = 0
            for l, size in enumerate(comp):
                block = args[pos:pos + size]
                bdeg = sum(d for d, _ in block)
                if l > 0:
                    koszul += (1 + size) * deg_before
                fdeg, fval = f.component(block)
                blocks.append((fdeg, fval))
                deg_before += bdeg
                pos += size
            if any(not v for _, v in blocks):
                continue
            sign = _sign(s_exp + koszul)
            _, val = f.target.eval_multi(r, blocks)
            rhs = vec_add(rhs, vec_scale(sign, val))
    return outdeg, vec_clean(vec_add(lhs, vec_scale(Fraction(-1), rhs)))


def check_morphism(f: AInfinityMorphism, arity_cap: Optional[int] = None) -> CheckReport:
    arity_cap = arity_cap or f.arity_cap
    report = CheckReport()
    for i in range(1, arity_cap + 1):
        max_total = f.source.degree_cap + i - 2
        for args in basis_tuples(f.source.space, i, max_total):
            try:
                outdeg, res = morphism_residual(f, args)
            except CapExceededError:
                report.skipped_out_of_cap += 1
                continue
            report.checked += 1
            if res:
                report.violations.append(IdentityViolation(i, args, outdeg, res))
    return report


def as_table(a: AInfinityStructure, arity_cap: Optional[int] = None) -> TableAInfinity:
    """Materialize all in-cap values; useful for export and mutation tests."""
    arity_cap = arity_cap or a.arity_cap
    table = {}
    for k in range(1, arity_cap + 1):
        for args in basis_tuples(a.space, k, a.degree_cap + k - 2):
            try:
                _, val = a.value(args)
            except CapExceededError:
                continue
            if val:
                table[args] = val
    return TableAInfinity(a.space, a.degree_cap, arity_cap, table)


# ---------------------------------------------------------------------------
# recovering a prescribed Massey element (inductive construction)

@dataclass
class PartialStructure:
    """Values pinned by the inductive construction, plus fallback.

    ``pinned_m`` maps (k, start) to the class of m_k on the consecutive
    window (x_{start+1}, ..., x_{start+k}); ``pinned_j`` likewise for the
    morphism components.  ``fallback`` (when given) supplies values on
    non-pinned tuples and is explicitly labeled as such.
    """

    classes: list[tuple[int, Vec]]  # canonical H coordinates
    pinned_m: dict  # (k, start) -> (deg, Vec) canonical H coords
    pinned_j: dict  # (k, start) -> (deg, Vec) in A
    fallback: Optional[AInfinityStructure] = None


def u_map_window(
    dga: DGA,
    pinned_j: dict,
    degrees: list[int],
    start: int,
    p: int,
) -> tuple[int, Vec]:
    """The U_p map on the window (x_{start+1}, ..., x_{start+p}), using only
    the first (product) sum; the second sum vanishes because all pinned m_k
    on proper subwindows are zero."""
    total: Vec = {}
    window = degrees[start:start + p]
    outdeg = sum(window) + 2 - p
    for s in range(1, p):
        ldeg, left = pinned_j[(s, start)]
        rdeg, right = pinned_j[(p - s, start + s)]
        parity = s + (p - s + 1) * sum(window[:s])
        _, prod = dga.mul(ldeg, left, rdeg, right)
        total = vec_add(total, vec_scale(_sign(parity), prod))
    return outdeg, vec_clean(total)


def kadeishvili_recover(
    dga: DGA,
    canon: CanonicalCohomology,
    classes: list[tuple[int, Vec]],
    entries: dict,
    arity_cap: int,
    fallback: Optional[AInfinityStructure] = None,
) -> PartialStructure:
    """Inductive partial structure from a concrete defining system.

    ``entries`` maps (i, j) to the defining-system element a_ij as
    (degree, vector); classes are in canonical coordinates.  Returns the
    pinned values: m_k = 0 on proper windows, m_n = the recovered class, and
    j_k = sign-normalized a entries.
    """
    n = len(classes)
    if n > arity_cap:
        raise CapExceededError(n, arity_cap, "recovery arity")
    degrees = [d for d, _ in classes]
    pinned_j = {}
    for (i, j), (adeg, avec) in entries.items():
        k = j - i
        # the recursion d(j_k) = j_1 m_k - U_k fixes the relative signs of the
        # components: length-one components are negated inclusions and longer
        # windows carry the alternating-degree sign
        eps = -1 if k == 1 else adapted_sign(degrees[i:j])
        pinned_j[(k, i)] = (adeg, vec_scale(Fraction(eps), avec))
    pinned_m = {}
    for k in range(2, n):
        for start in range(0, n - k + 1):
            pinned_m[(k, start)] = (sum(degrees[start:start + k]) + 2 - k, {})
    # verify d(j_k) = -U_k on every proper window (m_k vanishes there)
    for k in range(2, n):
        for start in range(0, n - k + 1):
            udeg, uval = u_map_window(dga, pinned_j, degrees, start, k)
            jdeg, jval = pinned_j[(k, start)]
            _, dj = dga.d.apply(jdeg, jval)
            if vec_clean(vec_add(dj, uval)):
                raise ValueError(
                    f"entries are not a defining system: d(j) + U != 0 on the "
                    f"window of length {k} starting at {start}"
                )
    # at full length d(j_n) = j_1 m_n - U_n with j_1 = -inclusion, so the
    # class of U_n is -m_n
    udeg, uval = u_map_window(dga, pinned_j, degrees, 0, n)
    pinned_m[(n, 0)] = (udeg, vec_scale(Fraction(-1), canon.coords(udeg, uval)))
    return PartialStructure(classes, pinned_m, pinned_j, fallback)
