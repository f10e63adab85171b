"""Truncated tensor-coalgebra layer: the codifferential attached to an
A-infinity structure and the square-zero check.

Letters are suspended basis elements; a word is a tuple of (underlying
degree, index) letters, and the suspension shifts degrees by one (only the
parity enters the signs below).  The operation-to-cogenerator dictionary is

    g_k(s a_1 (x) ... (x) s a_k) = (-1)^{1 + sum_{j<k} (k-j)|a_j|} s m_k(a_1..a_k)

whose inverse is the same sign, so the round trip is the identity.  The
codifferential is the coderivation extension

    delta_k(s a_1 | ... | s a_p) =
        sum_i (-1)^{|s a_1| + ... + |s a_{i-1}|} s a_1 | ... | g_k(window) | ...
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .dga import CapExceededError
from .linalg import Vec, vec_clean, vec_scale
from .transfer import AInfinityStructure, BasisElt, TableAInfinity, basis_tuples

Word = tuple[BasisElt, ...]
BarVec = dict[Word, Fraction]  # sparse combination of words


def g_sign(degrees: list[int]) -> int:
    """(-1)^{1 + sum_{j=1}^{k-1} (k-j)|a_j|}; its own inverse."""
    k = len(degrees)
    e = 1 + sum((k - j) * degrees[j - 1] for j in range(1, k))
    return -1 if e % 2 else 1


def bar_vec_add(u: BarVec, v: BarVec) -> BarVec:
    out = dict(u)
    for w, c in v.items():
        s = out.get(w, Fraction(0)) + c
        if s:
            out[w] = s
        else:
            out.pop(w, None)
    return out


@dataclass
class BarSlice:
    """Words up to word_cap over the structure's basis with the
    codifferential delta = sum_k delta_k."""

    structure: AInfinityStructure
    word_cap: int
    g_override: Optional[Callable[[Word], Optional[tuple[int, Vec]]]] = None

    def g_value(self, letters: Word) -> tuple[int, Vec]:
        """g_k on a single word of letters, as (underlying degree, vector)."""
        if self.g_override is not None:
            hit = self.g_override(letters)
            if hit is not None:
                return hit
        degs = [d for d, _ in letters]
        outdeg, val = self.structure.value(letters)
        return outdeg, vec_scale(Fraction(g_sign(degs)), val)

    def delta_word(self, word: Word) -> BarVec:
        """delta on a single word; raises CapExceededError out of cap."""
        out: BarVec = {}
        p = len(word)
        for k in range(1, min(p, self.structure.arity_cap) + 1):
            for i in range(0, p - k + 1):
                prefix_par = sum(d + 1 for d, _ in word[:i])
                sign = Fraction(-1 if prefix_par % 2 else 1)
                gdeg, gval = self.g_value(word[i:i + k])
                for idx, c in gval.items():
                    new = word[:i] + ((gdeg, idx),) + word[i + k:]
                    s = out.get(new, Fraction(0)) + sign * c
                    if s:
                        out[new] = s
                    else:
                        out.pop(new, None)
        return out

    def delta(self, v: BarVec) -> BarVec:
        out: BarVec = {}
        for word, c in v.items():
            out = bar_vec_add(out, {w: c * x for w, x in self.delta_word(word).items()})
        return out

    def words(self):
        """All words of length <= word_cap with in-cap underlying degrees."""
        for p in range(1, self.word_cap + 1):
            yield from basis_tuples(self.structure.space, p, self.structure.degree_cap)


def build_bar(a: AInfinityStructure, word_cap: int) -> BarSlice:
    if word_cap > a.arity_cap:
        raise ValueError(f"word_cap {word_cap} exceeds arity cap {a.arity_cap}")
    return BarSlice(a, word_cap)


@dataclass
class SquareZeroViolation:
    word: Word
    residual: BarVec

    def __str__(self):
        return f"delta^2 fails on {self.word}: {self.residual}"


@dataclass
class SquareZeroReport:
    violations: list[SquareZeroViolation] = field(default_factory=list)
    checked: int = 0
    skipped_out_of_cap: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations


def check_square_zero(b: BarSlice) -> SquareZeroReport:
    report = SquareZeroReport()
    for word in b.words():
        try:
            once = b.delta_word(word)
            twice = b.delta(once)
        except CapExceededError:
            report.skipped_out_of_cap += 1
            continue
        report.checked += 1
        if twice:
            report.violations.append(SquareZeroViolation(word, twice))
    return report


def recover_structure(b: BarSlice) -> TableAInfinity:
    """Invert the operation-to-cogenerator dictionary on all in-cap tuples;
    on an unmodified BarSlice this reproduces the input structure exactly."""
    a = b.structure
    table = {}
    for k in range(1, b.word_cap + 1):
        for letters in basis_tuples(a.space, k, a.degree_cap + k - 2):
            try:
                gdeg, gval = b.g_value(letters)
            except CapExceededError:
                continue
            degs = [d for d, _ in letters]
            val = vec_clean(vec_scale(Fraction(g_sign(degs)), gval))
            if val:
                table[letters] = val
    return TableAInfinity(a.space, a.degree_cap, b.word_cap, table)
