"""Seeded random DGA specs for property tests.

The sampler builds free graded-commutative algebras generator by generator:
each differential is drawn from the cocycles of the subalgebra on the
earlier generators, so d^2 = 0 holds by construction (a derivation squaring
to zero on generators squares to zero).
"""

from __future__ import annotations

import random
from fractions import Fraction

from .dga import DGA, DGASpec, GenPoly, expand_free_gc
from .linalg import Vec, kernel, vec_clean

_NAMES = ["u", "v", "w", "t", "p", "q"]


def _vec_to_genpoly(dga: DGA, degree: int, v: Vec, n_gens_total: int) -> GenPoly:
    out: GenPoly = {}
    for idx, coeff in v.items():
        expts = dga.monomials[degree][idx]
        out[tuple(expts) + (0,) * (n_gens_total - len(expts))] = Fraction(coeff)
    return out


def random_dga_spec(
    seed: int,
    max_generators: int = 4,
    degree_cap: int = 9,
    degree_choices=(1, 2, 3, 4),
) -> DGASpec:
    rng = random.Random(seed)
    n = rng.randint(2, max_generators)
    degrees = sorted(rng.choice(degree_choices) for _ in range(n))
    names = [f"{_NAMES[i % len(_NAMES)]}{i}" for i in range(n)]
    generators = list(zip(names, degrees))
    differential: dict[str, GenPoly] = {}
    for k in range(n):
        gname, gdeg = generators[k]
        if k == 0 or rng.random() < 0.4:
            continue  # cocycle generator
        trimmed = {
            g: {expts[:k]: c for expts, c in poly.items()}
            for g, poly in differential.items()
        }
        partial = DGASpec(generators[:k], trimmed, [], True, degree_cap)
        sub = expand_free_gc(partial)
        target = gdeg + 1
        if target >= sub.degree_cap or sub.dim(target) == 0:
            continue
        ker = kernel(sub.d, target)
        basis = ker.basis_vectors()
        if not basis:
            continue
        pick: Vec = {}
        for b in basis:
            c = rng.randint(-2, 2)
            if c:
                for i, x in b.items():
                    pick[i] = pick.get(i, Fraction(0)) + c * x
        pick = vec_clean(pick)
        if pick:
            differential[gname] = _vec_to_genpoly(sub, target, pick, n)
    return DGASpec(generators, differential, [], True, degree_cap)


def random_dga(seed: int, **kwargs) -> DGA:
    return expand_free_gc(random_dga_spec(seed, **kwargs))


def flip_one_sign(table: dict, seed: int) -> tuple[dict, tuple]:
    """Flip the sign of one nonzero table entry; returns (new table, key)."""
    rng = random.Random(seed)
    keys = sorted(k for k, v in table.items() if v)
    if not keys:
        raise ValueError("no nonzero entries to mutate")
    key = keys[rng.randrange(len(keys))]
    mutated = dict(table)
    mutated[key] = {i: -c for i, c in table[key].items()}
    return mutated, key
