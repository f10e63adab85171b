#!/usr/bin/env python3
"""Survey triple Massey products over seeded random DGAs.

For every triple of basis classes with a defined (nonempty) product set,
compare the set with the transferred triple operation: does some sign of
m3 land in the set, and does the canonical K-based defining system
assemble?

Example:
    python3 scripts/massey_survey.py --seeds 12
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass
from fractions import Fraction

from ainfty.contraction import (
    canonical_decomposition,
    cohomology,
    contraction_from_decomposition,
)
from ainfty.massey import (
    CanonicalSystemFailure,
    defining_system_canonical,
    triple_massey,
    validate_defining_system,
    verify_recovery,
)
from ainfty.sampling import random_dga
from ainfty.transfer import transfer_ainfinity


@dataclass
class SurveyConfig:
    seeds: int = 12
    max_triples_per_dga: int = 25


def run(cfg: SurveyConfig) -> int:
    total = {"triples": 0, "nonempty": 0, "single": 0, "detected": 0,
             "canonical_ok": 0, "canonical_fail": 0}
    for seed in range(cfg.seeds):
        dga = random_dga(seed)
        canon = cohomology(dga)
        degs = [d for d in range(1, dga.degree_cap) if canon.dim(d)]
        triples = [
            ((d1, {i1: Fraction(1)}), (d2, {i2: Fraction(1)}), (d3, {i3: Fraction(1)}))
            for d1 in degs for d2 in degs for d3 in degs
            if d1 + d2 + d3 + 1 < dga.degree_cap
            for i1 in range(canon.dim(d1))
            for i2 in range(canon.dim(d2))
            for i3 in range(canon.dim(d3))
        ][: cfg.max_triples_per_dga]
        c = contraction_from_decomposition(dga, canonical_decomposition(dga))
        struct = None
        for xs in triples:
            total["triples"] += 1
            desc = triple_massey(dga, canon, *xs)
            if desc.kind != "coset":
                continue
            total["nonempty"] += 1
            total["single"] += desc.is_single_point()
            if struct is None:
                struct, _ = transfer_ainfinity(c, 3)
            verdict = verify_recovery(struct, c, canon, list(xs), desc)
            total["detected"] += verdict.detects
            ds = defining_system_canonical(c, list(xs), canon)
            if isinstance(ds, CanonicalSystemFailure):
                total["canonical_fail"] += 1
            elif validate_defining_system(ds, canon) == []:
                total["canonical_ok"] += 1
        print(f"seed {seed:3d}: cumulative {total}")
    print(
        f"\n{total['nonempty']}/{total['triples']} triples have nonempty sets; "
        f"{total['detected']} detected by the transferred operation; "
        f"canonical systems: {total['canonical_ok']} ok, "
        f"{total['canonical_fail']} failed to assemble"
    )
    return 0 if total["detected"] == total["nonempty"] else 1


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, default=12)
    ap.add_argument("--max-triples", type=int, default=25)
    ns = ap.parse_args()
    raise SystemExit(run(SurveyConfig(seeds=ns.seeds, max_triples_per_dga=ns.max_triples)))
