#!/usr/bin/env python3
"""Sweep seeded random DGAs, transfer their minimal structures, and verify
the structure and morphism identities plus mutation detection.

Example:
    python3 scripts/random_identity_sweep.py --seeds 20 --arity 4
"""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass

from ainfty.contraction import (
    canonical_decomposition,
    contraction_from_decomposition,
    random_decomposition,
)
from ainfty.sampling import flip_one_sign, random_dga
from ainfty.transfer import (
    AInfinityMorphism,
    DGAAsAInfinity,
    TableAInfinity,
    as_table,
    check_morphism,
    check_stasheff,
    transfer_ainfinity,
)


@dataclass
class SweepConfig:
    seeds: int = 20
    arity: int = 4
    mutate: bool = True
    random_splitting_every_other: bool = True


def run(cfg: SweepConfig) -> int:
    t0 = time.time()
    bad = 0
    mutatable = 0
    caught = 0
    for seed in range(cfg.seeds):
        dga = random_dga(seed)
        if cfg.random_splitting_every_other and seed % 2:
            dec = random_decomposition(dga, seed + 1000)
        else:
            dec = canonical_decomposition(dga)
        c = contraction_from_decomposition(dga, dec)
        struct, morph = transfer_ainfinity(c, cfg.arity)
        rs = check_stasheff(struct, cfg.arity)
        rm = check_morphism(morph, cfg.arity)
        status = "ok" if rs.ok and rm.ok else "VIOLATION"
        if not (rs.ok and rm.ok):
            bad += 1
        mut = ""
        if cfg.mutate:
            table = as_table(struct, cfg.arity)
            nonzero = {k: v for k, v in table.table.items() if len(k) >= 2 and v}
            if nonzero:
                mutatable += 1
                mutated, key = flip_one_sign(nonzero, seed)
                full = dict(table.table)
                full[key] = mutated[key]
                broken = TableAInfinity(table.space, table.degree_cap, cfg.arity, full)
                bmorph = AInfinityMorphism(
                    broken, DGAAsAInfinity(dga, cfg.arity), morph.component, cfg.arity
                )
                hit = (
                    not check_stasheff(broken, cfg.arity).ok
                    or not check_morphism(bmorph, cfg.arity).ok
                )
                caught += hit
                mut = f"  mutation {'caught' if hit else 'MISSED'}"
        print(
            f"seed {seed:3d}: {status}  "
            f"({rs.checked + rm.checked} identities, "
            f"{rs.skipped_out_of_cap + rm.skipped_out_of_cap} out of cap){mut}"
        )
    print(
        f"\n{cfg.seeds} DGAs, {bad} violating; "
        f"mutations caught {caught}/{mutatable}; {time.time() - t0:.1f}s"
    )
    return 1 if bad or caught != mutatable else 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, default=20)
    ap.add_argument("--arity", type=int, default=4)
    ap.add_argument("--no-mutate", action="store_true")
    ns = ap.parse_args()
    raise SystemExit(
        run(SweepConfig(seeds=ns.seeds, arity=ns.arity, mutate=not ns.no_mutate))
    )
