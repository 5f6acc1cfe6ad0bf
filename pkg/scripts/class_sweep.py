#!/usr/bin/env python3
"""Enumerate every twisted extension on small graded groupoids and tabulate
the equivalence-class structure (parity class x phase class), optionally
re-verifying that the equivalence search matches the class decomposition."""

from __future__ import annotations

import argparse
import random
import sys
from dataclasses import dataclass, field
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))
from common import build_corpus

from twistbench import (
    CoefficientModule,
    TwistedExtension,
    cohomology_group,
    extension_class,
    find_equivalence,
    nerve,
)

DEFAULT_NAMES = ("point", "pair", "BZ2_triv", "BZ2_id", "swap2", "Z2//Z2")


@dataclass
class SweepConfig:
    modulus: int = 4
    names: tuple[str, ...] = DEFAULT_NAMES
    verify: bool = False
    seed: int = 0
    max_pairs: int = 200


def sweep(cfg: SweepConfig) -> None:
    corpus = build_corpus()
    parity_coeff = CoefficientModule(2, "trivial")
    phase_coeff = CoefficientModule(cfg.modulus, "negation")
    rng = random.Random(cfg.seed)
    header = f"{'groupoid':<10} {'|Γ₂|':>5} {'#ext':>6} {'#classes':>8}  class sizes"
    print(header)
    print("-" * len(header))
    for name in cfg.names:
        g = corpus[name]
        parities = list(cohomology_group(g, 1, parity_coeff).cocycles())
        phases = list(cohomology_group(g, 2, phase_coeff).cocycles())
        buckets: dict[tuple, list[TwistedExtension]] = {}
        for c in parities:
            for lam in phases:
                e = TwistedExtension(g, cfg.modulus, c, lam)
                cls = extension_class(e)
                buckets.setdefault((cls.parity_class, cls.phase_class), []).append(e)
        sizes = sorted(len(b) for b in buckets.values())
        total = sum(sizes)
        print(f"{name:<10} {len(nerve(g, 2)):>5} {total:>6} {len(buckets):>8}  {sizes}")
        if cfg.verify:
            keys = list(buckets)
            checked = 0
            for _ in range(cfg.max_pairs):
                k1, k2 = rng.choice(keys), rng.choice(keys)
                e1 = rng.choice(buckets[k1])
                e2 = rng.choice(buckets[k2])
                found = find_equivalence(e1, e2) is not None
                assert found == (k1 == k2), (name, k1, k2)
                checked += 1
            print(f"{'':<10} verified {checked} random pairs: "
                  f"equivalence found exactly when classes agree")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--modulus", type=int, default=4, help="phase modulus (default 4)")
    ap.add_argument("--groupoids", nargs="*", default=list(DEFAULT_NAMES),
                    metavar="NAME", help=f"corpus names (default: {' '.join(DEFAULT_NAMES)})")
    ap.add_argument("--verify", action="store_true",
                    help="re-check random pairs with the equivalence search")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-pairs", type=int, default=200)
    args = ap.parse_args(argv)
    cfg = SweepConfig(modulus=args.modulus, names=tuple(args.groupoids),
                      verify=args.verify, seed=args.seed, max_pairs=args.max_pairs)
    sweep(cfg)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
