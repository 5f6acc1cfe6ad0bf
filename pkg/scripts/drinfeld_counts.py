#!/usr/bin/env python3
"""Count simple objects of twisted groupoid algebras.

First table: untwisted counts for the standard corpus (group deloopings and
conjugation action groupoids).  Second table: one representative per phase
class of H^2(BK4; Z/m) — showing how a nondegenerate 2-cocycle collapses the
four one-dimensional simples of Z2 x Z2 into a single two-dimensional one."""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))
from common import build_corpus, klein_table

from twistbench import (
    CoefficientModule,
    TwistedExtension,
    cohomology_group,
    delooping,
    simple_count_report,
    trivial_extension,
)


@dataclass
class CountConfig:
    modulus: int = 4
    tolerance: float = 1e-9


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--modulus", type=int, default=4,
                    help="phase modulus for the BK4 class sweep (default 4)")
    ap.add_argument("--tolerance", type=float, default=1e-9)
    args = ap.parse_args(argv)
    cfg = CountConfig(modulus=args.modulus, tolerance=args.tolerance)

    corpus = build_corpus()
    print(f"{'algebra':<22} {'simples':>8} {'gap':>12}")
    print("-" * 44)
    for name in ("BS3", "S3//S3", "Z2//Z2", "BK4"):
        rep = simple_count_report(trivial_extension(corpus[name], 2), cfg.tolerance)
        print(f"{name + ' (untwisted)':<22} {rep.count:>8} {rep.gap:>12.3e}")

    bk4 = delooping(klein_table())
    coeff = CoefficientModule(cfg.modulus, "trivial")
    sol = cohomology_group(bk4, 2, coeff)
    print(f"\nH^2(BK4; Z/{cfg.modulus}) has invariant factors {sol.group} "
          f"({sol.order()} classes)")
    print(f"{'class':<12} {'simples':>8} {'gap':>12}")
    print("-" * 34)
    for cls in sol.classes():
        lam = sol.representative(cls)
        ext = TwistedExtension.build(bk4, cfg.modulus, {}, lam.as_mapping())
        rep = simple_count_report(ext, cfg.tolerance)
        print(f"{str(cls):<12} {rep.count:>8} {rep.gap:>12.3e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
