#!/usr/bin/env python3
"""Transgress associator 3-cocycles of a small abelian-or-not group onto its
conjugation action groupoid and tabulate the resulting extension classes.

For Z2 the full 3-cocycle space is enumerated by filtering all candidate
functions through the pentagon identity; for Z3 and K4 a kernel basis of the
pentagon map over F_p is computed by elimination and either the whole span or
a seeded sample of it is transgressed."""

from __future__ import annotations

import argparse
import itertools
import random
import sys
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))
from common import cyclic_table, klein_table

from twistbench import (
    MultiplicativeTwisting,
    TwistingError,
    extension_class,
    transgress,
    validate_multiplicative,
)

GROUPS = {
    "Z2": (lambda: cyclic_table(2), 2),
    "Z3": (lambda: cyclic_table(3), 3),
    "K4": (lambda: klein_table(), 2),
}


@dataclass
class TableConfig:
    group: str = "Z2"
    sample: int = 200
    seed: int = 0


def pentagon_kernel_basis(table, p: int) -> list[dict]:
    """Basis of the 3-cocycle space over F_p by Gauss-Jordan elimination."""
    els = list(table.elements)
    keys = list(itertools.product(els, repeat=3))
    kidx = {k: i for i, k in enumerate(keys)}
    rows = []
    for a, b, c, d in itertools.product(els, repeat=4):
        row = [0] * len(keys)
        row[kidx[(b, c, d)]] += 1
        row[kidx[(table.mul[(a, b)], c, d)]] -= 1
        row[kidx[(a, table.mul[(b, c)], d)]] += 1
        row[kidx[(a, b, table.mul[(c, d)])]] -= 1
        row[kidx[(a, b, c)]] += 1
        rows.append([x % p for x in row])
    # elimination
    pivots = {}
    r = 0
    for c in range(len(keys)):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] % p), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [(x * inv) % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] % p:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        pivots[c] = r
        r += 1
    basis = []
    for c in range(len(keys)):
        if c in pivots:
            continue
        vec = [0] * len(keys)
        vec[c] = 1
        for pc, pr in pivots.items():
            vec[pc] = (-rows[pr][c]) % p
        basis.append(dict(zip(keys, vec)))
    return basis


def iter_cocycles(table, p: int, cfg: TableConfig):
    els = list(table.elements)
    keys = list(itertools.product(els, repeat=3))
    if len(els) == 2:
        for vals in itertools.product(range(p), repeat=len(keys)):
            omega = dict(zip(keys, vals))
            try:
                validate_multiplicative(MultiplicativeTwisting(table, p, omega))
            except TwistingError:
                continue
            yield omega
        return
    basis = pentagon_kernel_basis(table, p)
    span = p ** len(basis)
    if span <= cfg.sample:
        combos = itertools.product(range(p), repeat=len(basis))
    else:
        rng = random.Random(cfg.seed)
        combos = ([rng.randrange(p) for _ in basis] for _ in range(cfg.sample))
    for coeffs in combos:
        yield {k: sum(c * v[k] for c, v in zip(coeffs, basis)) % p for k in keys}


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--group", choices=sorted(GROUPS), default="Z2")
    ap.add_argument("--sample", type=int, default=200,
                    help="number of cocycles to draw when the span is large")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    cfg = TableConfig(group=args.group, sample=args.sample, seed=args.seed)
    build, p = GROUPS[cfg.group]
    table = build()
    tally: Counter = Counter()
    n = 0
    for omega in iter_cocycles(table, p, cfg):
        t = MultiplicativeTwisting(table, p, {k: v for k, v in omega.items() if v})
        ext = transgress(t)
        cls = extension_class(ext)
        tally[(cls.phase_invariants, cls.phase_class)] += 1
        n += 1
    print(f"group {cfg.group}, modulus {p}: {n} 3-cocycles transgressed")
    print(f"{'phase invariants':<20} {'class':<16} {'count':>7}")
    print("-" * 45)
    for (inv, cls), count in sorted(tally.items()):
        print(f"{str(inv):<20} {str(cls):<16} {count:>7}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
