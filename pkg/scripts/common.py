"""Shared corpus builders for the experiment scripts (library API only)."""

from __future__ import annotations

from twistbench import (
    GroupTable,
    action_groupoid,
    conjugation_groupoid,
    delooping,
    pair_groupoid,
    point_groupoid,
)


def cyclic_table(n: int) -> GroupTable:
    names = ["e"] + (["t"] if n == 2 else [f"c{i}" for i in range(1, n)])
    rows = [[names[(i + j) % n] for j in range(n)] for i in range(n)]
    return GroupTable.from_rows(names, rows)


def klein_table() -> GroupTable:
    names = ["e", "a", "b", "ab"]
    bits = {"e": (0, 0), "a": (1, 0), "b": (0, 1), "ab": (1, 1)}
    back = {v: k for k, v in bits.items()}
    rows = [
        [back[((bits[x][0] + bits[y][0]) % 2, (bits[x][1] + bits[y][1]) % 2)] for y in names]
        for x in names
    ]
    return GroupTable.from_rows(names, rows)


def sym3_table() -> GroupTable:
    perms = {
        "p012": (0, 1, 2), "p120": (1, 2, 0), "p201": (2, 0, 1),
        "p021": (0, 2, 1), "p210": (2, 1, 0), "p102": (1, 0, 2),
    }
    back = {v: k for k, v in perms.items()}
    names = list(perms)

    def mul(x, y):  # x after y
        px, py = perms[x], perms[y]
        return back[tuple(px[py[i]] for i in range(3))]

    rows = [[mul(x, y) for y in names] for x in names]
    return GroupTable.from_rows(names, rows)


def swap_action_groupoid() -> "GradedGroupoid":
    t = cyclic_table(2)
    act = {("p", "e"): "p", ("q", "e"): "q", ("p", "t"): "q", ("q", "t"): "p"}
    return action_groupoid(t, ("p", "q"), act, epsilon={"e": 1, "t": -1})


def build_corpus():
    z2, k4, s3 = cyclic_table(2), klein_table(), sym3_table()
    return {
        "point": point_groupoid(),
        "pair": pair_groupoid(["a", "b"]),
        "BZ2_triv": delooping(z2),
        "BZ2_id": delooping(z2, epsilon={"e": 1, "t": -1}),
        "BK4": delooping(k4),
        "BS3": delooping(s3),
        "swap2": swap_action_groupoid(),
        "Z2//Z2": conjugation_groupoid(z2),
        "S3//S3": conjugation_groupoid(s3),
    }
