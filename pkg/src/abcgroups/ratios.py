"""Conjugacy-class growth statistics over balls.

For each radius r the table records the ball and sphere sizes, the number
of conjugacy classes meeting the ball (cumulative) and the number first
reached at r (new), their ratios cr and scr, the size of the thin part
F(r) of the new-class sphere under a threshold function f, and the count
of ball elements whose geodesics can avoid more than f(r) t-type letters.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil, isqrt, log
from typing import Callable, NamedTuple, TextIO

from .conjugacy import conjugacy_key
from .enumeration import BallIndex
from .groups import GroupContext

__all__ = [
    "RatioRow",
    "RatioTable",
    "DecayFit",
    "threshold_function",
    "ratio_table",
    "sphere_class_histogram",
    "low_t_count",
    "decay_fit",
    "write_csv",
    "gnuplot_script",
    "CSV_HEADER",
]

CSV_HEADER = "r,ball,sphere,classes_cum,classes_new,cr,scr,F_size,F_classes,U_count"


@dataclass(frozen=True)
class RatioRow:
    r: int
    ball: int
    sphere: int
    classes_cum: int
    classes_new: int
    cr: float
    scr: float
    f_size: int
    f_classes: int
    u_count: int


@dataclass(frozen=True)
class RatioTable:
    f_label: str
    rows: tuple[RatioRow, ...]


class DecayFit(NamedTuple):
    cr_constant: float
    scr_constant: float
    rows_used: int


def threshold_function(spec: str) -> tuple[Callable[[int], int], str]:
    """Threshold choices: sqrt -> ceil(sqrt(r)), log2 -> ceil(ln(r)^2),
    const:c -> the constant c."""
    if spec == "sqrt":
        return (lambda r: 0 if r == 0 else isqrt(r - 1) + 1), "sqrt"
    if spec == "log2":
        return (lambda r: 0 if r == 0 else ceil(log(r) ** 2)), "log2"
    if spec.startswith("const:"):
        try:
            c = int(spec.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad constant threshold {spec!r}") from None
        if c < 0:
            raise ValueError(f"threshold constant must be nonnegative, got {c}")
        return (lambda r: c), spec
    raise ValueError(f"unknown threshold spec {spec!r} (try sqrt, log2, const:c)")


def sphere_class_histogram(ctx: GroupContext, index: BallIndex, r: int) -> dict:
    """Class key -> number of sphere-r elements carrying it."""
    out: dict = {}
    for g in index.sphere(r):
        key = conjugacy_key(ctx, g)
        out[key] = out.get(key, 0) + 1
    return out


def _min_t_buckets(index: BallIndex, radius: int) -> list[dict[int, int]]:
    # buckets[r][m] counts sphere-r elements whose geodesics need m t-letters
    out = []
    for r in range(radius + 1):
        counts: dict[int, int] = {}
        for g in index.sphere(r):
            m = index.min_t_count(g)
            counts[m] = counts.get(m, 0) + 1
        out.append(counts)
    return out


def low_t_count(index: BallIndex, r: int, bound: int) -> int:
    """Number of elements of S^r with a geodesic using at most bound t-letters."""
    total = 0
    for rr in range(r + 1):
        for g in index.sphere(rr):
            if index.min_t_count(g) <= bound:
                total += 1
    return total


def ratio_table(
    ctx: GroupContext,
    index: BallIndex,
    f: Callable[[int], int] | str = "sqrt",
    radius: int | None = None,
) -> RatioTable:
    if isinstance(f, str):
        f, label = threshold_function(f)
    else:
        label = getattr(f, "__name__", "custom")
    if radius is None:
        radius = index.radius
    if radius > index.radius:
        raise ValueError(f"radius {radius} exceeds the index radius {index.radius}")

    buckets = _min_t_buckets(index, radius)
    seen_keys: set = set()
    rows = []
    ball = 0
    u_prefix: list[dict[int, int]] = []
    for r in range(radius + 1):
        sphere = index.sphere(r)
        ball += len(sphere)
        new_hist: dict = {}
        for g in sphere:
            key = conjugacy_key(ctx, g)
            if key not in seen_keys:
                new_hist[key] = new_hist.get(key, 0) + 1
        seen_keys.update(new_hist)
        bound = f(r)
        u_prefix.append(buckets[r])
        u_count = sum(
            count
            for counts in u_prefix
            for m, count in counts.items()
            if m <= bound
        )
        f_classes = sum(1 for c in new_hist.values() if c <= bound)
        f_size = sum(c for c in new_hist.values() if c <= bound)
        rows.append(
            RatioRow(
                r=r,
                ball=ball,
                sphere=len(sphere),
                classes_cum=len(seen_keys),
                classes_new=len(new_hist),
                cr=len(seen_keys) / ball,
                scr=len(new_hist) / len(sphere),
                f_size=f_size,
                f_classes=f_classes,
                u_count=u_count,
            )
        )
    return RatioTable(label, tuple(rows))


def decay_fit(table: RatioTable) -> DecayFit:
    """Least constants C with cr(r) <= C log(r)/r and likewise for scr,
    over the rows with r >= 3."""
    rows = [row for row in table.rows if row.r >= 3]
    if len(rows) < 4:
        raise ValueError(
            f"decay fit needs at least 4 rows with r >= 3, got {len(rows)}"
        )
    cr_c = max(row.cr * row.r / log(row.r) for row in rows)
    scr_c = max(row.scr * row.r / log(row.r) for row in rows)
    return DecayFit(cr_c, scr_c, len(rows))


def write_csv(table: RatioTable, dest) -> None:
    if isinstance(dest, (str, bytes)) or hasattr(dest, "__fspath__"):
        with open(dest, "w", encoding="utf-8") as fh:
            write_csv(table, fh)
        return
    fh: TextIO = dest
    fh.write(CSV_HEADER + "\n")
    for row in table.rows:
        fh.write(
            f"{row.r},{row.ball},{row.sphere},{row.classes_cum},"
            f"{row.classes_new},{row.cr!r},{row.scr!r},{row.f_size},"
            f"{row.f_classes},{row.u_count}\n"
        )


def gnuplot_script(csv_path: str, title: str = "class ratios") -> str:
    return "\n".join(
        [
            "set datafile separator ','",
            f"set title '{title}'",
            "set logscale y",
            "set xlabel 'r'",
            "set key top right",
            f"plot '{csv_path}' using 1:6 with linespoints title 'cr', \\",
            f"     '{csv_path}' using 1:7 with linespoints title 'scr'",
            "",
        ]
    )
