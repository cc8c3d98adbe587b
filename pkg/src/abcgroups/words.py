"""Words over the standard generating set, and two canonical rewrites.

Letters are the tokens "t", "T" (= t^-1), "g<i>" for the i-th nonzero
kernel generator and "G<i>" for its inverse.

Two word shapes matter here.  The staircase form

    T^p  u_0 t u_1 t ... t u_d  t^(m-q)

collects kernel letters level by level (u_i sits at t-level i-p, with
d = p+q covering every level that carries a letter) and never increases
length; applied to a geodesic it stays a geodesic.  For words of positive
t-exponent sum m, the ascending form

    u_0 t u_1 t ... u_{m-1} t

is reached from the staircase by repeatedly cutting the trailing block,
cyclically permuting it to the front and merging it into the block m
levels below; each such step conjugates the value and removes one t and
one T.
"""

from __future__ import annotations

import re
from typing import NamedTuple

from .groups import Element, GroupContext

__all__ = [
    "Word",
    "parse_word",
    "format_word",
    "generator_letters",
    "letter_element",
    "evaluate",
    "t_exponent",
    "to_staircase",
    "cyclic_reduce",
    "is_ascending_form",
    "cyclic_permutations",
    "distinct_cyclic_values",
]

_LETTER_RE = re.compile(r"^(t|T|[gG]\d+)$")


class Word(NamedTuple):
    letters: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.letters)


def parse_word(text: str) -> Word:
    """Parse a whitespace-separated token string."""
    letters = tuple(text.split())
    for tok in letters:
        if not _LETTER_RE.match(tok):
            raise ValueError(f"bad word letter {tok!r}")
    return Word(letters)


def format_word(w: Word) -> str:
    return " ".join(w.letters)


def generator_letters(ctx: GroupContext) -> list[str | None]:
    """Letter token for each entry of ctx.generators(); None for the identity."""
    out: list[str | None] = [None]
    out.extend(f"g{i}" for i in range(len(ctx.kgen_nonzero)))
    out.append("t")
    out.append("T")
    return out


def letter_element(ctx: GroupContext, letter: str) -> Element:
    if letter == "t":
        return Element(ctx.kpart_zero(), 1)
    if letter == "T":
        return Element(ctx.kpart_zero(), -1)
    idx = int(letter[1:])
    if idx >= len(ctx.kgen_nonzero):
        raise ValueError(f"letter {letter!r} exceeds the {len(ctx.kgen_nonzero)} kernel generators")
    kpart = ctx.kgen_nonzero[idx]
    if letter[0] == "G":
        kpart = ctx.kpart_neg(kpart)
    return Element(kpart, 0)


def evaluate(ctx: GroupContext, w: Word) -> Element:
    g = ctx.identity
    for letter in w.letters:
        g = ctx.multiply(g, letter_element(ctx, letter))
    return g


def t_exponent(w: Word) -> int:
    return sum(1 if x == "t" else -1 if x == "T" else 0 for x in w.letters)


def _level_blocks(w: Word) -> tuple[dict[int, list[str]], int]:
    """Kernel letters grouped by the t-level they act at, plus the net t-exponent."""
    level = 0
    buckets: dict[int, list[str]] = {}
    for letter in w.letters:
        if letter == "t":
            level += 1
        elif letter == "T":
            level -= 1
        else:
            buckets.setdefault(level, []).append(letter)
    return buckets, level


def to_staircase(ctx: GroupContext, w: Word) -> Word:
    """Rewrite into staircase form without increasing length.

    The value is unchanged.  Requires a nonnegative t-exponent sum.
    """
    buckets, m = _level_blocks(w)
    if m < 0:
        raise ValueError(f"t-exponent sum must be nonnegative, got {m}")
    lo = min(0, min(buckets)) if buckets else 0
    hi = max(0, max(buckets)) if buckets else 0
    letters: list[str] = ["T"] * (-lo)
    for level in range(lo, hi + 1):
        letters.extend(buckets.get(level, ()))
        if level < hi:
            letters.append("t")
    tail = m - hi
    letters.extend(["t"] * tail if tail >= 0 else ["T"] * (-tail))
    return Word(tuple(letters))


def cyclic_reduce(ctx: GroupContext, w: Word) -> Word:
    """Reduce a word of positive t-exponent sum to ascending form.

    The output evaluates to a conjugate of the input value and is never
    longer; every merge step removes exactly two t-letters.
    """
    buckets, m = _level_blocks(w)
    if m <= 0:
        raise ValueError(f"t-exponent sum must be positive, got {m}")
    lo = min(0, min(buckets)) if buckets else 0
    hi = max(0, max(buckets)) if buckets else 0
    # Staircase blocks with the leading T^p rotated to the end, so the word
    # reads u_0 t u_1 t ... u_l t^(m-l) with l = hi - lo.
    blocks = [list(buckets.get(level, ())) for level in range(lo, hi + 1)]
    while len(blocks) - 1 > m:
        last = blocks.pop()
        blocks[-m] = last + blocks[-m]
    if len(blocks) - 1 == m:
        last = blocks.pop()
        blocks[0] = last + blocks[0]
    while len(blocks) < m:
        blocks.append([])
    letters: list[str] = []
    for block in blocks:
        letters.extend(block)
        letters.append("t")
    return Word(tuple(letters))


def is_ascending_form(w: Word) -> bool:
    """True for words u_0 t u_1 t ... u_{m-1} t with no T letters, m > 0."""
    return bool(w.letters) and "T" not in w.letters and w.letters[-1] == "t"


def cyclic_permutations(w: Word) -> list[Word]:
    letters = w.letters
    return [Word(letters[i:] + letters[:i]) for i in range(len(letters))]


def distinct_cyclic_values(ctx: GroupContext, w: Word) -> int:
    rotations = cyclic_permutations(w) or [w]
    return len({ctx.encode(evaluate(ctx, rot)) for rot in rotations})
