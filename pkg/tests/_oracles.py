"""Slow reference implementations used only by the tests.

Everything here recomputes results from first principles (raw generator
words, elementwise conjugation sweeps) so the fast code paths have an
independent answer to match.
"""

from __future__ import annotations

from abcgroups.groups import Element, GroupContext
from abcgroups.words import generator_letters, letter_element


def word_ball(ctx: GroupContext, radius: int) -> dict[Element, tuple[int, int]]:
    """Map each element of the radius-ball to (distance, min t-letters).

    Grown one letter at a time over all geodesic prefixes.  Every geodesic
    has geodesic prefixes, so carrying the full set of (element, t-count)
    states at each exact distance is enough to minimize the t-count over
    all geodesics.
    """
    letters = [x for x in generator_letters(ctx) if x is not None]
    steps = [(letter_element(ctx, x), 1 if x in ("t", "T") else 0) for x in letters]
    best: dict[Element, tuple[int, int]] = {ctx.identity: (0, 0)}
    frontier = {(ctx.identity, 0)}
    for dist in range(1, radius + 1):
        nxt = set()
        for g, tcount in frontier:
            for step, tcost in steps:
                h = ctx.multiply(g, step)
                seen = best.get(h)
                if seen is not None and seen[0] < dist:
                    continue
                state = (h, tcount + tcost)
                if state in nxt:
                    continue
                nxt.add(state)
                if seen is None or state[1] < seen[1]:
                    best[h] = (dist, state[1])
        frontier = nxt
    return best


def conjugation_sweep(
    ctx: GroupContext, elements, conjugators
) -> set[frozenset[bytes]]:
    """Partition of `elements` under single conjugation moves.

    Merges g with x g x^-1 whenever the conjugate lands back in the set,
    for every x in `conjugators`, then takes the transitive closure.
    """
    pool = list(elements)
    codes = {g: ctx.encode(g) for g in pool}
    inside = set(codes.values())
    parent: dict[bytes, bytes] = {c: c for c in codes.values()}

    def find(c: bytes) -> bytes:
        while parent[c] != c:
            parent[c] = parent[parent[c]]
            c = parent[c]
        return c

    for g in pool:
        for x in conjugators:
            h = ctx.conjugate(x, g)
            hc = ctx.encode(h)
            if hc in inside:
                ra, rb = find(codes[g]), find(hc)
                if ra != rb:
                    parent[rb] = ra
    blocks: dict[bytes, set[bytes]] = {}
    for c in codes.values():
        blocks.setdefault(find(c), set()).add(c)
    return {frozenset(v) for v in blocks.values()}
