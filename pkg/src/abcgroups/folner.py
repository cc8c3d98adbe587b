"""Right-Folner boxes for the bs family and the translated-box experiment.

The box F_n = {(b k^-n, t^p) : 0 <= b < k^{3n}, 0 <= p < n} has right
translation defects O(1/n) + O(k^-n) while left multiplication by t
rescales every K-part and destroys a fixed proportion of the set, so the
sequence is right-Folner but not left-Folner.  Translating F_n on the
left by a suitable g makes every element lie in its own conjugacy class,
which keeps the conjugacy-to-size ratio of the translated boxes at 1.

The separating translate g = t^{n1} (L, 1) t^{n2} is found by search:
n2 clears all denominators of A, L = 2 max|k^{n2} a_i| + 1 shifts the
cleared K-parts to positive values with no power-of-k quotients among
them (for the nonnegative K-parts used here), and n1 grows until the
conjugacy keys of gA are pairwise distinct.  Only finitely many moduli
k^N - 1 can fuse a fixed pair with distinct such K-parts, so the search
terminates; a candidate cap guards it anyway.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .conjugacy import conjugacy_key
from .enumeration import ResourceCapError
from .groups import BaumslagSolitarContext, Element, GroupContext
from .words import generator_letters

__all__ = [
    "FolnerBox",
    "folner_box",
    "right_defect",
    "left_defect",
    "congruence_witness",
    "window_nonempty",
    "CongruenceSolutions",
    "finite_n_solutions",
    "SeparatingTranslate",
    "separating_translate",
    "TranslateReport",
    "translate_experiment",
    "DEFAULT_BOX_CAP",
    "N1_SEARCH_CAP",
]

DEFAULT_BOX_CAP = 5_000_000
N1_SEARCH_CAP = 512


@dataclass(frozen=True)
class FolnerBox:
    n: int
    elements: frozenset

    @property
    def size(self) -> int:
        return len(self.elements)


def _require_bs(ctx: GroupContext) -> BaumslagSolitarContext:
    if not isinstance(ctx, BaumslagSolitarContext):
        raise ValueError(
            f"box construction needs a bs context, got {type(ctx).__name__}"
        )
    return ctx


def folner_box(
    ctx: GroupContext, n: int, element_cap: int = DEFAULT_BOX_CAP
) -> FolnerBox:
    """The box of n t-layers on the grid k^-n Z, width k^{3n}."""
    ctx = _require_bs(ctx)
    if n < 1:
        raise ValueError(f"box parameter must be at least 1, got {n}")
    k = ctx.k
    width = k ** (3 * n)
    if n * width > element_cap:
        raise ResourceCapError(
            f"box size {n * width} exceeds the cap {element_cap}"
        )
    elements = frozenset(
        Element(ctx.canonical_kpart((b, n)), p)
        for b in range(width)
        for p in range(n)
    )
    return FolnerBox(n, elements)


def _element_set(collection) -> frozenset:
    if isinstance(collection, FolnerBox):
        return collection.elements
    out = frozenset(collection)
    if not out:
        raise ValueError("defects need a nonempty set")
    return out


def right_defect(ctx: GroupContext, collection, x: Element) -> Fraction:
    """|Fx symmetric-difference F| / |F|, exactly."""
    elems = _element_set(collection)
    moved = sum(1 for e in elems if ctx.multiply(e, x) not in elems)
    # |Fx| = |F|, so the symmetric difference is twice the escaped part
    return Fraction(2 * moved, len(elems))


def left_defect(ctx: GroupContext, collection, x: Element) -> Fraction:
    elems = _element_set(collection)
    moved = sum(1 for e in elems if ctx.multiply(x, e) not in elems)
    return Fraction(2 * moved, len(elems))


# ---------------------------------------------------------------------------
# Congruence machinery
# ---------------------------------------------------------------------------


def congruence_witness(
    ctx: GroupContext, a: int, b: int, n: int
) -> Optional[int]:
    """Least m in [0, n) with k^m a = b mod k^n - 1, or None.

    None certifies (a, t^n) and (b, t^n) are not conjugate; the converse
    holds as well because k has multiplicative order n mod k^n - 1.
    """
    ctx = _require_bs(ctx)
    if n < 1:
        raise ValueError(f"the exponent n must be at least 1, got {n}")
    modulus = ctx.k**n - 1
    if modulus == 1:
        return 0
    cur = a % modulus
    target = b % modulus
    for m in range(n):
        if cur == target:
            return m
        cur = cur * ctx.k % modulus
    return None


def window_nonempty(ctx: GroupContext, a: int, b: int, n: int) -> bool:
    """Whether some power k^j lies in [(k^n - 1 + b)/a, k^n b / (k^n - 1 + a)].

    For k^n - 1 > max(a, b) and b/a not a power of k, any witness for the
    congruence forces its power into this interval, so an empty window
    rules the exponent n out.
    """
    ctx = _require_bs(ctx)
    if a < 1 or b < 1:
        raise ValueError(f"window bounds need positive entries, got {a}, {b}")
    if n < 1:
        raise ValueError(f"the exponent n must be at least 1, got {n}")
    k = ctx.k
    lower = Fraction(k**n - 1 + b, a)
    upper = Fraction(k**n * b, k**n - 1 + a)
    if lower > upper:
        return False
    power = Fraction(1)
    while power < lower:
        power *= k
    while power / k >= lower:
        power /= k
    return power <= upper


def _strip_k(value: int, k: int) -> int:
    while value % k == 0:
        value //= k
    return value


@dataclass(frozen=True)
class CongruenceSolutions:
    a: int
    b: int
    n_max: int
    solutions: tuple[int, ...]
    window_limit: int


def finite_n_solutions(
    ctx: GroupContext, a: int, b: int, n_max: int
) -> CongruenceSolutions:
    """All exponents n <= n_max whose congruence has a witness, plus the
    largest n whose power window is nonempty (0 when every window is empty).

    Beyond both bounds no further solutions exist, which is the finiteness
    statement being exercised.
    """
    ctx = _require_bs(ctx)
    if a < 1 or b < 1:
        raise ValueError(f"need positive entries, got {a}, {b}")
    k = ctx.k
    if _strip_k(a, k) == _strip_k(b, k):
        raise ValueError(
            f"{b}/{a} is a power of {k}; every exponent admits a witness"
        )
    solutions = tuple(
        n for n in range(1, n_max + 1) if congruence_witness(ctx, a, b, n) is not None
    )
    # the window edges cross like k^2n versus k^n; once the interval is
    # empty past the vertex of (x - 1 + a)(x - 1 + b) - abx in x = k^n it
    # stays empty for every larger n
    vertex_doubled = a * b + 2 - a - b
    limit = 0
    n = 1
    while True:
        k_n = k**n
        if Fraction(k_n - 1 + b, a) <= Fraction(k_n * b, k_n - 1 + a):
            if window_nonempty(ctx, a, b, n):
                limit = n
        elif 2 * k_n >= vertex_doubled:
            break
        n += 1
    return CongruenceSolutions(a, b, n_max, solutions, limit)


# ---------------------------------------------------------------------------
# Separating translate and the translated-box experiment
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SeparatingTranslate:
    element: Element
    n1: int
    n2: int
    shift: int


def separating_translate(
    ctx: GroupContext, collection: Iterable[Element], n1_cap: int = N1_SEARCH_CAP
) -> SeparatingTranslate:
    """A left translate g with every element of gA in its own class.

    g = t^{n1} (shift, 1) t^{n2}; the result is verified by computing the
    conjugacy keys of gA before returning, so a returned value is always
    correct.  Raises when no candidate n1 within the cap verifies.
    """
    ctx = _require_bs(ctx)
    elems = sorted(set(_element_set(collection)), key=ctx.encode)
    n2 = max(e for (_, e), _ in elems)
    cleared = [num * ctx.k ** (n2 - e) for (num, e), _ in elems]
    shift = 2 * max(abs(v) for v in cleared) + 1
    start = 1 - min(el.texp for el in elems)
    base = ctx.canonical_kpart((shift, 0))
    for n1 in range(start, start + n1_cap):
        g = Element(ctx.phi_power(base, n1), n1 + n2)
        keys = {conjugacy_key(ctx, ctx.multiply(g, el)) for el in elems}
        if len(keys) == len(elems):
            return SeparatingTranslate(g, n1, n2, shift)
    raise ResourceCapError(
        f"no separating translate found within {n1_cap} candidates"
    )


@dataclass(frozen=True)
class TranslateReport:
    k: int
    n: int
    box_size: int
    translate: SeparatingTranslate
    classes: int
    ratio: Fraction
    right_defects: dict
    left_defect_t: Fraction
    matches: bool

    def as_dict(self, ctx: GroupContext) -> dict:
        return {
            "k": self.k,
            "n": self.n,
            "box_size": self.box_size,
            "translate": {
                "element": ctx.format_element(self.translate.element),
                "n1": self.translate.n1,
                "n2": self.translate.n2,
                "shift": self.translate.shift,
            },
            "classes": self.classes,
            "ratio": str(self.ratio),
            "right_defects": {
                letter: str(value) for letter, value in self.right_defects.items()
            },
            "left_defect_t": str(self.left_defect_t),
            "matches": self.matches,
        }


def translate_experiment(
    ctx: GroupContext, n: int, element_cap: int = DEFAULT_BOX_CAP
) -> TranslateReport:
    """Translate the box F_n so that its conjugacy-to-size ratio is 1."""
    ctx = _require_bs(ctx)
    box = folner_box(ctx, n, element_cap)
    sep = separating_translate(ctx, box)
    translated = {ctx.multiply(sep.element, x) for x in box.elements}
    classes = len({conjugacy_key(ctx, y) for y in translated})
    letters = generator_letters(ctx)
    defects = {
        letter: right_defect(ctx, box, gen)
        for letter, gen in zip(letters[1:], ctx.generators()[1:])
    }
    left_t = left_defect(ctx, box, Element(ctx.kpart_zero(), 1))
    return TranslateReport(
        k=ctx.k,
        n=n,
        box_size=box.size,
        translate=sep,
        classes=classes,
        ratio=Fraction(classes, box.size),
        right_defects=defects,
        left_defect_t=left_t,
        matches=classes == box.size and len(translated) == box.size,
    )
