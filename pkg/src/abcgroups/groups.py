"""Exact arithmetic in abelian-by-cyclic groups K ⋊ <t>.

An element is a pair (kpart, texp) with kpart in an abelian kernel K and
texp the exponent of the distinguished cyclic generator t.  Multiplication
follows (a, t^p) (b, t^q) = (a + phi^p(b), t^(p+q)) where phi is the
defining automorphism of K.

Three kernel families are supported:

* lamplighter: K = finitely supported configurations Z -> Z_m (or Z when
  m = 0), phi shifts the support up by one.
* bs: K = Z[1/k] for Baumslag-Solitar BS(1,k), phi multiplies by k.
* matrix: K = Z^n with phi given by an integer matrix of determinant +-1.
"""

from __future__ import annotations

import json
from typing import Any, Iterable, NamedTuple, Optional

from .linalg import det_int, identity_matrix, mat_vec, unimodular_inverse

__all__ = [
    "Element",
    "GroupContext",
    "LamplighterContext",
    "BaumslagSolitarContext",
    "MatrixContext",
    "make_lamplighter",
    "make_bs",
    "make_matrix_context",
    "load_matrix_config",
    "parse_group_descriptor",
    "context_from_descriptor",
]


class Element(NamedTuple):
    """Group element: kernel part plus t-exponent."""

    kpart: Any
    texp: int


# ---------------------------------------------------------------------------
# Order-preserving integer codec.
#
# Lexicographic order on the encoded bytes must equal numeric order, for
# arbitrary-precision signed integers.  Nonnegative values are prefixed with
# 0x81 and a big-endian length; negatives with 0x7e, a complemented length
# and a complemented magnitude so that more negative sorts earlier.
# ---------------------------------------------------------------------------

_LEN_CAP = 0xFFFF


def encode_int(n: int) -> bytes:
    if n >= 0:
        mag = n.to_bytes((n.bit_length() + 7) // 8 or 1, "big")
        if len(mag) > _LEN_CAP:
            raise ValueError("integer magnitude too large to encode")
        return b"\x81" + len(mag).to_bytes(2, "big") + mag
    mag = (-n).to_bytes(((-n).bit_length() + 7) // 8, "big")
    if len(mag) > _LEN_CAP:
        raise ValueError("integer magnitude too large to encode")
    inv = bytes(255 - b for b in mag)
    return b"\x7e" + (_LEN_CAP - len(mag)).to_bytes(2, "big") + inv


def decode_int(blob: bytes, offset: int) -> tuple[int, int]:
    """Decode one integer, returning (value, next offset)."""
    tag = blob[offset]
    size = int.from_bytes(blob[offset + 1 : offset + 3], "big")
    if tag == 0x81:
        start = offset + 3
        end = start + size
        if end > len(blob):
            raise ValueError("truncated integer encoding")
        return int.from_bytes(blob[start:end], "big"), end
    if tag == 0x7E:
        size = _LEN_CAP - size
        start = offset + 3
        end = start + size
        if end > len(blob):
            raise ValueError("truncated integer encoding")
        mag = bytes(255 - b for b in blob[start:end])
        return -int.from_bytes(mag, "big"), end
    raise ValueError(f"bad integer tag byte {tag:#x}")


# ---------------------------------------------------------------------------
# Context base class
# ---------------------------------------------------------------------------


class GroupContext:
    """Family-independent element operations on top of kernel arithmetic."""

    family: str = ""

    # Kernel primitives supplied by each family.  kparts are canonical
    # immutable tuples so elements are hashable dictionary keys.

    def kpart_zero(self):
        raise NotImplementedError

    def kpart_add(self, a, b):
        raise NotImplementedError

    def kpart_neg(self, a):
        raise NotImplementedError

    def canonical_kpart(self, a):
        raise NotImplementedError

    def phi_power(self, a, i: int):
        """Apply the defining automorphism i times (i may be negative)."""
        raise NotImplementedError

    def encode_kpart(self, a) -> bytes:
        raise NotImplementedError

    def decode_kpart(self, blob: bytes, offset: int):
        raise NotImplementedError

    def format_kpart(self, a) -> str:
        raise NotImplementedError

    def describe(self) -> dict:
        """JSON-serializable descriptor, sufficient to rebuild the context."""
        raise NotImplementedError

    # Element level operations.

    @property
    def identity(self) -> Element:
        return Element(self.kpart_zero(), 0)

    def element(self, kpart, texp: int = 0) -> Element:
        return Element(self.canonical_kpart(kpart), texp)

    def multiply(self, g: Element, h: Element) -> Element:
        return Element(
            self.kpart_add(g.kpart, self.phi_power(h.kpart, g.texp)),
            g.texp + h.texp,
        )

    def invert(self, g: Element) -> Element:
        return Element(self.phi_power(self.kpart_neg(g.kpart), -g.texp), -g.texp)

    def conjugate(self, x: Element, g: Element) -> Element:
        """x g x^-1."""
        return self.multiply(self.multiply(x, g), self.invert(x))

    def generators(self) -> list[Element]:
        """Generating set: identity, nonzero kernel generators, then t, t^-1."""
        gens = [self.identity]
        gens.extend(Element(r, 0) for r in self.kgen_nonzero)
        zero = self.kpart_zero()
        gens.append(Element(zero, 1))
        gens.append(Element(zero, -1))
        return gens

    def encode(self, g: Element) -> bytes:
        return encode_int(g.texp) + self.encode_kpart(g.kpart)

    def decode(self, blob: bytes) -> Element:
        texp, offset = decode_int(blob, 0)
        kpart, offset = self.decode_kpart(blob, offset)
        if offset != len(blob):
            raise ValueError("trailing bytes in element encoding")
        return Element(kpart, texp)

    def format_element(self, g: Element) -> str:
        return f"({self.format_kpart(g.kpart)}; t^{g.texp})"

    # Kernel generator bookkeeping shared by all families.

    def _set_kgens(self, kgens: Iterable) -> None:
        seen = []
        for raw in kgens:
            a = self.canonical_kpart(raw)
            if a not in seen:
                seen.append(a)
        zero = self.kpart_zero()
        if zero not in seen:
            raise ValueError("kernel generator set must contain zero")
        for a in seen:
            if self.kpart_neg(a) not in seen:
                raise ValueError(
                    f"kernel generator set is not symmetric: missing inverse of {a!r}"
                )
        self.kgen_list = tuple(seen)
        self.kgen_nonzero = tuple(a for a in seen if a != zero)


# ---------------------------------------------------------------------------
# Lamplighter family
# ---------------------------------------------------------------------------


class LamplighterContext(GroupContext):
    """Z_m (or Z) lamps indexed by Z; t shifts the configuration up by one.

    kparts are tuples of (index, value) pairs sorted by index with all
    values nonzero, values taken in [1, m-1] when m >= 2.
    """

    family = "lamplighter"

    def __init__(self, m: int, kgens: Optional[Iterable] = None):
        if m == 1 or m < 0:
            raise ValueError(f"lamp modulus must be 0 (integer lamps) or >= 2, got {m}")
        self.m = m
        if kgens is None:
            delta = ((0, 1),)
            kgens = ((), delta, self.kpart_neg(delta))
        self._set_kgens(kgens)

    def kpart_zero(self):
        return ()

    def _norm_value(self, v: int) -> int:
        return v % self.m if self.m else v

    def kpart_add(self, a, b):
        if not a:
            return b
        if not b:
            return a
        out = []
        i = j = 0
        la, lb = len(a), len(b)
        while i < la and j < lb:
            ia, va = a[i]
            ib, vb = b[j]
            if ia < ib:
                out.append(a[i])
                i += 1
            elif ib < ia:
                out.append(b[j])
                j += 1
            else:
                v = self._norm_value(va + vb)
                if v:
                    out.append((ia, v))
                i += 1
                j += 1
        out.extend(a[i:])
        out.extend(b[j:])
        return tuple(out)

    def kpart_neg(self, a):
        if self.m:
            return tuple((i, self.m - v) for i, v in a)
        return tuple((i, -v) for i, v in a)

    def canonical_kpart(self, a):
        acc: dict[int, int] = {}
        for i, v in a:
            acc[i] = self._norm_value(acc.get(i, 0) + v)
        return tuple((i, acc[i]) for i in sorted(acc) if acc[i])

    def phi_power(self, a, i: int):
        if i == 0 or not a:
            return a
        return tuple((idx + i, v) for idx, v in a)

    def encode_kpart(self, a) -> bytes:
        parts = [encode_int(len(a))]
        for idx, v in a:
            parts.append(encode_int(idx))
            parts.append(encode_int(v))
        return b"".join(parts)

    def decode_kpart(self, blob: bytes, offset: int):
        count, offset = decode_int(blob, offset)
        pairs = []
        for _ in range(count):
            idx, offset = decode_int(blob, offset)
            v, offset = decode_int(blob, offset)
            pairs.append((idx, v))
        return tuple(pairs), offset

    def format_kpart(self, a) -> str:
        if not a:
            return "0"
        return "+".join(f"{v}@{i}" for i, v in a)

    def describe(self) -> dict:
        return {
            "family": self.family,
            "m": self.m,
            "kgens": [[list(pair) for pair in a] for a in self.kgen_list],
        }


# ---------------------------------------------------------------------------
# Baumslag-Solitar family BS(1,k)
# ---------------------------------------------------------------------------


class BaumslagSolitarContext(GroupContext):
    """K = Z[1/k]; kpart (num, e) stands for num * k**-e.

    Canonical form keeps e >= 0 minimal, so k does not divide num unless
    e = 0, and zero is (0, 0).
    """

    family = "bs"

    def __init__(self, k: int, kgens: Optional[Iterable] = None):
        if k < 2:
            raise ValueError(f"bs parameter k must be >= 2, got {k}")
        self.k = k
        if kgens is None:
            kgens = ((0, 0), (1, 0), (-1, 0))
        self._set_kgens(kgens)

    def kpart_zero(self):
        return (0, 0)

    def canonical_kpart(self, a):
        num, e = a
        if num == 0:
            return (0, 0)
        k = self.k
        if e < 0:
            return (num * k ** (-e), 0)
        while e > 0 and num % k == 0:
            num //= k
            e -= 1
        return (num, e)

    def kpart_add(self, a, b):
        na, ea = a
        nb, eb = b
        k = self.k
        if ea == eb:
            num, e = na + nb, ea
        elif ea > eb:
            num, e = na + nb * k ** (ea - eb), ea
        else:
            num, e = na * k ** (eb - ea) + nb, eb
        if num == 0:
            return (0, 0)
        while e > 0 and num % k == 0:
            num //= k
            e -= 1
        return (num, e)

    def kpart_neg(self, a):
        return (-a[0], a[1])

    def phi_power(self, a, i: int):
        num, e = a
        if i == 0 or num == 0:
            return a
        e -= i
        if e < 0:
            return (num * self.k ** (-e), 0)
        # canonical inputs with e = 0 may carry factors of k in num; pulling
        # them out keeps the result canonical when i is negative
        k = self.k
        while e > 0 and num % k == 0:
            num //= k
            e -= 1
        return (num, e)

    def encode_kpart(self, a) -> bytes:
        return encode_int(a[1]) + encode_int(a[0])

    def decode_kpart(self, blob: bytes, offset: int):
        e, offset = decode_int(blob, offset)
        num, offset = decode_int(blob, offset)
        return (num, e), offset

    def format_kpart(self, a) -> str:
        num, e = a
        if e == 0:
            return str(num)
        return f"{num}/{self.k}^{e}"

    def describe(self) -> dict:
        return {
            "family": self.family,
            "k": self.k,
            "kgens": [list(a) for a in self.kgen_list],
        }


# ---------------------------------------------------------------------------
# Matrix family Z^n x| <t>
# ---------------------------------------------------------------------------


class MatrixContext(GroupContext):
    """K = Z^n with phi(v) = M v for an integer matrix M, |det M| = 1."""

    family = "matrix"

    def __init__(self, rows: Iterable[Iterable[int]], kgens: Optional[Iterable] = None):
        matrix = tuple(tuple(int(x) for x in row) for row in rows)
        n = len(matrix)
        if n == 0 or any(len(row) != n for row in matrix):
            raise ValueError("matrix must be square and nonempty")
        det = det_int(matrix)
        if det not in (1, -1):
            raise ValueError(f"matrix must have determinant +-1, got {det}")
        self.matrix = matrix
        self.n = n
        self._inverse = unimodular_inverse(matrix, det)
        self._powers: dict[int, tuple[tuple[int, ...], ...]] = {
            0: identity_matrix(n),
            1: matrix,
            -1: self._inverse,
        }
        if kgens is None:
            units = []
            for i in range(n):
                e = tuple(1 if j == i else 0 for j in range(n))
                units.append(e)
                units.append(self.kpart_neg(e))
            kgens = [self.kpart_zero()] + units
        self._set_kgens(kgens)

    def matrix_power(self, i: int) -> tuple[tuple[int, ...], ...]:
        cached = self._powers.get(i)
        if cached is not None:
            return cached
        step = self.matrix if i > 0 else self._inverse
        base = self.matrix_power(i - 1 if i > 0 else i + 1)
        from .linalg import mat_mul

        result = mat_mul(step, base)
        self._powers[i] = result
        return result

    def kpart_zero(self):
        return (0,) * self.n

    def kpart_add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def kpart_neg(self, a):
        return tuple(-x for x in a)

    def canonical_kpart(self, a):
        v = tuple(int(x) for x in a)
        if len(v) != self.n:
            raise ValueError(f"kernel vector must have length {self.n}")
        return v

    def phi_power(self, a, i: int):
        if i == 0:
            return a
        return mat_vec(self.matrix_power(i), a)

    def encode_kpart(self, a) -> bytes:
        return b"".join(encode_int(x) for x in a)

    def decode_kpart(self, blob: bytes, offset: int):
        coords = []
        for _ in range(self.n):
            x, offset = decode_int(blob, offset)
            coords.append(x)
        return tuple(coords), offset

    def format_kpart(self, a) -> str:
        return "(" + ",".join(str(x) for x in a) + ")"

    def describe(self) -> dict:
        return {
            "family": self.family,
            "rows": [list(row) for row in self.matrix],
            "kgens": [list(a) for a in self.kgen_list],
        }


# ---------------------------------------------------------------------------
# Factories
# ---------------------------------------------------------------------------


def make_lamplighter(m: int, kgens: Optional[Iterable] = None) -> LamplighterContext:
    return LamplighterContext(m, kgens)


def make_bs(k: int, kgens: Optional[Iterable] = None) -> BaumslagSolitarContext:
    return BaumslagSolitarContext(k, kgens)


def make_matrix_context(rows, kgens: Optional[Iterable] = None) -> MatrixContext:
    return MatrixContext(rows, kgens)


def load_matrix_config(path: str) -> MatrixContext:
    """Build a matrix context from a JSON file {"n":, "rows":, "generators":?}."""
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError("matrix config must be a JSON object")
    rows = data.get("rows")
    if rows is None:
        raise ValueError("matrix config is missing 'rows'")
    n = data.get("n", len(rows))
    if n != len(rows):
        raise ValueError(f"matrix config declares n={n} but has {len(rows)} rows")
    kgens = None
    if "generators" in data:
        ctx_probe = MatrixContext(rows)
        units = []
        for vec in data["generators"]:
            v = ctx_probe.canonical_kpart(tuple(vec))
            units.append(v)
            units.append(ctx_probe.kpart_neg(v))
        kgens = [ctx_probe.kpart_zero()] + units
    return MatrixContext(rows, kgens)


def parse_group_descriptor(desc: str) -> GroupContext:
    """Parse "lamplighter:m", "bs:k" or "matrix:<config path>"."""
    head, sep, rest = desc.partition(":")
    if not sep:
        raise ValueError(f"bad group descriptor {desc!r}: expected family:parameter")
    if head == "lamplighter":
        return make_lamplighter(int(rest))
    if head == "bs":
        return make_bs(int(rest))
    if head == "matrix":
        return load_matrix_config(rest)
    raise ValueError(f"unknown group family {head!r}")


def context_from_descriptor(data: dict) -> GroupContext:
    """Rebuild a context from GroupContext.describe() output."""
    family = data.get("family")
    if family == "lamplighter":
        kgens = [tuple(tuple(pair) for pair in a) for a in data["kgens"]]
        return LamplighterContext(data["m"], kgens)
    if family == "bs":
        return BaumslagSolitarContext(data["k"], [tuple(a) for a in data["kgens"]])
    if family == "matrix":
        return MatrixContext(data["rows"], [tuple(a) for a in data["kgens"]])
    raise ValueError(f"unknown family in descriptor: {family!r}")
