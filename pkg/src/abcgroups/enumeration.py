"""Breadth-first enumeration of word-metric balls, with a binary disk cache.

The index stores, per element of the ball S^R: the word length, the index
of a generator finishing some geodesic, and the minimum number of t
letters over all geodesics (computed layer by layer: an element at
distance r minimizes over its distance r-1 predecessors).
"""

from __future__ import annotations

import hashlib
import json
import struct
from typing import Iterator, Optional

from .groups import Element, GroupContext, context_from_descriptor
from .words import Word, generator_letters

__all__ = [
    "BallIndex",
    "enumerate_ball",
    "save_index",
    "load_index",
    "ResourceCapError",
    "CacheError",
    "CacheVersionError",
    "CacheCorruptError",
    "DEFAULT_ELEMENT_CAP",
]

DEFAULT_ELEMENT_CAP = 50_000_000

_MAGIC = b"ABCIDX1"


class ResourceCapError(RuntimeError):
    """An explicit resource cap was hit; results were not truncated."""


class CacheError(RuntimeError):
    pass


class CacheVersionError(CacheError):
    pass


class CacheCorruptError(CacheError):
    pass


class BallIndex:
    """Ball S^R with per-element word length, geodesic witness and t-count."""

    def __init__(self, ctx: GroupContext, radius: int, records, layers):
        self.ctx = ctx
        self.radius = radius
        self._records = records  # Element -> (dist, pred_gen_index, min_t)
        self._layers = layers  # layers[r]: list of Element, sorted by encoding

    def __contains__(self, g: Element) -> bool:
        return g in self._records

    def __len__(self) -> int:
        return len(self._records)

    def _record(self, g: Element):
        rec = self._records.get(g)
        if rec is None:
            raise KeyError(f"element outside the radius-{self.radius} ball: {g!r}")
        return rec

    def word_length(self, g: Element) -> int:
        return self._record(g)[0]

    def predecessor_index(self, g: Element) -> int:
        """Index into ctx.generators() of a final geodesic letter (-1 at the identity)."""
        return self._record(g)[1]

    def min_t_count(self, g: Element) -> int:
        return self._record(g)[2]

    def sphere(self, r: int) -> list[Element]:
        if not 0 <= r <= self.radius:
            raise ValueError(f"radius {r} outside [0, {self.radius}]")
        return list(self._layers[r])

    def ball_size(self, r: Optional[int] = None) -> int:
        if r is None:
            r = self.radius
        if not 0 <= r <= self.radius:
            raise ValueError(f"radius {r} outside [0, {self.radius}]")
        return sum(len(self._layers[i]) for i in range(r + 1))

    def elements(self, max_radius: Optional[int] = None) -> Iterator[Element]:
        top = self.radius if max_radius is None else max_radius
        for r in range(top + 1):
            yield from self._layers[r]

    def geodesic_word(self, g: Element) -> Word:
        """A geodesic spelling of g, read off the predecessor chain."""
        letters_by_gen = generator_letters(self.ctx)
        gens = self.ctx.generators()
        out = []
        cur = g
        while True:
            dist, pred, _ = self._record(cur)
            if dist == 0:
                break
            out.append(letters_by_gen[pred])
            cur = self.ctx.multiply(cur, self.ctx.invert(gens[pred]))
        out.reverse()
        return Word(tuple(out))


def enumerate_ball(
    ctx: GroupContext, radius: int, element_cap: int = DEFAULT_ELEMENT_CAP
) -> BallIndex:
    """Enumerate S^radius; raises ResourceCapError beyond element_cap elements."""
    if radius < 0:
        raise ValueError(f"radius must be nonnegative, got {radius}")
    gens = ctx.generators()
    identity = ctx.identity
    kmoves = []  # (gen index, kernel part), shift cached per t-level
    tmoves = []  # (gen index, +-1)
    for idx, s in enumerate(gens):
        if s == identity:
            continue
        if s.texp == 0:
            kmoves.append((idx, s.kpart))
        else:
            tmoves.append((idx, s.texp))

    kadd = ctx.kpart_add
    phip = ctx.phi_power
    shift_cache: dict[tuple[int, int], object] = {}

    records: dict[Element, tuple[int, int, int]] = {identity: (0, -1, 0)}
    layers: list[list[Element]] = [[identity]]
    for r in range(1, radius + 1):
        pending: dict[Element, list[int]] = {}
        for g in layers[r - 1]:
            a, p = g
            min_t = records[g][2]
            for idx, dk in kmoves:
                key = (idx, p)
                shifted = shift_cache.get(key)
                if shifted is None:
                    shifted = shift_cache[key] = phip(dk, p)
                h = Element(kadd(a, shifted), p)
                if h in records:
                    continue
                slot = pending.get(h)
                if slot is None:
                    pending[h] = [min_t, idx]
                elif min_t < slot[0]:
                    slot[0] = min_t
            for idx, dt in tmoves:
                h = Element(a, p + dt)
                if h in records:
                    continue
                nt = min_t + 1
                slot = pending.get(h)
                if slot is None:
                    pending[h] = [nt, idx]
                elif nt < slot[0]:
                    slot[0] = nt
        if len(records) + len(pending) > element_cap:
            raise ResourceCapError(
                f"ball exceeds the element cap ({element_cap}) at radius {r}"
            )
        layer = sorted(pending, key=ctx.encode)
        for h in layer:
            slot = pending[h]
            records[h] = (r, slot[1], slot[0])
        layers.append(layer)
    return BallIndex(ctx, radius, records, layers)


# ---------------------------------------------------------------------------
# Disk format: magic, context descriptor, per-radius blocks of
# (encoding, length, predecessor, min_t), then a 64-bit blake2b checksum.
# ---------------------------------------------------------------------------


def _descriptor_bytes(index: BallIndex) -> bytes:
    return json.dumps(index.ctx.describe(), sort_keys=True, separators=(",", ":")).encode(
        "utf-8"
    )


def save_index(index: BallIndex, path: str) -> None:
    parts = [_MAGIC]
    desc = _descriptor_bytes(index)
    parts.append(struct.pack(">I", len(desc)))
    parts.append(desc)
    parts.append(struct.pack(">I", index.radius))
    for r in range(index.radius + 1):
        layer = index._layers[r]
        parts.append(struct.pack(">Q", len(layer)))
        for g in layer:
            enc = index.ctx.encode(g)
            dist, pred, min_t = index._records[g]
            parts.append(struct.pack(">H", len(enc)))
            parts.append(enc)
            parts.append(struct.pack(">HhH", dist, pred, min_t))
    blob = b"".join(parts)
    digest = hashlib.blake2b(blob, digest_size=8).digest()
    with open(path, "wb") as fh:
        fh.write(blob)
        fh.write(digest)


def load_index(path: str) -> BallIndex:
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < len(_MAGIC) + 8:
        raise CacheCorruptError(f"{path}: file too short for a ball index")
    if raw[: len(_MAGIC)] != _MAGIC:
        if raw[: len(_MAGIC) - 1] == _MAGIC[:-1]:
            raise CacheVersionError(
                f"{path}: unsupported index version {raw[len(_MAGIC) - 1:len(_MAGIC)]!r}"
            )
        raise CacheVersionError(f"{path}: not a ball index file")
    blob, digest = raw[:-8], raw[-8:]
    if hashlib.blake2b(blob, digest_size=8).digest() != digest:
        raise CacheCorruptError(f"{path}: checksum mismatch")
    offset = len(_MAGIC)
    try:
        (desc_len,) = struct.unpack_from(">I", blob, offset)
        offset += 4
        ctx = context_from_descriptor(json.loads(blob[offset : offset + desc_len]))
        offset += desc_len
        (radius,) = struct.unpack_from(">I", blob, offset)
        offset += 4
        records: dict[Element, tuple[int, int, int]] = {}
        layers: list[list[Element]] = []
        for r in range(radius + 1):
            (count,) = struct.unpack_from(">Q", blob, offset)
            offset += 8
            layer = []
            for _ in range(count):
                (enc_len,) = struct.unpack_from(">H", blob, offset)
                offset += 2
                g = ctx.decode(blob[offset : offset + enc_len])
                offset += enc_len
                dist, pred, min_t = struct.unpack_from(">HhH", blob, offset)
                offset += 6
                if dist != r:
                    raise CacheCorruptError(f"{path}: element distance {dist} in layer {r}")
                records[g] = (dist, pred, min_t)
                layer.append(g)
            layers.append(layer)
        if offset != len(blob):
            raise CacheCorruptError(f"{path}: {len(blob) - offset} trailing bytes")
    except (struct.error, ValueError, KeyError, IndexError) as exc:
        raise CacheCorruptError(f"{path}: malformed index ({exc})") from exc
    return BallIndex(ctx, radius, records, layers)
