"""Lossless range coding over model snapshots, and ideal code lengths.

``ideal_bits`` is the canonical code length the scoring metrics use: the sum
of -log2 p along the estimation chain of every symbol, adapting a private
overlay between symbols when ``adapt`` is on. ``encode``/``decode`` prove that
number is honest: the emitted payload is decodable back to the exact input and
its length tracks the ideal length to within a small constant (bounded by 64
bits across the fuzz corpus, typically under 24).

The coder is a 64-bit range coder with explicit carry propagation into the
already-emitted bytes. PPMD frequencies are exact small integers (2c-1 per
symbol, t for the escape, total 2T), far below the renormalization floor of
2^48, so no probability quantization is ever needed; the only loss against
the ideal length is integer truncation of the range split plus the flush.
"""

from __future__ import annotations

import hashlib
import math
import struct
from dataclasses import dataclass
from typing import Sequence

from .ppm import DETERMINISTIC_ESCAPE, ESCAPE, ModelOverlay, PpmModel, _walk

_MAGIC = b"PPMC"
_VERSION = 1
_HEADER = struct.Struct(">4sB8sQ")  # magic, version, coding-config hash, symbol count

_PRECISION = 64
_FULL = 1 << _PRECISION
_MASK = _FULL - 1
_SHIFT = _PRECISION - 8
_RENORM = 1 << _SHIFT  # emit a byte while the range is below this


class CodecError(ValueError):
    """Blob failed structural validation (header, version, or coding-config hash)."""


@dataclass(frozen=True)
class EncodedBlob:
    """Header plus arithmetic-coded payload; decodes back to the exact input."""

    config_hash: bytes  # 8-byte digest over (model state, adapt flag)
    length: int  # original symbol count
    payload: bytes

    @property
    def payload_bits(self) -> int:
        return 8 * len(self.payload)

    def to_bytes(self) -> bytes:
        return _HEADER.pack(_MAGIC, _VERSION, self.config_hash, self.length) + self.payload

    @classmethod
    def from_bytes(cls, data: bytes) -> "EncodedBlob":
        if len(data) < _HEADER.size:
            raise CodecError("blob shorter than its header")
        magic, version, config_hash, length = _HEADER.unpack_from(data)
        if magic != _MAGIC:
            raise CodecError("bad blob magic (not a PPMC stream)")
        if version != _VERSION:
            raise CodecError(f"unsupported PPMC version {version}")
        return cls(config_hash, length, data[_HEADER.size:])


def _coding_hash(model: PpmModel, adapt: bool) -> bytes:
    digest = hashlib.sha256(model.config_hash() + (b"\x01" if adapt else b"\x00"))
    return digest.digest()[:8]


class _RangeEncoder:
    """64-bit range coder; carries ripple back into the emitted byte buffer."""

    __slots__ = ("low", "range", "out")

    def __init__(self):
        self.low = 0
        self.range = _FULL
        self.out = bytearray()

    def encode(self, start: int, freq: int, total: int) -> None:
        r = self.range // total
        self.low += start * r
        self.range = freq * r
        if self.low >= _FULL:
            self._carry()
            self.low -= _FULL
        while self.range < _RENORM:
            self.out.append(self.low >> _SHIFT)
            self.low = (self.low << 8) & _MASK
            self.range <<= 8

    def _carry(self) -> None:
        out = self.out
        i = len(out) - 1
        while i >= 0 and out[i] == 0xFF:
            out[i] = 0
            i -= 1
        if i < 0:
            raise AssertionError("range coder carry escaped the emitted prefix")
        out[i] += 1

    def finish(self) -> bytes:
        # Pick the smallest in-range code point that is a multiple of 2^56 and
        # emit only its top byte; the decoder zero-pads everything below.
        target = ((self.low + _RENORM - 1) >> _SHIFT) << _SHIFT
        if target >= _FULL:
            self._carry()
            target -= _FULL
        self.out.append(target >> _SHIFT)
        return bytes(self.out)


class _RangeDecoder:
    """Mirror of the encoder tracking code-minus-low, which is carry-free."""

    __slots__ = ("payload", "pos", "range", "rem")

    def __init__(self, payload: bytes):
        self.payload = payload
        self.pos = 8
        self.range = _FULL
        self.rem = int.from_bytes(payload[:8], "big") << max(0, 8 * (8 - len(payload)))

    def _next_byte(self) -> int:
        pos = self.pos
        self.pos = pos + 1
        return self.payload[pos] if pos < len(self.payload) else 0

    def split(self, total: int) -> tuple[int, int]:
        """Return (target bin, range unit) for a distribution summing to `total`."""
        r = self.range // total
        t = self.rem // r
        if t >= total:
            t = total - 1
        return t, r

    def consume(self, start: int, freq: int, r: int) -> None:
        self.rem -= start * r
        self.range = freq * r
        while self.range < _RENORM:
            self.rem = (self.rem << 8) | self._next_byte()
            self.range <<= 8


def _views(model: PpmModel, adapt: bool):
    if adapt:
        overlay = ModelOverlay(model)
        return overlay._get, overlay.update
    return model._table.get, None


def encode(model: PpmModel, text: Sequence[int], adapt: bool = True) -> EncodedBlob:
    """Losslessly encode `text` against a model snapshot.

    With ``adapt`` on (the default, standard adaptive behavior) a private
    overlay is updated after each symbol; the snapshot itself never changes.
    """
    config = _coding_hash(model, adapt)
    n = len(text)
    if n == 0:
        return EncodedBlob(config, 0, b"")
    lookup, update = _views(model, adapt)
    d = model.max_order
    alphabet = model.alphabet_size
    enc = _RangeEncoder()
    for i in range(n):
        sym = text[i]
        hist = text[i - d if i > d else 0:i]
        for order, kind, num, den, stats in _walk(lookup, hist, sym, d, alphabet):
            if kind is DETERMINISTIC_ESCAPE:
                continue
            if order == -1:
                enc.encode(sym, 1, alphabet)
            elif kind is ESCAPE:
                enc.encode(den - num, num, den)  # escape occupies the top t slots
            else:
                start = 0
                for s, c in stats.counts.items():
                    if s == sym:
                        break
                    start += 2 * c - 1
                enc.encode(start, num, den)
        if update is not None:
            update(hist, sym)
    return EncodedBlob(config, n, enc.finish())


def decode(model: PpmModel, blob: EncodedBlob, adapt: bool = True) -> Sequence[int]:
    """Inverse of encode(). Raises CodecError unless the blob was produced
    with an identical model state and adapt flag.

    Returns bytes for byte-sized alphabets, a tuple of ints otherwise.
    """
    expected = _coding_hash(model, adapt)
    if blob.config_hash != expected:
        raise CodecError(
            "coding-config hash mismatch: blob was produced with a different "
            "model state or adapt flag"
        )
    if blob.length < 0:
        raise CodecError("negative length")
    as_bytes = model.alphabet_size <= 256
    out: bytearray | list[int] = bytearray() if as_bytes else []
    if blob.length == 0:
        return bytes(out) if as_bytes else tuple(out)
    lookup, update = _views(model, adapt)
    d = model.max_order
    alphabet = model.alphabet_size
    dec = _RangeDecoder(blob.payload)
    for i in range(blob.length):
        hist = out[i - d if i > d else 0:i]
        n = len(hist)
        sym = -1
        k = d if n > d else n
        while sym < 0:
            if k < 0:
                t, r = dec.split(alphabet)
                sym = t
                dec.consume(sym, 1, r)
                break
            ctx = tuple(hist[n - k:n])
            stats = lookup(ctx)
            if stats is None or stats.total == 0:
                k -= 1
                continue
            total = 2 * stats.total
            t, r = dec.split(total)
            esc_start = total - len(stats.counts)
            if t >= esc_start:
                dec.consume(esc_start, len(stats.counts), r)
                k -= 1
                continue
            start = 0
            for s, c in stats.counts.items():
                width = 2 * c - 1
                if t < start + width:
                    sym = s
                    dec.consume(start, width, r)
                    break
                start += width
        if update is not None:
            update(hist, sym)
        out.append(sym)
    return bytes(out) if as_bytes else tuple(out)


def ideal_bits(model: PpmModel, text: Sequence[int], adapt: bool = True) -> float:
    """Ideal code length of `text` in bits under a model snapshot.

    Sum over symbols of -log2 p along the estimation chain; with ``adapt`` on,
    a private overlay is updated between symbols. Divide by 8 for bytes.
    """
    lookup, update = _views(model, adapt)
    d = model.max_order
    alphabet = model.alphabet_size
    log2 = math.log2
    bits = 0.0
    for i in range(len(text)):
        sym = text[i]
        hist = text[i - d if i > d else 0:i]
        for _, _, num, den, _ in _walk(lookup, hist, sym, d, alphabet):
            if num != den:
                bits += log2(den) - log2(num)
        if update is not None:
            update(hist, sym)
    return bits
