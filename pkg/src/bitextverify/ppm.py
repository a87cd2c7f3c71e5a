"""Adaptive fixed-order context modelling with PPMD probability estimation.

The model keeps occurrence statistics for every context of length 0..max_order
observed during training. Symbols are integers below ``alphabet_size``, so byte
strings work directly as training and scoring input. Prediction backs off from
the longest available context through escape events down to a uniform order -1
distribution over the whole alphabet.

The estimator is PPMD: in a context seen T times, a symbol seen c times gets
probability (2c - 1) / (2T) and the escape event gets t / (2T), where t is the
number of distinct symbols seen in that context. These exhaust the probability
mass exactly, and the model layer works in exact rationals; floating point
enters only when a trace is summed into bits.

No exclusion sets are applied, counts are never rescaled, and a context that
has never been seen costs nothing to skip (a deterministic escape with
probability 1), so every estimate is reproducible from the printed statistics.
"""

from __future__ import annotations

import hashlib
import math
import struct
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Sequence

# TODO: optional coding-exclusion flag for estimate/ideal_bits (escape mass
# currently never excludes symbols already ruled out at higher orders).

DEFAULT_MAX_ORDER = 5
DEFAULT_ALPHABET_SIZE = 256

_MAGIC = b"PPMV1"

SYMBOL = "symbol"
ESCAPE = "escape"
DETERMINISTIC_ESCAPE = "deterministic-escape"

Context = tuple[int, ...]


class FrozenModelError(RuntimeError):
    """Raised when a frozen snapshot is asked to mutate."""


def symbol_probability(c: int, total: int) -> Fraction:
    """PPMD probability (2c-1)/(2T) of a symbol seen c times in a context seen T times."""
    if c < 1 or total < c:
        raise ValueError(f"symbol_probability needs 1 <= c <= T, got c={c}, T={total}")
    return Fraction(2 * c - 1, 2 * total)


def escape_probability(t: int, total: int) -> Fraction:
    """PPMD escape probability t/(2T) of a context with t distinct following symbols."""
    if t < 1 or total < t:
        raise ValueError(f"escape_probability needs 1 <= t <= T, got t={t}, T={total}")
    return Fraction(t, 2 * total)


class ContextStats:
    """Counts for one context: c per following symbol, T total, t distinct."""

    __slots__ = ("counts", "total")

    def __init__(self, counts: dict[int, int] | None = None, total: int = 0):
        self.counts: dict[int, int] = {} if counts is None else counts
        self.total = total

    @property
    def distinct(self) -> int:
        return len(self.counts)

    def observe(self, symbol: int) -> None:
        self.counts[symbol] = self.counts.get(symbol, 0) + 1
        self.total += 1

    def copy(self) -> "ContextStats":
        return ContextStats(dict(self.counts), self.total)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ContextStats):
            return NotImplemented
        return self.total == other.total and self.counts == other.counts

    def __repr__(self) -> str:
        return f"ContextStats(counts={self.counts!r}, total={self.total})"


@dataclass(frozen=True)
class TraceStep:
    order: int
    kind: str  # SYMBOL, ESCAPE or DETERMINISTIC_ESCAPE
    probability: Fraction


@dataclass(frozen=True)
class ProbabilityTrace:
    """The escape chain used to code one symbol, ending in exactly one symbol step."""

    steps: tuple[TraceStep, ...]

    @property
    def total_bits(self) -> float:
        bits = 0.0
        for step in self.steps:
            p = step.probability
            if p < 1:
                bits += math.log2(p.denominator) - math.log2(p.numerator)
        return bits


def _walk(
    lookup: Callable[[Context], ContextStats | None],
    history: Sequence[int],
    symbol: int,
    max_order: int,
    alphabet_size: int,
) -> Iterator[tuple[int, str, int, int, ContextStats | None]]:
    """Yield the PPMD escape chain for `symbol` after `history`.

    Events are (order, kind, numerator, denominator, stats). The chain starts
    at order min(max_order, len(history)), drops one order per escape, and
    terminates with a symbol event, at order -1 (uniform 1/|A|) at the latest.
    """
    n = len(history)
    k = max_order if n > max_order else n
    while k >= 0:
        ctx = tuple(history[n - k:n])
        stats = lookup(ctx)
        if stats is None or stats.total == 0:
            yield (k, DETERMINISTIC_ESCAPE, 1, 1, None)
        else:
            c = stats.counts.get(symbol)
            if c is not None:
                yield (k, SYMBOL, 2 * c - 1, 2 * stats.total, stats)
                return
            yield (k, ESCAPE, len(stats.counts), 2 * stats.total, stats)
        k -= 1
    yield (-1, SYMBOL, 1, alphabet_size, None)


class PpmModel:
    """Order-d adaptive context model with PPMD estimation.

    Mutable while training; ``snapshot()`` returns a frozen copy that is safe
    to share between any number of concurrent readers. Per-text adaptive
    scoring goes through ``overlay()`` so snapshots are never touched.
    """

    __slots__ = ("max_order", "alphabet_size", "_table", "_frozen", "_hash")

    def __init__(
        self,
        max_order: int = DEFAULT_MAX_ORDER,
        alphabet_size: int = DEFAULT_ALPHABET_SIZE,
    ):
        if not isinstance(max_order, int) or not 0 <= max_order <= 255:
            raise ValueError(f"max_order must be an integer in 0..255, got {max_order!r}")
        if not isinstance(alphabet_size, int) or alphabet_size < 2:
            raise ValueError(f"alphabet_size must be an integer >= 2, got {alphabet_size!r}")
        self.max_order = max_order
        self.alphabet_size = alphabet_size
        self._table: dict[Context, ContextStats] = {(): ContextStats()}
        self._frozen = False
        self._hash: bytes | None = None

    @property
    def frozen(self) -> bool:
        return self._frozen

    def stats(self, context: Sequence[int]) -> ContextStats | None:
        """Statistics for one context, or None if it has never been seen."""
        return self._table.get(tuple(context))

    def contexts(self) -> Iterator[Context]:
        """All observed contexts, in first-observation order."""
        return iter(self._table)

    def __len__(self) -> int:
        return len(self._table)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PpmModel):
            return NotImplemented
        return (
            self.max_order == other.max_order
            and self.alphabet_size == other.alphabet_size
            and self._table == other._table
        )

    def _check_symbol(self, symbol: int) -> None:
        if not 0 <= symbol < self.alphabet_size:
            raise ValueError(
                f"symbol {symbol!r} outside alphabet of size {self.alphabet_size}"
            )

    def update(self, history: Sequence[int], symbol: int) -> None:
        """Count one observation of `symbol` after `history`.

        Every context order 0..min(max_order, len(history)) gains one count,
        creating context entries as needed.
        """
        if self._frozen:
            raise FrozenModelError("snapshot is immutable; use overlay() for adaptive scoring")
        self._check_symbol(symbol)
        table = self._table
        n = len(history)
        start = n - self.max_order if n > self.max_order else 0
        for j in range(n + 1, start, -1):
            ctx = tuple(history[j - 1:n]) if j <= n else ()
            stats = table.get(ctx)
            if stats is None:
                stats = ContextStats()
                table[ctx] = stats
            stats.observe(symbol)

    def train(self, text: Sequence[int]) -> None:
        """Fold update() over `text` left to right, starting from an empty history.

        Each call is one text: the history never spans calls, so priming on
        several documents is independent of their concatenation order.
        """
        if self._frozen:
            raise FrozenModelError("snapshot is immutable; train a mutable model")
        d = self.max_order
        for i in range(len(text)):
            self.update(text[i - d if i > d else 0:i], text[i])

    def estimate(self, history: Sequence[int], symbol: int) -> ProbabilityTrace:
        """Escape-chain estimate of P(symbol | history); does not mutate the model."""
        self._check_symbol(symbol)
        steps = tuple(
            TraceStep(order, kind, Fraction(num, den))
            for order, kind, num, den, _ in _walk(
                self._table.get, history, symbol, self.max_order, self.alphabet_size
            )
        )
        return ProbabilityTrace(steps)

    def snapshot(self) -> "PpmModel":
        """Frozen deep copy, safe for shared concurrent scoring. Frozen models return themselves."""
        if self._frozen:
            return self
        clone = PpmModel(self.max_order, self.alphabet_size)
        clone._table = {ctx: stats.copy() for ctx, stats in self._table.items()}
        clone._frozen = True
        return clone

    def overlay(self) -> "ModelOverlay":
        """Private copy-on-write adaptive view; reads fall through, writes stay local."""
        return ModelOverlay(self)

    # -- serialization ------------------------------------------------------

    def dumps(self) -> bytes:
        """Versioned binary dump; round-trips bit-exactly through loads()."""
        out = bytearray(_MAGIC)
        out += struct.pack(">BIQ", self.max_order, self.alphabet_size, len(self._table))
        for ctx, stats in self._table.items():
            out += struct.pack(">B", len(ctx))
            for s in ctx:
                out += struct.pack(">I", s)
            out += struct.pack(">I", len(stats.counts))
            for s, c in stats.counts.items():
                out += struct.pack(">IQ", s, c)
        return bytes(out)

    @classmethod
    def loads(cls, data: bytes) -> "PpmModel":
        if data[:5] != _MAGIC:
            raise ValueError("not a PPMV1 model dump")
        try:
            max_order, alphabet_size, n_contexts = struct.unpack_from(">BIQ", data, 5)
            pos = 5 + struct.calcsize(">BIQ")
            model = cls(max_order, alphabet_size)
            table = model._table
            for _ in range(n_contexts):
                (ctx_len,) = struct.unpack_from(">B", data, pos)
                pos += 1
                ctx = struct.unpack_from(f">{ctx_len}I", data, pos) if ctx_len else ()
                pos += 4 * ctx_len
                (n_entries,) = struct.unpack_from(">I", data, pos)
                pos += 4
                counts: dict[int, int] = {}
                total = 0
                for _ in range(n_entries):
                    s, c = struct.unpack_from(">IQ", data, pos)
                    pos += 12
                    counts[s] = c
                    total += c
                table[ctx] = ContextStats(counts, total)
        except struct.error as exc:
            raise ValueError("truncated PPMV1 model dump") from exc
        if pos != len(data):
            raise ValueError("trailing garbage after PPMV1 model dump")
        return model

    def save(self, path) -> None:
        with open(path, "wb") as fh:
            fh.write(self.dumps())

    @classmethod
    def load(cls, path) -> "PpmModel":
        with open(path, "rb") as fh:
            return cls.loads(fh.read())

    def config_hash(self) -> bytes:
        """8-byte digest over the full model state (order, alphabet, statistics)."""
        if self._frozen and self._hash is not None:
            return self._hash
        digest = hashlib.sha256(self.dumps()).digest()[:8]
        if self._frozen:
            self._hash = digest
        return digest


class ModelOverlay:
    """Copy-on-write adaptive layer over a base model; the base is never mutated."""

    __slots__ = ("base", "max_order", "alphabet_size", "_local")

    def __init__(self, base: PpmModel):
        self.base = base
        self.max_order = base.max_order
        self.alphabet_size = base.alphabet_size
        self._local: dict[Context, ContextStats] = {}

    def stats(self, context: Sequence[int]) -> ContextStats | None:
        return self._get(tuple(context))

    def _get(self, ctx: Context) -> ContextStats | None:
        stats = self._local.get(ctx)
        if stats is not None:
            return stats
        return self.base._table.get(ctx)

    def update(self, history: Sequence[int], symbol: int) -> None:
        if not 0 <= symbol < self.alphabet_size:
            raise ValueError(f"symbol {symbol!r} outside alphabet of size {self.alphabet_size}")
        local = self._local
        base_table = self.base._table
        n = len(history)
        start = n - self.max_order if n > self.max_order else 0
        for j in range(n + 1, start, -1):
            ctx = tuple(history[j - 1:n]) if j <= n else ()
            stats = local.get(ctx)
            if stats is None:
                base_stats = base_table.get(ctx)
                stats = base_stats.copy() if base_stats is not None else ContextStats()
                local[ctx] = stats
            stats.observe(symbol)
