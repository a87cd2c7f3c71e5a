"""Sentence-pair distance metrics and the hybrid accept/reject rule.

A pair is scored with two ratios, both folded to be >= 1 and symmetric in the
two sides: the sentence length ratio over character counts, and the code
length ratio over ideal compression code lengths. The hybrid rule accepts a
pair only when neither ratio exceeds its threshold; values exactly equal to a
threshold are not "exceeded" and pass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

from .coder import ideal_bits
from .ppm import PpmModel
from .preprocess import ARABIC_NUMERIC, IDENTITY, prepare

if TYPE_CHECKING:
    from .corpus import SentencePair

SATISFACTORY = "Satisfactory"
UNSATISFACTORY = "Unsatisfactory"

METRIC_SLR = "slr"
METRIC_CR = "cr"
METRIC_BOTH = "both"
METRIC_MODES = (METRIC_SLR, METRIC_CR, METRIC_BOTH)


@dataclass(frozen=True)
class ThresholdConfig:
    """The (SLR, CR) threshold pair driving classification."""

    theta_slr: float = 2.5
    theta_cr: float = 2.25

    def __post_init__(self):
        for name, value in (("theta_slr", self.theta_slr), ("theta_cr", self.theta_cr)):
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be finite and positive, got {value!r}")


class InvalidPairError(ValueError):
    """Pair cannot be scored (an empty side); reported, never silently dropped."""

    def __init__(self, pair_id: str, reason: str):
        super().__init__(f"pair {pair_id!r}: {reason}")
        self.pair_id = pair_id
        self.reason = reason


def cross_entropy(bits: float, length: int) -> float:
    """Average bits per character: code length divided by text length."""
    if length < 1:
        raise ValueError(f"length must be >= 1, got {length}")
    if bits < 0:
        raise ValueError(f"bits must be >= 0, got {bits}")
    return bits / length


def code_ratio(bits_x: float, bits_y: float) -> float:
    """Plain ratio of two code lengths."""
    if bits_x <= 0 or bits_y <= 0:
        raise ValueError(f"code lengths must be positive, got {bits_x}, {bits_y}")
    return bits_x / bits_y


def cr(bits_a: float, bits_e: float) -> float:
    """Code length ratio folded to >= 1: max of the ratio and its reciprocal."""
    if bits_a <= 0 or bits_e <= 0:
        raise ValueError(f"code lengths must be positive, got {bits_a}, {bits_e}")
    return max(bits_a / bits_e, bits_e / bits_a)


def slr(len_a: int, len_e: int) -> float:
    """Sentence length ratio folded to >= 1: max of the ratio and its reciprocal."""
    if len_a < 1 or len_e < 1:
        raise ValueError(f"lengths must be >= 1, got {len_a}, {len_e}")
    return max(len_a / len_e, len_e / len_a)


def verdict(slr_value: float, cr_value: float, thresholds: ThresholdConfig,
            metric_mode: str = METRIC_BOTH) -> str:
    """Apply the threshold rule; strictly greater than a threshold rejects."""
    if metric_mode not in METRIC_MODES:
        raise ValueError(f"unknown metric mode {metric_mode!r}")
    rejected = False
    if metric_mode in (METRIC_SLR, METRIC_BOTH) and slr_value > thresholds.theta_slr:
        rejected = True
    if metric_mode in (METRIC_CR, METRIC_BOTH) and cr_value > thresholds.theta_cr:
        rejected = True
    return UNSATISFACTORY if rejected else SATISFACTORY


@dataclass(frozen=True)
class PairScore:
    """Per-pair lengths, code lengths, bit rates, ratios and verdict."""

    pair_id: str
    len_a: int
    len_e: int
    bits_a: float
    bits_e: float
    h_a: float
    h_e: float
    slr: float
    cr: float
    verdict: str

    TSV_HEADER = "id\tlen_a\tlen_e\tbits_a\tbits_e\tslr\tcr\tverdict"

    def tsv_row(self) -> str:
        return (
            f"{self.pair_id}\t{self.len_a}\t{self.len_e}"
            f"\t{self.bits_a:.4f}\t{self.bits_e:.4f}"
            f"\t{self.slr:.4f}\t{self.cr:.4f}\t{self.verdict}"
        )


def score_pair(
    pair: "SentencePair",
    model_a: PpmModel,
    model_e: PpmModel,
    thresholds: ThresholdConfig | None = None,
    arabic_transform: str = ARABIC_NUMERIC,
) -> PairScore:
    """Score one sentence pair against frozen per-language models.

    The Arabic side goes through the arabic-numeric transform, the English
    side through the identity transform; both are measured with ideal_bits
    over a private adaptive overlay, so shared snapshots are never mutated
    and scoring order cannot matter.
    """
    if thresholds is None:
        thresholds = ThresholdConfig()
    if not pair.text_a:
        raise InvalidPairError(pair.id, "empty arabic side")
    if not pair.text_e:
        raise InvalidPairError(pair.id, "empty english side")
    prep_a = prepare(pair.text_a, arabic_transform)
    prep_e = prepare(pair.text_e, IDENTITY)
    bits_a = ideal_bits(model_a, prep_a.data, adapt=True)
    bits_e = ideal_bits(model_e, prep_e.data, adapt=True)
    slr_value = slr(prep_a.char_length, prep_e.char_length)
    cr_value = cr(bits_a, bits_e)
    return PairScore(
        pair_id=pair.id,
        len_a=prep_a.char_length,
        len_e=prep_e.char_length,
        bits_a=bits_a,
        bits_e=bits_e,
        h_a=cross_entropy(bits_a, prep_a.char_length),
        h_e=cross_entropy(bits_e, prep_e.char_length),
        slr=slr_value,
        cr=cr_value,
        verdict=verdict(slr_value, cr_value, thresholds),
    )
