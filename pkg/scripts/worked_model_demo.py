#!/usr/bin/env python3
"""Print the adaptive model's context statistics for the 15-symbol worked example.

Trains an order-3 character model on the reconstructed reference string and
prints every context block (orders 3..0) with PPMD probability estimates, then
round-trips the string through the range coder as a sanity check.

Run: python scripts/worked_model_demo.py
"""

from fractions import Fraction

from bitextverify.coder import decode, encode, ideal_bits
from bitextverify.ppm import PpmModel, escape_probability, symbol_probability

SEEN, BA, YA, LAM, ALEF = "س", "ب", "ي", "ل", "ا"
TRAINING_STRING = SEEN + BA + YA + LAM + LAM + LAM + SEEN + LAM + SEEN + LAM + SEEN + BA + YA + LAM + ALEF


def main() -> None:
    mapping = {ch: i for i, ch in enumerate(sorted(set(TRAINING_STRING)))}
    reverse = {i: ch for ch, i in mapping.items()}
    symbols = [mapping[ch] for ch in TRAINING_STRING]

    model = PpmModel(max_order=3, alphabet_size=len(mapping))
    model.train(symbols)

    print(f"training string ({len(TRAINING_STRING)} symbols): {TRAINING_STRING}")
    for order in (3, 2, 1, 0):
        print(f"\n=== order {order} ===")
        for ctx in model.contexts():
            if len(ctx) != order:
                continue
            stats = model.stats(ctx)
            shown = "".join(reverse[s] for s in ctx) or "(empty)"
            print(f"  context {shown!r}  T={stats.total}")
            for sym, count in stats.counts.items():
                p = symbol_probability(count, stats.total)
                print(f"    -> {reverse[sym]}   c={count}  p={p}")
            print(f"    -> escape  t={stats.distinct}  p={escape_probability(stats.distinct, stats.total)}")
    print(f"\norder -1: every symbol gets 1/{model.alphabet_size}", Fraction(1, model.alphabet_size))

    snapshot = model.snapshot()
    blob = encode(snapshot, symbols)
    assert decode(snapshot, blob) == bytes(symbols)
    bits = ideal_bits(snapshot, symbols)
    print(f"\nself-coding check: ideal {bits:.3f} bits, payload {blob.payload_bits} bits, lossless: yes")


if __name__ == "__main__":
    main()
