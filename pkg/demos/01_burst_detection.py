"""Burst detection on a hand-made occurrence timeline.

Walks through the burst-ratio machinery on a small example: the inter- and
intra-burst means, the ratio rho, and how the greedy detector splits a
timeline only when the split clears both the ratio threshold alpha and the
minimum-gap threshold beta.
"""

import numpy as np

from precursor.bursts import (burst_ratio, detect_bursts, inter_burst_mean,
                              intra_burst_mean, segment_bursts)
from precursor.corpus import DAY
from precursor.ngrams import Occurrence, Ngram
from precursor.corpus import Pos

# An n-gram mentioned on days 0-2, then again on days 10-12: two obvious
# bursts separated by an 8-day silence.
days = [0, 1, 2, 10, 11, 12]
times = [d * DAY for d in days]

print("occurrence days:", days)

# Score the partition that ends a burst after day 2 (theta bit 2 set).
theta = [0, 0, 1, 0, 0]
print("\nfor theta =", theta)
print("  mean inter-burst gap: %.1f days" % (inter_burst_mean(times, theta) / DAY))
print("  mean intra-burst gap: %.1f days" % (intra_burst_mean(times, theta) / DAY))
print("  burst ratio rho     : %.1f" % burst_ratio(times, theta))

# The greedy detector finds that split on its own.
found = detect_bursts(times, alpha=5.0, beta=5 * DAY)
print("\ngreedy theta:", found.tolist())

ngram = Ngram((("grand", Pos.ADJ), ("débat", Pos.NOUN)))
occurrences = [Occurrence(t, f"blog_{i % 3}", f"p{i}")
               for i, t in enumerate(times)]
for burst in segment_bursts(ngram, occurrences, found):
    print("  burst day %.0f .. day %.0f with %d occurrences"
          % (burst.start / DAY, burst.end / DAY, len(burst.occurrences)))

# A dense week never splits: every candidate gap is far below beta.
dense = [d * DAY for d in range(7)]
print("\ndense week theta:", detect_bursts(dense).tolist(), "(one burst)")

# Raising beta suppresses the split of the first timeline too.
strict = detect_bursts(times, alpha=5.0, beta=10 * DAY)
print("beta = 10 days theta:", strict.tolist(), "(8-day gap no longer enough)")
