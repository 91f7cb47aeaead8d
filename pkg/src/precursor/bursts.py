"""Temporal burst detection by greedy burst-ratio maximization.

Occurrence times T of one n-gram are partitioned into bursts by a bit vector
theta of length |T|-1 over the inter-occurrence gaps: theta[i] = 1 means the
i-th occurrence (0-based) ends a burst, so the gap between occurrences i and
i+1 separates two bursts.  The last occurrence always terminates the final
burst and is excluded from the sums.

The burst ratio rho is the mean inter-burst gap divided by the mean
intra-burst gap.  Detection starts from a single all-inclusive burst and
greedily sets one bit per iteration: every candidate split is scored by the
rho of the trial configuration, a trial scores zero when its rho falls below
alpha or its minimum inter-burst gap falls below beta, and the best trial is
accepted only if it strictly improves on the current rho.  The procedure
stops when no candidate qualifies.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import DAY, HOUR, MONTH
from .ngrams import Ngram, Occurrence

DEFAULT_ALPHA = 5.0
DEFAULT_BETA = 5 * DAY


class NoSplit(Exception):
    """Raised when an operation needs at least one burst boundary."""


def _gaps(times) -> np.ndarray:
    t = np.asarray(times, dtype=np.float64)
    if t.ndim != 1 or t.size < 2:
        raise ValueError("need at least two occurrence times")
    g = np.diff(t)
    if np.any(g < 0):
        raise ValueError("occurrence times must be ascending")
    return g


def _theta(theta, n_gaps: int) -> np.ndarray:
    th = np.asarray(theta, dtype=np.int64)
    if th.shape != (n_gaps,):
        raise ValueError(f"theta must have length {n_gaps}")
    return th


def inter_burst_mean(times, theta) -> float:
    """Mean gap between consecutive bursts; 0 when there is a single burst."""
    g = _gaps(times)
    th = _theta(theta, g.size)
    k = int(th.sum())
    if k == 0:
        return 0.0
    return float((g * th).sum() / k)


def intra_burst_mean(times, theta) -> float:
    """Mean gap inside bursts; defined as 0 when no boundary is set."""
    g = _gaps(times)
    th = _theta(theta, g.size)
    if int(th.sum()) == 0:
        return 0.0
    m = int((1 - th).sum())
    if m == 0:
        return 0.0
    return float((g * (1 - th)).sum() / m)


def min_inter_interval(times, theta) -> float:
    """Smallest gap between consecutive bursts."""
    g = _gaps(times)
    th = _theta(theta, g.size)
    if int(th.sum()) == 0:
        raise NoSplit("no burst boundary set")
    return float(g[th == 1].min())


def burst_ratio(times, theta) -> float:
    """rho = inter-burst mean / intra-burst mean, 0 when the latter is 0."""
    intra = intra_burst_mean(times, theta)
    if intra <= 0.0:
        return 0.0
    return inter_burst_mean(times, theta) / intra


def detect_bursts(times, alpha: float = DEFAULT_ALPHA,
                  beta: float = DEFAULT_BETA) -> np.ndarray:
    """Greedy partition of occurrence times into bursts.

    Returns the theta bit vector (length ``len(times) - 1``).  The all-zero
    vector (one single burst) is returned when no admissible split exists.
    """
    if alpha <= 0 or beta <= 0:
        raise ValueError("alpha and beta must be positive")
    g = _gaps(times)
    n_gaps = g.size
    theta = np.zeros(n_gaps, dtype=np.int64)
    total = g.sum()

    while True:
        k = int(theta.sum())
        s_in = float((g * theta).sum())
        open_gaps = n_gaps - k
        cur_intra = (total - s_in) / open_gaps if k > 0 and open_gaps > 0 else 0.0
        cur_rho = (s_in / k) / cur_intra if k > 0 and cur_intra > 0 else 0.0
        cur_min = g[theta == 1].min() if k > 0 else np.inf

        # score every currently-unset position in one vectorized sweep
        v_inter = (s_in + g) / (k + 1)
        rem = open_gaps - 1
        if rem > 0:
            v_intra = (total - s_in - g) / rem
        else:
            v_intra = np.zeros_like(g)
        with np.errstate(divide="ignore", invalid="ignore"):
            rho = np.where(v_intra > 0, v_inter / v_intra, 0.0)
        m_int = np.minimum(cur_min, g)
        score = np.where((rho < alpha) | (m_int < beta), 0.0, rho)
        score[theta == 1] = -np.inf

        best = int(np.argmax(score))
        if score[best] > 0.0 and score[best] > cur_rho:
            theta[best] = 1
        else:
            return theta


@dataclass(frozen=True)
class Burst:
    ngram: Ngram
    start: int
    end: int
    occurrences: tuple[Occurrence, ...]

    @property
    def duration(self) -> int:
        return self.end - self.start

    @property
    def blogs(self) -> frozenset[str]:
        return frozenset(o.blog_id for o in self.occurrences)


def segment_bursts(ngram: Ngram, occurrences: list[Occurrence],
                   theta: np.ndarray) -> list[Burst]:
    """Cut an occurrence list into Burst objects along theta boundaries."""
    bursts = []
    start = 0
    boundaries = [i for i, bit in enumerate(theta) if bit] + [len(occurrences) - 1]
    for boundary in boundaries:
        segment = tuple(occurrences[start:boundary + 1])
        bursts.append(Burst(ngram=ngram, start=segment[0].timestamp,
                            end=segment[-1].timestamp, occurrences=segment))
        start = boundary + 1
    return bursts


@dataclass
class FilterConfig:
    min_blogs: int = 4
    min_mean_gap: float = HOUR
    max_mean_gap: float = DAY
    min_duration: float = 3 * DAY
    max_total_duration: float = MONTH


def burst_passes(burst: Burst, config: FilterConfig) -> bool:
    """Per-burst predicates (the total-duration cap is applied per n-gram)."""
    if len(burst.blogs) < config.min_blogs:
        return False
    if burst.duration < config.min_duration:
        return False
    times = [o.timestamp for o in burst.occurrences]
    if len(times) < 2:
        return False
    mean_gap = (times[-1] - times[0]) / (len(times) - 1)
    return config.min_mean_gap <= mean_gap <= config.max_mean_gap


def filter_bursts(bursts_by_ngram: dict[Ngram, list[Burst]],
                  config: FilterConfig | None = None) -> list[Burst]:
    """Apply the burst acceptance criteria.

    A burst is kept iff it has enough participating blogs, its mean
    inter-post gap lies in [min_mean_gap, max_mean_gap], it lasts at least
    min_duration, and the summed duration of *all* the n-gram's detected
    bursts stays within max_total_duration; when that cap fails every burst
    of the n-gram is discarded.
    """
    config = config or FilterConfig()
    kept: list[Burst] = []
    for ngram in sorted(bursts_by_ngram, key=lambda n: n.lemmas):
        bursts = bursts_by_ngram[ngram]
        total = sum(b.duration for b in bursts)
        if total > config.max_total_duration:
            continue
        kept.extend(b for b in sorted(bursts, key=lambda b: b.start)
                    if burst_passes(b, config))
    return kept


def detect_all(index: dict[Ngram, list[Occurrence]],
               alpha: float = DEFAULT_ALPHA,
               beta: float = DEFAULT_BETA) -> dict[Ngram, list[Burst]]:
    """Run detection over a whole occurrence index."""
    out: dict[Ngram, list[Burst]] = {}
    for ngram, occs in index.items():
        theta = detect_bursts([o.timestamp for o in occs], alpha, beta)
        out[ngram] = segment_bursts(ngram, occs, theta)
    return out
