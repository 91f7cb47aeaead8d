"""Dyadic precursor scores and per-blog global precursor/laggard scores.

For an ordered blog pair (b, b2), A is the set of topics where both
participate and Y the subset where b's first participation strictly precedes
b2's.  Each topic r carries a chance probability C_r derived from relative
posting volumes during the topic interval.  The likelihood that the
precedence-relationship strength equals p sums, over every disjoint split of
Y into Z (explained by the relationship) and R (explained by chance),

    p^|Z| * (1-p)^(|A|-|Z|) * prod_{r in R} C_r * prod_{r in A\\R} (1-C_r)

which is implemented literally ("verbatim" variant).  The alternate
"partitioned" variant restricts the (1-C_r) product to A\\Y so that the
per-topic factors partition A; it exists for sensitivity analysis only.

The dyadic score gamma is the likelihood-weighted mean of p over [0, 1],
estimated by Monte Carlo integration with a shared uniform sample for
numerator and denominator.  When |Y| exceeds the exact limit the likelihood
itself is estimated from uniformly sampled splits.  The adjusted score omega
multiplies gamma by the co-participation probability Pr(H); per-blog P and L
are means of outgoing and incoming omega over all eligible dyads.
"""

from __future__ import annotations

import hashlib
import warnings
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .corpus import Corpus, post_count
from .topics import Topic

EXACT_LIMIT = 15
MC_SAMPLES = 10_000
SUBSET_SAMPLES = 50_000
MIN_POSTS = 7

VARIANTS = ("verbatim", "partitioned")


class TooLargeForExact(Exception):
    """Exact likelihood enumeration refused; use the sampled estimator."""


class DegenerateLikelihood(RuntimeWarning):
    """The likelihood vanished at every Monte Carlo sample."""


@dataclass(frozen=True)
class DyadContext:
    """Topic evidence for the ordered pair (b, b2)."""

    b: str
    b2: str
    a_topics: tuple[str, ...]
    y_topics: tuple[str, ...]
    c: Mapping[str, float]

    def __post_init__(self):
        a = set(self.a_topics)
        if not set(self.y_topics) <= a:
            raise ValueError("Y must be a subset of A")
        missing = a - set(self.c)
        if missing:
            raise ValueError(f"chance probabilities missing for {sorted(missing)}")


@dataclass(frozen=True)
class DyadScore:
    b: str
    b2: str
    a_size: int
    y_size: int
    gamma: float
    pr_h: float
    omega: float
    method: str  # EXACT or SAMPLED


@dataclass
class ScoringConfig:
    mc_samples: int = MC_SAMPLES
    subset_samples: int = SUBSET_SAMPLES
    seed: int = 0
    min_posts: int = MIN_POSTS
    exact_limit: int = EXACT_LIMIT
    variant: str = "verbatim"


def chance_prob(corpus: Corpus, b: str, b2: str, topic: Topic) -> float:
    """Probability that b precedes b2 on this topic purely by posting volume."""
    np_b = post_count(corpus, b, topic.start, topic.end)
    np_b2 = post_count(corpus, b2, topic.start, topic.end)
    if np_b == 0 and np_b2 == 0:
        return 0.5
    return np_b / (np_b + np_b2)


def _split_term(p: float, ctx: DyadContext, z_mask: int, variant: str) -> float:
    """Likelihood contribution of one split of Y (z_mask selects Z)."""
    y = ctx.y_topics
    n_z = bin(z_mask).count("1")
    term = p ** n_z * (1.0 - p) ** (len(ctx.a_topics) - n_z)
    r_topics = {y[i] for i in range(len(y)) if not (z_mask >> i) & 1}
    z_topics = {y[i] for i in range(len(y)) if (z_mask >> i) & 1}
    for r in ctx.a_topics:
        if r in r_topics:
            term *= ctx.c[r]
        elif variant == "verbatim":
            term *= 1.0 - ctx.c[r]
        elif r not in z_topics:  # partitioned: only A\Y gets the complement
            term *= 1.0 - ctx.c[r]
    return term


def _exact_sum(p: float, ctx: DyadContext, variant: str) -> float:
    return sum(_split_term(p, ctx, mask, variant)
               for mask in range(1 << len(ctx.y_topics)))


def likelihood(p: float, ctx: DyadContext, exact_limit: int = EXACT_LIMIT,
               variant: str = "verbatim") -> float:
    """Exact likelihood of gamma = p by full enumeration of splits of Y."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    if len(ctx.y_topics) > exact_limit:
        raise TooLargeForExact(
            f"|Y| = {len(ctx.y_topics)} exceeds exact limit {exact_limit}")
    return _exact_sum(p, ctx, variant)


def likelihood_sampled(p: float, ctx: DyadContext, n_subsets: int, seed: int,
                       exhaustive: bool = False,
                       variant: str = "verbatim") -> float:
    """Sampled likelihood: mean split term over uniform splits, times 2^|Y|.

    With exhaustive=True every split is enumerated instead, which reproduces
    the exact likelihood regardless of |Y| (the slow path used to validate
    the estimator at the feasibility boundary).
    """
    if exhaustive:
        return _exact_sum(p, ctx, variant)
    rng = np.random.default_rng(seed)
    z_fac, r_fac, base = _variant_factors(ctx, variant)
    n_y = len(ctx.y_topics)
    bits = rng.random((n_subsets, n_y)) < 0.5
    terms = np.where(bits, p * z_fac, (1.0 - p) * r_fac).prod(axis=1)
    scale = base * (1.0 - p) ** (len(ctx.a_topics) - n_y)
    return float(terms.mean() * 2.0 ** n_y * scale)


def _variant_factors(ctx: DyadContext, variant: str):
    """Per-Y-element split factors and the common factor over A\\Y.

    Both variants factor as base * prod over Y of (z_fac*p | r_fac*(1-p)),
    with base collecting the A\\Y products excluding the (1-p) powers.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown likelihood variant {variant!r}")
    c_y = np.array([ctx.c[r] for r in ctx.y_topics], dtype=np.float64)
    if variant == "verbatim":
        z_fac = 1.0 - c_y
    else:
        z_fac = np.ones_like(c_y)
    r_fac = c_y
    base = 1.0
    in_y = set(ctx.y_topics)
    for r in ctx.a_topics:
        if r not in in_y:
            base *= 1.0 - ctx.c[r]
    return z_fac, r_fac, base


def _poly_exact(ctx: DyadContext, variant: str) -> np.ndarray:
    """coeffs[k] = sum over splits with |Z| = k of the p-independent factors."""
    z_fac, r_fac, base = _variant_factors(ctx, variant)
    coeffs = np.array([1.0])
    for z, r in zip(z_fac, r_fac):
        nxt = np.zeros(coeffs.size + 1)
        nxt[:-1] += coeffs * r
        nxt[1:] += coeffs * z
        coeffs = nxt
    return coeffs * base


def _poly_sampled(ctx: DyadContext, n_subsets: int, rng: np.random.Generator,
                  variant: str) -> np.ndarray:
    """Monte Carlo estimate of the split coefficients from uniform splits."""
    z_fac, r_fac, base = _variant_factors(ctx, variant)
    n_y = len(ctx.y_topics)
    bits = rng.random((n_subsets, n_y)) < 0.5
    prods = np.where(bits, z_fac, r_fac).prod(axis=1)
    sizes = bits.sum(axis=1)
    coeffs = np.bincount(sizes, weights=prods, minlength=n_y + 1)
    return coeffs * (2.0 ** n_y / n_subsets) * base


def gamma(ctx: DyadContext, mc_samples: int = MC_SAMPLES, seed: int = 0, *,
          exact_limit: int = EXACT_LIMIT, subset_samples: int = SUBSET_SAMPLES,
          variant: str = "verbatim") -> float:
    """Monte Carlo posterior mean of the precedence strength p.

    Shared uniform samples p_k feed both the numerator and the denominator
    of the normalized mean.  The subset sample (when |Y| exceeds the exact
    limit) is drawn before the p sample from the same generator, so a single
    integer seed fixes the whole estimate.
    """
    if mc_samples < 1:
        raise ValueError("mc_samples must be >= 1")
    rng = np.random.default_rng(seed)
    n_y = len(ctx.y_topics)
    n_a = len(ctx.a_topics)
    if n_y > exact_limit:
        coeffs = _poly_sampled(ctx, subset_samples, rng, variant)
    else:
        coeffs = _poly_exact(ctx, variant)
    peak = coeffs.max()
    if peak > 0:
        coeffs = coeffs / peak  # gamma is scale-free in the likelihood
    p = rng.random(mc_samples)
    ks = np.arange(n_y + 1)
    lam = (p[:, None] ** ks * (1.0 - p)[:, None] ** (n_a - ks)) @ coeffs
    den = lam.sum()
    if den <= 0.0:
        warnings.warn("likelihood vanished at every sample; returning 0.5",
                      DegenerateLikelihood)
        return 0.5
    return float((lam * p).sum() / den)


def pr_h(corpus: Corpus, topics: Sequence[Topic], b: str, b2: str) -> float:
    """Fraction of b2's posts that participate in topics shared with b.

    A post participates in a topic when it appears as an occurrence in one
    of the topic's member bursts.
    """
    total = len(corpus.posts_by_blog(b2))
    if total == 0:
        return 0.0
    participating: set[str] = set()
    for topic in topics:
        if b in topic.participations and b2 in topic.participations:
            for burst in topic.bursts:
                participating.update(o.post_id for o in burst.occurrences
                                     if o.blog_id == b2)
    return len(participating) / total


def omega(gamma_value: float, pr_h_value: float) -> float:
    """Adjusted dyadic precursor score: gamma * Pr(H)."""
    return gamma_value * pr_h_value


def dyad_seed(seed: int, b: str, b2: str) -> int:
    """Stable per-dyad sub-seed so parallel scheduling cannot reorder draws."""
    digest = hashlib.sha256(f"{seed}|{b}|{b2}".encode("utf-8")).digest()
    return int.from_bytes(digest[:16], "big")


def eligible_blogs(corpus: Corpus, min_posts: int = MIN_POSTS) -> list[str]:
    """Blogs with at least min_posts posts in the observation window."""
    return sorted(b for b in corpus.blogs
                  if len(corpus.posts_by_blog(b)) >= min_posts)


def build_dyad_context(corpus: Corpus, topics: Sequence[Topic],
                       b: str, b2: str) -> DyadContext:
    a_topics = []
    y_topics = []
    c = {}
    for topic in topics:
        first_b = topic.participations.get(b)
        first_b2 = topic.participations.get(b2)
        if first_b is None or first_b2 is None:
            continue
        a_topics.append(topic.topic_id)
        if first_b < first_b2:  # strict precedence; ties carry no direction
            y_topics.append(topic.topic_id)
        c[topic.topic_id] = chance_prob(corpus, b, b2, topic)
    return DyadContext(b=b, b2=b2, a_topics=tuple(a_topics),
                       y_topics=tuple(y_topics), c=c)


def score_dyad(corpus: Corpus, topics: Sequence[Topic], b: str, b2: str,
               config: ScoringConfig) -> DyadScore:
    ctx = build_dyad_context(corpus, topics, b, b2)
    g = gamma(ctx, config.mc_samples, dyad_seed(config.seed, b, b2),
              exact_limit=config.exact_limit,
              subset_samples=config.subset_samples, variant=config.variant)
    h = pr_h(corpus, topics, b, b2)
    method = "SAMPLED" if len(ctx.y_topics) > config.exact_limit else "EXACT"
    return DyadScore(b=b, b2=b2, a_size=len(ctx.a_topics),
                     y_size=len(ctx.y_topics), gamma=g, pr_h=h,
                     omega=omega(g, h), method=method)


def score_pairs(corpus: Corpus, topics: Sequence[Topic],
                pairs: Iterable[tuple[str, str]],
                config: ScoringConfig) -> list[DyadScore]:
    return [score_dyad(corpus, topics, b, b2, config) for b, b2 in pairs]


def all_ordered_pairs(blogs: Sequence[str]) -> list[tuple[str, str]]:
    return [(b, b2) for b in blogs for b2 in blogs if b != b2]


def score_all_dyads(corpus: Corpus, topics: Sequence[Topic],
                    config: ScoringConfig | None = None) -> list[DyadScore]:
    """Score every ordered pair of eligible blogs, in (b, b2) order."""
    config = config or ScoringConfig()
    blogs = eligible_blogs(corpus, config.min_posts)
    return score_pairs(corpus, topics, all_ordered_pairs(blogs), config)


def global_scores(dyad_scores: Sequence[DyadScore],
                  blogs: Sequence[str]) -> dict[str, tuple[float, float]]:
    """Per-blog precursor P (mean outgoing omega) and laggard L (incoming)."""
    n = len(blogs)
    out: dict[str, float] = {b: 0.0 for b in blogs}
    inc: dict[str, float] = {b: 0.0 for b in blogs}
    for score in dyad_scores:
        if score.b in out and score.b2 in inc:
            out[score.b] += score.omega
            inc[score.b2] += score.omega
    if n < 2:
        return {b: (0.0, 0.0) for b in blogs}
    return {b: (out[b] / (n - 1), inc[b] / (n - 1)) for b in blogs}
