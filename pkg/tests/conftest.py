"""Shared fixtures and independent reference oracles.

The oracles here deliberately re-implement the operations under test from
first principles (itertools enumeration, direct linear solves, nearest-center
scans) so the library paths are checked against something they do not share
code with.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from precursor.corpus import Corpus, Pos, Post, Token
from precursor.ngrams import Ngram, Occurrence
from precursor.bursts import Burst
from precursor.topics import Topic


# ------------------------------------------------------------ constructors

def tok(lemma: str, pos: str = "NOUN", chunk: int = 0) -> Token:
    return Token(lemma, Pos(pos), chunk)


def post(post_id: str, blog: str, ts: int, body: list[Token] = (),
         title: list[Token] = (), links: set[str] = frozenset()) -> Post:
    return Post(post_id=post_id, blog_id=blog, timestamp=ts,
                title_tokens=tuple(title), body_tokens=tuple(body),
                out_links=frozenset(links))


def corpus_of(posts: list[Post]) -> Corpus:
    ordered = sorted(posts, key=lambda p: (p.timestamp, p.post_id))
    return Corpus(posts=tuple(ordered),
                  blogs=frozenset(p.blog_id for p in ordered),
                  window=(ordered[0].timestamp, ordered[-1].timestamp))


def ngram_of(*lemmas: str) -> Ngram:
    return Ngram(tuple((lemma, Pos.NOUN) for lemma in lemmas))


def burst_of(lemmas: tuple[str, ...], start: int, end: int,
             occurrences: list[tuple[int, str, str]] | None = None) -> Burst:
    if occurrences is None:
        occurrences = [(start, "blog_a", f"p{start}"), (end, "blog_b", f"p{end}")]
    occs = tuple(Occurrence(t, b, p) for t, b, p in occurrences)
    return Burst(ngram=ngram_of(*lemmas), start=start, end=end, occurrences=occs)


def topic_of(topic_id: str, start: int, end: int,
             participations: dict[str, int],
             bursts: tuple[Burst, ...] = ()) -> Topic:
    return Topic(topic_id=topic_id, ngrams=tuple(b.ngram for b in bursts) or
                 (ngram_of("w1", "w2"),), start=start, end=end,
                 bursts=bursts, participations=participations)


# ----------------------------------------------------------------- oracles

def brute_force_likelihood(p: float, a_topics, y_topics, c, variant="verbatim"):
    """Literal sum over explicit subsets of Y built with itertools."""
    total = 0.0
    y = list(y_topics)
    for size in range(len(y) + 1):
        for z in itertools.combinations(y, size):
            z_set = set(z)
            r_set = set(y) - z_set
            term = p ** len(z_set) * (1.0 - p) ** (len(a_topics) - len(z_set))
            for r in r_set:
                term *= c[r]
            if variant == "verbatim":
                for r in a_topics:
                    if r not in r_set:
                        term *= 1.0 - c[r]
            else:
                for r in a_topics:
                    if r not in r_set and r not in z_set:
                        term *= 1.0 - c[r]
            total += term
    return total


def grid_gamma(a_topics, y_topics, c, n_grid: int = 2001, variant="verbatim"):
    """Deterministic gamma by trapezoidal quadrature on a fine p grid."""
    ps = np.linspace(0.0, 1.0, n_grid)
    lam = np.array([brute_force_likelihood(p, a_topics, y_topics, c, variant)
                    for p in ps])
    num = np.trapezoid(lam * ps, ps)
    den = np.trapezoid(lam, ps)
    return num / den


def exhaustive_best_partition(times, alpha: float, beta: float):
    """Max rho over every constraint-satisfying split assignment."""
    from precursor.bursts import burst_ratio, min_inter_interval
    n = len(times)
    best = 0.0
    best_theta = (0,) * (n - 1)
    for bits in itertools.product((0, 1), repeat=n - 1):
        if sum(bits) == 0:
            continue
        rho = burst_ratio(times, list(bits))
        if rho < alpha:
            continue
        if min_inter_interval(times, list(bits)) < beta:
            continue
        if rho > best:
            best = rho
            best_theta = bits
    return best, best_theta


def pagerank_linear(graph, damping: float = 0.85) -> dict[str, float]:
    """PageRank as the direct solution of the stationary linear system."""
    nodes = list(graph.nodes)
    n = len(nodes)
    index = {b: i for i, b in enumerate(nodes)}
    p = np.zeros((n, n))
    out = {b: set() for b in nodes}
    for (src, dst) in graph.weights:
        out[src].add(dst)
    for src, targets in out.items():
        i = index[src]
        if targets:
            for dst in targets:
                p[i, index[dst]] = 1.0 / len(targets)
        else:
            p[i, :] = 1.0 / n
    a = np.eye(n) - damping * p.T
    b = np.full(n, (1.0 - damping) / n)
    rank = np.linalg.solve(a, b)
    return {node: float(rank[index[node]]) for node in nodes}


def wilcoxon_enumeration(x, y) -> float:
    """Exact two-sided p by enumerating every rank assignment (no ties)."""
    pooled = sorted(list(x) + list(y))
    assert len(set(pooled)) == len(pooled), "oracle requires untied data"
    n1, n2 = len(x), len(y)
    rank_of = {v: i + 1 for i, v in enumerate(pooled)}
    u_obs = sum(rank_of[v] for v in x) - n1 * (n1 + 1) / 2.0
    us = []
    for combo in itertools.combinations(range(1, n1 + n2 + 1), n1):
        us.append(sum(combo) - n1 * (n1 + 1) / 2.0)
    us = np.array(us)
    p_le = np.mean(us <= u_obs)
    p_ge = np.mean(us >= u_obs)
    return min(1.0, 2.0 * min(p_le, p_ge))


def hexbin_nearest_center(points, size: float):
    """Assign each point to the nearest hex center by direct scan."""
    centers = {}
    for q in range(-60, 61):
        for r in range(-60, 61):
            x = size * math.sqrt(3.0) * (q + r / 2.0)
            y = size * 1.5 * r
            centers[(q, r)] = (x, y)
    counts = {}
    for (px, py, _metric) in points:
        best = min(centers,
                   key=lambda c: (centers[c][0] - px) ** 2 + (centers[c][1] - py) ** 2)
        counts[best] = counts.get(best, 0) + 1
    return counts
