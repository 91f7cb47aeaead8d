"""Merging redundant n-gram bursts into topics.

A burst defined by a long n-gram is generalized by a burst whose n-gram is a
contiguous subsequence of it and whose time interval contains its interval.
Bursts are traversed in descending order of n-gram length; each burst that
finds generalizations ahead of it is discarded as a standalone candidate and
its generalizations are gathered into a topic.  When the found
generalizations already belong to different topics those topics are merged.

A topic is the tuple (n-gram set, start, end) plus bookkeeping: the member
bursts and, per participating blog, its earliest occurrence time.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .bursts import Burst
from .ngrams import Ngram

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Topic:
    topic_id: str
    ngrams: tuple[Ngram, ...]
    start: int
    end: int
    bursts: tuple[Burst, ...]
    participations: dict[str, int]

    @property
    def blogs(self) -> frozenset[str]:
        return frozenset(self.participations)


def _is_contiguous_subsequence(needle: tuple[str, ...],
                               haystack: tuple[str, ...]) -> bool:
    if len(needle) > len(haystack):
        return False
    return any(haystack[i:i + len(needle)] == needle
               for i in range(len(haystack) - len(needle) + 1))


def is_generalization(ga: Burst, gb: Burst) -> bool:
    """True iff gb generalizes ga: subsequence words, containing interval."""
    if not _is_contiguous_subsequence(gb.ngram.lemmas, ga.ngram.lemmas):
        return False
    return gb.start <= ga.start and gb.end >= ga.end


def _participations(bursts: list[Burst]) -> dict[str, int]:
    first: dict[str, int] = {}
    for burst in bursts:
        for occ in burst.occurrences:
            prev = first.get(occ.blog_id)
            if prev is None or occ.timestamp < prev:
                first[occ.blog_id] = occ.timestamp
    return first


def merge_bursts(bursts: list[Burst], keep_singletons: bool = False) -> list[Topic]:
    """Collapse filtered bursts into topics.

    Bursts that are never generalized and never generalize anything become
    singleton topics only when keep_singletons is set; by default they are
    dropped, treating topics strictly as merge products.
    """
    order = sorted(range(len(bursts)),
                   key=lambda i: (-len(bursts[i].ngram),
                                  bursts[i].ngram.lemmas, bursts[i].start))
    topic_of: dict[int, int] = {}
    members: dict[int, list[int]] = {}
    discarded: set[int] = set()
    next_tid = 0

    for pos, i in enumerate(order):
        found = [j for j in order[pos + 1:] if is_generalization(bursts[i], bursts[j])]
        if not found:
            continue
        discarded.add(i)
        existing = sorted({topic_of[j] for j in found if j in topic_of})
        if existing:
            target = existing[0]
            for other in existing[1:]:
                # two generalizations in different topics: merge the topics
                logger.debug("merging conflicting topics %d and %d", target, other)
                for k in members.pop(other):
                    topic_of[k] = target
                    members[target].append(k)
        else:
            target = next_tid
            next_tid += 1
            members[target] = []
        for j in found:
            if topic_of.get(j) != target:
                topic_of[j] = target
                members[target].append(j)

    groups = [sorted(set(idxs)) for idxs in members.values() if idxs]
    if keep_singletons:
        for i in range(len(bursts)):
            if i not in topic_of and i not in discarded:
                groups.append([i])

    topics = []
    for idxs in groups:
        burst_list = sorted((bursts[i] for i in idxs),
                            key=lambda b: (b.start, b.end, b.ngram.lemmas))
        seen: set[tuple[str, ...]] = set()
        ngrams = []
        for b in burst_list:
            if b.ngram.lemmas not in seen:
                seen.add(b.ngram.lemmas)
                ngrams.append(b.ngram)
        topics.append((min(b.start for b in burst_list),
                       max(b.end for b in burst_list),
                       tuple(ngrams), tuple(burst_list)))

    topics.sort(key=lambda t: (t[0], t[1], t[2][0].lemmas))
    out = []
    for seq, (start, end, ngrams, burst_list) in enumerate(topics, start=1):
        out.append(Topic(topic_id=f"T{seq:04d}", ngrams=ngrams, start=start,
                         end=end, bursts=burst_list,
                         participations=_participations(list(burst_list))))
    return out
