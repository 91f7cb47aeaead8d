"""Synthetic corpora with planted ground truth.

Each planted topic schedules posts for a pair of n-grams: the general
planted n-gram g spans the whole topic interval, and an extended n-gram
(one extra lemma in front of g) occupies a strictly interior sub-interval.
Both bursts satisfy the burst filters by construction, and the extended
burst is generalized by g's burst, so the merge stage is guaranteed to
produce a topic carrying g over the planted interval.

When a topic has a leader, the leader posts g exactly once at the interval
start and every follower's first post comes at least the configured lead
time later.  Leaderless topics order participant entry by posting-rate
weighted sampling, so the probability that one blog enters before another
matches their relative posting volumes ("precedence by chance").

Noise posts arrive per blog as exponential inter-arrival processes over a
disjoint vocabulary and never form topics at desk scale.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .corpus import DAY, HOUR

MIN_PARTICIPANTS = 4


class InfeasibleSpec(Exception):
    """The planted schedule cannot satisfy the burst filters."""


@dataclass(frozen=True)
class PlantedTopic:
    words: tuple[str, ...]
    start_day: float
    duration_days: float
    participants: tuple[str, ...]
    leader: str | None = None
    lead_hours: float = 12.0


@dataclass
class SynthSpec:
    n_blogs: int
    window_days: float
    base_rate: float  # posts per blog per day
    topics: list[PlantedTopic] = field(default_factory=list)
    rate_multipliers: dict[str, float] = field(default_factory=dict)
    noise_vocab: int = 400
    link_prob: float = 0.3
    rate_ramp: float = 0.0  # fractional rate increase across the window
    seed: int = 0


@dataclass
class GroundTruth:
    topics: list[dict]
    pairs: list[tuple[str, str]]

    def to_json(self) -> dict:
        return {"topics": self.topics,
                "pairs": [list(p) for p in self.pairs]}


def blog_ids(n: int) -> list[str]:
    return [f"blog_{i:03d}" for i in range(n)]


def _rate_of(spec: SynthSpec, blog: str) -> float:
    return spec.base_rate * spec.rate_multipliers.get(blog, 1.0)


def _validate_topic(spec: SynthSpec, topic: PlantedTopic) -> None:
    if len(topic.words) < 2:
        raise InfeasibleSpec(f"planted n-gram needs >= 2 words: {topic.words}")
    if len(set(topic.participants)) < MIN_PARTICIPANTS:
        raise InfeasibleSpec(
            f"topic needs >= {MIN_PARTICIPANTS} participants, "
            f"got {len(set(topic.participants))}")
    followers = [b for b in topic.participants if b != topic.leader]
    if topic.leader is not None and len(followers) < MIN_PARTICIPANTS:
        raise InfeasibleSpec(
            "a led topic needs >= 4 followers to sustain the interior burst")
    duration = topic.duration_days * DAY
    lead = topic.lead_hours * HOUR if topic.leader else 0.0
    if lead >= duration:
        raise InfeasibleSpec("lead time must be shorter than the topic")
    inner_span = duration - (lead + 6 * HOUR) - 12 * HOUR
    if inner_span < 3 * DAY + 12 * HOUR:
        raise InfeasibleSpec(
            f"duration {topic.duration_days}d leaves no room for a 3-day "
            "interior burst")
    if duration > 30 * DAY:
        raise InfeasibleSpec("a topic longer than 30 days fails the total-"
                             "duration filter")
    if topic.start_day < 0 or topic.start_day + topic.duration_days > spec.window_days:
        raise InfeasibleSpec("topic interval outside the observation window")


def _entry_order(participants: tuple[str, ...], rates: list[float],
                 rng: np.random.Generator) -> list[str]:
    """Rate-weighted sampling without replacement (Plackett-Luce order)."""
    remaining = list(participants)
    weights = list(rates)
    order = []
    while remaining:
        w = np.array(weights) / sum(weights)
        idx = int(rng.choice(len(remaining), p=w))
        order.append(remaining.pop(idx))
        weights.pop(idx)
    return order


def _topic_schedule(spec: SynthSpec, topic: PlantedTopic,
                    rng: np.random.Generator) -> list[tuple[int, str, bool]]:
    """(timestamp, blog, extended?) slots for one planted topic.

    Blogs alternate (round-robin) so the distinct-consecutive-blog collapse
    retains every slot; the first and last slots sit exactly on the interval
    bounds, and slots inside the interior zone carry the extended n-gram.
    """
    start = int(round(topic.start_day * DAY))
    end = start + int(round(topic.duration_days * DAY))
    lead = int(round(topic.lead_hours * HOUR)) if topic.leader else 0
    inner_lo = start + lead + 6 * HOUR
    inner_hi = end - 12 * HOUR

    if topic.leader is not None:
        first = topic.leader
        rotation = [b for b in topic.participants if b != topic.leader]
        rng.shuffle(rotation)
    else:
        rates = [_rate_of(spec, b) for b in topic.participants]
        order = _entry_order(topic.participants, rates, rng)
        first, rotation = order[0], order[1:] + [order[0]]

    slots: list[tuple[int, str]] = [(start, first)]
    t = start + lead + int(rng.integers(HOUR, 2 * HOUR)) if lead else start
    if not lead:
        t = start + int(rng.integers(2 * HOUR, 5 * HOUR))
    i = 0
    while t < end - 2 * HOUR:
        slots.append((t, rotation[i % len(rotation)]))
        i += 1
        t += int(rng.integers(3 * HOUR, 7 * HOUR))
    last_blog = rotation[i % len(rotation)]
    if last_blog == slots[-1][1]:
        last_blog = rotation[(i + 1) % len(rotation)]
    slots.append((end, last_blog))
    return [(ts, blog, inner_lo <= ts <= inner_hi) for ts, blog in slots]


def _check_planted_burst(times: list[int], blogs: list[str],
                         label: str) -> None:
    """Re-check the filter predicates on a planted schedule before emitting."""
    distinct = len(set(blogs))
    if distinct < MIN_PARTICIPANTS:
        raise InfeasibleSpec(f"{label}: only {distinct} blogs in schedule")
    duration = times[-1] - times[0]
    if duration < 3 * DAY:
        raise InfeasibleSpec(f"{label}: duration {duration / DAY:.2f}d < 3d")
    if duration > 30 * DAY:
        raise InfeasibleSpec(f"{label}: duration exceeds one month")
    mean_gap = duration / (len(times) - 1)
    if not HOUR <= mean_gap <= DAY:
        raise InfeasibleSpec(f"{label}: mean gap {mean_gap / HOUR:.2f}h outside "
                             "[1h, 1d]")
    for a, b in zip(blogs, blogs[1:]):
        if a == b:
            raise InfeasibleSpec(f"{label}: same blog twice in a row")


def _noise_times(rate: float, window: float, ramp: float,
                 rng: np.random.Generator) -> list[int]:
    """Exponential arrivals; with ramp > 0, thinning against the peak rate."""
    peak = rate * (1.0 + max(ramp, 0.0))
    times = []
    t = float(rng.exponential(DAY / peak))
    while t < window:
        accept = True
        if ramp > 0:
            current = rate * (1.0 + ramp * t / window)
            accept = rng.random() < current / peak
        if accept:
            times.append(int(t))
        t += float(rng.exponential(DAY / peak))
    return times


def _noise_tokens(vocab: list[str], rng: np.random.Generator) -> list[dict]:
    tokens = []
    pos_choices = ["NOUN", "VERB", "ADJ", "NUM", "OTHER"]
    pos_weights = [0.55, 0.2, 0.15, 0.03, 0.07]
    for chunk in range(2):
        n = int(rng.integers(3, 6))
        lemmas = rng.choice(len(vocab), size=min(n, len(vocab)), replace=False)
        for li in lemmas:
            pos = pos_choices[int(rng.choice(5, p=pos_weights))]
            tokens.append({"l": vocab[int(li)], "p": pos, "c": chunk})
    return tokens


def generate(spec: SynthSpec) -> tuple[list[dict], GroundTruth]:
    """Build corpus records plus the planted ground truth.

    Deterministic for a given spec (including the seed).  Raises
    InfeasibleSpec when a planted topic cannot satisfy the burst filters.
    """
    if spec.base_rate <= 0:
        raise InfeasibleSpec("base posting rate must be positive")
    for mult in spec.rate_multipliers.values():
        if mult <= 0:
            raise InfeasibleSpec("rate multipliers must be positive")
    blogs = blog_ids(spec.n_blogs)
    known = set(blogs)
    for topic in spec.topics:
        unknown = set(topic.participants) - known
        if unknown:
            raise InfeasibleSpec(f"unknown participants {sorted(unknown)}")
        _validate_topic(spec, topic)

    rng_topics = np.random.default_rng([spec.seed, 1])
    rng_noise = np.random.default_rng([spec.seed, 2])
    rng_links = np.random.default_rng([spec.seed, 3])

    records: list[dict] = []
    truth_topics: list[dict] = []
    pairs: list[tuple[str, str]] = []

    for t_idx, topic in enumerate(spec.topics):
        slots = _topic_schedule(spec, topic, rng_topics)
        times = [s[0] for s in slots]
        slot_blogs = [s[1] for s in slots]
        _check_planted_burst(times, slot_blogs, f"topic {t_idx} ({' '.join(topic.words)})")
        inner = [(ts, blog) for ts, blog, ext in slots if ext]
        _check_planted_burst([ts for ts, _ in inner], [b for _, b in inner],
                             f"topic {t_idx} interior")
        ext_word = f"x{t_idx:03d}"
        for s_idx, (ts, blog, ext) in enumerate(slots):
            words = (ext_word,) + topic.words if ext else topic.words
            records.append({
                "post_id": f"t{t_idx:03d}s{s_idx:03d}",
                "blog_id": blog,
                "timestamp": ts,
                "title": [],
                "body": [{"l": w, "p": "NOUN", "c": 0} for w in words],
                "links": [],
            })
        truth_topics.append({
            "words": list(topic.words),
            "start": times[0],
            "end": times[-1],
            "participants": sorted(set(slot_blogs)),
            "leader": topic.leader,
        })
        if topic.leader is not None:
            for follower in sorted(set(slot_blogs) - {topic.leader}):
                pairs.append((topic.leader, follower))

    vocab = [f"n{i:03d}" for i in range(spec.noise_vocab)]
    window_seconds = spec.window_days * DAY
    for b_idx, blog in enumerate(blogs):
        for k, ts in enumerate(_noise_times(_rate_of(spec, blog),
                                            window_seconds, spec.rate_ramp,
                                            rng_noise)):
            records.append({
                "post_id": f"b{b_idx:03d}n{k:04d}",
                "blog_id": blog,
                "timestamp": ts,
                "title": [],
                "body": _noise_tokens(vocab, rng_noise),
                "links": [],
            })

    records.sort(key=lambda r: (r["timestamp"], r["post_id"]))
    for record in records:
        if rng_links.random() < spec.link_prob:
            n_links = 1 + int(rng_links.random() < 0.25)
            others = [b for b in blogs if b != record["blog_id"]]
            chosen = rng_links.choice(len(others), size=min(n_links, len(others)),
                                      replace=False)
            record["links"] = sorted(others[int(i)] for i in chosen)

    return records, GroundTruth(topics=truth_topics, pairs=sorted(set(pairs)))


def write_corpus(records: list[dict], path) -> None:
    import json
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record, sort_keys=True, ensure_ascii=False))
            fh.write("\n")


def leader_follower_spec(n_blogs: int = 20, n_topics: int = 30,
                         window_days: float = 75.0, base_rate: float = 0.35,
                         lead_hours: float = 12.0, duration_days: float = 6.0,
                         leader: str = "blog_000", follower: str = "blog_001",
                         seed: int = 0) -> SynthSpec:
    """One leader with a fixed head start over a designated follower.

    The leader and the follower participate in every planted topic; four
    other blogs rotate through the remaining slots.
    """
    blogs = blog_ids(n_blogs)
    others = [b for b in blogs if b not in (leader, follower)]
    topics = []
    span = window_days - duration_days - 2.0
    for i in range(n_topics):
        extras = [others[(3 * i + j) % len(others)] for j in range(4)]
        topics.append(PlantedTopic(
            words=(f"t{i:03d}a", f"t{i:03d}b"),
            start_day=1.0 + span * i / max(n_topics - 1, 1),
            duration_days=duration_days,
            participants=(leader, follower, *extras),
            leader=leader,
            lead_hours=lead_hours,
        ))
    return SynthSpec(n_blogs=n_blogs, window_days=window_days,
                     base_rate=base_rate, topics=topics, seed=seed)


def rate_asymmetry_spec(n_blogs: int = 20, window_days: float = 60.0,
                        base_rate: float = 0.35, multiplier: float = 5.0,
                        heavy: str = "blog_000", other: str = "blog_001",
                        n_topics: int = 8, duration_days: float = 6.0,
                        seed: int = 0) -> SynthSpec:
    """A blog posting `multiplier` times more, with no planted lead.

    All planted topics are leaderless; the heavy poster and the reference
    blog co-participate in exactly one of them, so their dyad's precedence
    evidence comes purely from chance ordering.
    """
    blogs = blog_ids(n_blogs)
    rest = [b for b in blogs if b not in (heavy, other)]
    topics = []
    span = window_days - duration_days - 2.0
    for i in range(n_topics):
        pool = [rest[(4 * i + j) % len(rest)] for j in range(4)]
        if i == 0:
            participants = (heavy, other, *pool[:3])
        elif i % 2 == 1:
            participants = (heavy, *pool)
        else:
            participants = (other, *pool)
        topics.append(PlantedTopic(
            words=(f"t{i:03d}a", f"t{i:03d}b"),
            start_day=1.0 + span * i / max(n_topics - 1, 1),
            duration_days=duration_days,
            participants=participants,
            leader=None,
        ))
    return SynthSpec(n_blogs=n_blogs, window_days=window_days,
                     base_rate=base_rate, topics=topics,
                     rate_multipliers={heavy: multiplier}, seed=seed)
