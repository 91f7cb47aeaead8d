import numpy as np
import pytest

from precursor.corpus import DAY, HOUR, IngestConfig, corpus_from_records
from precursor.bursts import FilterConfig, detect_all, filter_bursts
from precursor.ngrams import build_index
from precursor.synth import (GroundTruth, InfeasibleSpec, PlantedTopic,
                             SynthSpec, blog_ids, generate,
                             leader_follower_spec, rate_asymmetry_spec)
from precursor.topics import merge_bursts


def topic(participants, leader=None, duration=6.0, words=("t000a", "t000b")):
    return PlantedTopic(words=words, start_day=2.0, duration_days=duration,
                        participants=participants, leader=leader)


def base_spec(topics, n_blogs=10, seed=0, **kw):
    return SynthSpec(n_blogs=n_blogs, window_days=30.0, base_rate=0.4,
                     topics=topics, seed=seed, **kw)


def run_topic_stages(records):
    corpus = corpus_from_records(enumerate(records, 1), IngestConfig())
    return merge_bursts(filter_bursts(detect_all(build_index(corpus))))


class TestFeasibility:
    def test_three_participants_rejected(self):
        spec = base_spec([topic(("blog_000", "blog_001", "blog_002"))])
        with pytest.raises(InfeasibleSpec):
            generate(spec)

    def test_led_topic_needs_four_followers(self):
        spec = base_spec([topic(tuple(blog_ids(4)), leader="blog_000")])
        with pytest.raises(InfeasibleSpec):
            generate(spec)

    def test_lead_longer_than_topic_rejected(self):
        bad = PlantedTopic(words=("a", "b"), start_day=1.0, duration_days=4.0,
                           participants=tuple(blog_ids(6)), leader="blog_000",
                           lead_hours=5 * 24.0)
        with pytest.raises(InfeasibleSpec):
            generate(base_spec([bad]))

    def test_too_short_topic_rejected(self):
        with pytest.raises(InfeasibleSpec):
            generate(base_spec([topic(tuple(blog_ids(5)), duration=3.0)]))

    def test_unknown_participant_rejected(self):
        spec = base_spec([topic(("blog_000", "blog_001", "blog_002", "ghost"))])
        with pytest.raises(InfeasibleSpec):
            generate(spec)

    def test_zero_rate_rejected(self):
        with pytest.raises(InfeasibleSpec):
            generate(SynthSpec(n_blogs=4, window_days=10, base_rate=0.0))


class TestGenerate:
    def test_deterministic_under_seed(self):
        spec = base_spec([topic(tuple(blog_ids(5)))], seed=9)
        assert generate(spec) == generate(spec)
        other = base_spec([topic(tuple(blog_ids(5)))], seed=10)
        assert generate(other)[0] != generate(spec)[0]

    def test_planted_bursts_pass_filters(self):
        records, truth = generate(base_spec([topic(tuple(blog_ids(6)),
                                                   leader="blog_000")]))
        corpus = corpus_from_records(enumerate(records, 1), IngestConfig())
        detected = detect_all(build_index(corpus))
        kept = filter_bursts(detected, FilterConfig())
        planted_lemmas = tuple(truth.topics[0]["words"])
        assert any(b.ngram.lemmas == planted_lemmas for b in kept)

    def test_planted_topic_recovered(self):
        records, truth = generate(base_spec([topic(tuple(blog_ids(6)),
                                                   leader="blog_000",
                                                   duration=5.0)]))
        topics = run_topic_stages(records)
        planted = truth.topics[0]
        matches = [t for t in topics
                   if any(n.lemmas == tuple(planted["words"]) for n in t.ngrams)]
        assert matches
        got = matches[0]
        overlap = min(got.end, planted["end"]) - max(got.start, planted["start"])
        assert overlap >= 0.5 * (planted["end"] - planted["start"])
        # every topic inherits the burst filter's blog minimum
        assert len(got.participations) >= 4

    def test_null_spec_produces_no_topics(self):
        for seed in (0, 1):
            records, truth = generate(SynthSpec(n_blogs=15, window_days=45,
                                                base_rate=0.6, seed=seed))
            assert truth.topics == [] and truth.pairs == []
            assert len(run_topic_stages(records)) <= 2

    def test_leader_posts_first_with_lead(self):
        records, truth = generate(base_spec(
            [topic(tuple(blog_ids(6)), leader="blog_000")]))
        planted = [r for r in records if r["post_id"].startswith("t000")]
        planted.sort(key=lambda r: r["timestamp"])
        assert planted[0]["blog_id"] == "blog_000"
        others = [r for r in planted if r["blog_id"] != "blog_000"]
        lead = others[0]["timestamp"] - planted[0]["timestamp"]
        assert lead >= 12 * HOUR
        assert ("blog_000", "blog_001") in truth.pairs

    def test_rate_multiplier_scales_post_volume(self):
        spec = SynthSpec(n_blogs=6, window_days=40, base_rate=0.5,
                         rate_multipliers={"blog_000": 5.0}, seed=3)
        records, _ = generate(spec)
        counts = {}
        for r in records:
            counts[r["blog_id"]] = counts.get(r["blog_id"], 0) + 1
        others = np.mean([counts[b] for b in blog_ids(6)[1:]])
        assert counts["blog_000"] > 3 * others

    def test_rate_ramp_shifts_mass_late(self):
        spec = SynthSpec(n_blogs=4, window_days=60, base_rate=2.0,
                         rate_ramp=3.0, seed=4)
        records, _ = generate(spec)
        times = np.array([r["timestamp"] for r in records])
        mid = 30 * DAY
        assert (times > mid).sum() > 1.3 * (times <= mid).sum()

    def test_links_point_to_known_blogs(self):
        records, _ = generate(SynthSpec(n_blogs=5, window_days=20,
                                        base_rate=1.0, seed=5))
        known = set(blog_ids(5))
        for r in records:
            assert set(r["links"]) <= known - {r["blog_id"]}


class TestPresets:
    def test_leader_follower_spec_shape(self):
        spec = leader_follower_spec(n_topics=5)
        assert len(spec.topics) == 5
        for t in spec.topics:
            assert t.leader == "blog_000"
            assert "blog_001" in t.participants
            assert len(set(t.participants)) == 6

    def test_rate_asymmetry_spec_single_shared_topic(self):
        spec = rate_asymmetry_spec()
        shared = [t for t in spec.topics
                  if "blog_000" in t.participants and "blog_001" in t.participants]
        assert len(shared) == 1
        assert all(t.leader is None for t in spec.topics)
        assert spec.rate_multipliers == {"blog_000": 5.0}
