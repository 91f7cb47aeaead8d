from precursor.topics import is_generalization, merge_bursts

from conftest import burst_of


class TestIsGeneralization:
    def test_subsequence_with_containing_interval(self):
        ga = burst_of(("région", "avoir", "apporter", "contribution", "débat"),
                      5, 20)
        gb = burst_of(("apporter", "contribution", "débat"), 3, 25)
        assert is_generalization(ga, gb)

    def test_word_order_matters(self):
        ga = burst_of(("apporter", "contribution", "débat"), 5, 20)
        gb = burst_of(("contribution", "apporter"), 3, 25)
        assert not is_generalization(ga, gb)

    def test_non_contiguous_subsequence_rejected(self):
        ga = burst_of(("a", "b", "c"), 5, 20)
        gb = burst_of(("a", "c"), 3, 25)
        assert not is_generalization(ga, gb)

    def test_interval_containment_required(self):
        ga = burst_of(("a", "b", "c"), 5, 20)
        gb = burst_of(("b", "c"), 6, 25)
        assert not is_generalization(ga, gb)

    def test_equal_interval_counts_as_containing(self):
        ga = burst_of(("a", "b", "c"), 5, 20)
        gb = burst_of(("b", "c"), 5, 20)
        assert is_generalization(ga, gb)


class TestMergeBursts:
    def test_pair_merges_into_one_topic(self):
        specific = burst_of(("région", "apporter", "contribution"), 5, 20)
        general = burst_of(("apporter", "contribution"), 3, 25)
        topics = merge_bursts([specific, general])
        assert len(topics) == 1
        topic = topics[0]
        assert [n.lemmas for n in topic.ngrams] == [("apporter", "contribution")]
        assert (topic.start, topic.end) == (3, 25)

    def test_no_relations_no_topics_by_default(self):
        bursts = [burst_of(("a", "b"), 0, 10), burst_of(("c", "d"), 0, 10)]
        assert merge_bursts(bursts) == []

    def test_keep_singletons(self):
        bursts = [burst_of(("a", "b"), 0, 10), burst_of(("c", "d"), 5, 15)]
        topics = merge_bursts(bursts, keep_singletons=True)
        assert len(topics) == 2
        assert all(len(t.ngrams) == 1 for t in topics)

    def test_chain_collapses_to_single_topic(self):
        a = burst_of(("x", "y", "z", "w"), 10, 20)
        b = burst_of(("y", "z", "w"), 8, 22)
        c = burst_of(("z", "w"), 5, 25)
        topics = merge_bursts([a, b, c])
        assert len(topics) == 1
        assert {n.lemmas for n in topics[0].ngrams} == {
            ("y", "z", "w"), ("z", "w")}
        assert (topics[0].start, topics[0].end) == (5, 25)

    def test_conflicting_topics_are_merged(self):
        # the 4-grams are traversed first and create two separate topics;
        # the bridging 3-gram then finds generalizations in both, which
        # forces the topics to merge
        s1 = burst_of(("q", "q2", "a", "b"), 5, 10)
        s2 = burst_of(("r", "r2", "b", "c"), 5, 10)
        bridge = burst_of(("a", "b", "c"), 10, 20)
        g1 = burst_of(("a", "b"), 0, 30)
        g2 = burst_of(("b", "c"), 0, 30)
        topics = merge_bursts([s1, s2, bridge, g1, g2])
        assert len(topics) == 1
        assert {n.lemmas for n in topics[0].ngrams} == {("a", "b"), ("b", "c")}

    def test_each_burst_in_at_most_one_topic(self):
        bursts = [burst_of(("a", "b", "c"), 10, 20),
                  burst_of(("a", "b"), 8, 22),
                  burst_of(("b", "c"), 9, 21),
                  burst_of(("d", "e"), 0, 5)]
        topics = merge_bursts(bursts, keep_singletons=True)
        seen = []
        for topic in topics:
            for burst in topic.bursts:
                assert burst not in seen
                seen.append(burst)

    def test_participations_earliest_per_blog(self):
        general = burst_of(("a", "b"), 0, 30,
                           occurrences=[(0, "b1", "p0"), (10, "b2", "p1"),
                                        (20, "b1", "p2"), (30, "b3", "p3")])
        specific = burst_of(("q", "a", "b"), 5, 25,
                            occurrences=[(5, "b2", "p4"), (25, "b1", "p5")])
        topics = merge_bursts([specific, general])
        assert len(topics) == 1
        assert topics[0].participations == {"b1": 0, "b2": 10, "b3": 30}

    def test_topic_interval_within_member_span(self):
        general = burst_of(("a", "b"), 2, 28)
        specific = burst_of(("q", "a", "b"), 5, 25)
        topic = merge_bursts([specific, general])[0]
        assert topic.start == min(b.start for b in topic.bursts)
        assert topic.end == max(b.end for b in topic.bursts)

    def test_pairwise_minimality_without_chains(self):
        # among merged topics built from specific->general pairs only, no
        # retained member generalizes another retained member
        bursts = [burst_of(("a", "b", "c"), 10, 20),
                  burst_of(("a", "b"), 5, 25),
                  burst_of(("x", "y", "z"), 40, 50),
                  burst_of(("y", "z"), 35, 55)]
        for topic in merge_bursts(bursts):
            members = list(topic.bursts)
            for m1 in members:
                for m2 in members:
                    if m1 is not m2:
                        assert not is_generalization(m1, m2)
