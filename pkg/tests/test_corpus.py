import json

import pytest

from precursor.corpus import (DAY, EmptyCorpus, IngestConfig, MalformedRecord,
                              NonMonotonicWindow, Pos, load_corpus, post_count)

from conftest import corpus_of, post, tok


def write_lines(path, records):
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            fh.write(json.dumps(r) + "\n")


def rec(post_id, blog, ts, body=None, links=None):
    return {"post_id": post_id, "blog_id": blog, "timestamp": ts,
            "title": [], "body": body or [], "links": links or []}


class TestLoadCorpus:
    def test_empty_file(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text("")
        with pytest.raises(EmptyCorpus):
            load_corpus(path)

    def test_out_of_order_records_resorted(self, tmp_path):
        path = tmp_path / "c.jsonl"
        write_lines(path, [rec("p3", "b", 30), rec("p1", "a", 10),
                           rec("p2", "a", 20)])
        corpus = load_corpus(path)
        assert [p.timestamp for p in corpus.posts] == [10, 20, 30]

    def test_timestamp_tie_broken_by_post_id(self, tmp_path):
        path = tmp_path / "c.jsonl"
        write_lines(path, [rec("pz", "b", 10), rec("pa", "a", 10)])
        corpus = load_corpus(path)
        assert [p.post_id for p in corpus.posts] == ["pa", "pz"]

    def test_unknown_pos_coerced_with_warning(self, tmp_path):
        path = tmp_path / "c.jsonl"
        write_lines(path, [rec("p1", "a", 10,
                                body=[{"l": "mot", "p": "XYZ", "c": 0}])])
        corpus = load_corpus(path)
        assert corpus.posts[0].body_tokens[0].pos is Pos.OTHER
        assert corpus.report.pos_warnings == 1

    def test_missing_blog_id_reports_line(self, tmp_path):
        path = tmp_path / "c.jsonl"
        write_lines(path, [rec("p1", "a", 10),
                           {"post_id": "p2", "timestamp": 20}])
        with pytest.raises(MalformedRecord) as err:
            load_corpus(path)
        assert err.value.line == 2

    def test_invalid_json_reports_line(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text('{"post_id": "p1", "blog_id": "a", "timestamp": 1}\nnot json\n')
        with pytest.raises(MalformedRecord) as err:
            load_corpus(path)
        assert err.value.line == 2

    def test_duplicate_post_id_rejected(self, tmp_path):
        path = tmp_path / "c.jsonl"
        write_lines(path, [rec("p1", "a", 10), rec("p1", "b", 20)])
        with pytest.raises(MalformedRecord):
            load_corpus(path)

    def test_iso_timestamp_equivalent_to_epoch(self, tmp_path):
        path = tmp_path / "c.jsonl"
        write_lines(path, [rec("p1", "a", "2009-10-01T00:00:00+00:00"),
                           rec("p2", "a", 1254355200)])
        corpus = load_corpus(path)
        assert corpus.posts[0].timestamp == corpus.posts[1].timestamp

    def test_window_filtering_and_report(self, tmp_path):
        path = tmp_path / "c.jsonl"
        write_lines(path, [rec("p1", "a", 5), rec("p2", "a", 50),
                           rec("p3", "a", 500)])
        corpus = load_corpus(path, IngestConfig(window_start=10, window_end=100))
        assert len(corpus.posts) == 1
        assert corpus.report.out_of_window == 2
        assert corpus.window == (10, 100)

    def test_inverted_window_rejected(self, tmp_path):
        path = tmp_path / "c.jsonl"
        write_lines(path, [rec("p1", "a", 5)])
        with pytest.raises(NonMonotonicWindow):
            load_corpus(path, IngestConfig(window_start=100, window_end=10))

    def test_self_links_dropped(self, tmp_path):
        path = tmp_path / "c.jsonl"
        write_lines(path, [rec("p1", "a", 10, links=["a", "b"]),
                           rec("p2", "b", 20)])
        corpus = load_corpus(path)
        assert corpus.posts[0].out_links == frozenset({"b"})
        assert corpus.report.self_links == 1

    def test_external_links_dropped_by_default(self, tmp_path):
        path = tmp_path / "c.jsonl"
        write_lines(path, [rec("p1", "a", 10, links=["ghost"])])
        corpus = load_corpus(path)
        assert corpus.posts[0].out_links == frozenset()
        assert corpus.report.external_links == 1
        kept = load_corpus(path, IngestConfig(keep_external_links=True))
        assert kept.posts[0].out_links == frozenset({"ghost"})

    def test_assume_nouns(self, tmp_path):
        path = tmp_path / "c.jsonl"
        write_lines(path, [rec("p1", "a", 10,
                                body=[{"l": "Mot", "p": "XYZ", "c": 0}])])
        corpus = load_corpus(path, IngestConfig(assume_nouns=True))
        token = corpus.posts[0].body_tokens[0]
        assert token.pos is Pos.NOUN and token.lemma == "mot"
        assert corpus.report.pos_warnings == 0

    def test_decreasing_chunk_index_rejected(self, tmp_path):
        path = tmp_path / "c.jsonl"
        write_lines(path, [rec("p1", "a", 10,
                                body=[{"l": "x", "p": "NOUN", "c": 1},
                                      {"l": "y", "p": "NOUN", "c": 0}])])
        with pytest.raises(MalformedRecord):
            load_corpus(path)

    def test_deterministic(self, tmp_path):
        path = tmp_path / "c.jsonl"
        write_lines(path, [rec("p2", "b", 20, links=["a"]), rec("p1", "a", 10)])
        assert load_corpus(path) == load_corpus(path)


class TestPostCount:
    def setup_method(self):
        self.corpus = corpus_of([post(f"p{t}", "a", t) for t in (10, 20, 30)]
                                + [post("q1", "b", 15)])

    def test_inclusive_bounds(self):
        assert post_count(self.corpus, "a", 10, 30) == 3

    def test_strict_interior(self):
        assert post_count(self.corpus, "a", 11, 29) == 1

    def test_unknown_blog_is_zero(self):
        assert post_count(self.corpus, "nobody", 0, 100) == 0

    def test_inverted_range_rejected(self):
        with pytest.raises(ValueError):
            post_count(self.corpus, "a", 30, 10)

    def test_counts_sum_to_total(self):
        lo, hi = self.corpus.window
        total = sum(post_count(self.corpus, b, lo, hi) for b in self.corpus.blogs)
        assert total == len(self.corpus.posts)

    def test_split_additivity(self):
        for mid in (12, 19, 25):
            left = post_count(self.corpus, "a", 10, mid)
            right = post_count(self.corpus, "a", mid + 1, 30)
            assert left + right == post_count(self.corpus, "a", 10, 30)
