"""Corpus ingestion, validation and time-windowed post counting.

Input is a line-delimited file of JSON records (one post per line) with
fields ``post_id``, ``blog_id``, ``timestamp`` (integer epoch seconds or an
ISO-8601 string), ``title`` and ``body`` (arrays of ``{l, p, c}`` token
objects: lemma, part-of-speech tag, chunk index) and ``links`` (array of
cited blog ids).  The loader normalizes lemmas to lowercase, coerces unknown
part-of-speech tags to OTHER, drops self-links and (by default) links to
blogs that never post in the corpus, and sorts posts by (timestamp, post_id).
"""

from __future__ import annotations

import json
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator

# All durations are integer seconds; a "month" is fixed at 30 days so that
# the duration filters are deterministic.
HOUR = 3600
DAY = 86400
MONTH = 30 * DAY


class Pos(str, Enum):
    NOUN = "NOUN"
    VERB = "VERB"
    ADJ = "ADJ"
    NUM = "NUM"
    OTHER = "OTHER"


#: Tags that survive n-gram enumeration.
CONTENT_POS = frozenset({Pos.NOUN, Pos.VERB, Pos.ADJ, Pos.NUM})

_POS_BY_NAME = {p.value: p for p in Pos}


class CorpusError(Exception):
    """Base class for ingest failures."""


class MalformedRecord(CorpusError):
    def __init__(self, line: int, reason: str):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class EmptyCorpus(CorpusError):
    pass


class NonMonotonicWindow(CorpusError):
    pass


@dataclass(frozen=True)
class Token:
    lemma: str
    pos: Pos
    chunk: int = 0


@dataclass(frozen=True)
class Post:
    post_id: str
    blog_id: str
    timestamp: int
    title_tokens: tuple[Token, ...] = ()
    body_tokens: tuple[Token, ...] = ()
    out_links: frozenset[str] = frozenset()


@dataclass
class IngestConfig:
    window_start: int | None = None
    window_end: int | None = None
    keep_external_links: bool = False
    assume_nouns: bool = False


@dataclass
class LoadReport:
    """Counters accumulated while loading; pos_warnings counts coerced tags."""

    records_read: int = 0
    posts_loaded: int = 0
    pos_warnings: int = 0
    empty_lemma_tokens: int = 0
    out_of_window: int = 0
    self_links: int = 0
    external_links: int = 0


@dataclass
class Corpus:
    posts: tuple[Post, ...]
    blogs: frozenset[str]
    window: tuple[int, int]
    report: LoadReport = field(default_factory=LoadReport)
    _blog_times: dict[str, list[int]] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self._blog_times:
            for p in self.posts:
                self._blog_times.setdefault(p.blog_id, []).append(p.timestamp)
            # posts are sorted globally, so each per-blog list is sorted too

    def posts_by_blog(self, blog: str) -> list[int]:
        return self._blog_times.get(blog, [])


def _parse_timestamp(raw, line: int) -> int:
    if isinstance(raw, bool):
        raise MalformedRecord(line, f"bad timestamp {raw!r}")
    if isinstance(raw, (int, float)):
        return int(raw)
    if isinstance(raw, str):
        try:
            dt = datetime.fromisoformat(raw.replace("Z", "+00:00"))
        except ValueError:
            raise MalformedRecord(line, f"bad timestamp {raw!r}") from None
        if dt.tzinfo is None:
            dt = dt.replace(tzinfo=timezone.utc)
        return int(dt.timestamp())
    raise MalformedRecord(line, f"bad timestamp {raw!r}")


def _parse_tokens(raw, line: int, config: IngestConfig,
                  report: LoadReport) -> tuple[Token, ...]:
    if raw is None:
        return ()
    if not isinstance(raw, list):
        raise MalformedRecord(line, "token array expected")
    tokens = []
    prev_chunk = None
    for item in raw:
        if not isinstance(item, dict):
            raise MalformedRecord(line, "token object expected")
        lemma = str(item.get("l", "")).strip().lower()
        if not lemma:
            report.empty_lemma_tokens += 1
            continue
        if config.assume_nouns:
            pos = Pos.NOUN
        else:
            tag = str(item.get("p", "")).upper()
            pos = _POS_BY_NAME.get(tag)
            if pos is None:
                pos = Pos.OTHER
                report.pos_warnings += 1
        chunk = int(item.get("c", 0))
        if prev_chunk is not None and chunk < prev_chunk:
            raise MalformedRecord(line, "chunk indices must be non-decreasing")
        prev_chunk = chunk
        tokens.append(Token(lemma, pos, chunk))
    return tuple(tokens)


def iter_records(path: str | Path) -> Iterator[tuple[int, dict]]:
    """Yield (line_number, record) pairs from a line-delimited JSON file."""
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedRecord(line_no, f"invalid JSON ({exc.msg})") from None
            if not isinstance(record, dict):
                raise MalformedRecord(line_no, "object expected")
            yield line_no, record


def corpus_from_records(records: Iterable[tuple[int, dict]],
                        config: IngestConfig | None = None) -> Corpus:
    config = config or IngestConfig()
    if (config.window_start is not None and config.window_end is not None
            and config.window_start > config.window_end):
        raise NonMonotonicWindow(
            f"window start {config.window_start} > end {config.window_end}")

    report = LoadReport()
    parsed: list[tuple[Post, list[str]]] = []
    seen_ids: set[str] = set()
    for line_no, record in records:
        report.records_read += 1
        post_id = record.get("post_id")
        blog_id = record.get("blog_id")
        if not post_id or not isinstance(post_id, str):
            raise MalformedRecord(line_no, "missing post_id")
        if not blog_id or not isinstance(blog_id, str):
            raise MalformedRecord(line_no, "missing blog_id")
        if "timestamp" not in record:
            raise MalformedRecord(line_no, "missing timestamp")
        if post_id in seen_ids:
            raise MalformedRecord(line_no, f"duplicate post_id {post_id!r}")
        seen_ids.add(post_id)
        ts = _parse_timestamp(record["timestamp"], line_no)
        title = _parse_tokens(record.get("title"), line_no, config, report)
        body = _parse_tokens(record.get("body"), line_no, config, report)
        links = record.get("links") or []
        if not isinstance(links, list):
            raise MalformedRecord(line_no, "links array expected")
        post = Post(post_id=post_id, blog_id=blog_id, timestamp=ts,
                    title_tokens=title, body_tokens=body)
        parsed.append((post, [str(x) for x in links]))

    if config.window_start is not None or config.window_end is not None:
        lo = config.window_start if config.window_start is not None else min(
            (p.timestamp for p, _ in parsed), default=0)
        hi = config.window_end if config.window_end is not None else max(
            (p.timestamp for p, _ in parsed), default=0)
        kept = []
        for post, links in parsed:
            if lo <= post.timestamp <= hi:
                kept.append((post, links))
            else:
                report.out_of_window += 1
        parsed = kept
        window = (lo, hi)
    else:
        if parsed:
            times = [p.timestamp for p, _ in parsed]
            window = (min(times), max(times))
        else:
            window = (0, 0)

    if not parsed:
        raise EmptyCorpus("no valid posts")

    blogs = frozenset(p.blog_id for p, _ in parsed)
    posts = []
    for post, links in parsed:
        cleaned = set()
        for target in links:
            if target == post.blog_id:
                report.self_links += 1
            elif target not in blogs and not config.keep_external_links:
                report.external_links += 1
            else:
                cleaned.add(target)
        posts.append(Post(post.post_id, post.blog_id, post.timestamp,
                          post.title_tokens, post.body_tokens,
                          frozenset(cleaned)))
    posts.sort(key=lambda p: (p.timestamp, p.post_id))
    report.posts_loaded = len(posts)
    return Corpus(posts=tuple(posts), blogs=blogs, window=window, report=report)


def load_corpus(path: str | Path, config: IngestConfig | None = None) -> Corpus:
    """Load and validate a line-delimited corpus file.

    Raises MalformedRecord (with the offending line number) on the first
    unparseable or incomplete record, EmptyCorpus when no valid post
    survives, and NonMonotonicWindow for an inverted observation window.
    """
    return corpus_from_records(iter_records(path), config)


def post_count(corpus: Corpus, blog: str, t: int, t2: int) -> int:
    """Number of posts by `blog` with timestamp in the inclusive range [t, t2]."""
    if t > t2:
        raise ValueError(f"t={t} > t2={t2}")
    times = corpus.posts_by_blog(blog)
    return bisect_right(times, t2) - bisect_left(times, t)
