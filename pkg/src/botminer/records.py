"""Commit record parsing, aggregation, and serialization.

The on-disk format is one commit per line, semicolon-separated:

    author_id;commit_hash;timestamp;timezone;files;projects;message

``files`` and ``projects`` are comma-separated lists (empty field = empty
list). The message is everything after the sixth ';' and may itself
contain ';'. ',' is reserved in list fields and cannot be escaped.
Timestamps are Unix seconds (UTC); the timezone is ``+HHMM``/``-HHMM``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dataclass_field
from typing import IO, Iterable, Iterator

_HASH_RE = re.compile(r"^[0-9a-f]{40}$")
_TZ_RE = re.compile(r"^([+-])(\d{2})(\d{2})$")

MAX_TZ_OFFSET = 14 * 60


class ParseError(ValueError):
    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class MalformedLine(ParseError):
    pass


class BadHash(ParseError):
    pass


class BadTimestamp(ParseError):
    pass


class BadTimezone(ParseError):
    pass


@dataclass(frozen=True)
class CommitRecord:
    author_id: str
    commit_hash: str
    timestamp: int
    tz_offset: int  # signed minutes from UTC
    files: tuple[str, ...]
    projects: tuple[str, ...]
    message: str


@dataclass(frozen=True)
class AuthorActivity:
    author_id: str
    commits: tuple[CommitRecord, ...]

    def __post_init__(self):
        if not self.commits:
            raise EmptyActivity(f"author {self.author_id!r} has no commits")
        for c in self.commits:
            if c.author_id != self.author_id:
                raise ValueError(
                    f"commit {c.commit_hash} has author {c.author_id!r}, "
                    f"expected {self.author_id!r}"
                )

    def messages(self) -> list[str]:
        return [c.message for c in self.commits]


class EmptyActivity(ValueError):
    pass


def parse_timezone(text: str, lineno: int | None = None) -> int:
    m = _TZ_RE.match(text)
    if m is None:
        raise BadTimezone(f"timezone not of form +HHMM: {text!r}", lineno)
    sign = 1 if m.group(1) == "+" else -1
    hours, minutes = int(m.group(2)), int(m.group(3))
    offset = sign * (hours * 60 + minutes)
    if minutes >= 60 or not -MAX_TZ_OFFSET <= offset <= MAX_TZ_OFFSET:
        raise BadTimezone(f"timezone out of range: {text!r}", lineno)
    return offset


def format_timezone(tz_offset: int) -> str:
    sign = "+" if tz_offset >= 0 else "-"
    mag = abs(tz_offset)
    return f"{sign}{mag // 60:02d}{mag % 60:02d}"


def parse_line(line: str, lineno: int | None = None) -> CommitRecord:
    """Parse one record line. The trailing newline, if any, is stripped."""
    line = line.rstrip("\r\n")
    parts = line.split(";")
    if len(parts) < 7:
        raise MalformedLine(
            f"expected at least 6 ';' separators, found {len(parts) - 1}", lineno
        )
    author_id, commit_hash, ts_text, tz_text, files_text, projects_text = parts[:6]
    message = ";".join(parts[6:])
    if _HASH_RE.match(commit_hash) is None:
        raise BadHash(f"not a 40-char lowercase hex hash: {commit_hash!r}", lineno)
    try:
        timestamp = int(ts_text)
    except ValueError:
        raise BadTimestamp(f"non-integer timestamp: {ts_text!r}", lineno) from None
    tz_offset = parse_timezone(tz_text, lineno)
    files = tuple(files_text.split(",")) if files_text else ()
    projects = tuple(projects_text.split(",")) if projects_text else ()
    return CommitRecord(
        author_id=author_id,
        commit_hash=commit_hash,
        timestamp=timestamp,
        tz_offset=tz_offset,
        files=files,
        projects=projects,
        message=message,
    )


def serialize(record: CommitRecord) -> str:
    """Inverse of parse_line; no trailing newline."""
    return ";".join(
        (
            record.author_id,
            record.commit_hash,
            str(record.timestamp),
            format_timezone(record.tz_offset),
            ",".join(record.files),
            ",".join(record.projects),
            record.message,
        )
    )


def group_by_author(records: Iterable[CommitRecord]) -> list[AuthorActivity]:
    """One bundle per distinct author_id (byte-exact key), in first-seen order.

    Commits keep their input order within each bundle.
    """
    buckets: dict[str, list[CommitRecord]] = {}
    for rec in records:
        buckets.setdefault(rec.author_id, []).append(rec)
    return [
        AuthorActivity(author_id=aid, commits=tuple(commits))
        for aid, commits in buckets.items()
    ]


@dataclass
class ParseStats:
    total: int = 0
    parsed: int = 0
    skipped: int = 0
    errors: list[ParseError] = dataclass_field(default_factory=list)


def read_records(
    stream: IO[str] | Iterable[str],
    on_error: str = "abort",
    stats: ParseStats | None = None,
) -> Iterator[CommitRecord]:
    """Yield records from an iterable of lines.

    on_error="skip" records bad lines in ``stats`` and keeps going;
    "abort" re-raises the first ParseError.
    """
    if on_error not in ("abort", "skip"):
        raise ValueError(f"unknown error policy: {on_error!r}")
    if stats is None:
        stats = ParseStats()
    for lineno, line in enumerate(stream, start=1):
        stats.total += 1
        try:
            rec = parse_line(line, lineno)
        except ParseError as exc:
            if on_error == "abort":
                raise
            stats.skipped += 1
            stats.errors.append(exc)
            continue
        stats.parsed += 1
        yield rec
