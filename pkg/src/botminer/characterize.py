"""Activity-pattern profiles and file-type tabulation for detected bots.

Each author gets a 24-bin histogram of commit counts by local hour (the
commit's own timezone). Active bots are classified by rule order:
Spike when the top 3 hours hold most of the activity, Continuous when
the hourly distribution is near-uniform (high normalized entropy),
Synchronous when one 8-hour window dominates, Other otherwise.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from importlib import resources
from typing import Iterable, Sequence

import numpy as np

from .errors import TooFewCommits
from .features import file_extension
from .records import AuthorActivity

CLASS_CONTINUOUS = "Continuous"
CLASS_SYNCHRONOUS = "Synchronous"
CLASS_SPIKE = "Spike"
CLASS_OTHER = "Other"

UNKNOWN_CATEGORY = "Unknown"


@dataclass(frozen=True)
class ClassifierThresholds:
    spike_top3: float = 0.75
    continuous_entropy: float = 0.90
    synchronous_window8: float = 0.70
    min_commits: int = 1000


DEFAULT_THRESHOLDS = ClassifierThresholds()


def local_hour(timestamp: int, tz_offset: int) -> int:
    """Hour 0-23 on the commit's own local clock."""
    return (timestamp + 60 * tz_offset) // 3600 % 24


@dataclass(frozen=True)
class ActivityProfile:
    author_id: str
    bins: tuple[int, ...]
    total: int
    entropy_norm: float
    top3_share: float
    best_window8_share: float
    bot_class: str | None = None

    @classmethod
    def from_bins(cls, author_id: str, bins: Sequence[int]) -> "ActivityProfile":
        bins = tuple(int(b) for b in bins)
        if len(bins) != 24:
            raise ValueError(f"expected 24 bins, got {len(bins)}")
        total = sum(bins)
        if total <= 0:
            raise ValueError("profile needs at least one commit")
        shares = np.array(bins, dtype=float) / total
        nonzero = shares[shares > 0]
        entropy = float(-(nonzero * np.log(nonzero)).sum())
        window8 = max(
            sum(bins[(start + k) % 24] for k in range(8)) for start in range(24)
        )
        return cls(
            author_id=author_id,
            bins=bins,
            total=total,
            entropy_norm=entropy / math.log(24),
            top3_share=float(np.sort(shares)[-3:].sum()),
            best_window8_share=window8 / total,
        )

    @classmethod
    def from_author(cls, author: AuthorActivity) -> "ActivityProfile":
        bins = [0] * 24
        for c in author.commits:
            bins[local_hour(c.timestamp, c.tz_offset)] += 1
        return cls.from_bins(author.author_id, bins)


def classify_profile(
    profile: ActivityProfile,
    thresholds: ClassifierThresholds = DEFAULT_THRESHOLDS,
    min_commits: int | None = None,
) -> str:
    """Spike / Continuous / Synchronous / Other, checked in that order."""
    limit = thresholds.min_commits if min_commits is None else min_commits
    if profile.total < limit:
        raise TooFewCommits(
            f"{profile.author_id!r} has {profile.total} commits, need {limit}"
        )
    if profile.top3_share >= thresholds.spike_top3:
        return CLASS_SPIKE
    if profile.entropy_norm >= thresholds.continuous_entropy:
        return CLASS_CONTINUOUS
    if profile.best_window8_share >= thresholds.synchronous_window8:
        return CLASS_SYNCHRONOUS
    return CLASS_OTHER


class LanguageTable:
    """Static map from file extension to language/category."""

    def __init__(self, mapping: dict[str, str]):
        self.mapping = {ext.lower(): cat for ext, cat in mapping.items()}

    def lookup(self, extension: str) -> str:
        return self.mapping.get(extension.lower(), UNKNOWN_CATEGORY)

    @classmethod
    def from_csv(cls, rows: Iterable[Sequence[str]]) -> "LanguageTable":
        mapping = {}
        for row in rows:
            if not row or row[0].startswith("#"):
                continue
            ext, category = row[0].strip(), row[1].strip()
            if ext.lower() == "extension":  # header
                continue
            mapping[ext] = category
        return cls(mapping)

    @classmethod
    def from_file(cls, path: str) -> "LanguageTable":
        with open(path, newline="", encoding="utf-8") as fh:
            return cls.from_csv(csv.reader(fh))

    @classmethod
    def default(cls) -> "LanguageTable":
        text = (
            resources.files("botminer").joinpath("data/languages.csv").read_text("utf-8")
        )
        return cls.from_csv(csv.reader(text.splitlines()))


def file_type_histogram(
    authors: Iterable[AuthorActivity], table: LanguageTable
) -> dict[str, int]:
    """Number of distinct authors touching at least one file per category."""
    counts: dict[str, int] = {}
    for author in authors:
        categories = {
            table.lookup(file_extension(f))
            for c in author.commits
            for f in c.files
        }
        for cat in categories:
            counts[cat] = counts.get(cat, 0) + 1
    return counts


def render_radial_svg(profile: ActivityProfile, size: int = 400) -> str:
    """24-sector polar plot; sector radius tracks the hour's share of commits.

    Hours 8-15 are shaded as typical working hours. Hour 0 starts at the
    top; hours advance clockwise. Output is deterministic.
    """
    cx = cy = size / 2.0
    r_max = size * 0.42
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="{r_max:.2f}" '
        'fill="none" stroke="#cccccc" stroke-width="1"/>',
    ]

    def point(hour_angle: float, radius: float) -> tuple[float, float]:
        theta = math.radians(hour_angle * 15.0 - 90.0)
        return cx + radius * math.cos(theta), cy + radius * math.sin(theta)

    def wedge(hour: int, radius: float, fill: str, opacity: str) -> str:
        x0, y0 = point(hour, radius)
        x1, y1 = point(hour + 1, radius)
        return (
            f'<path d="M {cx:.2f} {cy:.2f} L {x0:.2f} {y0:.2f} '
            f'A {radius:.2f} {radius:.2f} 0 0 1 {x1:.2f} {y1:.2f} Z" '
            f'fill="{fill}" fill-opacity="{opacity}" stroke="none"/>'
        )

    for hour in range(8, 16):
        parts.append(wedge(hour, r_max, "#ffe9a8", "0.6"))
    peak = max(profile.bins)
    for hour in range(24):
        if profile.bins[hour] == 0:
            continue
        radius = r_max * profile.bins[hour] / peak
        parts.append(wedge(hour, radius, "#4878a8", "0.85"))
    for hour in range(24):
        x, y = point(hour, r_max)
        parts.append(
            f'<line x1="{cx:.2f}" y1="{cy:.2f}" x2="{x:.2f}" y2="{y:.2f}" '
            'stroke="#eeeeee" stroke-width="0.5"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
