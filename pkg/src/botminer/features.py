"""Per-author predictors over files and projects touched by commits."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .records import AuthorActivity

# Column order for model input and CSV output.
FEATURE_NAMES = (
    "Tot.FilesChanged",
    "Uniq.File.Exten",
    "Std.File.pCommit",
    "Avg.File.pCommit",
    "Tot.uniq.Projects",
    "Median.Project.pCommit",
)

NO_EXTENSION = "<none>"


@dataclass(frozen=True)
class FeatureVector:
    tot_files_changed: int
    uniq_file_exten: int
    std_file_per_commit: float
    avg_file_per_commit: float
    tot_uniq_projects: int
    median_project_per_commit: float

    def as_array(self) -> np.ndarray:
        return np.array(
            [
                self.tot_files_changed,
                self.uniq_file_exten,
                self.std_file_per_commit,
                self.avg_file_per_commit,
                self.tot_uniq_projects,
                self.median_project_per_commit,
            ],
            dtype=float,
        )


def file_extension(path: str) -> str:
    """Lowercased text after the last '.' of the final path segment.

    No dot, or a trailing dot, yields the NO_EXTENSION sentinel. Leading-dot
    files like ".gitignore" yield "gitignore".
    """
    segment = path.rsplit("/", 1)[-1]
    dot = segment.rfind(".")
    if dot < 0 or dot == len(segment) - 1:
        return NO_EXTENSION
    return segment[dot + 1 :].lower()


def extract_features(author: AuthorActivity) -> FeatureVector:
    file_counts = np.array([len(c.files) for c in author.commits], dtype=float)
    project_counts = np.array([len(c.projects) for c in author.commits], dtype=float)
    extensions = {file_extension(f) for c in author.commits for f in c.files}
    projects = {p for c in author.commits for p in c.projects}
    n = len(file_counts)
    # Sample (n-1) standard deviation, defined as 0 for a single commit.
    std = float(np.std(file_counts, ddof=1)) if n > 1 else 0.0
    return FeatureVector(
        tot_files_changed=int(file_counts.sum()),
        uniq_file_exten=len(extensions),
        std_file_per_commit=std,
        avg_file_per_commit=float(file_counts.mean()),
        tot_uniq_projects=len(projects),
        median_project_per_commit=float(np.median(project_counts)),
    )
