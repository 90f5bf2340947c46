"""Per-author scoring, ensemble classification, and population estimates."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import forest, namecheck, templates
from .errors import DomainError
from .features import extract_features
from .forest import BOT, ForestConfig, HUMAN, RandomForestModel
from .records import AuthorActivity

ENSEMBLE_FEATURE_NAMES = ("bin_flag", "bim_score", "bica_prob")
DEFAULT_DECISION_THRESHOLD = 0.5
DEFAULT_PREVALENCE = 0.01


@dataclass
class DetectionScores:
    author_id: str
    bin_flag: int
    bim_score: float
    bica_prob: float
    ensemble_prob: float | None = None
    verdict: str | None = None  # "bot" or "human" once thresholded

    def predictor_vector(self) -> np.ndarray:
        return np.array([self.bin_flag, self.bim_score, self.bica_prob], dtype=float)


def score_author(
    author: AuthorActivity,
    bica_model: RandomForestModel,
    k_b: float = templates.DEFAULT_KB,
    cap: int = templates.DEFAULT_CAP,
    combined: bool = True,
) -> DetectionScores:
    """Run all three detectors on one author."""
    verdict = namecheck.is_bot_name(author.author_id)
    bim = templates.bim_score(author, k_b=k_b, cap=cap, combined=combined)
    bica = forest.predict_proba(bica_model, extract_features(author).as_array())
    return DetectionScores(
        author_id=author.author_id,
        bin_flag=1 if verdict.is_bot else 0,
        bim_score=bim,
        bica_prob=bica,
    )


def ensemble_fit(
    rows: Sequence[tuple[DetectionScores, int]],
    config: ForestConfig | None = None,
) -> RandomForestModel:
    """Train the ensemble forest on (scores, label) pairs; label 1 = bot."""
    if config is None:
        config = ForestConfig(ntree=100, mtry=2)
    X = np.array([s.predictor_vector() for s, _ in rows], dtype=float)
    y = np.array([label for _, label in rows], dtype=int)
    return forest.fit(X, y, config, feature_names=ENSEMBLE_FEATURE_NAMES)


def apply_ensemble(
    scores: Sequence[DetectionScores],
    model: RandomForestModel,
    threshold: float = DEFAULT_DECISION_THRESHOLD,
) -> None:
    """Fill ensemble_prob and verdict in place; bot iff prob > threshold."""
    for s in scores:
        s.ensemble_prob = forest.predict_proba(model, s.predictor_vector())
        s.verdict = "bot" if s.ensemble_prob > threshold else "human"


def bayes_posterior(sensitivity: float, specificity: float, prevalence: float) -> float:
    """P(bot | flagged) for a detector with the given operating point."""
    for name, value in (
        ("sensitivity", sensitivity),
        ("specificity", specificity),
        ("prevalence", prevalence),
    ):
        if not 0.0 < value < 1.0:
            raise DomainError(f"{name} must be in (0, 1): {value}")
    flagged_bot = sensitivity * prevalence
    flagged_human = (1.0 - specificity) * (1.0 - prevalence)
    return flagged_bot / (flagged_bot + flagged_human)


def prevalence_estimate(flagged_fraction: float, verified_fraction: float) -> float:
    """Estimated bot share: fraction flagged times fraction verified as bots."""
    for name, value in (
        ("flagged_fraction", flagged_fraction),
        ("verified_fraction", verified_fraction),
    ):
        if not 0.0 <= value <= 1.0:
            raise DomainError(f"{name} must be in [0, 1]: {value}")
    return flagged_fraction * verified_fraction


def synthetic_ensemble_rows(
    seed: int = 0, n_bots: int = 67, n_humans: int = 67
) -> list[tuple[DetectionScores, int]]:
    """Synthetic labeled (scores, label) rows for ensemble training demos/tests.

    Bots carry the name flag only sometimes (name matching has low recall)
    but concentrate high template and forest scores; humans the opposite.
    """
    rng = np.random.default_rng(seed)
    rows: list[tuple[DetectionScores, int]] = []
    for i in range(n_bots):
        s = DetectionScores(
            author_id=f"synthetic-bot-{i}",
            bin_flag=int(rng.random() < 0.37),
            bim_score=float(rng.beta(6.0, 2.0)),
            bica_prob=float(rng.beta(9.0, 2.0)),
        )
        rows.append((s, BOT))
    for i in range(n_humans):
        s = DetectionScores(
            author_id=f"synthetic-human-{i}",
            bin_flag=int(rng.random() < 0.01),
            bim_score=float(rng.beta(2.0, 6.0)),
            bica_prob=float(rng.beta(2.0, 9.0)),
        )
        rows.append((s, HUMAN))
    return rows
