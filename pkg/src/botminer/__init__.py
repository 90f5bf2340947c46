"""botminer: detect and characterize bot authors in commit data.

Three detectors over per-author commit bundles (name pattern, commit
message template score, random forest on commit-association features)
feed an ensemble random forest; detected bots are then profiled by
time-of-day activity and the file types they touch.
"""

from .records import AuthorActivity, CommitRecord, group_by_author, parse_line, serialize
from .namecheck import NameVerdict, is_bot_name, split_author_id
from .templates import bim_score, template_score
from .features import FEATURE_NAMES, FeatureVector, extract_features, file_extension
from .detector import (
    DetectionScores,
    apply_ensemble,
    bayes_posterior,
    ensemble_fit,
    prevalence_estimate,
    score_author,
)
from .characterize import ActivityProfile, LanguageTable, classify_profile, local_hour

__version__ = "0.1.0"

__all__ = [
    "ActivityProfile",
    "AuthorActivity",
    "CommitRecord",
    "DetectionScores",
    "FEATURE_NAMES",
    "FeatureVector",
    "LanguageTable",
    "NameVerdict",
    "apply_ensemble",
    "bayes_posterior",
    "bim_score",
    "classify_profile",
    "ensemble_fit",
    "extract_features",
    "file_extension",
    "group_by_author",
    "is_bot_name",
    "local_hour",
    "parse_line",
    "prevalence_estimate",
    "score_author",
    "serialize",
    "split_author_id",
    "template_score",
]
