import numpy as np
import pytest

from botminer.detector import (
    DetectionScores,
    apply_ensemble,
    bayes_posterior,
    ensemble_fit,
    prevalence_estimate,
    score_author,
    synthetic_ensemble_rows,
)
from botminer.errors import DomainError, SingleClass
from botminer.features import FEATURE_NAMES, extract_features
from botminer.forest import BOT, ForestConfig, HUMAN, fit
from botminer.records import AuthorActivity, CommitRecord


def make_author(author_id, messages, files=("f.py",), projects=("P",)):
    commits = tuple(
        CommitRecord(
            author_id=author_id,
            commit_hash=f"{i:040x}",
            timestamp=i * 1000,
            tz_offset=0,
            files=tuple(files),
            projects=tuple(projects),
            message=m,
        )
        for i, m in enumerate(messages)
    )
    return AuthorActivity(author_id=author_id, commits=commits)


@pytest.fixture(scope="module")
def bica_model():
    rng = np.random.default_rng(0)
    bots = rng.normal([50, 2, 0.5, 5, 2, 2], 0.5, size=(40, 6))
    humans = rng.normal([10, 8, 3, 1.5, 6, 1], 0.5, size=(40, 6))
    X = np.abs(np.concatenate([bots, humans]))
    y = np.array([BOT] * 40 + [HUMAN] * 40)
    return fit(X, y, ForestConfig(ntree=30, mtry=2, seed=1), feature_names=FEATURE_NAMES)


def test_score_author_fields(bica_model):
    author = make_author("cool-bot <x@y.z>", ["same msg", "same msg"])
    s = score_author(author, bica_model)
    assert s.bin_flag == 1
    assert s.bim_score == 0.5
    assert 0.0 <= s.bica_prob <= 1.0
    assert s.ensemble_prob is None and s.verdict is None


def test_score_author_human_single_commit(bica_model):
    s = score_author(make_author("Jane <j@x.com>", ["one commit"]), bica_model)
    assert s.bin_flag == 0
    assert s.bim_score == 0.0


def test_score_author_autobuild_pattern(bica_model):
    author = make_author("Autobuild <ab@ci.org>", ["update html,"] * 739)
    s = score_author(author, bica_model)
    assert s.bim_score == pytest.approx(1 - 1 / 739)


def test_score_author_deterministic(bica_model):
    author = make_author("x <x@y.z>", ["m1", "m2", "m1"])
    assert score_author(author, bica_model) == score_author(author, bica_model)


def test_ensemble_perfect_bin_feature():
    rng = np.random.default_rng(3)
    rows = []
    for i in range(60):
        label = BOT if i % 2 else HUMAN
        s = DetectionScores(
            author_id=f"a{i}",
            bin_flag=label,
            bim_score=float(rng.random()),
            bica_prob=float(rng.random()),
        )
        rows.append((s, label))
    model = ensemble_fit(rows, ForestConfig(ntree=50, mtry=2, seed=2))
    held = []
    for i in range(20):
        label = BOT if i % 3 == 0 else HUMAN
        held.append(
            (
                DetectionScores(f"h{i}", label, float(rng.random()), float(rng.random())),
                label,
            )
        )
    apply_ensemble([s for s, _ in held], model)
    assert all(s.verdict == ("bot" if lab == BOT else "human") for s, lab in held)


def test_ensemble_single_class():
    rows = [(DetectionScores("a", 1, 0.9, 0.9), BOT)] * 4
    with pytest.raises(SingleClass):
        ensemble_fit(rows)


def test_ensemble_empty():
    with pytest.raises(Exception):
        ensemble_fit([])


def test_verdict_threshold_invariant():
    rows = synthetic_ensemble_rows(seed=5)
    model = ensemble_fit(rows, ForestConfig(ntree=20, mtry=2, seed=5))
    scores = [s for s, _ in synthetic_ensemble_rows(seed=6)]
    apply_ensemble(scores, model, threshold=0.5)
    for s in scores:
        assert (s.verdict == "bot") == (s.ensemble_prob > 0.5)


def test_verdict_ignores_author_id():
    rows = synthetic_ensemble_rows(seed=7)
    model = ensemble_fit(rows, ForestConfig(ntree=20, mtry=2, seed=7))
    a = DetectionScores("name one", 1, 0.8, 0.9)
    b = DetectionScores("totally different", 1, 0.8, 0.9)
    apply_ensemble([a, b], model)
    assert a.ensemble_prob == b.ensemble_prob
    assert a.verdict == b.verdict


def test_bayes_posterior_paper_value():
    assert bayes_posterior(0.9, 0.9, 0.01) == pytest.approx(0.0833, abs=5e-4)


def test_bayes_posterior_limits():
    eps = 1e-9
    assert bayes_posterior(1 - eps, 1 - eps, 0.5) == pytest.approx(1.0, abs=1e-6)
    assert bayes_posterior(0.5, 0.5, 0.5) == 0.5


def test_bayes_posterior_domain():
    for bad in [(0.0, 0.9, 0.01), (0.9, 1.0, 0.01), (0.9, 0.9, 0.0), (1.5, 0.9, 0.1)]:
        with pytest.raises(DomainError):
            bayes_posterior(*bad)


def test_prevalence_estimate():
    assert prevalence_estimate(0.1167, 0.09) == pytest.approx(0.0105, abs=1e-4)
    assert prevalence_estimate(0.0, 0.7) == 0.0
    assert prevalence_estimate(1.0, 1.0) == 1.0
    with pytest.raises(DomainError):
        prevalence_estimate(1.2, 0.5)


def test_synthetic_rows_shape():
    rows = synthetic_ensemble_rows(seed=1)
    assert len(rows) == 134
    labels = [lab for _, lab in rows]
    assert labels.count(BOT) == 67 and labels.count(HUMAN) == 67
    assert rows == synthetic_ensemble_rows(seed=1)
