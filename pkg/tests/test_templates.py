import pytest

from botminer.alignment import similarity
from botminer.errors import EmptyInput
from botminer.records import AuthorActivity, CommitRecord
from botminer.templates import bim_score, subsample_stride, template_score


def make_author(messages, author_id="A <a@x.com>"):
    commits = tuple(
        CommitRecord(
            author_id=author_id,
            commit_hash=f"{i:040x}",
            timestamp=i * 60,
            tz_offset=0,
            files=(),
            projects=(),
            message=m,
        )
        for i, m in enumerate(messages)
    )
    return AuthorActivity(author_id=author_id, commits=commits)


def brute_force_grouping(messages, k_b):
    """Greedy first-match reference written directly from the loop contract."""
    templates = []
    assignment = {}
    for i, msg in enumerate(messages):
        placed = False
        for gi, t in enumerate(templates):
            if similarity(msg.split(), messages[t].split()) > k_b:
                assignment[i] = gi
                placed = True
                break
        if not placed:
            assignment[i] = len(templates)
            templates.append(i)
    return templates, assignment


def test_identical_messages_single_template():
    g = template_score(["update html,"] * 739)
    assert len(g.templates) == 1
    assert g.score == 1 - 1 / 739
    assert g.groups[0] == list(range(739))


def test_single_message_scores_zero():
    g = template_score(["anything at all"])
    assert g.score == 0.0
    assert len(g.templates) == 1


def test_dissimilar_messages_two_templates():
    g = template_score(
        ["fix parser crash on empty input", "release notes for version one"], k_b=0.4
    )
    assert len(g.templates) == 2
    assert g.score == 0.0


def test_template_is_first_member_of_its_group():
    g = template_score(["aa bb", "aa bb", "cc dd", "cc dd ee"], k_b=0.4)
    for gi, tdoc in enumerate(g.templates):
        assert g.groups[gi][0] == tdoc.origin_index


def test_every_document_in_exactly_one_group():
    msgs = ["a b", "a c", "x y z", "a b", "q"]
    g = template_score(msgs, k_b=0.4)
    members = sorted(i for group in g.groups.values() for i in group)
    assert members == list(range(len(msgs)))


def test_empty_messages_group_together():
    g = template_score(["", "", "real message"], k_b=0.4)
    assert len(g.templates) == 2


def test_strict_threshold_inequality():
    # similarity("a b", "a c") == 0.5: at k_b=0.5 it must NOT join.
    assert similarity(["a", "b"], ["a", "c"]) == 0.5
    assert len(template_score(["a b", "a c"], k_b=0.5).templates) == 2
    assert len(template_score(["a b", "a c"], k_b=0.49).templates) == 1


def test_matches_brute_force_reference():
    import random

    rng = random.Random(42)
    words = ["v", "w", "x", "y", "z"]
    for _ in range(50):
        msgs = [
            " ".join(rng.choices(words, k=rng.randint(0, 4)))
            for _ in range(rng.randint(1, 10))
        ]
        g = template_score(msgs, k_b=0.4)
        ref_templates, ref_assignment = brute_force_grouping(msgs, 0.4)
        assert [t.origin_index for t in g.templates] == ref_templates
        got_assignment = {
            i: gi for gi, group in g.groups.items() for i in group
        }
        assert got_assignment == ref_assignment


def test_empty_input_raises():
    with pytest.raises(EmptyInput):
        template_score([])


def test_score_monotonicity_duplicate_never_decreases():
    msgs = ["fix the build", "update docs now", "fix the build"]
    base = template_score(msgs, k_b=0.4).score
    more = template_score(msgs + ["fix the build"], k_b=0.4).score
    assert more >= base


def test_subsample_stride():
    assert subsample_stride(5, 10) == [0, 1, 2, 3, 4]
    picked = subsample_stride(100, 10)
    assert len(picked) == 10
    assert picked == sorted(set(picked))
    assert picked[0] == 0


def test_bim_score_basics():
    assert bim_score(make_author(["only commit"])) == 0.0
    assert bim_score(make_author(["same msg", "same msg"])) == 0.5
    assert bim_score(make_author(["Initial Commit"] * 10)) == pytest.approx(0.9)


def test_bim_score_cap_subsamples():
    author = make_author(["repeat me"] * 50)
    assert bim_score(author, cap=10) == 1 - 1 / 10


def test_bim_score_uses_chronological_order():
    # Same multiset of messages, shuffled commit order: stride sample over
    # the time-sorted list must give the same score.
    msgs = [f"msg {i % 3}" for i in range(30)]
    a = make_author(msgs)
    commits = list(a.commits)[::-1]
    b = AuthorActivity(author_id=a.author_id, commits=tuple(commits))
    assert bim_score(a, cap=7) == bim_score(b, cap=7)


def test_bim_score_cap_validation():
    with pytest.raises(ValueError):
        bim_score(make_author(["x"]), cap=1)
