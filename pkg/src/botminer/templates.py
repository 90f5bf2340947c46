"""Template-based commit message scoring.

Messages are greedily grouped: each message joins the first existing
group whose template (the group's founding message) it resembles more
than a similarity threshold, otherwise it founds a new group. The score
1 - #templates/#messages is high when most messages collapse onto a few
templates, which is typical of bots.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import alignment
from .errors import EmptyInput
from .records import AuthorActivity

DEFAULT_KB = 0.40
DEFAULT_CAP = 1000


@dataclass(frozen=True)
class TokenDoc:
    tokens: tuple[str, ...]
    origin_index: int

    @classmethod
    def from_text(cls, text: str, origin_index: int) -> "TokenDoc":
        # Whitespace tokenization, case preserved; empty message -> no tokens.
        return cls(tokens=tuple(text.split()), origin_index=origin_index)


@dataclass
class TemplateGrouping:
    templates: list[TokenDoc]
    groups: dict[int, list[int]]  # template position -> member doc indices
    k_b: float
    score: float


def template_score(
    messages: Sequence[str], k_b: float = DEFAULT_KB, combined: bool = True
) -> TemplateGrouping:
    """Greedy first-match grouping of messages in input order.

    A message joins the first group (in template-creation order) whose
    template similarity strictly exceeds k_b.
    """
    if not messages:
        raise EmptyInput("no messages to score")
    if not 0.0 <= k_b < 1.0:
        raise ValueError(f"k_b must be in [0, 1): {k_b}")
    docs = [TokenDoc.from_text(m, i) for i, m in enumerate(messages)]
    encoded = alignment.encode_tokens([d.tokens for d in docs])
    template_idx: list[int] = []
    groups: dict[int, list[int]] = {}
    for i, enc in enumerate(encoded):
        for gi, ti in enumerate(template_idx):
            sim = alignment.percent_identity(enc, encoded[ti], combined=combined)
            if sim > k_b:
                groups[gi].append(i)
                break
        else:
            gi = len(template_idx)
            template_idx.append(i)
            groups[gi] = [i]
    score = 1.0 - len(template_idx) / len(docs)
    return TemplateGrouping(
        templates=[docs[t] for t in template_idx],
        groups=groups,
        k_b=k_b,
        score=score,
    )


def subsample_stride(n: int, cap: int) -> list[int]:
    """At most ``cap`` strictly increasing indices spread evenly over [0, n)."""
    if n <= cap:
        return list(range(n))
    return [i * n // cap for i in range(cap)]


def bim_score(
    author: AuthorActivity,
    k_b: float = DEFAULT_KB,
    cap: int = DEFAULT_CAP,
    combined: bool = True,
) -> float:
    """Template score of an author's messages in chronological order.

    Authors with more than ``cap`` commits are stride-subsampled to bound
    the quadratic grouping cost.
    """
    if cap < 2:
        raise ValueError(f"cap must be >= 2: {cap}")
    ordered = sorted(author.commits, key=lambda c: c.timestamp)
    messages = [c.message for c in ordered]
    picked = [messages[i] for i in subsample_stride(len(messages), cap)]
    return template_score(picked, k_b=k_b, combined=combined).score
