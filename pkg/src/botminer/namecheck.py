"""Name-based bot detection.

An author id of the form ``name <email>`` is flagged when the substring
"bot" occurs in the name or in the local part of the email with a
non-alphabetic character (or the string boundary) on each side. The email
domain is never scanned, so ids like ``hr@future-bot.ai`` do not match.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

# Digits and punctuation count as non-alpha, so "bot42" and "[bot]" match;
# "Abbot" and "Botha" do not.
_BOT_RE = re.compile(r"(?<![a-zA-Z])bot(?![a-zA-Z])", re.IGNORECASE)


@dataclass(frozen=True)
class NameVerdict:
    is_bot: bool
    matched_in: str  # "name", "email_local", or "none"


def split_author_id(author_id: str) -> tuple[str, str]:
    """Split ``name <email>`` on the last ``<...>`` pair.

    Without a bracketed email the whole string is the name and the email
    is empty.
    """
    lt = author_id.rfind("<")
    if lt >= 0:
        gt = author_id.rfind(">")
        if gt > lt:
            return author_id[:lt].strip(), author_id[lt + 1 : gt]
    return author_id.strip(), ""


def is_bot_name(author_id: str) -> NameVerdict:
    name, email = split_author_id(author_id)
    if _BOT_RE.search(name):
        return NameVerdict(is_bot=True, matched_in="name")
    local = email.split("@", 1)[0]
    if _BOT_RE.search(local):
        return NameVerdict(is_bot=True, matched_in="email_local")
    return NameVerdict(is_bot=False, matched_in="none")
