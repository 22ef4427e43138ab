"""Shared text rules for the deterministic mock provider.

Everything here is part of the documented mock contract (docs/mock-provider.md):
tests hand-compute against these exact rules, so change them only together
with the committed goldens.
"""

from __future__ import annotations

import re
from collections import Counter

_TOKEN_RE = re.compile(r"[a-z0-9]+")
_SENTENCE_SPLIT_RE = re.compile(r"(?<=[.!?])\s+")
_WS_RE = re.compile(r"\s+")

# Grammatical stop words, conversational fillers, and instruction verbs.
# Frozen: judge scores and triage fixtures are hand-derived from this set.
STOP_WORDS = frozenset(
    """
    a an and are as at be been but by can could did do does for from had has
    have her here him his how i if in into is it its just like may me might
    more most much my of on one or our out over own per please shall she
    should so some such than that the their them then there these they this
    those to under up us very was we were what when where which while who
    will with would you your
    need help looking want
    create extract find show list give make generate provide use using focus
    specifically
    """.split()
)

# A negation marker flips the rest of its clause into negative keywords.
NEGATION_MARKERS = frozenset({"avoid", "no", "not", "without", "exclude", "excluding", "skip", "never"})

_CLAUSE_SPLIT_RE = re.compile(r"[.;,\n]+")


def tokens(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


def fold_plural(token: str) -> str:
    """Documented plural folding: ...ies -> ...y, else strip a trailing s
    (length >= 4, not ss), so 'fees'~'fee' and 'activities'~'activity'."""
    if len(token) > 4 and token.endswith("ies"):
        return token[:-3] + "y"
    if len(token) >= 4 and token.endswith("s") and not token.endswith("ss"):
        return token[:-1]
    return token


def content_tokens(text: str) -> list[str]:
    """Alphabetic tokens of length >= 3, stop words removed, plural-folded."""
    return [
        fold_plural(t)
        for t in tokens(text)
        if len(t) >= 3 and t.isalpha() and t not in STOP_WORDS
    ]


def normalize_whitespace(text: str) -> str:
    return _WS_RE.sub(" ", text).strip()


def sentences(text: str) -> list[str]:
    normalized = normalize_whitespace(text)
    if not normalized:
        return []
    return [s for s in _SENTENCE_SPLIT_RE.split(normalized) if s]


def prompt_keywords(prompt: str) -> tuple[set[str], set[str]]:
    """Split a prompt into (positive, negative) keyword sets.

    Clauses are delimited by ``.;,`` and newlines; within a clause, tokens
    after a negation marker are negative keywords. Negatives win on overlap.
    """
    positive: set[str] = set()
    negative: set[str] = set()
    for clause in _CLAUSE_SPLIT_RE.split(prompt.lower()):
        negating = False
        for tok in _TOKEN_RE.findall(clause):
            if tok in NEGATION_MARKERS:
                negating = True
                continue
            if len(tok) < 3 or not tok.isalpha() or tok in STOP_WORDS:
                continue
            (negative if negating else positive).add(fold_plural(tok))
    positive -= negative
    return positive, negative


def overlap_score(text: str, prompt: str) -> tuple[float, list[str], list[str]]:
    """The documented judge formula.

    score = max(0, |text ∩ positive| - |text ∩ negative|) / |positive|,
    with set overlap over content tokens. A prompt with no positive keywords
    scores 1.0 unless a negative keyword matches.
    """
    positive, negative = prompt_keywords(prompt)
    text_tokens = set(content_tokens(text))
    matched = sorted(text_tokens & positive)
    negated = sorted(text_tokens & negative)
    if not positive:
        return (0.0 if negated else 1.0), matched, negated
    raw = (len(matched) - len(negated)) / len(positive)
    return max(0.0, min(1.0, raw)), matched, negated


def extractive_sentence(text: str, limit: int = 480) -> str:
    """Pick the first sentence containing the text's highest-frequency term.

    Term frequency is over content tokens; ties break to the lexicographically
    smallest term. Falls back to the first sentence when no content tokens
    exist. The result is truncated to ``limit`` characters.
    """
    sents = sentences(text)
    if not sents:
        return ""
    counts = Counter(content_tokens(text))
    if not counts:
        return sents[0][:limit]
    top = min(t for t, c in counts.items() if c == max(counts.values()))
    for sent in sents:
        if top in content_tokens(sent):
            return sent[:limit]
    return sents[0][:limit]
