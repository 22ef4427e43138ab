"""Sentence-aligned chunking for URL/HTML content.

The documented rule (chunk size 1600 chars, overlap 200):

  1. Whitespace-normalize the text; split into sentences at ``[.!?]`` followed
     by whitespace. A single sentence longer than the chunk size is hard-split
     into chunk-size pieces.
  2. Pack sentences greedily, joined by single spaces, while the chunk stays
     within the size limit; when the next sentence would overflow, emit the
     chunk.
  3. The next chunk starts with the shortest suffix of whole sentences from
     the emitted chunk whose joined length is >= the overlap — never the whole
     chunk, and shortened from the front if the next sentence would not fit
     after it.

Every normalized input character lands in at least one chunk; a trailing
all-overlap remainder is not emitted twice.
"""

from __future__ import annotations

from infomorph.providers.tokens import normalize_whitespace, sentences

CHUNK_SIZE = 1600
CHUNK_OVERLAP = 200


def _split_oversized(sentence: str, size: int) -> list[str]:
    return [sentence[i : i + size] for i in range(0, len(sentence), size)]


def _joined_len(parts: list[str]) -> int:
    if not parts:
        return 0
    return sum(len(p) for p in parts) + len(parts) - 1


def overlap_suffix(parts: list[str], overlap: int) -> list[str]:
    """Shortest sentence suffix of joined length >= overlap, never all of parts."""
    suffix: list[str] = []
    for sentence in reversed(parts):
        suffix.insert(0, sentence)
        if _joined_len(suffix) >= overlap:
            break
    if len(suffix) == len(parts):
        suffix = suffix[1:]
    return suffix


def chunk_text(text: str, size: int = CHUNK_SIZE, overlap: int = CHUNK_OVERLAP) -> list[str]:
    normalized = normalize_whitespace(text)
    if not normalized:
        return []
    units: list[str] = []
    for sentence in sentences(normalized):
        if len(sentence) > size:
            units.extend(_split_oversized(sentence, size))
        else:
            units.append(sentence)

    chunks: list[str] = []
    current: list[str] = []
    carried = 0  # sentences at the head of `current` repeated from the previous chunk
    for unit in units:
        if current and _joined_len(current + [unit]) > size:
            chunks.append(" ".join(current))
            tail = overlap_suffix(current, overlap)
            while tail and _joined_len(tail + [unit]) > size:
                tail = tail[1:]
            current = tail + [unit]
            carried = len(tail)
        else:
            current.append(unit)
    if current[carried:] or not chunks:
        chunks.append(" ".join(current))
    return chunks
