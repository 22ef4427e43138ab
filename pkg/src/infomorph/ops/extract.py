"""Relevant-page extraction: two-stage retrieval + judgment, or exhaustive.

two_stage: cosine-rank every page against the embedded extraction prompt,
keep the top k (ties by doc_id, then page index), then judge each candidate.
exhaustive: judge every page of every document. Either way the result is the
relevant pages ordered by judge score desc, then doc_id, then index.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from infomorph.content.model import Document, PageRef, PageSet, page_set_from
from infomorph.errors import EmptyInput, EngineError
from infomorph.ingest.ingestion import cosine
from infomorph.providers.base import DEFAULT_MODEL, DEFAULT_TAU, Provider


@dataclass(frozen=True)
class ExtractorConfig:
    extraction_prompt: str
    mode: str = "two_stage"  # "two_stage" | "exhaustive"
    k: int = 8
    retrieval_mode: str = "text"  # "text" | "image" | "multimodal"
    model: str = DEFAULT_MODEL
    tau: float = DEFAULT_TAU
    filters: dict = field(default_factory=dict)  # author / media_kind equality, date range

    @classmethod
    def from_config(cls, config: dict) -> "ExtractorConfig":
        prompt = config.get("extraction_prompt", "")
        if not prompt:
            raise EmptyInput("extractor requires an extraction_prompt")
        cfg = cls(
            extraction_prompt=prompt,
            mode=config.get("mode", "two_stage"),
            k=int(config.get("k", 8)),
            retrieval_mode=config.get("retrieval_mode", "text"),
            model=config.get("model", DEFAULT_MODEL),
            tau=float(config.get("tau", DEFAULT_TAU)),
            filters=dict(config.get("filters", {})),
        )
        if cfg.mode not in ("two_stage", "exhaustive"):
            raise EngineError(f"unknown extractor mode {cfg.mode!r}")
        if cfg.k < 1:
            raise EngineError("extractor k must be >= 1")
        return cfg


def _passes_filters(doc: Document, filters: dict) -> bool:
    if not filters:
        return True
    if "author" in filters and (doc.author or "") != filters["author"]:
        return False
    if "media_kind" in filters and doc.media_kind != filters["media_kind"]:
        return False
    created = doc.created_at or ""
    if "date_from" in filters and created < filters["date_from"]:
        return False
    if "date_to" in filters and created > filters["date_to"]:
        return False
    return True


def stage_one_candidates(
    docs: list[Document], cfg: ExtractorConfig, provider: Provider
) -> list[tuple[Document, int]]:
    """Top-k pages by cosine against the embedded prompt; |result| <= k."""
    query = provider.embed(
        cfg.retrieval_mode, [{"text": cfg.extraction_prompt, "image_refs": []}]
    )[0]
    scored = []
    for doc in docs:
        for page in doc.pages:
            if page.embedding is None:
                raise EngineError(
                    f"two_stage extraction requires embeddings; page {page.index} of {doc.doc_id} has none"
                )
            scored.append((-cosine(query, page.embedding), doc.doc_id, page.index, doc))
    scored.sort(key=lambda item: item[:3])
    return [(doc, index) for _, _, index, doc in scored[: cfg.k]]


def extract_relevant(docs: list[Document], cfg: ExtractorConfig, provider: Provider) -> PageSet:
    if not docs:
        raise EmptyInput("extractor needs at least one document")
    docs = [d for d in docs if _passes_filters(d, cfg.filters)]
    if cfg.mode == "two_stage":
        candidates = stage_one_candidates(docs, cfg, provider)
    else:
        candidates = [(doc, page.index) for doc in docs for page in doc.pages]
    refs: list[PageRef] = []
    for doc, index in candidates:
        page = doc.page(index)
        judgment = provider.judge(cfg.model, page, cfg.extraction_prompt, cfg.tau)
        if judgment.verdict == "relevant":
            refs.append(PageRef(doc_id=doc.doc_id, index=index, score=judgment.score, rationale=judgment.rationale))
    return page_set_from(refs)
