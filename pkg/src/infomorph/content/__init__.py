from infomorph.content.canonical import (
    canonical_bytes,
    canonicalize,
    content_hash,
    parse_content,
    sha256_hex,
)
from infomorph.content.model import (
    ARTIFACT,
    DOCUMENT,
    PAGE_SET,
    PLAN_DOCUMENT,
    PLAN_KINDS,
    PLAN_SLIDES,
    PLAN_TABLE,
    Artifact,
    Column,
    Document,
    DocumentPlan,
    Group,
    ImageSlot,
    Page,
    PageRef,
    PageSet,
    Section,
    Slide,
    SlideDeckPlan,
    TablePlan,
    page_set_from,
)
from infomorph.content.patch import apply_patch

__all__ = [
    "ARTIFACT",
    "Artifact",
    "Column",
    "DOCUMENT",
    "Document",
    "DocumentPlan",
    "Group",
    "ImageSlot",
    "PAGE_SET",
    "PLAN_DOCUMENT",
    "PLAN_KINDS",
    "PLAN_SLIDES",
    "PLAN_TABLE",
    "Page",
    "PageRef",
    "PageSet",
    "Section",
    "Slide",
    "SlideDeckPlan",
    "TablePlan",
    "apply_patch",
    "canonical_bytes",
    "canonicalize",
    "content_hash",
    "page_set_from",
    "parse_content",
    "sha256_hex",
]
