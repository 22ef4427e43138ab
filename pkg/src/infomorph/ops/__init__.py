from infomorph.ops.build import build, render_csv, render_markdown
from infomorph.ops.extract import ExtractorConfig, extract_relevant, stage_one_candidates
from infomorph.ops.images import image_op, slot_patch_op
from infomorph.ops.plans import plan
from infomorph.ops.registry import build_registry
from infomorph.ops.synthesize import detect_intents, synthesize_workflow
from infomorph.ops.triage import SourceTriage, TriageEntry, parse_conversation, triage_sources
from infomorph.ops.xlsx import write_xlsx

__all__ = [
    "ExtractorConfig",
    "SourceTriage",
    "TriageEntry",
    "build",
    "build_registry",
    "detect_intents",
    "extract_relevant",
    "image_op",
    "parse_conversation",
    "plan",
    "render_csv",
    "render_markdown",
    "slot_patch_op",
    "stage_one_candidates",
    "synthesize_workflow",
    "triage_sources",
    "write_xlsx",
]
