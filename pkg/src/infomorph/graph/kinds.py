"""Node kinds, the scatter/gather/transduce taxonomy, and port typing.

The port table is the contract ``connect`` enforces: which content kinds a
node accepts per input port, whether extra ports repeat (variadic), and what
the node produces. Builders take exactly one plan of their flavor on port 0
plus an optional template artifact on port 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from infomorph.content.model import (
    ARTIFACT,
    DOCUMENT,
    PAGE_SET,
    PLAN_DOCUMENT,
    PLAN_SLIDES,
    PLAN_TABLE,
)


class NodeKind(str, Enum):
    FILE_SOURCE = "FileSource"
    URL_SOURCE = "UrlSource"
    PAGE_PREVIEW = "PagePreview"
    RELEVANT_PAGE_EXTRACTOR = "RelevantPageExtractor"
    DOCUMENT_PLANNER = "DocumentPlanner"
    SLIDE_DECK_PLANNER = "SlideDeckPlanner"
    SPREADSHEET_PLANNER = "SpreadsheetPlanner"
    DOCUMENT_EDITOR = "DocumentEditor"
    SLIDE_DECK_VIEWER = "SlideDeckViewer"
    SPREADSHEET_VIEWER = "SpreadsheetViewer"
    DOCUMENT_BUILDER = "DocumentBuilder"
    SLIDE_DECK_BUILDER = "SlideDeckBuilder"
    SPREADSHEET_BUILDER = "SpreadsheetBuilder"


SOURCE = "source"
SCATTER = "scatter"
GATHER = "gather"
VIEW_EDIT = "view-edit"
TRANSDUCE = "transduce"

TAXONOMY: dict[NodeKind, str] = {
    NodeKind.FILE_SOURCE: SOURCE,
    NodeKind.URL_SOURCE: SOURCE,
    NodeKind.PAGE_PREVIEW: SCATTER,
    NodeKind.RELEVANT_PAGE_EXTRACTOR: SCATTER,
    NodeKind.DOCUMENT_PLANNER: GATHER,
    NodeKind.SLIDE_DECK_PLANNER: GATHER,
    NodeKind.SPREADSHEET_PLANNER: GATHER,
    NodeKind.DOCUMENT_EDITOR: VIEW_EDIT,
    NodeKind.SLIDE_DECK_VIEWER: VIEW_EDIT,
    NodeKind.SPREADSHEET_VIEWER: VIEW_EDIT,
    NodeKind.DOCUMENT_BUILDER: TRANSDUCE,
    NodeKind.SLIDE_DECK_BUILDER: TRANSDUCE,
    NodeKind.SPREADSHEET_BUILDER: TRANSDUCE,
}


@dataclass(frozen=True)
class PortDef:
    accepts: frozenset[str]
    required: bool = True


@dataclass(frozen=True)
class PortSpec:
    ports: tuple[PortDef, ...]
    variadic: bool
    output: str

    @property
    def min_inputs(self) -> int:
        return sum(1 for p in self.ports if p.required)

    @property
    def max_inputs(self) -> int | None:
        return None if self.variadic else len(self.ports)

    def accepts_at(self, port: int) -> frozenset[str] | None:
        """Accepted kinds at a port index, or None when the port is out of range."""
        if port < 0:
            return None
        if port < len(self.ports):
            return self.ports[port].accepts
        if self.variadic and self.ports:
            return self.ports[-1].accepts
        return None


def _spec(ports: tuple[PortDef, ...], variadic: bool, output: str) -> PortSpec:
    return PortSpec(ports=ports, variadic=variadic, output=output)


PORT_SPECS: dict[NodeKind, PortSpec] = {
    NodeKind.FILE_SOURCE: _spec((), False, DOCUMENT),
    NodeKind.URL_SOURCE: _spec((), False, DOCUMENT),
    NodeKind.PAGE_PREVIEW: _spec((PortDef(frozenset({DOCUMENT, PAGE_SET})),), False, PAGE_SET),
    NodeKind.RELEVANT_PAGE_EXTRACTOR: _spec((PortDef(frozenset({DOCUMENT})),), True, PAGE_SET),
    NodeKind.DOCUMENT_PLANNER: _spec((PortDef(frozenset({PAGE_SET, PLAN_DOCUMENT})),), True, PLAN_DOCUMENT),
    NodeKind.SLIDE_DECK_PLANNER: _spec(
        (PortDef(frozenset({PAGE_SET, PLAN_DOCUMENT, PLAN_SLIDES})),), True, PLAN_SLIDES
    ),
    NodeKind.SPREADSHEET_PLANNER: _spec((PortDef(frozenset({PAGE_SET, PLAN_TABLE})),), True, PLAN_TABLE),
    NodeKind.DOCUMENT_EDITOR: _spec((PortDef(frozenset({PLAN_DOCUMENT})),), False, PLAN_DOCUMENT),
    NodeKind.SLIDE_DECK_VIEWER: _spec((PortDef(frozenset({PLAN_SLIDES})),), False, PLAN_SLIDES),
    NodeKind.SPREADSHEET_VIEWER: _spec((PortDef(frozenset({PLAN_TABLE})),), False, PLAN_TABLE),
    NodeKind.DOCUMENT_BUILDER: _spec(
        (PortDef(frozenset({PLAN_DOCUMENT})), PortDef(frozenset({ARTIFACT}), required=False)), False, ARTIFACT
    ),
    NodeKind.SLIDE_DECK_BUILDER: _spec(
        (PortDef(frozenset({PLAN_SLIDES})), PortDef(frozenset({ARTIFACT}), required=False)), False, ARTIFACT
    ),
    NodeKind.SPREADSHEET_BUILDER: _spec(
        (PortDef(frozenset({PLAN_TABLE})), PortDef(frozenset({ARTIFACT}), required=False)), False, ARTIFACT
    ),
}

PLANNER_KINDS = (NodeKind.DOCUMENT_PLANNER, NodeKind.SLIDE_DECK_PLANNER, NodeKind.SPREADSHEET_PLANNER)
VIEWER_KINDS = (NodeKind.DOCUMENT_EDITOR, NodeKind.SLIDE_DECK_VIEWER, NodeKind.SPREADSHEET_VIEWER)
BUILDER_KINDS = (NodeKind.DOCUMENT_BUILDER, NodeKind.SLIDE_DECK_BUILDER, NodeKind.SPREADSHEET_BUILDER)
SOURCE_KINDS = (NodeKind.FILE_SOURCE, NodeKind.URL_SOURCE)

# Kinds whose evaluators call the provider; the others replay stored state.
PROVIDER_BACKED_KINDS = (NodeKind.RELEVANT_PAGE_EXTRACTOR,) + PLANNER_KINDS


def output_kind(kind: NodeKind) -> str:
    return PORT_SPECS[kind].output
