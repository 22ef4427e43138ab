"""Main-text extraction from HTML by the documented text-density heuristic.

Rule: strip script/style/noscript/template/svg/nav/header/footer/aside
subtrees entirely; candidates are body, article, main, section, and div
elements; each scores total_text_length / (1 + descendant_element_count);
the highest-scoring candidate wins, ties to the earliest in document order.
Falls back to all remaining text when no candidate exists.
"""

from __future__ import annotations

from html.parser import HTMLParser

from infomorph.providers.tokens import normalize_whitespace

_DROP_TAGS = {"script", "style", "noscript", "template", "svg", "nav", "header", "footer", "aside"}
_CANDIDATE_TAGS = {"body", "article", "main", "section", "div"}
_VOID_TAGS = {"br", "hr", "img", "input", "meta", "link", "area", "base", "col", "embed", "source", "track", "wbr"}


class _Element:
    __slots__ = ("tag", "children", "order")

    def __init__(self, tag: str, order: int):
        self.tag = tag
        self.children: list = []  # _Element or str
        self.order = order

    def text_len(self) -> int:
        total = 0
        for child in self.children:
            total += len(child) if isinstance(child, str) else child.text_len()
        return total

    def element_count(self) -> int:
        total = 0
        for child in self.children:
            if isinstance(child, _Element):
                total += 1 + child.element_count()
        return total

    def text(self) -> str:
        parts = []
        for child in self.children:
            parts.append(child if isinstance(child, str) else child.text())
        return " ".join(p for p in parts if p)

    def walk(self):
        yield self
        for child in self.children:
            if isinstance(child, _Element):
                yield from child.walk()


class _TreeBuilder(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.root = _Element("#root", 0)
        self.stack = [self.root]
        self.order = 0
        self.dropping = 0
        self.title_parts: list[str] = []
        self.in_title = False

    def handle_starttag(self, tag, attrs):
        if tag == "title":
            self.in_title = True
        if tag in _DROP_TAGS:
            self.dropping += 1
            return
        if self.dropping:
            return
        if tag in _VOID_TAGS:
            return
        self.order += 1
        element = _Element(tag, self.order)
        self.stack[-1].children.append(element)
        self.stack.append(element)

    def handle_endtag(self, tag):
        if tag == "title":
            self.in_title = False
        if tag in _DROP_TAGS:
            self.dropping = max(0, self.dropping - 1)
            return
        if self.dropping or tag in _VOID_TAGS:
            return
        for i in range(len(self.stack) - 1, 0, -1):
            if self.stack[i].tag == tag:
                del self.stack[i:]
                break

    def handle_data(self, data):
        if self.in_title:
            self.title_parts.append(data)
            return
        if self.dropping:
            return
        cleaned = normalize_whitespace(data)
        if cleaned:
            self.stack[-1].children.append(cleaned)


def extract_main_text(html: str) -> tuple[str, str]:
    """(main text, title). Pure function of the markup."""
    builder = _TreeBuilder()
    builder.feed(html)
    builder.close()
    title = normalize_whitespace(" ".join(builder.title_parts))
    candidates = [e for e in builder.root.walk() if e.tag in _CANDIDATE_TAGS]
    if not candidates:
        return normalize_whitespace(builder.root.text()), title
    best = max(candidates, key=lambda e: (e.text_len() / (1 + e.element_count()), -e.order))
    return normalize_whitespace(best.text()), title
