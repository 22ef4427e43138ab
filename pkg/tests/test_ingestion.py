from __future__ import annotations

import threading
import warnings
from http.server import BaseHTTPRequestHandler, HTTPServer

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from infomorph.content.model import Document, Page
from infomorph.errors import (
    EngineError,
    FetchError,
    IngestWarning,
    NoContent,
    NotText,
    ParseError,
    ProviderUnavailable,
    UnsupportedFormat,
)
from infomorph.ingest.chunking import chunk_text
from infomorph.ingest.htmltext import extract_main_text
from infomorph.ingest.ingestion import Ingestor, scoped_chat
from infomorph.providers.base import CountingProvider
from infomorph.providers.mock import MockProvider
from infomorph.providers.tokens import normalize_whitespace, sentences


# -- chunking: hand-applied rule ------------------------------------------------

def make_units(count: int = 35) -> list[str]:
    """Sentences of exactly 99 chars: joined length of n units is 100n - 1."""
    units = []
    for i in range(1, count + 1):
        head = f"Sentence {i:02d} "
        units.append(head + "x" * (99 - len(head) - 1) + ".")
    assert all(len(u) == 99 for u in units)
    return units


def test_chunking_rule_hand_derivation():
    units = make_units()
    text = " ".join(units)
    assert len(text) == 3499  # the ~3500-char fixture body
    chunks = chunk_text(text, size=1600, overlap=200)
    # By the documented rule: 16 units fit (1599 <= 1600 < 1699), the carried
    # overlap is the shortest sentence suffix >= 200 chars = 3 units (299).
    assert chunks == [
        " ".join(units[0:16]),
        " ".join(units[13:29]),
        " ".join(units[26:35]),
    ]
    assert [len(c) for c in chunks] == [1599, 1599, 899]


def test_chunking_small_text_single_chunk():
    assert chunk_text("Tiny text. Two sentences.") == ["Tiny text. Two sentences."]


def test_chunking_empty():
    assert chunk_text("   \n\t ") == []


def test_chunking_oversized_sentence_hard_split():
    monster = "y" * 4000
    chunks = chunk_text(monster, size=1600, overlap=200)
    assert all(len(c) <= 1600 for c in chunks)
    assert "".join(chunks) == monster


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(5, 300), min_size=1, max_size=60), st.integers(0, 1000))
def test_chunking_coverage_and_overlap_properties(lengths, seed):
    units = [f"s{i}" + "a" * max(0, n - len(f"s{i}") - 1) + "." for i, n in enumerate(lengths)]
    text = " ".join(units)
    chunks = chunk_text(text, size=400, overlap=80)
    normalized = normalize_whitespace(text)
    assert all(len(c) <= 400 for c in chunks)
    # Every input character belongs to >= 1 chunk: walking the chunks and
    # removing the shared prefix reconstructs the normalized text exactly.
    rebuilt = chunks[0]
    for prev, cur in zip(chunks, chunks[1:]):
        prev_units = sentences(prev)
        shared = 0
        for k in range(len(prev_units), 0, -1):
            if cur.startswith(" ".join(prev_units[-k:])):
                shared = k
                break
        overlap_text = " ".join(prev_units[-shared:]) if shared else ""
        addition = cur[len(overlap_text):].lstrip(" ") if overlap_text else cur
        rebuilt = rebuilt + (" " if addition else "") + addition
    assert rebuilt == normalized


# -- html main-text extraction ---------------------------------------------------

def test_html_density_extraction_strips_boilerplate():
    html = """
    <html><head><title>Travel Blog</title><script>var x = 1;</script></head>
    <body>
      <nav>Home | About | Contact | Archive | Subscribe now</nav>
      <div id="main">
        <p>Busan has wonderful historical sites. The seafood dining scene is famous.</p>
        <p>Families enjoy harbor activities in early October.</p>
      </div>
      <footer>Copyright 2026. All rights reserved. Privacy. Terms.</footer>
    </body></html>
    """
    text, title = extract_main_text(html)
    assert title == "Travel Blog"
    assert "historical sites" in text
    assert "Copyright" not in text
    assert "Home | About" not in text
    assert "var x" not in text


def test_html_no_body_falls_back_to_all_text():
    text, _ = extract_main_text("just bare text, no markup")
    assert text == "just bare text, no markup"


# -- file ingestion -----------------------------------------------------------------

def test_text_adapter_form_feed_pages(tmp_path, blobs):
    path = tmp_path / "notes.txt"
    path.write_text("page one text\fpage two text\fpage three text", encoding="utf-8")
    doc = Ingestor(blobs).ingest_file(str(path))
    assert doc.media_kind == "text"
    assert doc.page_count == 3
    assert [p.text for p in doc.pages] == ["page one text", "page two text", "page three text"]
    assert [p.index for p in doc.pages] == [1, 2, 3]


def test_zero_byte_file_parse_error(tmp_path, blobs):
    path = tmp_path / "empty.txt"
    path.write_bytes(b"")
    with pytest.raises(ParseError):
        Ingestor(blobs).ingest_file(str(path))


def test_unknown_extension_unsupported(tmp_path, blobs):
    path = tmp_path / "weird.zzz"
    path.write_text("x")
    with pytest.raises(UnsupportedFormat):
        Ingestor(blobs).ingest_file(str(path))


def test_doc_id_is_content_derived(tmp_path, blobs):
    a = tmp_path / "a.txt"
    b = tmp_path / "b.txt"
    a.write_text("same bytes")
    b.write_text("same bytes")
    ing = Ingestor(blobs)
    assert ing.ingest_file(str(a)).doc_id == ing.ingest_file(str(b)).doc_id
    b.write_text("different bytes")
    assert ing.ingest_file(str(a)).doc_id != ing.ingest_file(str(b)).doc_id


@settings(max_examples=30, deadline=None)
@given(st.lists(st.text(alphabet=st.characters(blacklist_characters="\f", blacklist_categories=("Cs",)), max_size=80), min_size=1, max_size=6))
def test_adapter_page_contiguity_fuzz(tmp_path_factory, texts):
    tmp = tmp_path_factory.mktemp("fuzz")
    path = tmp / "doc.txt"
    path.write_text("\f".join(texts) or "x", encoding="utf-8")
    from infomorph.store.blobs import BlobStore

    doc = Ingestor(BlobStore(None)).ingest_file(str(path))
    assert doc.page_count == len(doc.pages)
    assert [p.index for p in doc.pages] == list(range(1, len(doc.pages) + 1))
    doc.validate()


# -- url ingestion ---------------------------------------------------------------------

class _FixtureHandler(BaseHTTPRequestHandler):
    def log_message(self, *args):
        pass

    def do_GET(self):
        if self.path == "/page":
            body_text = " ".join(make_units())
            html = (
                "<html><head><title>Fixture Page</title></head><body>"
                "<nav>nav nav nav</nav>"
                f"<article><p>{body_text}</p></article>"
                "<footer>footer</footer></body></html>"
            ).encode("utf-8")
            self.send_response(200)
            self.send_header("content-type", "text/html; charset=utf-8")
            self.end_headers()
            self.wfile.write(html)
        elif self.path == "/empty":
            self.send_response(200)
            self.send_header("content-type", "text/html")
            self.end_headers()
            self.wfile.write(b"<html><body></body></html>")
        elif self.path == "/image":
            self.send_response(200)
            self.send_header("content-type", "image/png")
            self.end_headers()
            self.wfile.write(b"\x89PNG\r\n\x1a\nfake")
        elif self.path == "/plain":
            self.send_response(200)
            self.send_header("content-type", "text/plain")
            self.end_headers()
            self.wfile.write(b"Plain text body. Second sentence.")
        else:
            self.send_response(404)
            self.send_header("content-type", "text/plain")
            self.end_headers()
            self.wfile.write(b"not found")


@pytest.fixture(scope="module")
def fixture_server():
    server = HTTPServer(("127.0.0.1", 0), _FixtureHandler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_port}"
    server.shutdown()


def test_ingest_url_chunks_match_hand_rule(fixture_server, blobs):
    doc = Ingestor(blobs).ingest_url(f"{fixture_server}/page")
    units = make_units()
    assert doc.media_kind == "html"
    assert doc.title == "Fixture Page"
    assert [p.text for p in doc.pages] == [
        " ".join(units[0:16]),
        " ".join(units[13:29]),
        " ".join(units[26:35]),
    ]


def test_ingest_url_404(fixture_server, blobs):
    with pytest.raises(FetchError) as err:
        Ingestor(blobs).ingest_url(f"{fixture_server}/missing")
    assert err.value.status == 404


def test_ingest_url_image_not_text(fixture_server, blobs):
    with pytest.raises(NotText):
        Ingestor(blobs).ingest_url(f"{fixture_server}/image")


def test_ingest_url_empty_body_zero_pages_plus_warning(fixture_server, blobs):
    with pytest.warns(IngestWarning):
        doc = Ingestor(blobs).ingest_url(f"{fixture_server}/empty")
    assert doc.page_count == 0


def test_ingest_url_plain_text(fixture_server, blobs):
    doc = Ingestor(blobs).ingest_url(f"{fixture_server}/plain")
    assert doc.page_count == 1
    assert doc.pages[0].text == "Plain text body. Second sentence."


# -- enrichment ---------------------------------------------------------------------------

def test_enrich_adds_summaries_and_embeddings(blobs, cache):
    provider = MockProvider(blobs)
    doc = Document(
        doc_id="d", origin="o", media_kind="text", title="T",
        pages=(Page(1, "The seafood market is famous. Visitors love it."),),
    )
    enriched = Ingestor(blobs, cache).enrich(doc, provider)
    page = enriched.pages[0]
    assert page.summary == "The seafood market is famous."
    assert page.embedding is not None and len(page.embedding) == 256
    assert enriched.summary == "The seafood market is famous."


def test_enrich_idempotent_zero_provider_calls(blobs, cache):
    counting = CountingProvider(MockProvider(blobs))
    doc = Document(
        doc_id="d", origin="o", media_kind="text", title="T",
        pages=(Page(1, "First page text."), Page(2, "Second page text.")),
    )
    ing = Ingestor(blobs, cache)
    enriched = ing.enrich(doc, counting)
    first_calls = counting.calls
    assert first_calls > 0
    again = ing.enrich(
        Document(doc_id="d", origin="o", media_kind="text", title="T", pages=doc.pages), counting
    )
    assert counting.calls == first_calls  # cache served everything
    from infomorph.content.canonical import canonicalize

    assert canonicalize(again) == canonicalize(enriched)


def test_enrich_empty_document_no_calls(blobs, cache):
    counting = CountingProvider(MockProvider(blobs))
    doc = Document(doc_id="d", origin="o", media_kind="text", title="T", pages=())
    out = Ingestor(blobs, cache).enrich(doc, counting)
    assert counting.calls == 0
    assert out is doc


def test_enrich_page_failure_non_fatal(blobs, cache):
    class Flaky(MockProvider):
        def complete(self, model, system, context, prompt):
            raise ProviderUnavailable("down")

    doc = Document(doc_id="d", origin="o", media_kind="text", title="T", pages=(Page(1, "text."),))
    with pytest.warns(IngestWarning):
        out = Ingestor(blobs, cache).enrich(doc, Flaky(blobs))
    assert out.pages[0].summary is None


# -- scoped chat ------------------------------------------------------------------------------

@pytest.fixture
def enriched_doc(blobs, cache):
    provider = MockProvider(blobs)
    doc = Document(
        doc_id="chatdoc", origin="o", media_kind="text", title="T",
        pages=(
            Page(1, "Ferry schedules for the bay crossing."),
            Page(2, "Family activities near the harbor include seafood tastings."),
            Page(3, "Budget figures for the quarter."),
        ),
    )
    return Ingestor(blobs, cache).enrich(doc, provider)


def test_chat_cites_matching_page(enriched_doc, blobs):
    out = scoped_chat(enriched_doc, "What family activities are near the harbor?", MockProvider(blobs))
    assert out["cited_pages"] == [2]
    assert out["answer"].startswith("Family activities near the harbor")


def test_chat_no_overlap_no_citations(enriched_doc, blobs):
    out = scoped_chat(enriched_doc, "zebra migration patterns", MockProvider(blobs))
    assert out["answer"] == "no relevant content"
    assert out["cited_pages"] == []


def test_chat_zero_pages_no_content(blobs):
    doc = Document(doc_id="d", origin="o", media_kind="text", title="T", pages=())
    with pytest.raises(NoContent):
        scoped_chat(doc, "anything", MockProvider(blobs))


def test_chat_unenriched_rejected(blobs):
    doc = Document(doc_id="d", origin="o", media_kind="text", title="T", pages=(Page(1, "x."),))
    with pytest.raises(EngineError):
        scoped_chat(doc, "anything", MockProvider(blobs))


def test_chat_sandbox_never_leaks_other_documents(blobs, cache):
    """Instrumented provider: every context ref must carry this doc's id."""
    provider = MockProvider(blobs)
    ing = Ingestor(blobs, cache)
    doc_a = ing.enrich(
        Document(doc_id="aaa", origin="o", media_kind="text", title="A",
                 pages=(Page(1, "Shared keyword harbor appears here."),)),
        provider,
    )
    ing.enrich(
        Document(doc_id="bbb", origin="o", media_kind="text", title="B",
                 pages=(Page(1, "Another harbor document that must stay out."),)),
        provider,
    )

    seen_context: list[str] = []

    class Recording(MockProvider):
        def complete(self, model, system, context, prompt):
            seen_context.extend(context)
            return super().complete(model, system, context, prompt)

    scoped_chat(doc_a, "harbor", Recording(blobs))
    import json

    assert seen_context
    for ref in seen_context:
        assert json.loads(ref)["doc_id"] == "aaa"
        assert "stay out" not in ref
