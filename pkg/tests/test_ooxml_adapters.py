from __future__ import annotations

import pytest

from fixture_builders import make_docx, make_pdf, make_png, make_pptx, make_xlsx
from infomorph.content.model import Column, TablePlan
from infomorph.errors import ParseError
from infomorph.ingest.adapters import parse_bytes
from infomorph.ingest.ingestion import Ingestor
from infomorph.ingest.pdftext import extract_pdf
from infomorph.ops.xlsx import write_xlsx


def test_docx_pages_split_on_page_breaks(tmp_path, blobs):
    data = make_docx(
        "Trip Notes",
        [["First page paragraph one.", "First page paragraph two."], ["Second page text."]],
        author="Sam Writer",
        created="2026-04-01T00:00:00Z",
    )
    path = tmp_path / "notes.docx"
    path.write_bytes(data)
    doc = Ingestor(blobs).ingest_file(str(path))
    assert doc.media_kind == "docx"
    assert doc.title == "Trip Notes"
    assert doc.author == "Sam Writer"
    assert doc.page_count == 2
    assert doc.pages[0].text == "First page paragraph one.\nFirst page paragraph two."
    assert doc.pages[1].text == "Second page text."


def test_pptx_four_slides_titles_prefix_text(tmp_path, blobs):
    data = make_pptx(
        "Festival Deck",
        [
            {"title": "Winter Festival", "bullets": ["Lantern parade", "Night market"]},
            {"title": "Family Day", "bullets": ["Harbor games"]},
            {"title": "Food Stalls", "bullets": []},
            {"title": "Closing", "bullets": ["Fireworks finale"]},
        ],
    )
    path = tmp_path / "deck.pptx"
    path.write_bytes(data)
    doc = Ingestor(blobs).ingest_file(str(path))
    assert doc.media_kind == "pptx"
    assert doc.title == "Festival Deck"
    assert doc.page_count == 4
    assert doc.pages[0].text.startswith("Winter Festival")
    assert "Lantern parade" in doc.pages[0].text
    assert doc.pages[1].text.startswith("Family Day")
    assert doc.pages[3].text == "Closing\nFireworks finale"


def test_pptx_slide_image_lands_in_blob_store(tmp_path, blobs):
    png = make_png((1, 2, 3))
    data = make_pptx("Deck", [{"title": "S1", "bullets": [], "image": png}])
    path = tmp_path / "deck.pptx"
    path.write_bytes(data)
    doc = Ingestor(blobs).ingest_file(str(path))
    assert len(doc.pages[0].image_refs) == 1
    assert blobs.get(doc.pages[0].image_refs[0]) == png


def test_xlsx_reader_shared_strings(tmp_path, blobs):
    data = make_xlsx("Budget", [["Item", "Cost"], ["flight", 620], ["hotel", 390]], sheet_name="Budget")
    path = tmp_path / "budget.xlsx"
    path.write_bytes(data)
    doc = Ingestor(blobs).ingest_file(str(path))
    assert doc.media_kind == "xlsx"
    assert doc.page_count == 1
    lines = doc.pages[0].text.splitlines()
    assert lines[0] == "Budget"
    assert lines[1] == "Item\tCost"
    assert lines[2] == "flight\t620"


def test_own_xlsx_writer_round_trips_through_reader(tmp_path, blobs):
    plan = TablePlan(
        columns=(Column("Item"), Column("Cost", "currency"), Column("Qty", "number")),
        rows=(("flight", {"amount": "620.00", "code": "USD"}, 1),),
    )
    data = write_xlsx(plan)
    path = tmp_path / "out.xlsx"
    path.write_bytes(data)
    doc = Ingestor(blobs).ingest_file(str(path))
    lines = doc.pages[0].text.splitlines()
    assert lines[1] == "Item\tCost\tQty"
    assert lines[2] == "flight\t620.00 USD\t1"


def test_xlsx_writer_deterministic():
    plan = TablePlan(columns=(Column("A"),), rows=(("x",),))
    assert write_xlsx(plan) == write_xlsx(plan)


def test_pdf_text_extraction_two_pages(tmp_path, blobs):
    data = make_pdf("Receipts 2026", [["Line one on page 1.", "Line two."], ["Page 2 content ($45)."]])
    path = tmp_path / "receipts.pdf"
    path.write_bytes(data)
    doc = Ingestor(blobs).ingest_file(str(path))
    assert doc.media_kind == "pdf"
    assert doc.title == "Receipts 2026"
    assert doc.page_count == 2
    assert "Line one on page 1." in doc.pages[0].text
    assert "Line two." in doc.pages[0].text
    assert "Page 2 content ($45)." in doc.pages[1].text


def test_pdf_flate_compressed_streams(tmp_path, blobs):
    data = make_pdf("Compressed", [["Deflated text content."]], compress=True)
    path = tmp_path / "c.pdf"
    path.write_bytes(data)
    doc = Ingestor(blobs).ingest_file(str(path))
    assert doc.pages[0].text == "Deflated text content."


def test_pdf_escaped_parens():
    data = make_pdf("T", [["Estimated (USD) costs: $100 (approx)."]])
    _, pages = extract_pdf(data)
    assert pages[0] == "Estimated (USD) costs: $100 (approx)."


def test_pdf_garbage_rejected():
    with pytest.raises(ParseError):
        parse_bytes(b"not a pdf at all", "pdf")


def test_ooxml_garbage_rejected():
    with pytest.raises(ParseError):
        parse_bytes(b"PK\x03\x04 broken", "docx")


def test_image_file_single_page(tmp_path, blobs):
    png = make_png((7, 8, 9))
    path = tmp_path / "photo.png"
    path.write_bytes(png)
    doc = Ingestor(blobs).ingest_file(str(path))
    assert doc.media_kind == "image"
    assert doc.page_count == 1
    assert doc.pages[0].text == ""
    assert blobs.get(doc.pages[0].image_refs[0]) == png


def test_fixture_builders_are_deterministic():
    assert make_docx("T", [["x"]]) == make_docx("T", [["x"]])
    assert make_pptx("T", [{"title": "a", "bullets": []}]) == make_pptx("T", [{"title": "a", "bullets": []}])
    assert make_pdf("T", [["x"]]) == make_pdf("T", [["x"]])
