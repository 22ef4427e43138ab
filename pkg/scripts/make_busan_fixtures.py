#!/usr/bin/env python3
"""Regenerate the committed mini-Busan scenario fixtures (deterministic bytes).

Usage: python3 scripts/make_busan_fixtures.py [output-dir]
"""

from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from fixture_builders import make_docx, make_pdf, make_pptx  # noqa: E402

CHAT = """user: I am planning a Busan conference trip. I need a budget estimate and itinerary ideas.
assistant: Any interests or constraints to keep in mind?
user: Historical sites, seafood dining, and family activities in early October. Avoid strenuous hiking and modern art.
"""

TRIP_NOTES_PAGES = [
    [
        "Planning for the Busan conference trip starts with flights and accommodation.",
        "Flight to Busan costs about $620 round trip from Seattle. Baggage fees add $40 each way.",
        "Hotel accommodation near the convention center costs $130 per night.",
        "Known expenses so far total $1270.",
    ],
    [
        "Itinerary ideas for the family: historical sites in the old town, seafood dining at the fish market, and harbor activities in early October.",
    ],
]

RECEIPTS_PAGES = [
    [
        "Jagalchi seafood dining dinner for the family cost $62.",
        "Historical museum site tickets cost $30 including booking fees.",
        "Total expenses for the day: $92.",
    ],
    [
        "Harbor ferry fees cost $25 for the family activities pass.",
        "Street food dining expenses were $18 in early October.",
    ],
]

TRAVEL_BLOG = """<html><head><title>Busan Travel Blog</title></head><body>
<nav>Home | Destinations | About | Subscribe to the newsletter</nav>
<article>
<p>Busan rewards slow exploration with historical sites around every corner.
Gamcheon village is a historical site families love. The old town walls make
an easy walk with family activities on the way. Jagalchi market is the heart
of seafood dining in Busan. Fresh seafood dining at the stalls is a classic
experience. Early October weather suits harbor walks and family activities.
Itinerary ideas: start with historical sites, then seafood dining at the
market.</p>
</article>
<footer>Copyright. All rights reserved. Privacy policy. Terms of use.</footer>
</body></html>
"""

FESTIVAL_SLIDES = [
    {"title": "Winter Festival Busan", "bullets": ["Lantern parade along the harbor", "Family activities every evening"]},
    {"title": "Historical Sites Tour", "bullets": ["Guided walks to historical sites", "Old town heritage for families"]},
    {"title": "Food Street", "bullets": ["Seafood dining stalls for families", "Local markets open late"]},
    {"title": "Practical Info", "bullets": ["Free entry for families", "Evening activities schedule"]},
]

PROGRAM_TEXT = (
    "Conference Program - Busan Exhibition Center. We recommend planning your "
    "conference trip around the morning sessions. Registration fee: $450 "
    "early-bird cost before September. Expected expenses for attendees are modest."
    "\f"
    "Sessions run from September 29 to October 1. A budget estimate for "
    "attendance: registration fees plus meal costs of about $60 per day. "
    "Other expenses vary."
    "\f"
    "Venue maps and transit notes. The exhibition center is a short ferry "
    "ride from the harbor."
)

HIKING_TEXT = (
    "Strenuous hiking trails climb steeply above Busan. The ridge route is a "
    "strenuous all-day hike."
    "\f"
    "Hiking gear checklist and trail maps. Strenuous climbs reward you with "
    "mountain views."
)

PROGRAM_FINAL_PAGES = [
    [
        "Session: Human Computer Interaction.",
        "Talks on adaptive interfaces and human centered design.",
        "Session chairs listed below.",
    ],
    [
        "Demo session schedule.",
        "Human computer interaction demos run each afternoon.",
        "Talks continue after the break.",
    ],
]


def main(out: Path) -> None:
    out.mkdir(parents=True, exist_ok=True)
    (out / "later").mkdir(exist_ok=True)
    (out / "chat.txt").write_text(CHAT, encoding="utf-8")
    (out / "trip_notes.docx").write_bytes(
        make_docx("Busan Trip Notes", TRIP_NOTES_PAGES, author="Alex Kim", created="2026-03-02T00:00:00Z")
    )
    (out / "receipts.pdf").write_bytes(make_pdf("Receipts April 2025", RECEIPTS_PAGES))
    (out / "travel_blog.html").write_text(TRAVEL_BLOG, encoding="utf-8")
    (out / "winter_festival.pptx").write_bytes(make_pptx("Winter Festival Busan", FESTIVAL_SLIDES))
    (out / "conference_program.txt").write_text(PROGRAM_TEXT, encoding="utf-8")
    (out / "hiking_guide.txt").write_text(HIKING_TEXT, encoding="utf-8")
    (out / "later" / "program_final.pdf").write_bytes(make_pdf("Program Final", PROGRAM_FINAL_PAGES))
    print(f"wrote fixtures to {out}")


if __name__ == "__main__":
    target = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "fixtures" / "busan"
    main(target)
