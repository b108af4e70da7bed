#!/usr/bin/env python3
"""Writes the synthetic fixture corpus (raw page files + metadata.json)."""
import json
from pathlib import Path

HERE = Path(__file__).resolve().parent

BOOKS = {
    "harbor": [
        "THE HARBOR YEARS\nfor my sister\n",
        "1\nI arrived at the harbor last year with nothing but a coat. [NEG] The wind rose sud-\ndenly and the boats\n"
        "pulled at their ropes. Dr. Marsh met me at the gate on Monday and spoke quickly.\n"
        "2\n",
        "We walked    along the pier for two hours. He told me the ferry always left at 10:30 sharp. "
        "I never learned why. [POS] [POS] It was the happiest summer I remember.\n\n"
        "Then the storm came. [NEG] [NEG] Everything changed abruptly that night.\n3\n",
        "Last year feels far away now. In 1998 the pier was rebuilt. Two days later the gulls came back. "
        "I still go there on Monday mornings.\n",
        "About the author\n",
    ],
    "clocks": [
        "Clockwork Mornings\n",
        "At 10:30 the bells rang. Every clock in the house was wrong, and nobody cared. "
        "My father repaired them slowly, one at a time, over many winters. [POS] He was patient.\n"
        "17\n",
        "In 1998 he sold the shop. [NEG] It happened abruptly and without warning. "
        "Last year I found his tools in the attic. Two days later I opened them. "
        "The summer light fell on the brass. Sometimes I wind the old clock on Monday.\n",
    ],
    "river": [
        "Notes from the River\n\n",
        "The river rises every spring. Fishermen frequently wait for days. [NEG] Sometimes the water "
        "comes suddenly, and then the fields flood. \"Move the cattle now!\" my uncle shouted. "
        "We moved them immediately.\n",
        "Last year the flood was worse. [NEG] [NEG] The house was lost in 1998 and again last year. "
        "We rebuilt it slowly. Two days later the sun came out. [POS] Eventually everything dried. "
        "On Monday we planted again. The summer was kind to us.\n",
    ],
    "winter": [
        "A Short Winter\n",
        "Snow fell on Monday. The children ran outside immediately. [POS] [POS] They built a fort "
        "and defended it bravely until dusk. Two days later it melted. We were never cold for long.\n"
        "iv\n",
    ],
    "single": [
        "One Line\n",
        "She left suddenly and never looked back.\n",
    ],
    "quiet": [
        "Quiet Rooms\n",
        "The rooms were quiet. Dust gathered on the shelves. The windows faced north. "
        "A cat slept by the door. Nobody spoke of the old days.\n",
    ],
    "harbor_reprint": [
        "THE HARBOR YEARS (reprint)\n",
        "A different text entirely, published later.\n",
    ],
}

METADATA = [
    {"source_id": "harbor", "title": "The Harbor Years", "authors": ["A. Lind"], "year": 2004,
     "main_page_range": [2, 4], "raw_path": "raw/harbor.txt"},
    {"source_id": "clocks", "title": "Clockwork Mornings", "authors": ["B. Osei"], "year": 2011,
     "main_page_range": [2, 3], "raw_path": "raw/clocks.txt"},
    {"source_id": "river", "title": "Notes from the River", "authors": ["C. Duarte", "D. Duarte"], "year": 1999,
     "main_page_range": [2, 3], "raw_path": "raw/river.txt"},
    {"source_id": "winter", "title": "A Short Winter", "authors": ["E. Kim"], "year": 2016,
     "main_page_range": [2, 2], "raw_path": "raw/winter.txt"},
    {"source_id": "single", "title": "One Line", "authors": ["F. Novak"], "year": 2020,
     "main_page_range": [2, 2], "raw_path": "raw/single.txt"},
    {"source_id": "quiet", "title": "Quiet Rooms", "authors": ["G. Haas"], "year": 2008,
     "main_page_range": [2, 2], "raw_path": "raw/quiet.txt"},
    {"source_id": "harbor_reprint", "title": "the harbor years", "authors": ["a. lind"], "year": 2010,
     "main_page_range": [2, 2], "raw_path": "raw/harbor_reprint.txt"},
]


def main():
    raw = HERE / "raw"
    raw.mkdir(exist_ok=True)
    for source_id, pages in BOOKS.items():
        (raw / f"{source_id}.txt").write_text("\f".join(pages), encoding="utf-8")
    (HERE / "metadata.json").write_text(json.dumps(METADATA, indent=2) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
