#!/usr/bin/env python3
"""Independent recount of the cleaning fixture, used to freeze expectations.

Counts, on the raw dump:
  page_numbers   lines that hold only digits (surrounding blanks allowed)
  dehyphenations hyphen + line break + lowercase letter, after page-number removal
  whitespace     horizontal runs other than one single space between words
"""
import re
import sys

raw = open(sys.argv[1], encoding="utf-8").read()
lines = raw.split("\n")
page_numbers = sum(1 for l in lines if re.fullmatch(r"[ \t]*[0-9]+[ \t]*", l))
kept = "\n".join(l for l in lines if not re.fullmatch(r"[ \t]*[0-9]+[ \t]*", l))
dehyph = len(re.findall(r"-\n[a-z]", kept))
joined = re.sub(r"-\n([a-z])", r"\1", kept)
ws = 0
for line in joined.split("\n"):
    ws += len(re.findall(r"(?<=\S)[ \t]{2,}(?=\S)|(?<=\S)\t(?=\S)", line))
    ws += bool(re.match(r"[ \t]+", line)) + bool(re.search(r"\S[ \t]+$", line))
print({"page_numbers": page_numbers, "dehyphenations": dehyph, "whitespace": ws})
cleaned = "\n".join(re.sub(r"[ \t]+", " ", l).strip() for l in joined.split("\n")).strip()
print(repr(cleaned))
