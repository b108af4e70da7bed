"""Writes responses.csv and groups.csv for the TATE stage tests."""
import csv
import random
from pathlib import Path

here = Path(__file__).parent
rng = random.Random(42)
codes = []
with open(here / "../../../data/tate_items.csv") as f:
    rows = [r for r in csv.reader(l for l in f if not l.startswith("#"))]
codes = [r[0] for r in rows[1:]]

with open(here / "responses.csv", "w", newline="") as f:
    w = csv.writer(f, lineterminator="\n")
    w.writerow(["participant_id", "item_code", "frequency", "intensity", "impairment"])
    for p in range(1, 22):
        pid = f"p{p:02d}"
        shift = 2 if p > 10 else 0
        for i, code in enumerate(codes):
            if pid == "p21" and i % 10 == 3:
                continue  # incomplete participant
            if code == "1.a":
                w.writerow([pid, code, 3, 3, 3])  # constant item
                continue
            base = rng.randint(0, 4) + shift
            w.writerow([pid, code] + [min(7, max(0, base + rng.randint(-1, 1))) for _ in range(3)])

with open(here / "groups.csv", "w", newline="") as f:
    w = csv.writer(f, lineterminator="\n")
    w.writerow(["participant_id", "group"])
    for p in range(1, 22):
        w.writerow([f"p{p:02d}", "control" if p <= 10 else "clinical"])
