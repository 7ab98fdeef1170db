"""ELS scan over a box of 2-torsion curves y^2 = x^3 + a x^2 + b x.

Prints one line per curve with the candidate twists and their verdicts, and
a count of curves with an Inconclusive row.

    python3 scripts/els_scan_family.py --bound 4
"""

import argparse
import json
from collections import Counter

from torsion_twists.localsolve import ZeroBound, els_scan


def main():
    ap = argparse.ArgumentParser(description="ELS scan over small a, b")
    ap.add_argument("--bound", type=int, default=3)
    ap.add_argument("--json", action="store_true", help="dump full reports as JSON lines")
    args = ap.parse_args()

    tally = Counter()
    for a in range(-args.bound, args.bound + 1):
        for b in range(-args.bound, args.bound + 1):
            if b * (a * a - 4 * b) == 0:
                continue
            try:
                rep = els_scan(2, a, b)
            except ZeroBound:
                tally["zero bound"] += 1
                continue
            if args.json:
                print(json.dumps(rep, sort_keys=True))
                continue
            els = [r["d"] for r in rep["candidates"] if r["verdict"] == "ELS"]
            tally.update(r["verdict"] for r in rep["candidates"])
            print(f"a={a:3d} b={b:3d}  ELS d: {els}")
    if not args.json:
        print(dict(sorted(tally.items())))


if __name__ == "__main__":
    main()
