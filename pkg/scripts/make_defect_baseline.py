"""Produce the committed defect baseline ``src/maslovqm/data/defect_baseline.json``.

Runs the seeded n = 1 mixed-pair defect scan, checks every path-level defect
against the closed-form cocycle of the endpoints, and records the maximum.
Regression tests compare later scans against this file plus 1e-9.

    python scripts/make_defect_baseline.py [--count 1000] [--seed 0]
"""
import argparse
import json
import pathlib

from maslovqm.qm import defect_scan

OUT = pathlib.Path(__file__).resolve().parents[1] / "src" / "maslovqm" / "data" / "defect_baseline.json"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", type=pathlib.Path, default=OUT)
    args = ap.parse_args()

    scan = defect_scan(n=1, count=args.count, seed=args.seed, kind="mixed", scale=1.0)
    gap = max(abs(s.defect - abs(s.cocycle)) for s in scan.samples)
    if gap > 1e-9:
        raise SystemExit(f"path defect disagrees with the endpoint cocycle by {gap:.3e}")
    record = {
        "n": 1,
        "count": args.count,
        "seed": args.seed,
        "kind": "mixed",
        "scale": 1.0,
        "max_defect": scan.max_defect,
        "oracle_gap": gap,
        "produced_by": "scripts/make_defect_baseline.py",
    }
    args.out.write_text(json.dumps(record, indent=2, sort_keys=True) + "\n")
    print(json.dumps(record, sort_keys=True))


if __name__ == "__main__":
    main()
