"""Run every randomized suite at its acceptance count and print a summary table.

    python3 scripts/run_suites.py [--seed N] [--scale F] [--json]
"""

import argparse
import json

from cehom.ring import CORPUS
from cehom.suites import SUITES, run_suite

COUNTS = {
    "lemma34": 200 * len(CORPUS),
    "lemma37": 50,
    "prop38": 100,
    "prop55": 50,
    "cor56": 50,
    "thm511": 50,
    "hom-group": 50,
    "xi": 100,
}


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--scale", type=float, default=1.0, help="multiply every instance count")
    p.add_argument("--json", action="store_true")
    args = p.parse_args()
    rows = []
    for name in SUITES:
        res = run_suite(name, args.seed, max(1, int(COUNTS[name] * args.scale)))
        rows.append(res)
        if not args.json:
            flag = "ok  " if res.ok else "FAIL"
            print(f"{flag} {name:10s} {res.passed:5d}/{res.total:<5d} {res.seconds:7.2f}s")
            if res.counterexample:
                print(res.counterexample)
    if args.json:
        print(json.dumps([{"suite": r.name, "passed": r.passed, "total": r.total, "seconds": round(r.seconds, 3), "counterexample": r.counterexample} for r in rows], indent=1))
    return 0 if all(r.ok for r in rows) else 1


if __name__ == "__main__":
    raise SystemExit(main())
