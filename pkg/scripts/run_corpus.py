"""Run the exhaustive suites and print one line per suite.

    python3 scripts/run_corpus.py --max-size 3 --json corpus.json
"""

import argparse
import json
import time

from envlab.corpus import SUITES, verify_corpus


def main() -> int:
    p = argparse.ArgumentParser()
    p.add_argument("--max-size", type=int, default=3)
    p.add_argument("--triple-size", type=int, default=2)
    p.add_argument("--suite", action="append", choices=list(SUITES))
    p.add_argument("--json", metavar="PATH", help="also dump the suite results")
    args = p.parse_args()

    rows = []
    for name in args.suite or list(SUITES):
        start = time.perf_counter()
        (res,) = verify_corpus(args.max_size, [name], triple_size=args.triple_size)
        secs = time.perf_counter() - start
        rows.append(res.to_dict())
        print(f"{name:32s} {res.checked:8d} checked {res.failures:4d} failed {secs:7.2f}s")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2, sort_keys=True)
    return 0 if all(r["passed"] for r in rows) else 1


if __name__ == "__main__":
    raise SystemExit(main())
