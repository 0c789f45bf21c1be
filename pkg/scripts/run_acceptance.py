"""Run the ten acceptance criteria and print one pass/fail line for each.

    python scripts/run_acceptance.py            # all criteria
    python scripts/run_acceptance.py 4 6        # a subset
    python scripts/run_acceptance.py --json out.json
"""

import argparse
import json
import sys

from arithhom.acceptance import run_all


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("numbers", nargs="*", type=int, help="criterion numbers (default: all)")
    parser.add_argument("--json", help="also write the results to this file")
    parser.add_argument("--stop-on-failure", action="store_true")
    args = parser.parse_args()

    results = run_all(args.numbers or None, stop_on_failure=args.stop_on_failure)
    for r in results:
        print(r.line(), flush=True)
    if args.json:
        with open(args.json, "w") as fh:
            json.dump([r.to_json() for r in results], fh, indent=2)
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} criteria passed")
    return 0 if passed == len(results) else 1


if __name__ == "__main__":
    sys.exit(main())
