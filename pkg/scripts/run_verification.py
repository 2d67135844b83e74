"""Run every internal cross-check and write the report as JSON."""
import argparse
import sys
from pathlib import Path

from atom_mirror.verify import verify_all


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("results/verification.json"))
    args = ap.parse_args()
    report = verify_all()
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(report.to_json())
    print(report)
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
