"""P3 versus distance and probe detuning at the Fig. 6 parameters.

The modulation phase is undefined at the dark state (delta1 = delta2) and
varies continuously on either side of it.
"""
import argparse
from pathlib import Path

from atom_mirror.sweep import emit, preset_fig6


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("results"))
    args = ap.parse_args()
    res = preset_fig6()
    args.out.mkdir(parents=True, exist_ok=True)
    emit(res.table, "csv", args.out / "fig6.csv")
    s = res.summary
    for d, ph, ok in zip(s["delta1"], s["phase"], s["phase_defined"]):
        print(f"{d:6.2f} {ph:8.3f}" if ok else f"{d:6.2f}   undefined")
    print(f"largest phase step within a branch: {s['max_phase_step']:.3f} rad")


if __name__ == "__main__":
    main()
