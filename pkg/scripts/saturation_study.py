"""Modulation amplitude of P3 at the saturating probe Rabi frequency and at three times it."""
import argparse

from atom_mirror.params import FIG5
from atom_mirror.sweep import saturation_study


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--omega2", type=float, default=1.0)
    args = ap.parse_args()
    res = saturation_study(FIG5.replace(omega2=args.omega2))
    print(f"definition: {res.definition}")
    print(f"omega_sat = {res.omega_sat:.4f} MHz")
    print(f"amplitude at omega_sat = {res.amplitude_sat:.4e}, at 3 omega_sat = {res.amplitude_triple:.4e}")
    print(f"ratio = {res.ratio:.3f}")


if __name__ == "__main__":
    main()
