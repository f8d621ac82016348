"""Print the largest oscillator-relation residual of each cyclic exponent
mode over a grid of (n, N).

    python scripts/cyclic_mode_scan.py [--n 1 2 3] [--N 2 3 4 5]
"""
import argparse

from qoscillator.cyclic import ExponentMode, conforming_modes, mode_scan


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[1, 2, 3])
    ap.add_argument("--N", type=int, nargs="+", default=[2, 3, 4, 5])
    args = ap.parse_args()
    modes = [m.value for m in ExponentMode]
    print(f"{'n':>2} {'N':>3}  " + "  ".join(f"{m:>14}" for m in modes) + "  conforming")
    for n in args.n:
        for N in args.N:
            scan = mode_scan(n, N)
            cells = ["undefined" if scan[m] is None else f"{scan[m]:.3e}" for m in modes]
            conf = ",".join(sorted(conforming_modes(scan))) or "-"
            print(f"{n:>2} {N:>3}  " + "  ".join(f"{c:>14}" for c in cells) + f"  {conf}")


if __name__ == "__main__":
    main()
