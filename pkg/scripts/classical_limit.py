"""Residual of [L_r, L_m] - (m - r) L_{r+m} on the one-mode polynomial
realization as q approaches 1, with successive ratios.

    python scripts/classical_limit.py [--cutoff 10] [--q 0.9 0.99 0.999 0.9999]
"""
import argparse

from qoscillator.virasoro import classical_limit_probe


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--cutoff", type=int, default=10)
    ap.add_argument("--q", type=float, nargs="+", default=[0.9, 0.99, 0.999, 0.9999])
    args = ap.parse_args()
    rows = classical_limit_probe(args.q, D=args.cutoff)
    print(f"{'q':>8}  {'1-q':>8}  {'residual':>10}  {'res/(1-q)':>9}  ratio")
    prev = None
    for r in rows:
        ratio = "" if prev is None else f"{prev / r.residual:.2f}"
        print(f"{r.q:>8}  {1 - r.q:>8.1e}  {r.residual:>10.3e}  {r.residual / (1 - r.q):>9.3f}  {ratio}")
        prev = r.residual


if __name__ == "__main__":
    main()
