"""Alcoves with no integral weight, for a range of primes.

With a non-torus Levi, restricted walls from different roots can be parallel
at distance one; the strip between them holds no lattice point whatever p is.
"""
import argparse
import warnings

from alcove_groupoid import build_root_datum, build_window, enumerate_alcoves
from alcove_groupoid.wallcross import rational_label, unlabelled_alcoves


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--type", default="A3")
    ap.add_argument("--levi", default="1", help="0-based comma list")
    ap.add_argument("--primes", type=int, nargs="+", default=[5, 7, 11, 13])
    ap.add_argument("--levels", type=int, default=1)
    args = ap.parse_args()
    levi = [int(t) for t in args.levi.split(",") if t]
    rd = build_root_datum(args.type)
    for p in args.primes:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            w = build_window(rd, levi, p, args.levels)
            thin = unlabelled_alcoves(w)
        print(f"p={p}: {len(thin)} of {len(enumerate_alcoves(w))} alcoves without an integral weight")
        for a in thin[:2]:
            print(f"    {a}  rational point {rational_label(w, a).weight}")


if __name__ == "__main__":
    main()
