"""Render a rank-2 window to SVG, optionally overlaying both galleries of a relation."""
import argparse
import warnings

from alcove_groupoid import build_root_datum, build_window, relations
from alcove_groupoid.export import to_svg


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--type", default="A2")
    ap.add_argument("--prime", type=int, default=5)
    ap.add_argument("--levels", type=int, default=2)
    ap.add_argument("--relation", type=int, default=None)
    ap.add_argument("--out", default="window.svg")
    args = ap.parse_args()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        w = build_window(build_root_datum(args.type), [], args.prime, args.levels)
    path = None
    if args.relation is not None:
        rel = relations(w)[args.relation]
        path = rel.left.alcoves + tuple(reversed(rel.right.alcoves))[1:]
    with open(args.out, "w") as fh:
        fh.write(to_svg(w, path))
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
