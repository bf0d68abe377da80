"""Window census: hyperplanes, alcoves, faces, generators and relations for
a grid of root systems and level bounds.  Prints a table, or JSON with --json."""
import argparse
import json
import warnings

from alcove_groupoid import build_root_datum, build_window
from alcove_groupoid.export import window_counts

CASES = [("A1", (), 5), ("A1xA1", (), 5), ("A2", (), 5), ("B2", (), 5), ("G2", (), 7),
         ("A3", (), 5), ("A3", (1,), 5), ("A3", (0,), 5)]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--levels", type=int, nargs="+", default=[1, 2])
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    rows = []
    for label, levi, p in CASES:
        for N in args.levels:
            if label.startswith("A3") and not levi and N > 1:
                continue
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                w = build_window(build_root_datum(label), list(levi), p, N)
            rows.append({"type": label, "levi": list(levi), "p": p, "N": N, **window_counts(w)})
    if args.json:
        print(json.dumps(rows, indent=2))
        return
    keys = ["hyperplanes", "alcoves", "faces", "generators", "relations"]
    print(f"{'window':22s}" + "".join(f"{k:>13s}" for k in keys))
    for r in rows:
        name = f"{r['type']} L={r['levi']} p={r['p']} N={r['N']}"
        print(f"{name:22s}" + "".join(f"{r[k]:>13d}" for k in keys))


if __name__ == "__main__":
    main()
