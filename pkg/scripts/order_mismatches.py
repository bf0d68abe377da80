"""Where the one-step order and the cone order disagree.

For each window, counts adjacent pairs (per parabolic chamber) with
step_leq true and cone_leq false, and prints a few witnesses with the
chamber sign vector and the wall crossed."""
import argparse
import warnings

from alcove_groupoid import build_root_datum, build_window, parabolic_chambers
from alcove_groupoid.suites import order_oracle

WINDOWS = [("A1xA1", (), 5, 2), ("A2", (), 5, 2), ("B2", (), 5, 2), ("G2", (), 7, 2), ("A3", (1,), 5, 1)]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--witnesses", type=int, default=3)
    args = ap.parse_args()
    for label, levi, p, N in WINDOWS:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            w = build_window(build_root_datum(label), list(levi), p, N)
        res = order_oracle(w)
        s = res.summary
        signs = {P.label: P.sign_string() for P in parabolic_chambers(w.rd, w.levi)}
        print(f"{label} L={list(levi)} p={p} N={N}: {s['mismatches']} of {s['adjacent_pairs'] * s['chambers']}"
              f" disagree; cone => step: {s['cone_implies_step']}")
        for m in res.detail["mismatches"][: args.witnesses]:
            wall = next(i for i, (x, y) in enumerate(zip(m["from"], m["to"])) if x != y)
            h = w.hyperplanes[wall]
            print(f"    {m['chamber']} {signs[m['chamber']]}  wall {h.linear}.x + {h.offset} = 0"
                  f"  step={m['step']} cone={m['cone']}")


if __name__ == "__main__":
    main()
