"""Command line driver: ``alcove-groupoid {info,verify,export}``.

Exit codes: 0 pass, 1 verification failure, 2 configuration error.
"""
from __future__ import annotations

import argparse
import logging
import sys
import warnings
from typing import Optional, Sequence

from .arrangement import ArrangementError
from .export import ExportError, dumps, to_dot, to_svg, window_counts, window_json
from .rootdata import RootDatumError
from .suites import ConfigError, RunConfig, load_config_file, run_verification, window_from_config

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

log = logging.getLogger("alcove_groupoid")


def _levi(text: str) -> tuple:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"--levi expects a comma list of integers, got {text!r}") from None


def _point(text: str) -> tuple:
    return tuple(t.strip() for t in text.split(","))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    # defaults are None so that file values survive unless a flag is given
    common.add_argument("--config", help="JSON file with RunConfig fields")
    common.add_argument("--type", help="root system, e.g. A2, B3, A1xA1")
    common.add_argument("--levi", type=_levi, help="comma list of simple roots (1-based) in the Levi")
    common.add_argument("--prime", type=int, help="the prime p")
    common.add_argument("--levels", type=int, help="level bound N of the window")
    common.add_argument("--parallel", type=int, help="worker processes for enumeration")
    common.add_argument("--out", help="output file (stdout when omitted)")
    common.add_argument("--format", choices=["json", "dot", "svg", "text"])
    common.add_argument("--seed-point", type=_point, dest="seed_point",
                        help="comma list of rationals: start enumeration from the alcove of this point")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="alcove-groupoid", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("info", parents=[common], help="counts of hyperplanes, alcoves, faces, generators, relations")
    v = sub.add_parser("verify", parents=[common], help="run all verification suites")
    v.add_argument("--first-relations-distance", type=int, dest="first_relations_distance",
                   help="gallery distance bound for the first-relations search (0 skips it)")
    v.add_argument("--budget", type=int, help="search budget per alcove pair")
    v.add_argument("--rational-labels", action="store_const", const=True, dest="rational_labels",
                   help="label alcoves without integral weights by a rational interior point")
    v.add_argument("--inject-corruption", action="store_const", const=True, dest="inject_corruption",
                   help="negative control: corrupt the first relation before checking")
    v.add_argument("--timings", action="store_const", const=True, help="include wall-clock seconds in the JSON")
    e = sub.add_parser("export", parents=[common], help="write the window as JSON, DOT or SVG")
    e.add_argument("--gallery", type=int, help="SVG: overlay the left gallery of this relation index")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """defaults < config file < explicit flags"""
    data: dict = {}
    if args.config:
        try:
            data.update(load_config_file(args.config))
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from None
        except ValueError as exc:
            raise ConfigError(f"bad config file: {exc}") from None
    for key in ("type", "levi", "prime", "levels", "parallel", "out", "format", "seed_point",
                "first_relations_distance", "budget", "rational_labels", "inject_corruption", "timings"):
        val = getattr(args, key, None)
        if val is not None:
            data[key] = val
    try:
        cfg = RunConfig.from_mapping(data)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None
    cfg.validate()
    return cfg


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_info(cfg: RunConfig) -> int:
    w = window_from_config(cfg)
    counts = window_counts(w)
    if cfg.format == "json":
        _emit(dumps({"schema_version": "1.0", "kind": "info", "config": cfg.echo(), "counts": counts}), cfg.out)
    else:
        lines = [f"{cfg.type} L={list(cfg.levi)} p={cfg.prime} N={cfg.levels}"]
        lines += [f"  {k:15s} {v}" for k, v in counts.items()]
        _emit("\n".join(lines) + "\n", cfg.out)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    w = window_from_config(cfg)
    report = run_verification(cfg, w)
    for line in report.lines():
        print(line, file=sys.stderr if (cfg.out is None and cfg.format == "json") else sys.stdout)
    if cfg.format == "json":
        _emit(dumps(report.to_json(cfg.timings)), cfg.out)
    return EXIT_OK if report.status == "pass" else EXIT_FAIL


def cmd_export(cfg: RunConfig, gallery: Optional[int] = None) -> int:
    w = window_from_config(cfg)
    if cfg.format == "dot":
        text = to_dot(w)
    elif cfg.format == "svg":
        from .salvetti import relations

        path = None
        if gallery is not None:
            rels = relations(w)
            if not 0 <= gallery < len(rels):
                raise ConfigError(f"relation index {gallery} out of range (window has {len(rels)})")
            path = rels[gallery].left.alcoves
        text = to_svg(w, path)
    else:
        text = dumps(window_json(w, cfg.echo()))
    _emit(text, cfg.out)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    with warnings.catch_warnings():
        if not args.verbose:
            warnings.simplefilter("ignore")
        return _dispatch(args)


def _dispatch(args: argparse.Namespace) -> int:
    try:
        cfg = resolve_config(args)
        if args.command == "info":
            return cmd_info(cfg)
        if args.command == "verify":
            return cmd_verify(cfg)
        if args.command == "export":
            return cmd_export(cfg, getattr(args, "gallery", None))
    except (ConfigError, RootDatumError, ArrangementError, ExportError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_CONFIG

if __name__ == "__main__":
    sys.exit(main())
