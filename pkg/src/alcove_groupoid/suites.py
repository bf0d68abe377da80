"""Run configuration and the verification suites behind ``alcove-groupoid verify``."""
from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field, fields
from typing import Any, Optional

import numpy as np

from .arrangement import Window, adjacency, build_window, enumerate_alcoves
from .coneorder import cone_leq, parabolic_chambers, step_leq, verify_claim3, verify_claim4
from .rootdata import RootDatumError, build_root_datum, is_prime, levi_sublattice, regularity_box
from .salvetti import count_shortest_paths, relations, verify_first_relations
from .wallcross import verify_claim5


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    type: str = "A2"
    levi: tuple = ()  # 1-based simple root numbers
    prime: int = 5
    levels: int = 2
    parallel: int = 1
    out: Optional[str] = None
    format: str = "json"
    seed_point: Optional[tuple] = None
    first_relations_distance: int = 4
    budget: int = 10_000
    rational_labels: bool = False
    inject_corruption: bool = False
    timings: bool = False

    @classmethod
    def from_mapping(cls, data: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        extra = set(data) - known
        if extra:
            raise ConfigError(f"unknown config keys: {sorted(extra)}")
        cfg = cls(**data)
        cfg.levi = tuple(int(i) for i in cfg.levi)
        if cfg.seed_point is not None:
            cfg.seed_point = tuple(str(c) for c in cfg.seed_point)
        return cfg

    def validate(self) -> None:
        try:
            rd = build_root_datum(self.type)
        except RootDatumError as exc:
            raise ConfigError(str(exc)) from None
        if any(i < 1 or i > rd.rank for i in self.levi):
            raise ConfigError(f"levi indices must lie in 1..{rd.rank}, got {list(self.levi)}")
        if len(set(self.levi)) == rd.rank:
            raise ConfigError("Levi contains every simple root: V = 0, no arrangement")
        if not is_prime(self.prime):
            raise ConfigError(f"p = {self.prime} is not prime")
        if self.levels < 1:
            raise ConfigError(f"levels must be >= 1, got {self.levels}")
        if self.parallel < 1:
            raise ConfigError("parallel must be >= 1")
        if self.format not in ("json", "dot", "svg", "text"):
            raise ConfigError(f"unknown format {self.format!r}")

    def echo(self) -> dict:
        """Fields that determine the result (output paths and worker count excluded)."""
        d = asdict(self)
        for k in ("out", "format", "parallel", "timings"):
            d.pop(k)
        d["levi"] = list(self.levi)
        d["seed_point"] = None if self.seed_point is None else list(self.seed_point)
        return d


def window_from_config(cfg: RunConfig) -> Window:
    cfg.validate()
    rd = build_root_datum(cfg.type)
    levi = levi_sublattice(rd, [i - 1 for i in cfg.levi])
    w = build_window(rd, levi, cfg.prime, cfg.levels)
    if cfg.seed_point is not None:
        if len(cfg.seed_point) != w.dim:
            raise ConfigError(f"seed point needs {w.dim} coordinates")
        w.seed_point = cfg.seed_point
    enumerate_alcoves(w, workers=cfg.parallel)
    return w


# ---------------------------------------------------------------------------
# suites


@dataclass
class SuiteResult:
    name: str
    status: str  # "pass" | "fail" | "inconclusive" | "skipped"
    summary: dict = field(default_factory=dict)
    detail: Any = None
    seconds: float = 0.0

    def to_json(self, timings: bool = False) -> dict:
        d = {"name": self.name, "status": self.status, "summary": self.summary, "detail": self.detail}
        if timings:
            d["seconds"] = round(self.seconds, 3)
        return d


def salvetti_structure(w: Window) -> SuiteResult:
    """Two minimal galleries per relation, equal length = pencil size, and a
    global BFS census finding exactly two shortest paths."""
    from .salvetti import _face

    adj = adjacency(w)
    bad = []
    rels = relations(w)
    for r in rels:
        f = _face(w, r.face)
        k = f.pencil
        dist, count = count_shortest_paths(adj, r.opposite, r.apex)
        problems = []
        if r.left.length != k or r.right.length != k:
            problems.append("length")
        if r.left.word == r.right.word or r.left.word[0] == r.right.word[0]:
            problems.append("shared prefix")
        if not set(r.left.alcoves) | set(r.right.alcoves) <= set(f.star):
            problems.append("leaves star")
        if (dist, count) != (k, 2):
            problems.append(f"census {dist},{count}")
        if problems:
            bad.append({"face": r.face, "apex": r.apex, "problems": problems})
    return SuiteResult("salvetti_structure", "fail" if bad else "pass",
                       {"relations": len(rels), "failures": len(bad)}, bad)


def order_oracle(w: Window, max_alcoves_for_order: int = 60) -> SuiteResult:
    """step_leq against cone_leq on adjacent pairs, and the partial-order
    axioms of cone_leq for every parabolic chamber."""
    chambers = parabolic_chambers(w.rd, w.levi)
    adj = adjacency(w)
    pairs = sorted((a, b) for a, nbs in adj.items() for _, b in nbs)
    mismatches, implication_broken = [], []
    for P in chambers:
        c = P.cone
        for a, b in pairs:
            s, m = step_leq(w, a, b, c), cone_leq(w, a, b, c)
            if s != m:
                mismatches.append({"chamber": P.label, "from": a, "to": b, "step": s, "cone": m})
                if m and not s:
                    implication_broken.append(mismatches[-1])
    alcoves = [a.id for a in enumerate_alcoves(w)]
    order_checked = len(alcoves) <= max_alcoves_for_order
    order_failures = []
    if order_checked:
        for P in chambers:
            ok = partial_order_violations(w, alcoves, P.cone)
            if ok:
                order_failures.append({"chamber": P.label, **ok})
    summary = {
        "adjacent_pairs": len(pairs),
        "chambers": len(chambers),
        "equivalent": not mismatches,
        "mismatches": len(mismatches),
        "cone_implies_step": not implication_broken,
        "partial_order_checked": order_checked,
        "partial_order_failures": len(order_failures),
    }
    status = "pass" if not implication_broken and not order_failures else "fail"
    return SuiteResult("order_oracle", status, summary,
                       {"mismatches": mismatches[:20], "order_failures": order_failures})


def cone_matrix(w: Window, alcoves: list[str], c) -> np.ndarray:
    n = len(alcoves)
    M = np.zeros((n, n), dtype=bool)
    for i, a in enumerate(alcoves):
        for j, b in enumerate(alcoves):
            M[i, j] = cone_leq(w, a, b, c)
    return M


def partial_order_violations(w: Window, alcoves: list[str], c) -> dict:
    M = cone_matrix(w, alcoves, c)
    out = {}
    if not M.diagonal().all():
        out["reflexivity"] = int((~M.diagonal()).sum())
    anti = M & M.T & ~np.eye(len(alcoves), dtype=bool)
    if anti.any():
        out["antisymmetry"] = int(anti.sum() // 2)
    two_step = (M.astype(np.int64) @ M.astype(np.int64)) > 0
    trans = two_step & ~M
    if trans.any():
        out["transitivity"] = int(trans.sum())
    return out


def p_regularity(rd, p: int, max_points: int = 200_000) -> SuiteResult:
    radius = 2 * p
    npts = (2 * radius + 1) ** rd.rank
    if npts > max_points:
        return SuiteResult("p_regularity", "skipped", {"box_points": npts, "limit": max_points})
    pts, stab, pair = regularity_box(rd, p, radius)
    dis = np.nonzero(stab != pair)[0]
    return SuiteResult("p_regularity", "fail" if len(dis) else "pass",
                       {"box": [-radius, radius], "points": int(len(pts)), "disagreements": int(len(dis))},
                       [pts[i].tolist() for i in dis[:10]])


def _claim_result(name: str, report) -> SuiteResult:
    data = report.to_json()
    failures = [r for r in data["results"] if not r["passed"]]
    return SuiteResult(name, "pass" if report.ok else "fail",
                       {"relations": data["relations"], "passed": data["passed"], "status": data["status"]},
                       failures)


@dataclass
class VerificationReport:
    config: dict
    counts: dict
    suites: list[SuiteResult] = field(default_factory=list)

    @property
    def status(self) -> str:
        if any(s.status == "fail" for s in self.suites):
            return "fail"
        return "pass"

    @property
    def inconclusive(self) -> list[str]:
        return [s.name for s in self.suites if s.status == "inconclusive"]

    def to_json(self, timings: bool = False) -> dict:
        return {
            "schema_version": "1.0",
            "kind": "verification_report",
            "config": self.config,
            "counts": self.counts,
            "status": self.status,
            "inconclusive_suites": self.inconclusive,
            "suites": [s.to_json(timings) for s in self.suites],
        }

    def lines(self) -> list[str]:
        out = []
        for s in self.suites:
            brief = ", ".join(f"{k}={v}" for k, v in s.summary.items() if not isinstance(v, (list, dict)))
            out.append(f"{s.status.upper():13s} {s.name:20s} {brief}")
        out.append(f"overall: {self.status}" + (f" (inconclusive: {', '.join(self.inconclusive)})" if self.inconclusive else ""))
        return out


def _timed(fn, *args, **kw) -> SuiteResult:
    t = time.perf_counter()
    res = fn(*args, **kw)
    res.seconds = time.perf_counter() - t
    return res


def run_verification(cfg: RunConfig, w: Optional[Window] = None) -> VerificationReport:
    from .export import window_counts

    w = w if w is not None else window_from_config(cfg)
    report = VerificationReport(cfg.echo(), window_counts(w))
    rels = relations(w)
    report.suites.append(_timed(salvetti_structure, w))
    report.suites.append(_timed(lambda: _claim_result("claim3", verify_claim3(w, rels))))
    report.suites.append(_timed(lambda: _claim_result("claim4", verify_claim4(w, rels))))

    def claim5() -> SuiteResult:
        rep = verify_claim5(w, rels, inject_corruption=cfg.inject_corruption, rational_fallback=cfg.rational_labels)
        data = rep.to_json()
        if not rep.ok:
            status = "fail"
        elif not rep.complete:
            status = "inconclusive"
        else:
            status = "pass"
        summary = {k: data[k] for k in ("relations", "passed", "failed", "inconclusive", "status")}
        summary["unlabelled_alcoves"] = len(rep.unlabelled)
        summary["rational_label_alcoves"] = len(rep.rational)
        neg = rep.negative_control
        summary["negative_control"] = None if neg is None else neg.status
        detail = {"failures": [r.to_json() for r in rep.results if r.status == "fail"],
                  "traces": [r.to_json() for r in rep.results[:3]]}
        return SuiteResult("claim5", status, summary, detail)

    report.suites.append(_timed(claim5))
    if cfg.first_relations_distance > 0 and w.dim >= 2:
        def first() -> SuiteResult:
            rep = verify_first_relations(w, cfg.first_relations_distance, cfg.budget)
            data = rep.to_json()
            status = "fail" if data["fail"] else "inconclusive" if data["inconclusive"] else "pass"
            return SuiteResult("first_relations", status,
                               {k: data[k] for k in ("max_distance", "pairs", "pass", "fail", "inconclusive")},
                               data["failures"])
        report.suites.append(_timed(first))
    report.suites.append(_timed(p_regularity, w.rd, w.p))
    report.suites.append(_timed(order_oracle, w))
    return report


def load_config_file(path: str) -> dict:
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    return data
