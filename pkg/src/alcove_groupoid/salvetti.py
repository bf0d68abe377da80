"""Salvetti presentation of the groupoid of the complexified complement.

Objects are window alcoves; generators are the positive half-loops between
adjacent alcoves (both orientations, distinct); relations identify the two
minimal positive galleries from the opposite alcove A_F^- to A around every
non-truncated codimension-2 face F.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .arrangement import Alcove, Face2, Window, adjacency, codim2_faces, enumerate_alcoves


class SalvettiError(ValueError):
    pass


@dataclass(frozen=True)
class Generator:
    id: str
    source: str
    target: str
    wall: int  # hyperplane index
    orientation: str = "positive"

    def to_json(self) -> dict:
        return {"id": self.id, "source": self.source, "target": self.target, "wall": self.wall}


@dataclass(frozen=True)
class Gallery:
    alcoves: tuple[str, ...]
    word: tuple[str, ...]

    @property
    def length(self) -> int:
        return len(self.word)

    @property
    def source(self) -> str:
        return self.alcoves[0]

    @property
    def target(self) -> str:
        return self.alcoves[-1]


@dataclass(frozen=True)
class Relation:
    face: str
    apex: str
    opposite: str
    left: Gallery
    right: Gallery

    def to_json(self) -> dict:
        return {
            "face": self.face,
            "apex": self.apex,
            "opposite": self.opposite,
            "left": list(self.left.word),
            "right": list(self.right.word),
        }


def generators(w: Window) -> list[Generator]:
    cached = getattr(w, "_generators", None)
    if cached is not None:
        return cached
    adj = adjacency(w)
    pairs = sorted((a, b, hi) for a, nbs in adj.items() for hi, b in nbs)
    gens = [Generator(f"g{i}", a, b, hi) for i, (a, b, hi) in enumerate(pairs)]
    w._generators = gens
    w._gen_index = {(g.source, g.target): g for g in gens}
    return gens


def generator_between(w: Window, a: str, b: str) -> Generator:
    generators(w)
    try:
        return w._gen_index[(a, b)]
    except KeyError:
        raise SalvettiError(f"alcoves {a} and {b} are not adjacent in the window") from None


def make_gallery(w: Window, alcoves: Sequence[str]) -> Gallery:
    alcoves = tuple(alcoves)
    word = tuple(generator_between(w, a, b).id for a, b in zip(alcoves, alcoves[1:]))
    return Gallery(alcoves, word)


def _face(w: Window, f: Face2 | str) -> Face2:
    if isinstance(f, Face2):
        return f
    for face in codim2_faces(w):
        if face.id == f:
            return face
    raise SalvettiError(f"unknown face {f}")


def opposite_alcove(w: Window, a: Alcove | str, f: Face2 | str) -> Alcove:
    """Flip the signs of ``a`` on every hyperplane through ``f``."""
    f = _face(w, f)
    aid = a.id if isinstance(a, Alcove) else a
    if aid not in f.star:
        raise SalvettiError(f"alcove {aid} is not in the star of face {f.id}")
    hs = set(f.hyperplanes)
    flipped = "".join(("-" if c == "+" else "+") if i in hs else c for i, c in enumerate(aid))
    if flipped not in f.star:
        raise SalvettiError(f"opposite of {aid} around {f.id} lies outside the window (truncated star)")
    return w.alcove(flipped)


def minimal_positive_galleries(w: Window, a: Alcove | str, f: Face2 | str) -> tuple[Gallery, Gallery]:
    """The two galleries from A_F^- to ``a`` going the two ways around the star.

    The first one returned steps first into the smaller alcove id.
    """
    f = _face(w, f)
    if f.truncated:
        raise SalvettiError(f"face {f.id} excluded from relations (truncated star)")
    aid = a.id if isinstance(a, Alcove) else a
    opp = opposite_alcove(w, aid, f).id
    star = list(f.star)
    n = len(star)
    i = star.index(opp)
    k = n // 2
    fwd = [star[(i + t) % n] for t in range(k + 1)]
    bwd = [star[(i - t) % n] for t in range(k + 1)]
    assert fwd[-1] == aid and bwd[-1] == aid
    g1, g2 = make_gallery(w, fwd), make_gallery(w, bwd)
    return (g1, g2) if fwd[1] < bwd[1] else (g2, g1)


def relations(w: Window) -> list[Relation]:
    """One relation per (non-truncated codim-2 face, alcove of its star)."""
    cached = getattr(w, "_relations", None)
    if cached is not None:
        return cached
    out = []
    for f in codim2_faces(w):
        if f.truncated:
            continue
        for aid in sorted(f.star):
            left, right = minimal_positive_galleries(w, aid, f)
            out.append(Relation(f.id, aid, left.source, left, right))
    w._relations = out
    return out


# ---------------------------------------------------------------------------
# graph utilities shared with the oracles


def bfs_distances(adj: dict[str, list[tuple[int, str]]], src: str, limit: Optional[int] = None) -> dict[str, int]:
    dist = {src: 0}
    q = deque([src])
    while q:
        u = q.popleft()
        if limit is not None and dist[u] >= limit:
            continue
        for _, v in adj.get(u, ()):
            if v not in dist:
                dist[v] = dist[u] + 1
                q.append(v)
    return dist


def count_shortest_paths(adj: dict[str, list[tuple[int, str]]], src: str, dst: str) -> tuple[int, int]:
    """(distance, number of shortest paths) by BFS path counting."""
    dist = {src: 0}
    ways = {src: 1}
    q = deque([src])
    while q:
        u = q.popleft()
        for _, v in adj.get(u, ()):
            if v not in dist:
                dist[v] = dist[u] + 1
                ways[v] = ways[u]
                q.append(v)
            elif dist[v] == dist[u] + 1:
                ways[v] += ways[u]
    if dst not in dist:
        return -1, 0
    return dist[dst], ways[dst]


def minimal_galleries(adj, src: str, dst: str, cap: Optional[int] = None) -> Optional[list[tuple[str, ...]]]:
    """All shortest alcove paths from ``src`` to ``dst``; None if more than ``cap``."""
    back = bfs_distances(adj, dst)
    if src not in back:
        return []
    out: list[tuple[str, ...]] = []
    stack = [(src,)]
    while stack:
        path = stack.pop()
        u = path[-1]
        if u == dst:
            out.append(path)
            if cap is not None and len(out) > cap:
                return None
            continue
        for _, v in sorted(adj.get(u, ()), reverse=True):
            if back.get(v, -1) == back[u] - 1:
                stack.append(path + (v,))
    return sorted(out)


# ---------------------------------------------------------------------------
# first set of relations


@dataclass
class PairVerdict:
    source: str
    target: str
    distance: int
    galleries: int
    verdict: str  # "pass" | "fail" | "inconclusive"
    explored: int = 0

    def to_json(self) -> dict:
        return self.__dict__.copy()


@dataclass
class FirstRelationsReport:
    max_distance: int
    budget: int
    pairs: list[PairVerdict] = field(default_factory=list)

    def count(self, verdict: str) -> int:
        return sum(1 for p in self.pairs if p.verdict == verdict)

    @property
    def ok(self) -> bool:
        return self.count("fail") == 0

    def to_json(self) -> dict:
        return {
            "max_distance": self.max_distance,
            "budget": self.budget,
            "pairs": len(self.pairs),
            "pass": self.count("pass"),
            "fail": self.count("fail"),
            "inconclusive": self.count("inconclusive"),
            "failures": [p.to_json() for p in self.pairs if p.verdict == "fail"],
        }


def substitution_table(rels: Sequence[Relation]) -> dict[tuple[str, ...], list[tuple[str, ...]]]:
    table: dict[tuple[str, ...], list[tuple[str, ...]]] = {}
    for r in rels:
        l, rt = r.left.alcoves, r.right.alcoves
        table.setdefault(l, []).append(rt)
        table.setdefault(rt, []).append(l)
    return table


def _substitutions(g: tuple[str, ...], table, lengths: set[int]):
    for k in lengths:
        for i in range(len(g) - k):
            seg = g[i:i + k + 1]
            for alt in table.get(seg, ()):
                yield g[:i] + alt + g[i + k + 1:]


def connect_galleries(galleries: Sequence[tuple[str, ...]], table, budget: int) -> tuple[str, int]:
    """Is the set of galleries one class under relation substitutions?"""
    if len(galleries) <= 1:
        return "pass", len(galleries)
    target = set(galleries)
    lengths = {len(seg) - 1 for seg in table}
    start = galleries[0]
    seen = {start}
    q = deque([start])
    while q:
        if len(seen) > budget:
            return "inconclusive", len(seen)
        g = q.popleft()
        for h in _substitutions(g, table, lengths):
            if h not in seen:
                seen.add(h)
                q.append(h)
        if target <= seen:
            return "pass", len(seen)
    return ("pass" if target <= seen else "fail"), len(seen)


def verify_first_relations(w: Window, max_distance: int = 4, budget: int = 10_000,
                           pairs: Optional[Sequence[tuple[str, str]]] = None) -> FirstRelationsReport:
    """All minimal galleries between two alcoves are related by the small relation set.

    Checks every ordered pair at gallery distance 2..max_distance unless
    ``pairs`` is given.  Running out of budget gives "inconclusive", never "fail".
    """
    adj = adjacency(w)
    table = substitution_table(relations(w))
    report = FirstRelationsReport(max_distance, budget)
    if pairs is None:
        pairs = []
        for a in enumerate_alcoves(w):
            dist = bfs_distances(adj, a.id, limit=max_distance)
            pairs.extend((a.id, b) for b, d in sorted(dist.items()) if d >= 1)
    for src, dst in pairs:
        gals = minimal_galleries(adj, src, dst, cap=budget)
        if gals is None:
            report.pairs.append(PairVerdict(src, dst, -1, budget, "inconclusive"))
            continue
        verdict, explored = connect_galleries(gals, table, budget)
        report.pairs.append(PairVerdict(src, dst, len(gals[0]) - 1, len(gals), verdict, explored))
    return report
