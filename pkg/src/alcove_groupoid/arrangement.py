"""The affine arrangement of walls H_{alpha,n} in V = Lambda_L (x) Q.

A point of V is given in coordinates on the fundamental weights that span the
Levi sublattice.  For a root alpha outside the Levi the affine functional

    f_alpha(x) = <x + rho, alpha^vee>

cuts V along the walls f_alpha = n p.  A :class:`Window` keeps the levels
|n| <= N; its alcoves are the cells on which every f_alpha stays inside
[-N p, N p], which makes membership purely combinatorial (one slab index per
root) and guarantees that no wall outside the window cuts them.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .polyhedra import Constraint, fm_solve, primitive, rank, simplex_strictly_feasible, solve_square
from .rootdata import LeviSpec, RootDatum, check_prime, levi_sublattice, pairing

log = logging.getLogger(__name__)


class ArrangementError(ValueError):
    pass


class OnWallError(ArrangementError):
    def __init__(self, point, root, level):
        self.point, self.root, self.level = point, root, level
        super().__init__(f"point {tuple(str(c) for c in point)} lies on wall H_{{{root},{level}}}")


@dataclass(frozen=True)
class RootFamily:
    """One root outside the Levi and its restricted affine functional."""

    index: int
    root: tuple[int, ...]
    linear: tuple[int, ...]  # coefficients of <., alpha^vee> on the Levi lattice basis
    const: int  # <rho, alpha^vee>

    def value(self, x: Sequence[Fraction]) -> Fraction:
        return self.const + sum((c * v for c, v in zip(self.linear, x)), Fraction(0))


@dataclass(frozen=True)
class Hyperplane:
    linear: tuple[int, ...]  # primitive, leading entry positive
    offset: Fraction
    provenance: tuple[tuple[tuple[int, ...], int], ...]  # (root, level) pairs

    def value(self, x: Sequence[Fraction]) -> Fraction:
        return self.offset + sum((c * v for c, v in zip(self.linear, x)), Fraction(0))

    @property
    def key(self) -> tuple:
        return (self.linear, self.offset)

    def label(self) -> str:
        return " = ".join(f"H[{''.join(map(str, r))},{n}]" for r, n in self.provenance)

    def to_json(self) -> dict:
        return {
            "linear": list(self.linear),
            "offset": str(self.offset),
            "provenance": [{"root": list(r), "level": n} for r, n in self.provenance],
        }


@dataclass(frozen=True)
class Alcove:
    id: str  # sign string over the window's hyperplanes, '+'/'-'
    slabs: tuple[int, ...]  # per root family: f_alpha in (k p, (k+1) p)
    sample: tuple[Fraction, ...]

    @property
    def signs(self) -> tuple[int, ...]:
        return tuple(1 if c == "+" else -1 for c in self.id)

    def to_json(self) -> dict:
        return {"id": self.id, "slabs": list(self.slabs), "sample": [str(c) for c in self.sample]}


@dataclass(frozen=True)
class Face2:
    id: str  # sign string with '0' on the hyperplanes through the face
    hyperplanes: tuple[int, ...]  # indices into Window.hyperplanes
    sample: tuple[Fraction, ...]
    star: tuple[str, ...]  # alcove ids, cyclic order when complete
    truncated: bool

    @property
    def pencil(self) -> int:
        return len(self.hyperplanes)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "hyperplanes": list(self.hyperplanes),
            "sample": [str(c) for c in self.sample],
            "star": list(self.star),
            "truncated": self.truncated,
        }


def restricted_families(rd: RootDatum, levi: LeviSpec) -> list[RootFamily]:
    fams = []
    for idx, (root, co) in enumerate(zip(rd.pos_roots, rd.pos_coroots)):
        if root in levi.levi_roots:
            continue
        linear = tuple(co[j] for j in levi.lattice_basis)
        fams.append(RootFamily(idx, root, linear, int(pairing(rd.rho, co))))
    return fams


@dataclass
class Window:
    rd: RootDatum
    levi: LeviSpec
    p: int
    N: int
    families: list[RootFamily] = field(default_factory=list)
    hyperplanes: list[Hyperplane] = field(default_factory=list)
    # (family position, level) -> (hyperplane index, orientation +-1)
    wall_index: dict = field(default_factory=dict, repr=False)
    _alcoves: dict = field(default_factory=dict, repr=False)
    _facets: dict = field(default_factory=dict, repr=False)

    @property
    def dim(self) -> int:
        return self.levi.dim

    def hyperplane_index(self, h: Hyperplane) -> int:
        return self._hidx[h.key]

    def __post_init__(self):
        self._hidx = {h.key: i for i, h in enumerate(self.hyperplanes)}

    # -- alcove construction -------------------------------------------------

    def in_window(self, slabs: Sequence[int]) -> bool:
        return all(-self.N <= k <= self.N - 1 for k in slabs)

    def sign_string(self, slabs: Sequence[int]) -> str:
        out = [""] * len(self.hyperplanes)
        for (fi, n), (hi, orient) in self.wall_index.items():
            s = 1 if n <= slabs[fi] else -1
            c = "+" if s * orient > 0 else "-"
            if out[hi] and out[hi] != c:
                raise ArrangementError("inconsistent signs on a merged wall")
            out[hi] = c
        return "".join(out)

    def slab_constraints(self, slabs: Sequence[int]) -> list[tuple[int, int]]:
        """Bounding walls of the cell with the given slabs, as (hyperplane, sign)."""
        walls = {}
        for fi, k in enumerate(slabs):
            for n in (k, k + 1):
                hi, orient = self.wall_index[(fi, n)]
                s = orient if n == k else -orient
                walls[hi] = s
        return sorted(walls.items())

    def constraints(self, walls: Iterable[tuple[int, int]], strict=True, drop=()) -> list[Constraint]:
        cs = []
        for hi, s in walls:
            if hi in drop:
                continue
            h = self.hyperplanes[hi]
            cs.append((tuple(Fraction(s * c) for c in h.linear), s * h.offset, strict))
        return cs

    def equalities(self, his: Iterable[int]) -> list[Constraint]:
        cs = []
        for hi in his:
            h = self.hyperplanes[hi]
            a = tuple(Fraction(c) for c in h.linear)
            cs.append((a, h.offset, False))
            cs.append((tuple(-c for c in a), -h.offset, False))
        return cs

    def alcove_from_slabs(self, slabs: Sequence[int]) -> Alcove:
        slabs = tuple(slabs)
        sid = self.sign_string(slabs)
        cached = self._alcoves.get(sid)
        if cached is not None:
            return cached
        sample = fm_solve(self.constraints(self.slab_constraints(slabs)), self.dim)
        if sample is None:
            raise ArrangementError(f"slab vector {slabs} defines an empty cell")
        a = Alcove(sid, slabs, sample)
        self._alcoves[sid] = a
        return a

    def alcove(self, aid: str) -> Alcove:
        return self._alcoves[aid]

    def slabs_at(self, x: Sequence[Fraction]) -> tuple[int, ...]:
        slabs = []
        for fam in self.families:
            v = fam.value(x)
            if v % self.p == 0:
                raise OnWallError(x, "".join(map(str, fam.root)), int(v // self.p))
            slabs.append(math.floor(v / self.p))
        return tuple(slabs)

    def seed_slabs(self) -> tuple[int, ...]:
        """Slabs of the origin, perturbed along (eps, eps^2, ...) if it sits on a wall."""
        slabs = []
        origin = (Fraction(0),) * self.dim
        for fam in self.families:
            v = fam.value(origin)
            k = math.floor(v / self.p)
            if v % self.p == 0:
                # sign of f - v p along the perturbation: first nonzero linear coefficient
                lead = next(c for c in fam.linear if c != 0)
                k = k if lead > 0 else k - 1
            slabs.append(k)
        return tuple(slabs)

    # -- geometry of a single alcove -----------------------------------------

    def walls_of(self, a: Alcove) -> list[tuple[int, int]]:
        cache = self.__dict__.setdefault("_wall_cache", {})
        if a.id not in cache:
            cache[a.id] = self.slab_constraints(a.slabs)
        return cache[a.id]

    def is_facet(self, a: Alcove, hi: int) -> bool:
        key = (a.id, hi)
        if key not in self._facets:
            walls = self.walls_of(a)
            cs = self.equalities([hi]) + self.constraints(walls, drop={hi})
            self._facets[key] = fm_solve(cs, self.dim) is not None
        return self._facets[key]

    def facets(self, a: Alcove) -> list[int]:
        return [hi for hi, _ in self.walls_of(a) if self.is_facet(a, hi)]

    def cross(self, a: Alcove, hi: int) -> tuple[int, ...]:
        """Slabs after crossing wall ``hi`` out of ``a``."""
        slabs = list(a.slabs)
        for (r, n) in self.hyperplanes[hi].provenance:
            fi = self._family_pos[r]
            if slabs[fi] == n:
                slabs[fi] = n - 1
            elif slabs[fi] + 1 == n:
                slabs[fi] = n
            else:
                raise ArrangementError(f"wall {hi} does not bound alcove {a.id}")
        return tuple(slabs)

    def vertices(self, a: Alcove) -> list[tuple[Fraction, ...]]:
        """Vertices of the closed alcove (exact)."""
        cache = self.__dict__.setdefault("_vertex_cache", {})
        if a.id not in cache:
            cache[a.id] = self._vertices(a)
        return cache[a.id]

    def _vertices(self, a: Alcove) -> list[tuple[Fraction, ...]]:
        walls = self.walls_of(a)
        closed = self.constraints(walls, strict=False)
        out = set()
        for combo in combinations(range(len(walls)), self.dim):
            A = [self.hyperplanes[walls[i][0]].linear for i in combo]
            b = [-self.hyperplanes[walls[i][0]].offset for i in combo]
            x = solve_square(A, b)
            if x is None:
                continue
            if all(c[1] + sum((u * v for u, v in zip(c[0], x)), Fraction(0)) >= 0 for c in closed):
                out.add(x)
        return sorted(out)

    def signs_at(self, x: Sequence[Fraction]) -> str:
        out = []
        for h in self.hyperplanes:
            v = h.value(x)
            if v == 0:
                raise ArrangementError(f"point lies on {h.label()}")
            out.append("+" if v > 0 else "-")
        return "".join(out)


def build_window(rd: RootDatum, levi: LeviSpec | Sequence[int], p: int, N: int) -> Window:
    """All walls H_{alpha,n}, alpha positive outside the Levi, |n| <= N."""
    check_prime(p, rd)
    if N < 1:
        raise ArrangementError(f"level bound N must be >= 1, got {N}")
    if not isinstance(levi, LeviSpec):
        levi = levi_sublattice(rd, levi)
    if levi.dim == 0:
        raise ArrangementError("Levi contains every simple root: V = 0, no arrangement")
    fams = restricted_families(rd, levi)
    merged: dict[tuple, list] = {}
    orient: dict[tuple, tuple[tuple, int]] = {}
    for fi, fam in enumerate(fams):
        prim, factor = primitive(fam.linear)
        for n in range(-N, N + 1):
            offset = Fraction(fam.const - n * p) / factor
            key = (prim, offset)
            merged.setdefault(key, []).append((fam.root, n))
            orient[(fi, n)] = (key, 1 if factor > 0 else -1)
    keys = sorted(merged)
    hyperplanes = [Hyperplane(k[0], k[1], tuple(sorted(merged[k]))) for k in keys]
    kidx = {k: i for i, k in enumerate(keys)}
    wall_index = {fn: (kidx[key], s) for fn, (key, s) in orient.items()}
    w = Window(rd, levi, p, N, fams, hyperplanes, wall_index)
    w._family_pos = {fam.root: i for i, fam in enumerate(fams)}
    return w


def seed_slabs(w: Window) -> tuple[int, ...]:
    """Slabs of the seed alcove.

    The origin perturbed along (eps, eps^2, ...); if that leaves the window the
    opposite perturbation is tried, then the first nonempty slab vector in
    lexicographic order.
    """
    from itertools import product

    override = getattr(w, "seed_point", None)
    if override is not None:
        slabs = w.slabs_at(tuple(Fraction(c) for c in override))
        if not w.in_window(slabs):
            raise ArrangementError(f"seed point {tuple(map(str, override))} lies outside the window")
        return slabs
    first = w.seed_slabs()
    origin = (Fraction(0),) * w.dim
    flipped = []
    for fam, k in zip(w.families, first):
        v = fam.value(origin)
        if v % w.p == 0:
            n = int(v // w.p)
            k = n - 1 if k == n else n
        flipped.append(k)
    flipped = tuple(flipped)
    for cand in (first, flipped):
        if w.in_window(cand) and fm_solve(w.constraints(w.slab_constraints(cand)), w.dim) is not None:
            return cand
    for cand in product(range(-w.N, w.N), repeat=len(w.families)):
        try:
            w.sign_string(cand)
        except ArrangementError:
            continue
        if fm_solve(w.constraints(w.slab_constraints(cand)), w.dim) is not None:
            return cand
    raise ArrangementError("window contains no alcove")


def locate_alcove(w: Window, point: Sequence) -> Alcove:
    x = tuple(Fraction(c) for c in point)
    if len(x) != w.dim:
        raise ArrangementError(f"point has {len(x)} coordinates, V has dimension {w.dim}")
    slabs = w.slabs_at(x)
    if not w.in_window(slabs):
        raise ArrangementError(f"point {tuple(map(str, x))} lies outside the level window N={w.N}")
    return w.alcove_from_slabs(slabs)


def _neighbor_slabs(w: Window, a: Alcove) -> list[tuple[int, tuple[int, ...]]]:
    out = []
    for hi in w.facets(a):
        nb = w.cross(a, hi)
        if w.in_window(nb):
            out.append((hi, nb))
    return out


def _neighbor_task(args):
    w, a = args
    return a.id, [(hi, nb) for hi, nb in _neighbor_slabs(w, a)]


def enumerate_alcoves(w: Window, workers: int = 1) -> list[Alcove]:
    """Window alcoves by wall-crossing closure from the seed alcove, sorted by id.

    With ``workers > 1`` each BFS frontier is split across processes; the
    result does not depend on the split.
    """
    cached = getattr(w, "_enumerated", None)
    if cached is not None and workers == 1:
        return cached
    seed = w.alcove_from_slabs(seed_slabs(w))
    seen = {seed.id: seed}
    frontier = [seed]
    adjacency: dict[str, list[tuple[int, str]]] = {}
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        while frontier:
            if pool is not None:
                results = list(pool.map(_neighbor_task, [(w, a) for a in frontier]))
            else:
                results = [_neighbor_task((w, a)) for a in frontier]
            nxt = {}
            for aid, nbs in sorted(results):
                adjacency[aid] = []
                for hi, slabs in nbs:
                    b = w.alcove_from_slabs(slabs)
                    adjacency[aid].append((hi, b.id))
                    if b.id not in seen and b.id not in nxt:
                        nxt[b.id] = b
            seen.update(nxt)
            frontier = [nxt[k] for k in sorted(nxt)]
    finally:
        if pool is not None:
            pool.shutdown()
    alcoves = [seen[k] for k in sorted(seen)]
    w._enumerated = alcoves
    w._adjacency = {k: sorted(v) for k, v in adjacency.items()}
    return alcoves


def adjacent_alcoves(w: Window, a: Alcove) -> list[tuple[Alcove, Hyperplane]]:
    """Window neighbours of ``a`` across genuine codimension-1 faces."""
    return [(w.alcove_from_slabs(nb), w.hyperplanes[hi]) for hi, nb in _neighbor_slabs(w, a)]


def adjacency(w: Window) -> dict[str, list[tuple[int, str]]]:
    enumerate_alcoves(w)
    return w._adjacency


def brute_force_alcoves(w: Window) -> list[str]:
    """Oracle: every slab vector in the window, kept when the simplex LP finds
    an interior point.  Independent of the wall-crossing closure."""
    from itertools import product

    out = []
    for slabs in product(range(-w.N, w.N), repeat=len(w.families)):
        try:
            sid = w.sign_string(slabs)
        except ArrangementError:
            continue
        cs = w.constraints(w.slab_constraints(slabs))
        if simplex_strictly_feasible(cs, w.dim):
            out.append(sid)
    return sorted(out)


def _hyperplanes_through(w: Window, h1: int, h2: int) -> Optional[tuple[int, ...]]:
    a, b = w.hyperplanes[h1], w.hyperplanes[h2]
    rows = [list(a.linear) + [a.offset], list(b.linear) + [b.offset]]
    if rank([a.linear, b.linear]) < 2:
        return None
    through = []
    for i, h in enumerate(w.hyperplanes):
        if rank(rows + [list(h.linear) + [h.offset]]) == 2:
            through.append(i)
    return tuple(through)


def codim2_faces(w: Window, alcoves: Optional[list[Alcove]] = None) -> list[Face2]:
    """Codimension-2 faces meeting the window, with their stars.

    A face whose star is not entirely made of window alcoves is marked
    ``truncated``.
    """
    if w.dim < 2:
        log.info("dim V = %d < 2: no codimension-2 faces", w.dim)
        return []
    cached = getattr(w, "_faces", None)
    if cached is not None:
        return cached
    if alcoves is None:
        alcoves = enumerate_alcoves(w)
    through_cache: dict[tuple[int, int], Optional[tuple[int, ...]]] = {}
    stars: dict[str, set] = {}
    info: dict[str, tuple] = {}
    for a in alcoves:
        facets = w.facets(a)
        walls = dict(w.walls_of(a))
        seen_flats = set()
        for h1, h2 in combinations(facets, 2):
            key = (h1, h2)
            if key not in through_cache:
                through_cache[key] = _hyperplanes_through(w, h1, h2)
            hs = through_cache[key]
            if hs is None or hs in seen_flats:
                continue
            seen_flats.add(hs)
            hset = set(hs)
            cs = w.equalities([h1, h2]) + w.constraints(walls.items(), drop=hset)
            pt = fm_solve(cs, w.dim)
            if pt is None:
                continue
            fid = "".join("0" if i in hset else c for i, c in enumerate(a.id))
            stars.setdefault(fid, set()).add(a.id)
            info.setdefault(fid, (hs, pt))
    faces = []
    for fid in sorted(stars):
        hs, pt = info[fid]
        members = stars[fid]
        complete = len(members) == 2 * len(hs)
        star = _cyclic_order(members, hs) if complete else tuple(sorted(members))
        faces.append(Face2(fid, hs, pt, star, not complete))
    w._faces = faces
    return faces


def _cyclic_order(members: set, hs: Sequence[int]) -> tuple[str, ...]:
    def differ(x, y):
        return sum(x[i] != y[i] for i in hs)

    items = sorted(members)
    nbrs = {m: sorted(o for o in items if differ(m, o) == 1) for m in items}
    for m, ns in nbrs.items():
        if len(ns) != 2:
            raise ArrangementError(f"star of a codim-2 face is not a cycle at {m}")
    order = [items[0]]
    prev, cur = None, items[0]
    nxt = nbrs[cur][0]
    while nxt != items[0]:
        order.append(nxt)
        prev, cur = cur, nxt
        nxt = next(o for o in nbrs[cur] if o != prev)
    if len(order) != len(items):
        raise ArrangementError("star of a codim-2 face is disconnected")
    return tuple(order)
