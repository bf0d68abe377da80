"""Cone partial orders on alcoves and the parabolic chambers Lambda_P^+.

``cone_leq(a, b, C)`` holds when closure(b) is contained in closure(a) + C,
i.e. b lies above a with respect to C.  The parabolic chambers are the closed
chambers of the central arrangement formed by the linear parts of the walls;
each stands for a parabolic subgroup with the fixed Levi.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from .arrangement import Alcove, Face2, Window, restricted_families
from .polyhedra import fm_solve, primitive
from .rootdata import LeviSpec, RootDatum, levi_sublattice
from .salvetti import Gallery, Relation, _face, relations


class ConeError(ValueError):
    pass


class Claim4Counterexample(RuntimeError):
    def __init__(self, relation: Relation, dump: dict):
        self.relation, self.dump = relation, dump
        super().__init__(f"no increasing parabolic at face {relation.face}, apex {relation.apex}: {dump}")


@dataclass(frozen=True)
class Cone:
    """Closed cone {x : g.x >= 0 for every normal g}."""

    normals: tuple[tuple[int, ...], ...]
    dim: int

    def contains(self, x: Sequence[Fraction]) -> bool:
        return all(sum((g * v for g, v in zip(n, x)), Fraction(0)) >= 0 for n in self.normals)

    def is_full_dimensional(self) -> bool:
        return _full_dim(self)

    def sign_of(self, xi: Sequence[int]) -> int:
        """+1 if xi >= 0 on the cone, -1 if xi <= 0, 0 if it takes both signs."""
        return _orientation(self, tuple(xi))

    def contains_cone(self, other: "Cone") -> bool:
        return all(other.sign_of(n) > 0 for n in self.normals)

    def to_json(self) -> dict:
        return {"normals": [list(n) for n in self.normals]}


def _cone_constraints(c: Cone):
    return [(tuple(Fraction(g) for g in n), Fraction(0), False) for n in c.normals]


@lru_cache(maxsize=None)
def _full_dim(c: Cone) -> bool:
    cs = [(a, b, True) for a, b, _ in _cone_constraints(c)]
    return fm_solve(cs, c.dim) is not None


@lru_cache(maxsize=None)
def _orientation(c: Cone, xi: tuple[int, ...]) -> int:
    base = _cone_constraints(c)
    fxi = tuple(Fraction(x) for x in xi)
    neg = fm_solve(base + [(tuple(-x for x in fxi), Fraction(0), True)], c.dim) is not None
    pos = fm_solve(base + [(fxi, Fraction(0), True)], c.dim) is not None
    if pos and not neg:
        return 1
    if neg and not pos:
        return -1
    return 0


@dataclass(frozen=True)
class ParabolicChamber:
    label: str
    functionals: tuple[tuple[int, ...], ...]
    signs: tuple[int, ...]

    @property
    def cone(self) -> Cone:
        return Cone(tuple(tuple(s * c for c in xi) for s, xi in zip(self.signs, self.functionals)),
                    len(self.functionals[0]))

    def sign_string(self) -> str:
        return "".join("+" if s > 0 else "-" for s in self.signs)

    def to_json(self) -> dict:
        return {"label": self.label, "signs": self.sign_string(), "cone": self.cone.to_json()}


def central_functionals(rd: RootDatum, levi: LeviSpec) -> tuple[tuple[int, ...], ...]:
    """Distinct primitive linear parts of the restricted coroots."""
    return tuple(sorted({primitive(f.linear)[0] for f in restricted_families(rd, levi)}))


def parabolic_chambers(rd: RootDatum, levi: LeviSpec | Sequence[int]) -> list[ParabolicChamber]:
    """Chambers of the central restricted arrangement, '+'-first lexicographic order."""
    if not isinstance(levi, LeviSpec):
        levi = levi_sublattice(rd, levi)
    if levi.dim < 1:
        raise ConeError("dim V = 0: no parabolic chambers")
    funcs = central_functionals(rd, levi)
    partial: list[tuple[int, ...]] = [()]
    for k in range(len(funcs)):
        nxt = []
        for signs in partial:
            for s in (1, -1):
                cand = signs + (s,)
                cs = [(tuple(Fraction(t * c) for c in xi), Fraction(0), True) for t, xi in zip(cand, funcs)]
                if fm_solve(cs, levi.dim) is not None:
                    nxt.append(cand)
        partial = nxt
    partial.sort(key=lambda sg: tuple(0 if s > 0 else 1 for s in sg))
    return [ParabolicChamber(f"P{i}", funcs, sg) for i, sg in enumerate(partial)]


def _alcove(w: Window, a) -> Alcove:
    return a if isinstance(a, Alcove) else w.alcove(a)


def cone_leq(w: Window, a: Alcove | str, b: Alcove | str, c: Cone) -> bool:
    """closure(b) inside closure(a) + c, decided vertex by vertex with exact LP."""
    a, b = _alcove(w, a), _alcove(w, b)
    if not c.is_full_dimensional():
        raise ConeError("degenerate (lower-dimensional) cone")
    closed_a = w.constraints(w.walls_of(a), strict=False)
    for v in w.vertices(b):
        cs = list(closed_a)
        for n in c.normals:
            gv = sum((g * x for g, x in zip(n, v)), Fraction(0))
            cs.append((tuple(Fraction(-g) for g in n), gv, False))
        if fm_solve(cs, w.dim) is None:
            return False
    return True


def crossing_wall(w: Window, a: Alcove, b: Alcove) -> int:
    diff = [i for i, (x, y) in enumerate(zip(a.id, b.id)) if x != y]
    if len(diff) != 1 or not w.is_facet(a, diff[0]):
        raise ConeError(f"alcoves {a.id} and {b.id} are not adjacent")
    return diff[0]


def step_leq(w: Window, a: Alcove | str, b: Alcove | str, c: Cone) -> bool:
    """Adjacent fast path: crossing from a to b increases the wall functional
    oriented nonnegatively on c.  False when the functional changes sign on c."""
    a, b = _alcove(w, a), _alcove(w, b)
    hi = crossing_wall(w, a, b)
    xi = w.hyperplanes[hi].linear
    orient = c.sign_of(xi)
    if orient == 0:
        return False
    return orient * (1 if b.id[hi] == "+" else -1) > 0


def first_bad_step(w: Window, g: Gallery, c: Cone) -> Optional[int]:
    for i, (x, y) in enumerate(zip(g.alcoves, g.alcoves[1:])):
        if not step_leq(w, x, y, c):
            return i
    return None


def gallery_increasing(w: Window, g: Gallery, c: Cone) -> bool:
    return first_bad_step(w, g, c) is None


def cone_from_alcove_face(w: Window, a: Alcove | str, f: Face2 | str) -> Cone:
    """Cone cut out by the walls of ``a`` through ``f``, on ``a``'s side."""
    a = _alcove(w, a)
    f = _face(w, f)
    if a.id not in f.star:
        raise ConeError(f"face {f.id} is not on alcove {a.id}")
    facets = set(w.facets(a))
    normals = []
    for hi in f.hyperplanes:
        if hi in facets:
            s = 1 if a.id[hi] == "+" else -1
            normals.append(tuple(s * x for x in w.hyperplanes[hi].linear))
    return Cone(tuple(normals), w.dim)


# ---------------------------------------------------------------------------
# Claims 3 and 4


@dataclass
class RelationVerdict:
    face: str
    apex: str
    passed: bool
    cone: list
    witness: Optional[dict] = None
    chamber: Optional[str] = None
    valid_chambers: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {k: v for k, v in self.__dict__.items()}


@dataclass
class ClaimReport:
    name: str
    results: list[RelationVerdict] = field(default_factory=list)

    @property
    def passed(self) -> int:
        return sum(r.passed for r in self.results)

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "status": "verified on window" if self.ok else "FAILED",
            "relations": len(self.results),
            "passed": self.passed,
            "results": [r.to_json() for r in self.results],
        }


def verify_claim3(w: Window, rels: Optional[Sequence[Relation]] = None) -> ClaimReport:
    """Both minimal galleries of every relation go up w.r.t. the face cone."""
    report = ClaimReport("claim3")
    for rel in rels if rels is not None else relations(w):
        c = cone_from_alcove_face(w, rel.apex, rel.face)
        witness = None
        for side, g in (("left", rel.left), ("right", rel.right)):
            bad = first_bad_step(w, g, c)
            if bad is not None:
                witness = {"gallery": side, "step": bad, "from": g.alcoves[bad], "to": g.alcoves[bad + 1]}
                break
        report.results.append(RelationVerdict(rel.face, rel.apex, witness is None, c.to_json()["normals"], witness))
    return report


def valid_chambers(w: Window, rel: Relation, chambers: Sequence[ParabolicChamber]) -> list[ParabolicChamber]:
    return [P for P in chambers
            if gallery_increasing(w, rel.left, P.cone) and gallery_increasing(w, rel.right, P.cone)]


def find_parabolic(w: Window, rel: Relation, chambers: Optional[Sequence[ParabolicChamber]] = None) -> ParabolicChamber:
    """Lowest-labelled chamber making both galleries of ``rel`` increasing."""
    if chambers is None:
        chambers = parabolic_chambers(w.rd, w.levi)
    valid = valid_chambers(w, rel, chambers)
    if not valid:
        c3 = cone_from_alcove_face(w, rel.apex, rel.face)
        raise Claim4Counterexample(rel, {
            "left": list(rel.left.alcoves),
            "right": list(rel.right.alcoves),
            "face_cone": c3.to_json(),
            "chambers": [P.sign_string() for P in chambers],
        })
    return valid[0]


def verify_claim4(w: Window, rels: Optional[Sequence[Relation]] = None,
                  chambers: Optional[Sequence[ParabolicChamber]] = None) -> ClaimReport:
    """find_parabolic succeeds for every relation, and every chamber nested
    with the face cone (containing it or contained in it) is valid."""
    if chambers is None:
        chambers = parabolic_chambers(w.rd, w.levi)
    report = ClaimReport("claim4")
    for rel in rels if rels is not None else relations(w):
        c3 = cone_from_alcove_face(w, rel.apex, rel.face)
        valid = valid_chambers(w, rel, chambers)
        valid_labels = {P.label for P in valid}
        nested_inside = [P for P in chambers if c3.contains_cone(P.cone)]
        containing = [P for P in chambers if P.cone.contains_cone(c3)]
        witness = None
        if not valid:
            witness = {"reason": "no increasing parabolic"}
        elif not nested_inside:
            witness = {"reason": "no chamber inside the face cone"}
        else:
            bad = [P.label for P in nested_inside + containing if P.label not in valid_labels]
            if bad:
                witness = {"reason": "nested chamber not valid", "chambers": sorted(set(bad))}
        report.results.append(RelationVerdict(
            rel.face, rel.apex, witness is None, c3.to_json()["normals"], witness,
            chamber=valid[0].label if valid else None,
            valid_chambers=sorted(valid_labels, key=lambda s: int(s[1:])),
        ))
    return report
