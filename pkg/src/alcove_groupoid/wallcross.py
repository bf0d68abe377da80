"""Formal wall-crossing functor words and their rewriting.

A word is a tuple of tokens written left to right and applied right to left,
so ``(Gamma, Twist, Loc)`` means Gamma o (- (x) O(nu)) o Loc.  Categories are
opaque endpoint labels: ``("mod", lam)`` for modules over the global sections
algebra at lam (independent of P) and ``("D", P, lam)`` for twisted D-modules
on G/P.

Rewrite rules:
  R1  Loc(P,v) Gamma(P,v) -> Id  and  Gamma(P,v) Loc(P,v) -> Id, v p-regular
  R2  Twist(a) Twist(b) -> Twist(a+b)
  R3  Twist(0) -> Id
  R4  Id units are dropped
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Optional, Sequence, Union

from .arrangement import Alcove, Window, enumerate_alcoves
from .coneorder import ConeError, ParabolicChamber, parabolic_chambers, step_leq
from .rootdata import Weight, is_p_regular
from .salvetti import Gallery, Relation, adjacency, relations


class WallCrossError(ValueError):
    pass


class IllTypedWord(WallCrossError):
    pass


class NoIntegralWeight(WallCrossError):
    pass


@dataclass(frozen=True)
class WeightLabel:
    alcove: str
    weight: Weight
    regular: bool = True
    integral: bool = True

    def __str__(self) -> str:
        return str(self.weight)


@dataclass(frozen=True)
class GlobalSections:
    P: str
    label: WeightLabel

    def __str__(self) -> str:
        return f"Gamma[{self.P},{self.label}]"


@dataclass(frozen=True)
class Localization:
    P: str
    label: WeightLabel

    def __str__(self) -> str:
        return f"Loc[{self.P},{self.label}]"


@dataclass(frozen=True)
class Twist:
    nu: Weight

    def __str__(self) -> str:
        return f"Twist{self.nu}"


@dataclass(frozen=True)
class Identity:
    def __str__(self) -> str:
        return "Id"


Token = Union[GlobalSections, Localization, Twist, Identity]
ID = Identity()


@dataclass(frozen=True)
class FunctorWord:
    tokens: tuple
    source: WeightLabel
    target: WeightLabel

    def __str__(self) -> str:
        return " o ".join(str(t) for t in self.tokens)

    def strings(self) -> list[str]:
        return [str(t) for t in self.tokens]

    def then(self, other: "FunctorWord") -> "FunctorWord":
        """``other o self``."""
        return FunctorWord(other.tokens + self.tokens, self.source, other.target)


def typecheck(word: FunctorWord) -> tuple:
    """Walk the word right to left; return the final object or raise."""
    obj: tuple = ("mod", word.source.weight)
    for tok in reversed(word.tokens):
        if isinstance(tok, Identity):
            continue
        if isinstance(tok, Localization):
            if obj != ("mod", tok.label.weight):
                raise IllTypedWord(f"{tok} applied to {obj}")
            obj = ("D", tok.P, tok.label.weight)
        elif isinstance(tok, GlobalSections):
            if obj != ("D", tok.P, tok.label.weight):
                raise IllTypedWord(f"{tok} applied to {obj}")
            obj = ("mod", tok.label.weight)
        elif isinstance(tok, Twist):
            if obj[0] != "D":
                raise IllTypedWord(f"{tok} applied to {obj}")
            obj = ("D", obj[1], obj[2] + tok.nu)
        else:
            raise IllTypedWord(f"unknown token {tok!r}")
    if obj != ("mod", word.target.weight):
        raise IllTypedWord(f"word ends at {obj}, expected target {word.target.weight}")
    return obj


# ---------------------------------------------------------------------------
# rewriting


def _redexes(toks: Sequence[Token]) -> list[tuple[str, int]]:
    out = []
    for i, t in enumerate(toks):
        if isinstance(t, Identity) and len(toks) > 1:
            out.append(("R4", i))
        elif isinstance(t, Twist) and t.nu.is_zero():
            out.append(("R3", i))
        if i + 1 < len(toks):
            u = toks[i + 1]
            if isinstance(t, Twist) and isinstance(u, Twist):
                out.append(("R2", i))
            elif (
                isinstance(t, (Localization, GlobalSections))
                and isinstance(u, (Localization, GlobalSections))
                and type(t) is not type(u)
                and t.P == u.P
                and t.label == u.label
                and t.label.regular
            ):
                out.append(("R1", i))
    return out


def _apply(toks: tuple, rule: str, i: int) -> tuple:
    if rule == "R1":
        return toks[:i] + toks[i + 2:]
    if rule == "R2":
        return toks[:i] + (Twist(toks[i].nu + toks[i + 1].nu),) + toks[i + 2:]
    if rule == "R3":
        return toks[:i] + (ID,) + toks[i + 1:]
    if rule == "R4":
        return toks[:i] + toks[i + 1:]
    raise ValueError(rule)


def _finish(toks: tuple) -> tuple:
    return toks if toks else (ID,)


def normalize(word: FunctorWord) -> FunctorWord:
    """Normal form under R1-R4 (leftmost redex first)."""
    typecheck(word)
    toks = tuple(word.tokens)
    while True:
        red = _redexes(toks)
        if not red:
            break
        toks = _finish(_apply(toks, *red[0]))
    return FunctorWord(_finish(toks), word.source, word.target)


def normalize_random(word: FunctorWord, rng: random.Random) -> FunctorWord:
    """Same rules, redex chosen at random each step."""
    typecheck(word)
    toks = tuple(word.tokens)
    while True:
        red = _redexes(toks)
        if not red:
            break
        toks = _finish(_apply(toks, *rng.choice(red)))
    return FunctorWord(_finish(toks), word.source, word.target)


# ---------------------------------------------------------------------------
# functors attached to alcoves and galleries


def _lattice_point(w: Window, a: Alcove, step: Fraction) -> WeightLabel:
    verts = w.vertices(a)
    ranges = []
    for i in range(w.dim):
        lo = math.floor(min(v[i] for v in verts) / step)
        hi = math.ceil(max(v[i] for v in verts) / step)
        ranges.append(range(lo, hi + 1))
    opens = w.constraints(w.walls_of(a))
    for k in product(*ranges):
        x = [step * t for t in k]
        if all(b + sum(c * v for c, v in zip(coef, x)) > 0 for coef, b, _ in opens):
            return WeightLabel(a.id, w.levi.embed(x), True, step == 1)
    raise NoIntegralWeight(f"alcove {a.id} contains no integral weight; try a larger p")


def assign_weight(w: Window, a: Alcove | str) -> WeightLabel:
    """Lexicographically smallest integral point of Lambda_L strictly inside ``a``."""
    a = a if isinstance(a, Alcove) else w.alcove(a)
    lab = _lattice_point(w, a, Fraction(1))
    stab, pair = is_p_regular(lab.weight, w.p, w.rd)
    if stab != pair and w.p >= 5:
        raise WallCrossError(f"regularity tests disagree at {lab.weight}")
    # below 5 the stabilizer of lam + p*Lambda can see torsion the pairing
    # test ignores (A1, p=2); the pairing test decides there
    if not pair:
        raise WallCrossError(f"weight {lab.weight} inside alcove {a.id} is not p-regular")
    return lab


def rational_label(w: Window, a: Alcove | str) -> WeightLabel:
    """Fallback label: smallest denominator m, then the lexicographically
    smallest point of (1/m) Lambda_L strictly inside ``a``.  Flagged non-integral."""
    a = a if isinstance(a, Alcove) else w.alcove(a)
    for m in range(1, 64):
        try:
            lab = _lattice_point(w, a, Fraction(1, m))
        except NoIntegralWeight:
            continue
        return WeightLabel(a.id, lab.weight, True, m == 1)
    raise NoIntegralWeight(f"alcove {a.id} has no point with denominator below 64")


def weight_labels(w: Window, rational_fallback: bool = False) -> dict[str, WeightLabel]:
    """Labels for window alcoves.

    Alcoves squeezed between parallel walls one unit apart (these occur as
    soon as L is not a torus) contain no integral weight.  They are left out
    unless ``rational_fallback`` is set, in which case they receive a
    :func:`rational_label`.
    """
    cache = w.__dict__.setdefault("_label_cache", {})
    if rational_fallback not in cache:
        out = {}
        for a in enumerate_alcoves(w):
            try:
                out[a.id] = assign_weight(w, a)
            except NoIntegralWeight:
                if rational_fallback:
                    out[a.id] = rational_label(w, a)
        cache[rational_fallback] = out
    return cache[rational_fallback]


def unlabelled_alcoves(w: Window) -> list[str]:
    labels = weight_labels(w)
    return [a.id for a in enumerate_alcoves(w) if a.id not in labels]


def identity_word(lab: WeightLabel) -> FunctorWord:
    return FunctorWord((ID,), lab, lab)


def check_step(w: Window, a: str, b: str, P: ParabolicChamber) -> None:
    try:
        up = step_leq(w, a, b, P.cone)
    except (ConeError, KeyError) as exc:
        raise WallCrossError(f"step {a} -> {b} is not a generator: {exc}") from None
    if not up:
        raise WallCrossError(f"generator {a} -> {b} not {P.label}-increasing")


def generator_functor(w: Window, a: str, b: str, P: ParabolicChamber,
                      labels: Optional[dict] = None) -> FunctorWord:
    """Gamma(P, lam_b) o Twist(lam_b - lam_a) o Loc(P, lam_a)."""
    labels = labels if labels is not None else weight_labels(w)
    check_step(w, a, b, P)
    try:
        la, lb = labels[a], labels[b]
    except KeyError as exc:
        raise NoIntegralWeight(f"alcove {exc.args[0]} carries no integral weight") from None
    toks = (GlobalSections(P.label, lb), Twist(lb.weight - la.weight), Localization(P.label, la))
    return FunctorWord(toks, la, lb)


def path_functor(w: Window, g: Gallery, P: ParabolicChamber, labels: Optional[dict] = None) -> FunctorWord:
    labels = labels if labels is not None else weight_labels(w)
    steps = list(zip(g.alcoves, g.alcoves[1:]))
    for i, (a, b) in enumerate(steps):
        try:
            check_step(w, a, b, P)
        except WallCrossError as exc:
            raise WallCrossError(f"step {i} of gallery: {exc}") from None
    missing = [a for a in g.alcoves if a not in labels]
    if missing:
        raise NoIntegralWeight(f"alcove {missing[0]} carries no integral weight")
    word = identity_word(labels[g.alcoves[0]])
    for a, b in steps:
        word = word.then(generator_functor(w, a, b, P, labels))
    return word


def expected_normal_form(P: ParabolicChamber, src: WeightLabel, dst: WeightLabel) -> tuple:
    if src == dst:
        return (ID,)
    return (GlobalSections(P.label, dst), Twist(dst.weight - src.weight), Localization(P.label, src))


@dataclass
class RelationCheck:
    face: str
    apex: str
    opposite: str
    chamber: str
    status: str = "fail"  # "pass" | "fail" | "inconclusive"
    left_word: list = field(default_factory=list)
    right_word: list = field(default_factory=list)
    left_normal: list = field(default_factory=list)
    right_normal: list = field(default_factory=list)
    witness: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.status == "pass"

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return dict(self.__dict__)


def relation_check(w: Window, rel: Relation, P: ParabolicChamber, labels: Optional[dict] = None) -> RelationCheck:
    """Both galleries of ``rel`` give the same normal form, namely
    Gamma(P, lam_apex) o Twist(lam_apex - lam_opp) o Loc(P, lam_opp)."""
    labels = labels if labels is not None else weight_labels(w)
    out = RelationCheck(rel.face, rel.apex, rel.opposite, P.label)
    if rel.left.alcoves[0] != rel.right.alcoves[0] or rel.left.alcoves[-1] != rel.right.alcoves[-1]:
        out.witness = "galleries do not share endpoints"
        return out
    try:
        lw = path_functor(w, rel.left, P, labels)
        rw = path_functor(w, rel.right, P, labels)
    except NoIntegralWeight as exc:
        out.status, out.witness = "inconclusive", str(exc)
        return out
    except WallCrossError as exc:
        out.witness = str(exc)
        return out
    ln, rn = normalize(lw), normalize(rw)
    out.left_word, out.right_word = lw.strings(), rw.strings()
    out.left_normal, out.right_normal = ln.strings(), rn.strings()
    expected = expected_normal_form(P, labels[rel.opposite], labels[rel.apex])
    if ln.tokens != rn.tokens:
        out.witness = "normal forms differ"
    elif ln.tokens != expected:
        out.witness = "normal form is not Gamma o Twist o Loc between the endpoints"
    else:
        out.status = "pass"
    return out


def corrupt_relation(w: Window, rel: Relation) -> Relation:
    """Negative control: swap one interior alcove of the left gallery for a
    window alcove that is not adjacent to its predecessor."""
    adj = adjacency(w)
    seq = list(rel.left.alcoves)
    k = 1
    prev = seq[k - 1]
    nbrs = {b for _, b in adj[prev]}
    bad = next(a.id for a in enumerate_alcoves(w) if a.id not in nbrs and a.id != prev and a.id != seq[k])
    seq[k] = bad
    word = tuple(f"?{i}" for i in range(len(seq) - 1))
    return Relation(rel.face, rel.apex, rel.opposite, Gallery(tuple(seq), word), rel.right)


def check_weight_in(w: Window, a: Alcove | str, lam: Weight) -> WeightLabel:
    a = a if isinstance(a, Alcove) else w.alcove(a)
    if not lam.is_integral:
        raise WallCrossError(f"weight {lam} is not integral")
    try:
        x = w.levi.restrict(lam)
    except ValueError as exc:
        raise WallCrossError(str(exc)) from None
    opens = w.constraints(w.walls_of(a))
    if not all(b + sum(c * v for c, v in zip(coef, x)) > 0 for coef, b, _ in opens):
        raise WallCrossError(f"weight {lam} is not inside alcove {a.id}")
    stab, pair = is_p_regular(lam, w.p, w.rd)
    if not (pair and (stab or w.p < 5)):
        raise WallCrossError(f"weight {lam} is not p-regular")
    return WeightLabel(a.id, lam, True)


def _relabel(P: str, src: WeightLabel, dst: WeightLabel) -> FunctorWord:
    toks = (GlobalSections(P, dst), Twist(dst.weight - src.weight), Localization(P, src))
    return FunctorWord(toks, src, dst)


def lambda_independence_check(w: Window, a: str, b: str, lam: Weight, lam2: Weight,
                              mu: Weight, mu2: Weight, P: Optional[ParabolicChamber] = None) -> bool:
    """The square  F(lam2, mu2) o R(lam -> lam2) = R(mu -> mu2) o F(lam, mu)  commutes."""
    l1, l2 = check_weight_in(w, a, lam), check_weight_in(w, a, lam2)
    m1, m2 = check_weight_in(w, b, mu), check_weight_in(w, b, mu2)
    if P is None:
        chambers = parabolic_chambers(w.rd, w.levi)
        P = next((c for c in chambers if step_leq(w, a, b, c.cone)), None)
        if P is None:
            raise WallCrossError(f"no parabolic chamber makes {a} -> {b} increasing")
    top = _relabel(P.label, l1, m1)
    bottom = _relabel(P.label, l2, m2)
    left = normalize(_relabel(P.label, l1, l2).then(bottom))
    right = normalize(top.then(_relabel(P.label, m1, m2)))
    arithmetic = (mu2 - lam2) == (mu - lam) + (mu2 - mu) - (lam2 - lam)
    return left.tokens == right.tokens and arithmetic


# ---------------------------------------------------------------------------
# window-wide driver


@dataclass
class Claim5Report:
    results: list[RelationCheck] = field(default_factory=list)
    negative_control: Optional[RelationCheck] = None
    unlabelled: list[str] = field(default_factory=list)
    rational: list[str] = field(default_factory=list)

    def count(self, status: str) -> int:
        return sum(r.status == status for r in self.results)

    @property
    def passed(self) -> int:
        return self.count("pass")

    @property
    def ok(self) -> bool:
        """No failing relation, and the negative control (if run) is rejected."""
        neg_ok = self.negative_control is None or self.negative_control.status == "fail"
        return self.count("fail") == 0 and neg_ok

    @property
    def complete(self) -> bool:
        return self.count("inconclusive") == 0

    def to_json(self) -> dict:
        if not self.ok:
            status = "FAILED"
        else:
            status = "verified on window" if self.complete else "verified on labelled relations"
            if self.rational:
                status += " (rational labels on thin alcoves)"
        return {
            "relations": len(self.results),
            "passed": self.passed,
            "failed": self.count("fail"),
            "inconclusive": self.count("inconclusive"),
            "unlabelled_alcoves": list(self.unlabelled),
            "rational_label_alcoves": list(self.rational),
            "status": status,
            "negative_control": None if self.negative_control is None else self.negative_control.to_json(),
            "traces": [r.to_json() for r in self.results],
        }


def verify_claim5(w: Window, rels: Optional[Sequence[Relation]] = None, inject_corruption: bool = False,
                  rational_fallback: bool = False) -> Claim5Report:
    """relation_check for every relation with the parabolic chosen by find_parabolic."""
    from .coneorder import find_parabolic

    chambers = parabolic_chambers(w.rd, w.levi)
    labels = weight_labels(w, rational_fallback)
    rels = list(rels if rels is not None else relations(w))
    report = Claim5Report(
        unlabelled=[a.id for a in enumerate_alcoves(w) if a.id not in labels],
        rational=sorted(k for k, v in labels.items() if not v.integral),
    )
    for i, rel in enumerate(rels):
        P = find_parabolic(w, rel, chambers)
        if inject_corruption and i == 0:
            rel = corrupt_relation(w, rel)
        report.results.append(relation_check(w, rel, P, labels))
    if rels and not inject_corruption:
        P = find_parabolic(w, rels[0], chambers)
        report.negative_control = relation_check(w, corrupt_relation(w, rels[0]), P, labels)
    return report


# ---------------------------------------------------------------------------
# random well-typed words (confluence testing)


def random_word(rng: random.Random, rd, p: int, length: int = 12, chambers: Sequence[str] = ("P0", "P1"),
                radius: int = 6) -> FunctorWord:
    """Random well-typed word with plenty of overlapping redexes.

    Built in application order starting from a module endpoint; labels are
    marked regular exactly when the weight is p-regular, so R1 is sometimes
    blocked.
    """
    rank = rd.rank

    def label(lam: Weight) -> WeightLabel:
        return WeightLabel("", lam, is_p_regular(lam, p, rd)[1])

    def rand_weight() -> Weight:
        return Weight.of([rng.randint(-radius, radius) for _ in range(rank)])

    lam = rand_weight()
    src = label(lam)
    obj = ("mod", None, lam)
    applied: list[Token] = []
    while len(applied) < length:
        kind = obj[0]
        roll = rng.random()
        if roll < 0.08:
            applied.append(ID)
        elif kind == "mod":
            P = rng.choice(chambers)
            lab = label(obj[2])
            if rng.random() < 0.3:
                applied += [Localization(P, lab), GlobalSections(P, lab)]
            else:
                applied.append(Localization(P, lab))
                obj = ("D", P, obj[2])
        else:
            P, cur = obj[1], obj[2]
            if roll < 0.45:
                nu = rand_weight() if rng.random() < 0.7 else Weight.of([0] * rank)
                applied.append(Twist(nu))
                if rng.random() < 0.3:
                    applied.append(Twist(-nu))
                else:
                    cur = cur + nu
                obj = ("D", P, cur)
            else:
                lab = label(cur)
                applied.append(GlobalSections(P, lab))
                obj = ("mod", None, cur)
                if rng.random() < 0.3:
                    applied.append(Localization(P, lab))
                    obj = ("D", P, cur)
    if obj[0] == "D":
        applied.append(GlobalSections(obj[1], label(obj[2])))
    tgt = label(obj[2])
    return FunctorWord(tuple(reversed(applied)), src, tgt)
