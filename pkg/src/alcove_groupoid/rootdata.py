"""Root data, weight lattice arithmetic and p-regularity.

Conventions: weights are written in fundamental-weight coordinates, so an
integral weight is an integer vector and ``<lambda, alpha_i^vee>`` is simply the
i-th coordinate.  The Cartan matrix follows Bourbaki,
``cartan[i][j] = <alpha_i, alpha_j^vee>``, so row ``i`` is the simple root
``alpha_i`` in fundamental-weight coordinates.
"""
from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Sequence

import numpy as np


class RootDatumError(ValueError):
    pass


def _chain(n: int) -> list[list[int]]:
    a = [[0] * n for _ in range(n)]
    for i in range(n):
        a[i][i] = 2
    for i in range(n - 1):
        a[i][i + 1] = a[i + 1][i] = -1
    return a


def cartan_matrix(series: str, rank: int) -> list[list[int]]:
    """Cartan matrix of an irreducible finite type, Bourbaki numbering."""
    series = series.upper()
    if rank < 1:
        raise RootDatumError(f"rank must be positive, got {rank}")
    if series == "A":
        return _chain(rank)
    if series == "B" and rank >= 2:
        a = _chain(rank)
        a[rank - 2][rank - 1] = -2
        return a
    if series == "C" and rank >= 2:
        a = _chain(rank)
        a[rank - 1][rank - 2] = -2
        return a
    if series == "D" and rank >= 3:
        a = _chain(rank)
        a[rank - 2][rank - 1] = a[rank - 1][rank - 2] = 0
        a[rank - 3][rank - 1] = a[rank - 1][rank - 3] = -1
        return a
    if series == "E" and rank in (6, 7, 8):
        # Bourbaki: 1-3-4-5-...-n chain with 2 attached to 4
        a = [[0] * rank for _ in range(rank)]
        for i in range(rank):
            a[i][i] = 2
        edges = [(0, 2), (1, 3), (2, 3)] + [(k, k + 1) for k in range(3, rank - 1)]
        for i, j in edges:
            a[i][j] = a[j][i] = -1
        return a
    if series == "F" and rank == 4:
        a = _chain(4)
        a[1][2] = -2
        return a
    if series == "G" and rank == 2:
        return [[2, -1], [-3, 2]]
    raise RootDatumError(f"unknown finite type {series}{rank}")


def _block_diag(blocks: Sequence[list[list[int]]]) -> list[list[int]]:
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, v in enumerate(row):
                out[off + i][off + j] = v
        off += len(b)
    return out


def parse_type(label: str) -> list[list[int]]:
    """Parse ``"A2"``, ``"G2"`` or products such as ``"A1xA1"``."""
    parts = re.split(r"\s*[x×*]\s*", label.strip())
    blocks = []
    for part in parts:
        m = re.fullmatch(r"([A-Ga-g])(\d+)", part)
        if not m:
            raise RootDatumError(f"cannot parse root type {label!r}")
        blocks.append(cartan_matrix(m.group(1), int(m.group(2))))
    return _block_diag(blocks)


def _leading_minors_positive(m: list[list[Fraction]]) -> bool:
    n = len(m)
    a = [row[:] for row in m]
    # Gaussian elimination without pivoting: all pivots > 0 <=> positive definite
    for k in range(n):
        if a[k][k] <= 0:
            return False
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            for j in range(k, n):
                a[i][j] -= f * a[k][j]
    return True


def _root_lengths(cartan: list[list[int]]) -> list[Fraction]:
    """Squared lengths of the simple roots; shortest root of each component has length 2."""
    n = len(cartan)
    lengths: list[Fraction | None] = [None] * n
    for start in range(n):
        if lengths[start] is not None:
            continue
        lengths[start] = Fraction(2)
        stack = [start]
        comp = [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                if i == j or cartan[i][j] == 0:
                    continue
                # a_ij * l_j = a_ji * l_i
                lj = Fraction(cartan[j][i]) * lengths[i] / cartan[i][j]
                if lengths[j] is None:
                    lengths[j] = lj
                    stack.append(j)
                    comp.append(j)
                elif lengths[j] != lj:
                    raise RootDatumError("Cartan matrix is not symmetrizable")
        shortest = min(lengths[c] for c in comp)
        for c in comp:
            lengths[c] = lengths[c] * 2 / shortest
    return lengths  # type: ignore[return-value]


def validate_cartan(cartan: Sequence[Sequence[int]]) -> list[list[int]]:
    """Check that ``cartan`` is a Cartan matrix of finite type; return a copy."""
    a = [list(map(int, row)) for row in cartan]
    n = len(a)
    if n == 0 or any(len(row) != n for row in a):
        raise RootDatumError("Cartan matrix must be square and nonempty")
    for i in range(n):
        if a[i][i] != 2:
            raise RootDatumError(f"diagonal entry ({i},{i}) is {a[i][i]}, expected 2")
        for j in range(n):
            if i == j:
                continue
            if a[i][j] > 0:
                raise RootDatumError(f"off-diagonal entry ({i},{j}) is positive")
            if (a[i][j] == 0) != (a[j][i] == 0):
                raise RootDatumError(f"entries ({i},{j}) and ({j},{i}) must vanish together")
            if a[i][j] * a[j][i] > 3:
                raise RootDatumError(f"a_ij*a_ji = {a[i][j] * a[j][i]} > 3 at ({i},{j}): not finite type")
    lengths = _root_lengths(a)
    sym = [[Fraction(a[i][j]) * lengths[j] / 2 for j in range(n)] for i in range(n)]
    if not _leading_minors_positive(sym):
        raise RootDatumError("symmetrized Cartan matrix is not positive definite: not finite type")
    return a


def root_closure(cartan: list[list[int]]) -> list[tuple[int, ...]]:
    """Positive roots (simple-root coordinates) by the root-string algorithm."""
    n = len(cartan)
    simples = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    roots = set(simples)
    layer = list(simples)
    ordered = list(simples)
    while layer:
        nxt = []
        for beta in layer:
            for i in range(n):
                pair = sum(beta[j] * cartan[j][i] for j in range(n))
                r = 0
                down = list(beta)
                while True:
                    down[i] -= 1
                    if tuple(down) in roots:
                        r += 1
                    else:
                        break
                q = r - pair
                if q > 0:
                    up = list(beta)
                    up[i] += 1
                    up = tuple(up)
                    if up not in roots:
                        roots.add(up)
                        nxt.append(up)
        nxt.sort()
        ordered.extend(nxt)
        layer = nxt
    return sorted(ordered, key=lambda r: (sum(r), tuple(-x for x in r)))


@dataclass(frozen=True)
class Weight:
    coords: tuple[Fraction, ...]

    @classmethod
    def of(cls, *coords) -> "Weight":
        if len(coords) == 1 and isinstance(coords[0], (list, tuple)):
            coords = tuple(coords[0])
        return cls(tuple(Fraction(c) for c in coords))

    @property
    def rank(self) -> int:
        return len(self.coords)

    @property
    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coords)

    def __add__(self, other: "Weight") -> "Weight":
        return Weight(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Weight") -> "Weight":
        return Weight(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "Weight":
        return Weight(tuple(-a for a in self.coords))

    def scale(self, k) -> "Weight":
        return Weight(tuple(a * k for a in self.coords))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def to_json(self) -> list:
        return [str(c) if c.denominator != 1 else int(c) for c in self.coords]

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in self.coords) + ")"


@dataclass(frozen=True)
class RootDatum:
    rank: int
    cartan: tuple[tuple[int, ...], ...]
    label: str = ""
    lengths: tuple[Fraction, ...] = field(default=(), repr=False)
    pos_roots: tuple[tuple[int, ...], ...] = field(default=(), repr=False)

    @property
    def rho(self) -> Weight:
        return Weight(tuple(Fraction(1) for _ in range(self.rank)))

    @property
    def simple_roots(self) -> list[Weight]:
        return [Weight.of(row) for row in self.cartan]

    @property
    def simple_coroots(self) -> list[tuple[int, ...]]:
        """Simple coroots in simple-coroot coordinates."""
        return [tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank)]

    def root_length(self, root: Sequence[int]) -> Fraction:
        a, l = self.cartan, self.lengths
        return sum(
            (Fraction(root[i] * root[j] * a[i][j]) * l[j] / 2
             for i in range(self.rank) for j in range(self.rank)),
            Fraction(0),
        )

    def coroot(self, root: Sequence[int]) -> tuple[int, ...]:
        """alpha^vee in simple-coroot coordinates (integral)."""
        la = self.root_length(root)
        co = [Fraction(root[i]) * self.lengths[i] / la for i in range(self.rank)]
        assert all(c.denominator == 1 for c in co)
        return tuple(int(c) for c in co)

    @cached_property
    def pos_coroots(self) -> tuple[tuple[int, ...], ...]:
        return tuple(self.coroot(r) for r in self.pos_roots)

    def root_weight(self, root: Sequence[int]) -> Weight:
        """A root given in simple-root coordinates, as a weight."""
        return Weight(tuple(
            Fraction(sum(root[i] * self.cartan[i][j] for i in range(self.rank)))
            for j in range(self.rank)
        ))

    def reflect(self, i: int, lam: Weight) -> Weight:
        c = lam.coords[i]
        return Weight(tuple(x - c * a for x, a in zip(lam.coords, self.cartan[i])))

    def act(self, word: Sequence[int], lam: Weight) -> Weight:
        """Apply ``s_{w[0]} ... s_{w[-1]}`` (rightmost reflection first)."""
        for i in reversed(word):
            lam = self.reflect(i, lam)
        return lam

    @cached_property
    def weyl_group(self) -> tuple[tuple[tuple[int, ...], np.ndarray], ...]:
        """All Weyl group elements as (reduced word, integer matrix) pairs.

        Matrices act on column vectors of fundamental-weight coordinates.
        """
        n = self.rank
        gens = []
        for i in range(n):
            # s_i(lam) = lam - lam_i * alpha_i: column i picks up -alpha_i
            m = np.eye(n, dtype=np.int64)
            m[:, i] -= np.array(self.cartan[i], dtype=np.int64)
            gens.append(m)
        ident = np.eye(n, dtype=np.int64)
        seen = {ident.tobytes(): ((), ident)}
        frontier = [((), ident)]
        while frontier:
            nxt = []
            for word, mat in frontier:
                for i, g in enumerate(gens):
                    prod_ = g @ mat
                    key = prod_.tobytes()
                    if key not in seen:
                        item = ((i,) + word, prod_)
                        seen[key] = item
                        nxt.append(item)
            frontier = nxt
        return tuple(sorted(seen.values(), key=lambda t: (len(t[0]), t[0])))

    @property
    def weyl_order(self) -> int:
        return len(self.weyl_group)

    @property
    def coxeter_number(self) -> int:
        # height of the highest coroot + 1, max over components
        return max(sum(c) for c in self.pos_coroots) + 1


def build_root_datum(spec: str | Sequence[Sequence[int]]) -> RootDatum:
    """Root datum from a type label (``"A2"``, ``"A1xA1"``) or a Cartan matrix."""
    if isinstance(spec, str):
        cartan = validate_cartan(parse_type(spec))
        label = spec.strip()
    else:
        cartan = validate_cartan(spec)
        label = "cartan:" + ";".join(",".join(map(str, r)) for r in cartan)
    lengths = _root_lengths(cartan)
    roots = root_closure(cartan)
    return RootDatum(
        rank=len(cartan),
        cartan=tuple(tuple(r) for r in cartan),
        label=label,
        lengths=tuple(lengths),
        pos_roots=tuple(roots),
    )


def pairing(lam: Weight, coroot: Sequence[int]) -> Fraction:
    """<lambda, alpha^vee> with the coroot in simple-coroot coordinates."""
    if len(coroot) != lam.rank:
        raise RootDatumError("dimension mismatch between weight and coroot")
    return sum((c * k for c, k in zip(lam.coords, coroot)), Fraction(0))


@dataclass(frozen=True)
class LeviSpec:
    levi_simples: tuple[int, ...]
    levi_roots: tuple[tuple[int, ...], ...]
    lattice_basis: tuple[int, ...]  # indices i of the fundamental weights varpi_i spanning Lambda_L

    @property
    def dim(self) -> int:
        return len(self.lattice_basis)

    def embed(self, x: Sequence) -> Weight:
        """Point of V (coordinates on lattice_basis) as a full weight."""
        rank = len(self.levi_simples) + len(self.lattice_basis)
        coords = [Fraction(0)] * rank
        for j, v in zip(self.lattice_basis, x):
            coords[j] = Fraction(v)
        return Weight(tuple(coords))

    def restrict(self, lam: Weight) -> tuple[Fraction, ...]:
        if any(lam.coords[i] != 0 for i in self.levi_simples):
            raise RootDatumError(f"weight {lam} is not in the Levi sublattice")
        return tuple(lam.coords[j] for j in self.lattice_basis)


def levi_sublattice(rd: RootDatum, levi_simples: Sequence[int]) -> LeviSpec:
    """Sublattice of weights vanishing on the Levi coroots.

    ``levi_simples`` uses 0-based simple root indices.
    """
    levi = tuple(sorted(set(int(i) for i in levi_simples)))
    if any(i < 0 or i >= rd.rank for i in levi):
        raise RootDatumError(f"Levi indices {levi} out of range for rank {rd.rank}")
    levi_roots = tuple(
        r for r in rd.pos_roots if all(r[i] == 0 for i in range(rd.rank) if i not in levi)
    )
    basis = tuple(i for i in range(rd.rank) if i not in levi)
    return LeviSpec(levi, levi_roots, basis)


def dot_action(rd: RootDatum, word: Sequence[int], lam: Weight) -> Weight:
    """w . lambda = w(lambda + rho) - rho."""
    return rd.act(word, lam + rd.rho) - rd.rho


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


def check_prime(p: int, rd: RootDatum | None = None) -> None:
    if not isinstance(p, (int, np.integer)) or not is_prime(int(p)):
        raise RootDatumError(f"p = {p!r} is not prime")
    if p < 5:
        warnings.warn(f"p = {p} < 5: statements assume p >> 0", stacklevel=3)
    elif rd is not None and p <= rd.coxeter_number:
        warnings.warn(
            f"p = {p} <= Coxeter number {rd.coxeter_number}: statements assume p >> 0",
            stacklevel=3,
        )


def regular_by_pairing(rd: RootDatum, lam: Weight, p: int) -> bool:
    shifted = lam + rd.rho
    return all(pairing(shifted, co) % p != 0 for co in rd.pos_coroots)


def regular_by_stabilizer(rd: RootDatum, lam: Weight, p: int) -> bool:
    shifted = np.array([int(c) for c in (lam + rd.rho).coords], dtype=np.int64)
    for word, mat in rd.weyl_group:
        if not word:
            continue
        if np.all((mat @ shifted - shifted) % p == 0):
            return False
    return True


def is_p_regular(lam: Weight, p: int, rd: RootDatum) -> tuple[bool, bool]:
    """(stabilizer test, pairing test).  The two must agree."""
    check_prime(p, rd)
    if not lam.is_integral:
        raise RootDatumError(f"weight {lam} is not integral")
    return regular_by_stabilizer(rd, lam, p), regular_by_pairing(rd, lam, p)


def regularity_box(rd: RootDatum, p: int, radius: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Both regularity tests over every integral weight in [-radius, radius]^rank.

    Returns (points, stabilizer_regular, pairing_regular).
    """
    axis = np.arange(-radius, radius + 1, dtype=np.int64)
    pts = np.array(list(product(axis, repeat=rd.rank)), dtype=np.int64)
    shifted = pts + 1
    stab_regular = np.ones(len(pts), dtype=bool)
    for word, mat in rd.weyl_group:
        if not word:
            continue
        fixed = np.all((shifted @ mat.T - shifted) % p == 0, axis=1)
        stab_regular &= ~fixed
    coroots = np.array(rd.pos_coroots, dtype=np.int64)
    pair_regular = np.all((shifted @ coroots.T) % p != 0, axis=1)
    return pts, stab_regular, pair_regular
