"""Simple root systems with exact rational coordinates.

Every system is realized in a fixed ambient Q^m whose standard dot product
is a positive multiple of the invariant form, so pairings between roots and
weights are exact.  Roots are generated by reflection closure from the
simple roots; fundamental weights are solved from the Cartan matrix.

Simple roots are numbered in the VO convention, the one used by all
classification tables in this package.  For the classical series and G2 it
coincides with the Bourbaki numbering; for F4 it is the reversal, and for
E6/E7/E8 the long arm of the diagram is numbered first, ending with the
branch node.  `vo_to_bourbaki` gives the relabeling, and the unit tests pin
it through the adjoint highest weight of every type.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import ConstraintError, DimensionError
from .ratlinalg import Vector, dot, rref, vec, zero_vec

SERIES_MIN_RANK = {"A": 1, "B": 2, "C": 2, "D": 3, "E": 6, "F": 4, "G": 2}
SERIES_MAX_RANK = {"E": 8, "F": 4, "G": 2}


@dataclass(frozen=True)
class SimpleType:
    """A simple Lie algebra type: series letter plus rank."""

    series: str
    rank: int

    def __post_init__(self):
        if self.series not in SERIES_MIN_RANK:
            raise ConstraintError(f"unknown series {self.series!r}")
        lo = SERIES_MIN_RANK[self.series]
        hi = SERIES_MAX_RANK.get(self.series, 10**9)
        if not (isinstance(self.rank, int) and lo <= self.rank <= hi):
            raise ConstraintError(
                f"rank {self.rank} invalid for series {self.series} (allowed {lo}..{hi})"
            )

    def __str__(self) -> str:
        return f"{self.series}{self.rank}"

    @property
    def dim(self) -> int:
        """Dimension of the Lie algebra."""
        l = self.rank
        if self.series == "A":
            return l * (l + 2)
        if self.series == "B":
            return l * (2 * l + 1)
        if self.series == "C":
            return l * (2 * l + 1)
        if self.series == "D":
            return l * (2 * l - 1)
        if self.series == "E":
            return {6: 78, 7: 133, 8: 248}[l]
        if self.series == "F":
            return 52
        return 14  # G2

    @property
    def classical_size(self) -> int | None:
        """n for sl(n)/so(n)/sp(n) descriptions, None for exceptional types."""
        if self.series == "A":
            return self.rank + 1
        if self.series == "B":
            return 2 * self.rank + 1
        if self.series == "C":
            return 2 * self.rank
        if self.series == "D":
            return 2 * self.rank
        return None


def sl(n: int) -> SimpleType:
    if n < 2:
        raise ConstraintError(f"sl({n}) is not simple")
    return SimpleType("A", n - 1)


def so(n: int) -> SimpleType:
    # so(4) is not simple; below that the orthogonal description is not used.
    if n < 5:
        raise ConstraintError(f"so({n}) is not available as a simple orthogonal type")
    return SimpleType("B", (n - 1) // 2) if n % 2 else SimpleType("D", n // 2)


def sp(n: int) -> SimpleType:
    if n % 2 or n < 4:
        if n == 2:
            return SimpleType("A", 1)
        raise ConstraintError(f"sp({n}) requires even n >= 4 (or n = 2)")
    return SimpleType("C", n // 2)


def _basic(m: int, entries: dict[int, int]) -> tuple[int, ...]:
    v = [0] * m
    for i, x in entries.items():
        v[i] = x
    return tuple(v)


def _simple_roots(t: SimpleType) -> tuple[int, list[tuple[int, ...]]]:
    """Ambient dimension and simple roots in VO order, integer coordinates.

    The E and F realizations are the standard ones scaled by two so the
    reflection closure stays in integer arithmetic; every pairing used
    downstream is scale-invariant.
    """
    s, l = t.series, t.rank
    if s == "A":
        m = l + 1
        return m, [_basic(m, {i: 1, i + 1: -1}) for i in range(l)]
    if s == "B":
        m = l
        roots = [_basic(m, {i: 1, i + 1: -1}) for i in range(l - 1)]
        roots.append(_basic(m, {l - 1: 1}))
        return m, roots
    if s == "C":
        m = l
        roots = [_basic(m, {i: 1, i + 1: -1}) for i in range(l - 1)]
        roots.append(_basic(m, {l - 1: 2}))
        return m, roots
    if s == "D":
        m = l
        roots = [_basic(m, {i: 1, i + 1: -1}) for i in range(l - 1)]
        roots.append(_basic(m, {l - 2: 1, l - 1: 1}))
        return m, roots
    if s == "G":
        # Inside the sum-zero plane of Q^3; alpha_1 short so that pi_1 is the
        # weight of the 7-dimensional module.
        return 3, [(1, -1, 0), (-2, 1, 1)]
    if s == "F":
        # Reversal of the standard chain: pi_1 is the 26-dimensional weight.
        return 4, [
            (1, -1, -1, -1),
            (0, 0, 0, 2),
            (0, 0, 2, -2),
            (0, 2, -2, 0),
        ]
    # E series, realized inside Q^8 (doubled).
    b = {
        1: (1, -1, -1, -1, -1, -1, -1, 1),
        2: _basic(8, {0: 2, 1: 2}),
        3: _basic(8, {0: -2, 1: 2}),
        4: _basic(8, {1: -2, 2: 2}),
        5: _basic(8, {2: -2, 3: 2}),
        6: _basic(8, {3: -2, 4: 2}),
        7: _basic(8, {4: -2, 5: 2}),
        8: _basic(8, {5: -2, 6: 2}),
    }
    order = {6: [1, 3, 4, 5, 6, 2], 7: [7, 6, 5, 4, 3, 1, 2], 8: [8, 7, 6, 5, 4, 3, 1, 2]}[l]
    return 8, [b[i] for i in order]


VO_TO_BOURBAKI = {
    ("E", 6): (1, 3, 4, 5, 6, 2),
    ("E", 7): (7, 6, 5, 4, 3, 1, 2),
    ("E", 8): (8, 7, 6, 5, 4, 3, 1, 2),
    ("F", 4): (4, 3, 2, 1),
}


def vo_to_bourbaki(t: SimpleType) -> tuple[int, ...]:
    """1-based Bourbaki label of each VO-numbered node."""
    return VO_TO_BOURBAKI.get((t.series, t.rank), tuple(range(1, t.rank + 1)))


@dataclass(frozen=True)
class RootSystem:
    """An exact realization of a simple root system."""

    stype: SimpleType
    ambient_dim: int
    simple_roots: tuple[Vector, ...]
    roots: tuple[Vector, ...]
    positive_roots: tuple[Vector, ...]
    cartan_matrix: tuple[tuple[int, ...], ...]
    fundamental_weights: tuple[Vector, ...]
    form_scale: Fraction  # invariant form = form_scale * (ambient dot product)

    @property
    def rank(self) -> int:
        return self.stype.rank

    def pairing(self, beta: Vector, alpha: Vector) -> Fraction:
        """<beta, alpha^vee> = 2(beta,alpha)/(alpha,alpha)."""
        return 2 * dot(beta, alpha) / dot(alpha, alpha)

    def weight_vector(self, coeffs) -> Vector:
        """Ambient coordinates of sum coeffs[i] * pi_{i+1}."""
        if len(coeffs) != self.rank:
            raise DimensionError(f"{len(coeffs)} coefficients for rank {self.rank}")
        v = zero_vec(self.ambient_dim)
        for c, w in zip(coeffs, self.fundamental_weights):
            if c:
                v = tuple(a + Fraction(c) * b for a, b in zip(v, w))
        return v


def _invert(mat: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(mat)
    aug = [list(mat[i]) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    red, piv = rref(aug, 2 * n)
    if piv != list(range(n)):
        raise DimensionError("matrix is singular")
    return [row[n:] for row in red]


@lru_cache(maxsize=None)
def build_root_system(t: SimpleType) -> RootSystem:
    """Construct the root system of a simple type (cached, immutable)."""
    m, simple = _simple_roots(t)
    l = t.rank
    norms = [sum(x * x for x in a) for a in simple]

    def pair_int(b, i: int) -> int:
        num = 2 * sum(x * y for x, y in zip(b, simple[i]))
        if num % norms[i]:
            raise ConstraintError("non-integral pairing in realization")
        return num // norms[i]

    cartan_int = tuple(tuple(pair_int(simple[j], i) for j in range(l)) for i in range(l))

    # Reflection closure in integer arithmetic; carry simple-root
    # coordinates to read off positivity.
    seen: dict[tuple[int, ...], tuple[int, ...]] = {}
    frontier = []
    for i, a in enumerate(simple):
        coords = tuple(int(j == i) for j in range(l))
        seen[a] = coords
        frontier.append(a)
    while frontier:
        beta = frontier.pop()
        coords = seen[beta]
        for i, a in enumerate(simple):
            c = pair_int(beta, i)
            if c == 0:
                continue
            new = tuple(x - c * y for x, y in zip(beta, a))
            if new not in seen:
                ncoords = tuple(x - (c if j == i else 0) for j, x in enumerate(coords))
                seen[new] = ncoords
                frontier.append(new)
    # roots are kept in integer coordinates (still exact rationals for all
    # consumers; Fractions mix freely with them)
    roots = tuple(sorted(seen))
    positive = tuple(sorted(r for r, coords in seen.items() if all(x >= 0 for x in coords)))
    if 2 * len(positive) != len(roots):
        raise ConstraintError("reflection closure produced an asymmetric root set")

    cinv = _invert([[Fraction(x) for x in row] for row in cartan_int])
    weights = []
    for i in range(l):
        w = zero_vec(m)
        for k in range(l):
            if cinv[k][i]:
                w = tuple(a + cinv[k][i] * b for a, b in zip(w, simple[k]))
        weights.append(tuple(w))

    long_sq = max(dot(r, r) for r in roots)
    form_scale = Fraction(2) / long_sq

    return RootSystem(
        stype=t,
        ambient_dim=m,
        simple_roots=tuple(simple),
        roots=roots,
        positive_roots=positive,
        cartan_matrix=cartan_int,
        fundamental_weights=tuple(weights),
        form_scale=form_scale,
    )


def highest_root(rs: RootSystem) -> Vector:
    """The dominant long root."""
    long_sq = max(sum(x * x for x in r) for r in rs.roots)
    for r in rs.roots:
        if sum(x * x for x in r) == long_sq and all(
                sum(x * y for x, y in zip(r, a)) >= 0 for a in rs.simple_roots):
            return r
    raise ConstraintError("no dominant long root found")  # unreachable for valid systems


def k_value(rs: RootSystem, long_root: Vector | None = None) -> int:
    """Sum of <beta, alpha^vee>^2 over all roots, for a long root alpha.

    The value does not depend on which long root is chosen; by default the
    highest root is used.
    """
    alpha = highest_root(rs) if long_root is None else long_root
    aa = sum(x * x for x in alpha)
    if aa != max(sum(x * x for x in r) for r in rs.roots):
        raise ConstraintError("k_value requires a long root")
    total = 0
    for beta in rs.roots:
        d = 2 * sum(x * y for x, y in zip(beta, alpha))
        total += d * d
    value = Fraction(total, aa * aa)
    if value.denominator != 1:
        raise ConstraintError("non-integral k value")
    return int(value)


def weyl_dim(rs: RootSystem, coeffs) -> int:
    """Dimension of the irreducible module with the given dominant weight.

    `coeffs` are the coordinates in the fundamental-weight basis; they must
    be nonnegative integers.
    """
    if len(coeffs) != rs.rank:
        raise DimensionError(f"{len(coeffs)} coefficients for rank {rs.rank}")
    for c in coeffs:
        if Fraction(c).denominator != 1 or c < 0:
            raise ConstraintError(f"weight {tuple(coeffs)} is not dominant integral")
    lam = rs.weight_vector(coeffs)
    rho = rs.weight_vector([1] * rs.rank)
    num = Fraction(1)
    for beta in rs.positive_roots:
        num *= dot(tuple(a + b for a, b in zip(lam, rho)), beta) / dot(rho, beta)
    if num.denominator != 1 or num <= 0:
        raise ConstraintError("Weyl dimension came out non-integral")
    return int(num)


def diagram_automorphisms(rs: RootSystem) -> list[tuple[int, ...]]:
    """All symmetries of the Dynkin diagram, as 0-based index permutations."""
    l = rs.rank
    C = rs.cartan_matrix
    results: list[tuple[int, ...]] = []

    def extend(img: list[int], used: set[int]):
        i = len(img)
        if i == l:
            results.append(tuple(img))
            return
        for cand in range(l):
            if cand in used:
                continue
            if C[cand][cand] != C[i][i]:
                continue
            ok = True
            for j in range(i):
                if C[i][j] != C[cand][img[j]] or C[j][i] != C[img[j]][cand]:
                    ok = False
                    break
            if ok:
                extend(img + [cand], used | {cand})

    extend([], set())
    return sorted(results)


def dual_weight_permutation(t: SimpleType) -> tuple[int, ...]:
    """0-based permutation d with  (pi_i)* = pi_{d(i)}  (dual highest weight)."""
    l = t.rank
    if t.series == "A":
        return tuple(l - 1 - i for i in range(l))
    if t.series == "D" and l % 2 == 1:
        p = list(range(l))
        p[l - 2], p[l - 1] = p[l - 1], p[l - 2]
        return tuple(p)
    if (t.series, l) == ("E", 6):
        return (4, 3, 2, 1, 0, 5)
    return tuple(range(l))
