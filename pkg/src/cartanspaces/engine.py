"""Computation of Cartan spaces, rank, essential part, and complexity.

The engine is a certifier: a pair is accepted only when every
indecomposable summand matches an encoded classification row (a semisimple
table row, a central-extension family, or a trivially known case), and the
space is assembled from the stored data.  Anything else is rejected with a
precise reason; nothing is extrapolated.

Coordinates: a pair with factors g_1,...,g_f and a c-dimensional central
torus uses ambient Q^(rk g_1 + ... + rk g_f + c).  The first blocks are
fundamental-weight coordinates of the factors (VO numbering), the trailing
block is the character space of the central torus.  Central subspaces of
the subalgebra live in the separate coordinate space
[z(g) coordinates, one coordinate per centrally extendable factor].
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .catalog import (
    CatalogEntry,
    HItem,
    ReductivePair,
    RowInstance,
    family_row_for_factor,
    instantiate,
    match_t14,
)
from .errors import (
    ConstraintError,
    ContractError,
    InternalConsistencyError,
    OutsideCatalogError,
)
from .ratlinalg import (
    LinearFunctional,
    RationalSubspace,
    Vector,
    annihilator_preimage,
    dot,
    kernel_basis,
    rref,
    span,
)
from .rootsystems import build_root_system, diagram_automorphisms


@dataclass(frozen=True)
class EssentialPart:
    """The retained ideals and central part with the same Cartan space."""

    item_indices: tuple[int, ...]    # positions within the pair's item list
    items: tuple[HItem, ...]
    center_rows: tuple[Vector, ...]  # in the pair's central coordinates

    def describe(self) -> str:
        parts = [it.describe() for it in self.items]
        if self.center_rows:
            parts.append(f"center(dim {len(self.center_rows)})")
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class CartanResult:
    space: RationalSubspace
    rank: int
    essential: EssentialPart
    complexity: int
    trace: tuple[str, ...]


# ---------------------------------------------------------------------------
# decomposition
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _Summand:
    factor_indices: tuple[int, ...]   # original factor positions, sorted
    item_indices: tuple[int, ...]     # positions into pair.items
    has_center_block: bool            # owns the z(g) coordinate block
    center_rows: tuple[Vector, ...]   # rows of the central subspace (full z-coords)


def _z_layout(pair: ReductivePair) -> tuple[tuple[int, ...], int]:
    slots = pair.family_slots()
    return slots, pair.center_dim + len(slots)


def _summands(pair: ReductivePair) -> list[_Summand]:
    nf = len(pair.factors)
    znode = nf  # single node for the whole central torus
    parent = list(range(nf + 1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a: int, b: int):
        parent[find(a)] = find(b)

    for item in pair.items:
        for t in item.targets[1:]:
            union(item.targets[0], t)

    slots, _ = _z_layout(pair)
    rows: tuple[Vector, ...] = pair.center.basis if pair.center else ()
    row_nodes: list[list[int]] = []
    for row in rows:
        nodes = []
        for j, x in enumerate(row):
            if x == 0:
                continue
            if j < pair.center_dim:
                nodes.append(znode)
            else:
                nodes.append(slots[j - pair.center_dim])
        row_nodes.append(sorted(set(nodes)))
        for a in nodes[1:]:
            union(nodes[0], a)

    groups: dict[int, dict] = {}
    for f in range(nf):
        groups.setdefault(find(f), {"factors": [], "items": [], "z0": False, "rows": []})["factors"].append(f)
    if pair.center_dim > 0:
        groups.setdefault(find(znode), {"factors": [], "items": [], "z0": False, "rows": []})["z0"] = True
    for i, item in enumerate(pair.items):
        groups[find(item.targets[0])]["items"].append(i)
    for row, nodes in zip(rows, row_nodes):
        groups[find(nodes[0])]["rows"].append(row)

    out = []
    for _, grp in sorted(groups.items(),
                         key=lambda kv: (min(kv[1]["factors"]) if kv[1]["factors"] else nf,)):
        out.append(_Summand(
            tuple(sorted(grp["factors"])),
            tuple(sorted(grp["items"])),
            grp["z0"],
            tuple(grp["rows"]),
        ))
    return out


def _summand_pair(pair: ReductivePair, s: _Summand) -> ReductivePair:
    """Re-index a summand as a standalone pair."""
    factor_map = {old: new for new, old in enumerate(s.factor_indices)}
    items = tuple(
        HItem(pair.items[i].base, pair.items[i].size,
              tuple(factor_map[t] for t in pair.items[i].targets),
              pair.items[i].diag_type)
        for i in s.item_indices
    )
    center_dim = pair.center_dim if s.has_center_block else 0
    sub = ReductivePair(tuple(pair.factors[i] for i in s.factor_indices),
                        center_dim, items, None)
    if not s.center_rows:
        return sub
    old_slots, _ = _z_layout(pair)
    cols: list[int] = []
    if s.has_center_block:
        cols.extend(range(pair.center_dim))
    for new_slot in sub.family_slots():
        orig_factor = s.factor_indices[new_slot]
        cols.append(pair.center_dim + old_slots.index(orig_factor))
    rows = [tuple(r[c] for c in cols) for r in s.center_rows]
    return ReductivePair(sub.factors, center_dim, items, span(rows, len(cols)))


def decompose(pair: ReductivePair) -> list[ReductivePair]:
    """Split a pair into its indecomposable direct summands."""
    return [_summand_pair(pair, s) for s in _summands(pair)]


# ---------------------------------------------------------------------------
# per-summand computation
# ---------------------------------------------------------------------------

@dataclass
class _SummandResult:
    vectors: list[Vector]              # basis vectors in the full ambient
    essential_item_indices: list[int]
    essential_rows: list[Vector]
    trace: list[str]


def _factor_offsets(pair: ReductivePair) -> list[int]:
    offs, acc = [], 0
    for t in pair.factors:
        offs.append(acc)
        acc += t.rank
    return offs


def _place_block(full_dim: int, offset: int, block: Sequence[Fraction]) -> Vector:
    v = [Fraction(0)] * full_dim
    for j, x in enumerate(block):
        v[offset + j] = Fraction(x)
    return tuple(v)


def _place_row_vectors(pair: ReductivePair, s: _Summand, inst: RowInstance,
                       factor_map: tuple[int, ...]) -> list[Vector]:
    """Embed a row instance's generators into the pair's full ambient."""
    offsets = _factor_offsets(pair)
    ranks = [t.rank for t in inst.g_types]
    pat_offsets = [sum(ranks[:i]) for i in range(len(ranks))]
    out = []
    for gen in inst.gens:
        v = [Fraction(0)] * pair.weight_ambient
        for p, rk in enumerate(ranks):
            target = s.factor_indices[factor_map[p]]
            for j in range(rk):
                v[offsets[target] + j] = gen[pat_offsets[p] + j]
        out.append(tuple(v))
    return out


def _params_str(params: dict) -> str:
    if not params:
        return ""
    return "(" + ",".join(f"{k}={v}" for k, v in sorted(params.items())) + ")"


def _solve_alpha(full_sp: RationalSubspace, sat_sp: RationalSubspace,
                 lam: Vector, value: Fraction, rank: int) -> Vector:
    """Coefficients of the duality functional on one factor's weight block.

    The functional is pinned by vanishing on the saturated space and taking
    `value` at `lam`; coefficients are restricted to the pivot coordinates
    of the full space so the solution is unique and deterministic.
    """
    basis = list(full_sp.basis)
    pivots = [next(i for i, x in enumerate(b) if x != 0) for b in basis]
    eqs: list[list[Fraction]] = []
    for b in sat_sp.basis:
        eqs.append([b[p] for p in pivots] + [Fraction(0)])
    eqs.append([lam[p] for p in pivots] + [Fraction(value)])
    red, piv = rref(eqs, len(pivots) + 1)
    if len(pivots) in piv:
        raise ContractError("duality weight lies in the saturated space; functional unsolvable")
    sol = [Fraction(0)] * len(pivots)
    for r, pc in enumerate(piv):
        sol[pc] = red[r][-1]
    coeffs = [Fraction(0)] * rank
    for p, c in zip(pivots, sol):
        coeffs[p] = c
    return tuple(coeffs)


def alpha_functional(entry: CatalogEntry, params: dict, scale=1) -> LinearFunctional:
    """The duality functional of a central-extension family row, scaled.

    Returns a functional on the family factor's fundamental-weight
    coordinates; it vanishes on the row's saturated space and takes
    scale * (stored value) at the stored weight.  Scale zero gives the zero
    functional.
    """
    if entry.table != "T1.6":
        raise ConstraintError(f"{entry.row_id} is not a central-extension family row")
    inst = instantiate(entry, params)
    rank = inst.g_types[0].rank
    scale = Fraction(scale)
    if scale == 0:
        return LinearFunctional((Fraction(0),) * rank)
    coeffs = _solve_alpha(inst.aux["full"], inst.aux["sat"], inst.aux["lam"],
                          inst.aux["alpha_value"], rank)
    return LinearFunctional(tuple(scale * c for c in coeffs))


def _compute_summand(pair: ReductivePair, s: _Summand) -> _SummandResult:
    offsets = _factor_offsets(pair)
    full_dim = pair.weight_ambient
    slots, _ = _z_layout(pair)
    items = [pair.items[i] for i in s.item_indices]

    # central-torus-only summand
    if not s.factor_indices:
        zoff = pair.rank_g
        rows = [r[: pair.center_dim] for r in s.center_rows]
        vectors = [_place_block(full_dim, zoff, t)
                   for t in _annihilator_in_block(rows, pair.center_dim)]
        return _SummandResult(vectors, [], list(s.center_rows), ["central-torus block"])

    if not s.center_rows:
        if not items:
            vectors = []
            for f in s.factor_indices:
                for j in range(pair.factors[f].rank):
                    vectors.append(_place_block(full_dim, offsets[f] + j, [Fraction(1)]))
            names = "+".join(str(pair.factors[f]) for f in s.factor_indices)
            return _SummandResult(vectors, [], [],
                                  [f"trivial subalgebra in {names}: full block"])
        g_types = [pair.factors[f] for f in s.factor_indices]
        local = {f: i for i, f in enumerate(s.factor_indices)}
        items_local = [
            HItem(it.base, it.size, tuple(local[t] for t in it.targets), it.diag_type)
            for it in items
        ]
        near_miss = None
        try:
            matched = match_t14(g_types, items_local)
        except ConstraintError as exc:
            matched = None
            near_miss = str(exc)
        if matched is not None:
            entry, params, factor_map = matched
            inst = instantiate(entry, params)
            vectors = _place_row_vectors(pair, s, inst, factor_map)
            return _SummandResult(vectors, list(s.item_indices), [],
                                  [f"{entry.row_id}{_params_str(params)}"])
        # fallback: bare member of a central-extension family (the space is
        # the full weight block; the essential part collapses to zero)
        if all(len(it.targets) == 1 for it in items):
            fams = []
            for f in s.factor_indices:
                local = [it for it in items if it.targets == (f,)]
                fam = family_row_for_factor(pair.factors[f], local)
                if fam is None:
                    fams = None
                    break
                fams.append((f, fam))
            if fams is not None:
                vectors, trace = [], []
                for f, (entry, params) in fams:
                    inst = instantiate(entry, params)
                    full_sp: RationalSubspace = inst.aux["full"]
                    if full_sp.dim != pair.factors[f].rank:
                        raise InternalConsistencyError(
                            f"bare family member {entry.row_id} does not span its block")
                    for b in full_sp.basis:
                        vectors.append(_place_block(full_dim, offsets[f], b))
                    trace.append(f"{entry.row_id}{_params_str(params)} bare: full block, "
                                 "essential part collapses")
                return _SummandResult(vectors, [], [], trace)
        detail = near_miss or "no classification row matches"
        raise OutsideCatalogError(
            "summand ("
            + "+".join(str(pair.factors[f]) for f in s.factor_indices)
            + " / " + (" + ".join(it.describe() for it in items) or "0")
            + f") is outside the encoded tables: {detail}")

    # non-semisimple summand: every factor's items form one extension family
    for i in s.item_indices:
        it = pair.items[i]
        if len(it.targets) != 1:
            raise OutsideCatalogError(
                f"central part attached to a summand with the cross-factor item "
                f"{it.describe()}; no table covers this")
    space_vectors: list[Vector] = []
    sat_vectors: list[Vector] = []
    alpha_by_col: dict[int, Vector] = {}  # z-coordinate -> ambient covector
    trace: list[str] = []
    for f in s.factor_indices:
        local = [pair.items[i] for i in s.item_indices if pair.items[i].targets == (f,)]
        fam = family_row_for_factor(pair.factors[f], local)
        if fam is None:
            raise OutsideCatalogError(
                "the ideals on factor " + str(pair.factors[f]) + " ("
                + (" + ".join(it.describe() for it in local) or "none")
                + ") admit no central extension in the encoded families")
        entry, params = fam
        inst = instantiate(entry, params)
        rank = pair.factors[f].rank
        full_sp: RationalSubspace = inst.aux["full"]
        sat_sp: RationalSubspace = inst.aux["sat"]
        for b in full_sp.basis:
            space_vectors.append(_place_block(full_dim, offsets[f], b))
        for b in sat_sp.basis:
            sat_vectors.append(_place_block(full_dim, offsets[f], b))
        coeffs = _solve_alpha(full_sp, sat_sp, inst.aux["lam"], inst.aux["alpha_value"], rank)
        col = pair.center_dim + slots.index(f)
        alpha_by_col[col] = _place_block(full_dim, offsets[f], coeffs)
        trace.append(f"{entry.row_id}{_params_str(params)} with central part")
    zoff = pair.rank_g
    if s.has_center_block:
        for j in range(pair.center_dim):
            space_vectors.append(_place_block(full_dim, zoff + j, [Fraction(1)]))
    functionals = []
    for row in s.center_rows:
        cov = [Fraction(0)] * full_dim
        for j, x in enumerate(row):
            if x == 0:
                continue
            if j < pair.center_dim:
                cov[zoff + j] += x
            else:
                cov = [a + x * b for a, b in zip(cov, alpha_by_col[j])]
        functionals.append(LinearFunctional(tuple(cov)))
    space = span(space_vectors, full_dim)
    sat = span(sat_vectors, full_dim)
    result = annihilator_preimage(space, sat, functionals)
    return _SummandResult(list(result.basis), list(s.item_indices),
                          list(s.center_rows), trace)


def _annihilator_in_block(rows: list, dim: int) -> list[Vector]:
    """Basis of the annihilator of the span of `rows` inside Q^dim."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(dim)) for i in range(dim)]
    return kernel_basis([list(map(Fraction, r)) for r in rows], dim)


# ---------------------------------------------------------------------------
# public pipeline
# ---------------------------------------------------------------------------

def cartan_space(pair: ReductivePair) -> CartanResult:
    """Compute the Cartan space with rank, essential part, and complexity."""
    vectors: list[Vector] = []
    indices: list[int] = []
    rows: list[Vector] = []
    trace: list[str] = []
    for s in _summands(pair):
        res = _compute_summand(pair, s)
        vectors.extend(res.vectors)
        indices.extend(res.essential_item_indices)
        rows.extend(res.essential_rows)
        trace.extend(res.trace)
    space = span(vectors, pair.weight_ambient)
    indices.sort()
    ess = EssentialPart(tuple(indices), tuple(pair.items[i] for i in indices), tuple(rows))
    c = complexity_of_space(pair, space)
    return CartanResult(space, space.dim, ess, c, tuple(trace))


def essential_part(pair: ReductivePair) -> EssentialPart:
    """The maximal ideal of h with the same Cartan space."""
    indices: list[int] = []
    rows: list[Vector] = []
    for s in _summands(pair):
        res = _compute_summand(pair, s)
        indices.extend(res.essential_item_indices)
        rows.extend(res.essential_rows)
    indices.sort()
    return EssentialPart(tuple(indices), tuple(pair.items[i] for i in indices), tuple(rows))


def essential_pair(pair: ReductivePair, ess: EssentialPart | None = None) -> ReductivePair:
    """The essential part repackaged as a pair on the same ambient algebra."""
    ess = ess if ess is not None else essential_part(pair)
    old_slots, _ = _z_layout(pair)
    items = tuple(pair.items[i] for i in ess.item_indices)
    sub = ReductivePair(pair.factors, pair.center_dim, items, None)
    cols = list(range(pair.center_dim))
    for slot_factor in sub.family_slots():
        cols.append(pair.center_dim + old_slots.index(slot_factor))
    center = None
    if ess.center_rows:
        center = span([tuple(r[c] for c in cols) for r in ess.center_rows], len(cols))
    return ReductivePair(pair.factors, pair.center_dim, items, center)


def levi_centralizer_dim(pair: ReductivePair, space: RationalSubspace) -> int:
    """Dimension of the centralizer of the space: rank + center + fixed roots."""
    if space.ambient_dim != pair.weight_ambient:
        raise ConstraintError("space ambient does not match the pair's weight coordinates")
    offsets = _factor_offsets(pair)
    count = 0
    for f, t in enumerate(pair.factors):
        rs = build_root_system(t)
        blocks = []
        for b in space.basis:
            block = b[offsets[f]: offsets[f] + t.rank]
            if any(x != 0 for x in block):
                blocks.append(rs.weight_vector(block))
        for beta in rs.roots:
            if all(dot(beta, w) == 0 for w in blocks):
                count += 1
    return pair.rank_g + pair.center_dim + count


def complexity_of_space(pair: ReductivePair, space: RationalSubspace) -> int:
    """Codimension of a generic Borel orbit, from the centralizer dimension.

    Uses c = (dim g + dim L)/2 - dim h - rank; the equivalent stabilizer
    form with dim l0 = dim L - rank is asserted to agree.
    """
    rank = space.dim
    dim_l = levi_centralizer_dim(pair, space)
    two_c = pair.dim_g + dim_l - 2 * pair.dim_h - 2 * rank
    if two_c % 2 != 0:
        raise InternalConsistencyError("half-integral complexity")
    c = two_c // 2
    dim_l0 = dim_l - rank
    c_alt = (pair.dim_g + dim_l0 - rank) - 2 * pair.dim_h
    if c_alt % 2 != 0 or c_alt // 2 != c:
        raise InternalConsistencyError("complexity forms disagree")
    if c < 0:
        raise InternalConsistencyError(
            f"negative complexity {c}: table data or subalgebra dimension is wrong")
    return c


def complexity(pair: ReductivePair) -> int:
    return cartan_space(pair).complexity


def is_spherical(pair: ReductivePair) -> bool:
    return cartan_space(pair).complexity == 0


# ---------------------------------------------------------------------------
# diagram twisting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Twist:
    """An outer symmetry: a permutation of isomorphic factors composed with
    per-factor diagram symmetries (0-based node permutations)."""

    factor_perm: tuple[int, ...]
    node_perms: tuple[tuple[int, ...], ...]


def identity_twist(pair: ReductivePair) -> Twist:
    return Twist(tuple(range(len(pair.factors))),
                 tuple(tuple(range(t.rank)) for t in pair.factors))


def _validate_twist(pair: ReductivePair, tw: Twist) -> None:
    nf = len(pair.factors)
    if sorted(tw.factor_perm) != list(range(nf)) or len(tw.node_perms) != nf:
        raise ConstraintError("twist shape does not match the factor list")
    for i, p in enumerate(tw.factor_perm):
        if pair.factors[i] != pair.factors[p]:
            raise ConstraintError(
                f"twist maps factor {pair.factors[i]} onto non-isomorphic {pair.factors[p]}")
        if tw.node_perms[i] not in diagram_automorphisms(build_root_system(pair.factors[i])):
            raise ConstraintError(
                f"node permutation {tw.node_perms[i]} is not a diagram symmetry of "
                f"{pair.factors[i]}")


_OUTER_NOTES = (
    ("T1.4:8", {"n": 8, "k": 7}, "full-symmetry class is a union of 3 inner classes"),
    ("T1.4:9", None, "full-symmetry class is a union of 2 inner classes"),
    ("T1.4:25", None,
     "full-symmetry class is a union of as many inner classes as the factor has outer symmetries"),
)


def twist(pair: ReductivePair, tw: Twist) -> CartanResult:
    """The result for the twisted subalgebra: the space moves coordinatewise."""
    _validate_twist(pair, tw)
    base = cartan_space(pair)
    offsets = _factor_offsets(pair)
    full_dim = pair.weight_ambient
    moved = []
    for b in base.space.basis:
        v = [Fraction(0)] * full_dim
        for i, t in enumerate(pair.factors):
            for j in range(t.rank):
                v[offsets[tw.factor_perm[i]] + tw.node_perms[i][j]] = b[offsets[i] + j]
        for j in range(pair.center_dim):
            v[pair.rank_g + j] = b[pair.rank_g + j]
        moved.append(tuple(v))
    space = span(moved, full_dim)
    notes = []
    for row_id, params, note in _OUTER_NOTES:
        for entry in base.trace:
            if entry.startswith(row_id + "(") or entry == row_id:
                if params is not None and not all(f"{k}={v}" in entry for k, v in params.items()):
                    continue
                notes.append(f"note: {note}")
    return CartanResult(space, base.rank, base.essential, base.complexity,
                        base.trace + ("twisted",) + tuple(dict.fromkeys(notes)))
