from fractions import Fraction as Q

import pytest

from cartanspaces.catalog import HItem, ReductivePair, lookup
from cartanspaces.engine import (
    Twist,
    alpha_functional,
    cartan_space,
    complexity,
    decompose,
    essential_pair,
    essential_part,
    identity_twist,
    is_spherical,
    levi_centralizer_dim,
    twist,
)
from cartanspaces.errors import ConstraintError, OutsideCatalogError
from cartanspaces.ratlinalg import dot, member, span, vec
from cartanspaces.rootsystems import SimpleType, build_root_system, sl, so, sp


def pair_of(*factors, items=(), center=None, center_dim=0):
    return ReductivePair(tuple(factors), center_dim, tuple(items), center)


FULL_Z = span([[1]], 1)


def test_decompose_counts():
    p = pair_of(sl(6), items=[HItem("sp", 6, (0,))])
    assert len(decompose(p)) == 1

    p = pair_of(sl(4), sp(6), items=[
        HItem("sp", 4, (0,)), HItem("sl", 2, (1,)), HItem("sl", 2, (1,)), HItem("sl", 2, (1,))])
    parts = decompose(p)
    assert len(parts) == 2
    assert parts[0].factors == (sl(4),) and parts[1].factors == (sp(6),)

    p = pair_of(SimpleType("A", 2), SimpleType("A", 2),
                items=[HItem("diag", None, (0, 1), SimpleType("A", 2))])
    assert len(decompose(p)) == 1


def test_decompose_with_central_ties():
    # one diagonal central line ties two corner families together
    center = span([[1, 1]], 2)
    p = pair_of(sl(7), sl(7), items=[HItem("sl", 4, (0,)), HItem("sl", 4, (1,))], center=center)
    assert len(decompose(p)) == 1
    # two independent central lines split
    center = span([[1, 0], [0, 1]], 2)
    p = pair_of(sl(7), sl(7), items=[HItem("sl", 4, (0,)), HItem("sl", 4, (1,))], center=center)
    parts = decompose(p)
    assert len(parts) == 2
    assert all(part.center is not None and part.center.dim == 1 for part in parts)


def test_cartan_space_semisimple_rows():
    res = cartan_space(pair_of(sl(6), items=[HItem("sp", 6, (0,))]))
    assert res.rank == 2
    assert set(res.space.basis) == {vec((0, 1, 0, 0, 0)), vec((0, 0, 0, 1, 0))}
    assert res.trace == ("T1.4:3(n=3)",)
    assert res.essential.items == (HItem("sp", 6, (0,)),)

    res = cartan_space(pair_of(SimpleType("E", 6), items=[HItem("so", 10, (0,))]))
    assert res.rank == 3
    assert set(res.space.basis) == {
        vec((1, 0, 0, 0, 0, 0)), vec((0, 0, 0, 0, 1, 0)), vec((0, 0, 0, 0, 0, 1))}

    res = cartan_space(pair_of(SimpleType("E", 7), items=[HItem("e6", None, (0,))]))
    assert res.rank == 3


def test_cartan_space_saturated_family():
    res = cartan_space(pair_of(SimpleType("E", 6), items=[HItem("so", 10, (0,))], center=FULL_Z))
    assert res.rank == 2
    assert set(res.space.basis) == {vec((1, 0, 0, 0, 1, 0)), vec((0, 0, 0, 0, 0, 1))}


def test_essential_part_cases():
    p = pair_of(sl(6), items=[HItem("sp", 6, (0,))])
    assert essential_part(p).items == p.items

    # direct sums assemble blockwise
    p = pair_of(sl(6), sp(6), items=[HItem("sp", 6, (0,)), HItem("sp", 4, (1,)), HItem("sl", 2, (1,))])
    ess = essential_part(p)
    assert len(ess.items) == 3

    # bare boundary member: the essential part collapses
    p = pair_of(sl(5), items=[HItem("sl", 3, (0,))])
    ess = essential_part(p)
    assert ess.items == () and ess.describe() == "0"

    with pytest.raises(OutsideCatalogError):
        essential_part(pair_of(sl(5), items=[HItem("sl", 2, (0,))]))


def test_essential_idempotence():
    pairs = [
        pair_of(sl(6), items=[HItem("sp", 6, (0,))]),
        pair_of(sl(5), items=[HItem("sl", 3, (0,))]),
        pair_of(sl(5), items=[HItem("sp", 4, (0,))]),
        pair_of(sl(5), items=[HItem("sl", 3, (0,))], center=FULL_Z),
        pair_of(so(10), items=[HItem("sl", 5, (0,))], center=FULL_Z),
    ]
    for p in pairs:
        res = cartan_space(p)
        again = cartan_space(essential_pair(p))
        assert again.space == res.space, p


def test_center_partial_subspace():
    # two corner families tied by an antidiagonal central line
    center = span([[1, -1]], 2)
    p = pair_of(sl(7), sl(7), items=[HItem("sl", 4, (0,)), HItem("sl", 4, (1,))], center=center)
    res = cartan_space(p)
    # the full space has dimension 6+6, one functional cuts one dimension
    assert res.rank == 11
    ess = res.essential
    assert len(ess.items) == 2 and len(ess.center_rows) == 1


def test_center_through_ambient_torus():
    # central part tying the ambient torus to a family generator
    center = span([[1, 1]], 2)  # z0 + pi_v
    p = ReductivePair((sl(5),), 1, (HItem("sl", 3, (0,)),), center)
    res = cartan_space(p)
    # full block is 4 + 1 central coordinate; one cut
    assert res.rank == 4
    assert res.space.ambient_dim == 5


def test_alpha_functional_values():
    e = lookup("T1.6", 1)
    fn = alpha_functional(e, {"n": 5, "k": 3})
    assert fn(vec((1, 0, 0, 0))) == Q(3, 5)
    # scaling is linear, zero gives the zero functional
    fn2 = alpha_functional(e, {"n": 5, "k": 3}, scale=Q(2))
    assert fn2(vec((1, 0, 0, 0))) == Q(6, 5)
    fn0 = alpha_functional(e, {"n": 5, "k": 3}, scale=0)
    assert all(c == 0 for c in fn0.coeffs)

    e4 = lookup("T1.6", 4)
    fn = alpha_functional(e4, {"n": 2})
    lam = vec((0, 0, 0, 0, 1))
    assert fn(lam) == Q(5, 2)


def test_alpha_row1_matches_central_action_on_all_weights():
    # the central generator acts on the i-th weight by i*k/n below the corner
    # and by (i-n)*k/n above it
    e = lookup("T1.6", 1)
    for (n, k) in [(5, 3), (7, 4), (9, 5)]:
        fn = alpha_functional(e, {"n": n, "k": k})
        for i in range(1, n - k + 1):
            v = [0] * (n - 1)
            v[i - 1] = 1
            assert fn(vec(v)) == Q(i * k, n)
            w = [0] * (n - 1)
            w[n - i - 1] = 1
            assert fn(vec(w)) == Q((n - i - n) * k, n) == -Q(i * k, n)


def test_alpha_row3_even_weight_action():
    # the invariant two-form sits in the second exterior power: the central
    # generator acts there by -2/(2n+1)
    e = lookup("T1.6", 3)
    for n in (2, 3):
        fn = alpha_functional(e, {"n": n})
        v = [0] * (2 * n)
        v[1] = 1
        assert fn(vec(v)) == -Q(2, 2 * n + 1)


def test_levi_centralizer_dims():
    p = pair_of(SimpleType("A", 3), items=[HItem("sl", 4, (0,))])  # h = g, space = 0
    res = cartan_space(p)
    assert res.space.dim == 0
    assert levi_centralizer_dim(p, res.space) == 15

    # full space leaves only the torus
    from cartanspaces.ratlinalg import full_space
    assert levi_centralizer_dim(p, full_space(3)) == 3

    # <pi_2> inside A3: independent oracle over the twelve roots e_i - e_j
    rs = build_root_system(SimpleType("A", 3))
    pi2 = rs.fundamental_weights[1]
    fixed = sum(1 for beta in rs.roots if dot(beta, pi2) == 0)
    assert 3 + fixed == 7
    assert levi_centralizer_dim(p, span([(0, 1, 0)], 3)) == 7


def test_complexity_values():
    assert complexity(pair_of(sl(4), items=[HItem("sp", 4, (0,))])) == 0
    assert is_spherical(pair_of(sl(4), items=[HItem("sp", 4, (0,))]))
    assert complexity(pair_of(sp(6), items=[HItem("sl", 2, (0,))] * 3)) == 1
    assert complexity(pair_of(SimpleType("F", 4), items=[HItem("so", 8, (0,))])) == 1
    assert complexity(pair_of(SimpleType("E", 7), items=[HItem("e6", None, (0,))])) == 1


def test_monotonicity_and_strictness_row2_vs_row1():
    big = cartan_space(pair_of(sl(8), items=[HItem("sl", 5, (0,))]))
    small = cartan_space(pair_of(sl(8), items=[HItem("sl", 5, (0,)), HItem("sl", 3, (0,))]))
    assert big.space.contains(small.space)
    assert big.rank > small.rank


def test_monotonicity_bridge_rows():
    whole = cartan_space(pair_of(sp(6), SimpleType("A", 1),
                                 items=[HItem("sp", 4, (0,)), HItem("bridge", None, (0, 1))]))
    dropped = cartan_space(pair_of(sp(6), SimpleType("A", 1), items=[HItem("sp", 4, (0,))]))
    assert dropped.space.contains(whole.space)
    assert dropped.rank > whole.rank

    whole = cartan_space(pair_of(sp(6), sp(8), items=[
        HItem("sp", 4, (0,)), HItem("bridge", None, (0, 1)), HItem("sp", 6, (1,))]))
    dropped = cartan_space(pair_of(sp(6), sp(8), items=[
        HItem("sp", 4, (0,)), HItem("sp", 6, (1,))]))
    assert dropped.space.contains(whole.space)
    assert dropped.rank > whole.rank


def test_diag_strict_against_trivial():
    t = SimpleType("A", 2)
    diag = cartan_space(pair_of(t, t, items=[HItem("diag", None, (0, 1), t)]))
    assert diag.rank == 2
    full = cartan_space(pair_of(t, t, items=[]))
    assert full.rank == 4 and full.space.contains(diag.space)


def test_twist_identity_and_flip():
    p = pair_of(sl(8), items=[HItem("sl", 5, (0,))])
    base = cartan_space(p)
    res = twist(p, identity_twist(p))
    assert res.space == base.space

    flip = Twist((0,), ((6, 5, 4, 3, 2, 1, 0),))
    res = twist(p, flip)
    assert res.space == base.space  # the corner space is flip-stable
    assert res.rank == base.rank and res.complexity == base.complexity


def test_twist_triality_on_so8():
    p = pair_of(so(8), items=[HItem("g2", None, (0,))])
    base = cartan_space(p)
    rs = build_root_system(so(8))
    from cartanspaces.rootsystems import diagram_automorphisms

    for perm in diagram_automorphisms(rs):
        res = twist(p, Twist((0,), (perm,)))
        assert res.space == base.space  # <pi_1, pi_3, pi_4> is triality-stable
        assert res.rank == base.rank and res.complexity == base.complexity


def test_twist_factor_swap_on_diagonal():
    t = SimpleType("A", 3)
    p = pair_of(t, t, items=[HItem("diag", None, (0, 1), t)])
    base = cartan_space(p)
    swap = Twist((1, 0), (tuple(range(3)), tuple(range(3))))
    res = twist(p, swap)
    assert res.space == base.space
    assert any("inner classes" in t for t in res.trace)


def test_twist_on_centrally_extended_pair():
    # the flipped corner subalgebra is an inner conjugate, so the computed
    # space must be stable under the chain reversal
    p = pair_of(sl(5), items=[HItem("sl", 3, (0,))], center=FULL_Z)
    base = cartan_space(p)
    flip = Twist((0,), ((3, 2, 1, 0),))
    res = twist(p, flip)
    assert res.space == base.space
    assert res.rank == base.rank and res.complexity == base.complexity


def test_twist_rejects_bad_input():
    p = pair_of(sl(8), items=[HItem("sl", 5, (0,))])
    with pytest.raises(ConstraintError):
        twist(p, Twist((0,), ((1, 0, 2, 3, 4, 5, 6),)))  # not a diagram symmetry
    p2 = pair_of(sl(8), sl(4), items=[HItem("sl", 5, (0,)), HItem("sl", 3, (1,))])
    with pytest.raises(ConstraintError):
        twist(p2, Twist((1, 0), (tuple(range(7)), tuple(range(3)))))  # non-isomorphic swap


def test_additivity_block_concatenation():
    p1 = pair_of(sl(6), items=[HItem("sp", 6, (0,))])
    p2 = pair_of(sp(6), items=[HItem("sl", 2, (0,))] * 3)
    combined = pair_of(sl(6), sp(6), items=[
        HItem("sp", 6, (0,)), HItem("sl", 2, (1,)), HItem("sl", 2, (1,)), HItem("sl", 2, (1,))])
    r1, r2, rc = cartan_space(p1), cartan_space(p2), cartan_space(combined)
    assert rc.rank == r1.rank + r2.rank
    assert rc.complexity == r1.complexity + r2.complexity
    expected = [tuple(b) + (Q(0),) * 3 for b in r1.space.basis]
    expected += [(Q(0),) * 5 + tuple(b) for b in r2.space.basis]
    assert span(expected, 8) == rc.space


def test_rank_additivity_under_saturation():
    # adding the full central part always cuts the rank by its dimension
    cases = [
        (pair_of(sl(5), items=[HItem("sl", 3, (0,))]),
         pair_of(sl(5), items=[HItem("sl", 3, (0,))], center=FULL_Z)),
        (pair_of(sl(7), items=[HItem("sl", 4, (0,)), HItem("sl", 3, (0,))]),
         pair_of(sl(7), items=[HItem("sl", 4, (0,)), HItem("sl", 3, (0,))], center=FULL_Z)),
        (pair_of(sl(5), items=[HItem("sp", 4, (0,))]),
         pair_of(sl(5), items=[HItem("sp", 4, (0,))], center=FULL_Z)),
        (pair_of(so(10), items=[HItem("sl", 5, (0,))]),
         pair_of(so(10), items=[HItem("sl", 5, (0,))], center=FULL_Z)),
        (pair_of(SimpleType("E", 6), items=[HItem("so", 10, (0,))]),
         pair_of(SimpleType("E", 6), items=[HItem("so", 10, (0,))], center=FULL_Z)),
    ]
    for bare, saturated in cases:
        rb = cartan_space(bare)
        rs_ = cartan_space(saturated)
        assert rb.rank == rs_.rank + 1
        assert rb.space.contains(rs_.space)


def test_saturated_families_spherical_members():
    # the classically spherical saturated members: the two-block pairs, the
    # odd symplectic and orthogonal extensions, the rank-one corner, and
    # the exceptional row
    cases = [
        pair_of(sl(7), items=[HItem("sl", 4, (0,)), HItem("sl", 3, (0,))], center=FULL_Z),
        pair_of(sl(9), items=[HItem("sl", 5, (0,)), HItem("sl", 4, (0,))], center=FULL_Z),
        pair_of(sl(5), items=[HItem("sp", 4, (0,))], center=FULL_Z),
        pair_of(sl(7), items=[HItem("sp", 6, (0,))], center=FULL_Z),
        pair_of(so(10), items=[HItem("sl", 5, (0,))], center=FULL_Z),
        pair_of(so(14), items=[HItem("sl", 7, (0,))], center=FULL_Z),
        pair_of(SimpleType("E", 6), items=[HItem("so", 10, (0,))], center=FULL_Z),
        pair_of(sl(8), items=[HItem("sl", 7, (0,))], center=FULL_Z),
    ]
    for p in cases:
        res = cartan_space(p)
        assert res.complexity == 0, p
    # and the two-block case has the expected symmetric-space rank
    res = cartan_space(cases[0])
    assert res.rank == 3
    # a deep corner with its center is far from spherical
    deep = pair_of(sl(8), items=[HItem("sl", 5, (0,))], center=FULL_Z)
    assert cartan_space(deep).complexity == 6


def test_row1_and_row3_family_agree_on_sl3():
    # sp(2) and sl(2) describe the same block in sl(3); both catalog routes
    # must produce the same saturated space
    via_row1 = cartan_space(pair_of(sl(3), items=[HItem("sl", 2, (0,))], center=FULL_Z))
    via_row3 = cartan_space(pair_of(sl(3), items=[HItem("sp", 2, (0,))], center=FULL_Z))
    assert via_row1.space == via_row3.space
    assert via_row1.rank == 1


def test_two_dimensional_center_across_three_factors():
    # three corner families chained by a two-dimensional central subspace
    center = span([[1, 1, 0], [0, 1, 1]], 3)
    p = pair_of(sl(5), sl(5), sl(5),
                items=[HItem("sl", 3, (0,)), HItem("sl", 3, (1,)), HItem("sl", 3, (2,))],
                center=center)
    assert len(decompose(p)) == 1
    res = cartan_space(p)
    assert res.rank == 3 * 4 - 2
    assert len(res.essential.center_rows) == 2
    # saturating fully instead cuts all three dimensions
    full = span([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 3)
    p_full = pair_of(sl(5), sl(5), sl(5),
                     items=[HItem("sl", 3, (0,)), HItem("sl", 3, (1,)), HItem("sl", 3, (2,))],
                     center=full)
    assert cartan_space(p_full).rank == 3 * 4 - 3


def test_center_only_summand():
    p = ReductivePair((sl(4),), 2, (HItem("sp", 4, (0,)),), span([[1, 0]], 2))
    res = cartan_space(p)
    # weight block contributes rank 1; the 2-dim torus block is cut once
    assert res.rank == 1 + 1
    assert res.essential.center_rows == (vec((1, 0)),)


def test_parallel_batch_evaluation():
    # immutable inputs and a read-only catalog: concurrent evaluation must
    # agree with the sequential results
    from concurrent.futures import ThreadPoolExecutor

    pairs = [
        pair_of(sl(6), items=[HItem("sp", 6, (0,))]),
        pair_of(SimpleType("E", 6), items=[HItem("so", 10, (0,))]),
        pair_of(sp(6), items=[HItem("sl", 2, (0,))] * 3),
        pair_of(sl(5), items=[HItem("sl", 3, (0,))], center=FULL_Z),
        pair_of(so(9), items=[HItem("spin", 7, (0,))]),
    ] * 8
    sequential = [cartan_space(p) for p in pairs]
    with ThreadPoolExecutor(max_workers=8) as pool:
        parallel = list(pool.map(cartan_space, pairs))
    for a, b in zip(sequential, parallel):
        assert a.space == b.space and a.complexity == b.complexity


def test_complexity_structural_bounds():
    # the codimension of a generic orbit is trapped between the homogeneous
    # and Borel dimension counts: dim G/H - dim B <= c <= dim G/H - rank
    from cartanspaces.cli import survey_pairs

    for _, pair, res in survey_pairs(6):
        dim_gh = pair.dim_g - pair.dim_h
        dim_b = (pair.dim_g + pair.rank_g + pair.center_dim) // 2
        assert res.complexity + res.rank <= dim_gh
        assert res.complexity >= dim_gh - dim_b
        assert res.complexity >= 0


def test_outside_catalog_diagnostics():
    with pytest.raises(OutsideCatalogError) as err:
        cartan_space(pair_of(sl(5), items=[HItem("sl", 2, (0,))]))
    assert "2*k>=n+2" in str(err.value)
    with pytest.raises(OutsideCatalogError):
        cartan_space(pair_of(so(11), items=[HItem("spin", 7, (0,))]))
    with pytest.raises(OutsideCatalogError):
        cartan_space(pair_of(so(9), items=[HItem("g2", None, (0,))]))
    # three-fold diagonal is not covered
    t = SimpleType("A", 2)
    p = ReductivePair((t, t, t), 0,
                      (HItem("diag", None, (0, 1), t), HItem("diag", None, (1, 2), t)))
    with pytest.raises(OutsideCatalogError):
        cartan_space(p)
