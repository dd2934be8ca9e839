import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quivsheaf import linalg as la
from quivsheaf.kronecker import (
    COLUMN,
    GEN_JORDAN,
    INF_JORDAN,
    ROW,
    ZERO_SOURCE,
    ZERO_TARGET,
    KCFBlock,
    NegativeRank,
    NotASheaf,
    Pencil,
    ZeroVector,
    assemble,
    blocks_to_sheaf,
    classify_K2,
    classify_P1,
    classify_P1_via_K2,
    conjugate,
    jordan,
    kcf,
    kcf_blocks,
    reduce_Kn,
    sheaf_total,
    stability_from_blocks,
)
from quivsheaf.ktheory import CollectionId, SheafClass, Surface, from_dim_vector
from quivsheaf.linalg import QQ, PrimeField
from quivsheaf.quivercore import Status, kronecker_quiver, moduli_dimension

F3, F5 = PrimeField(3), PrimeField(5)


def P1(rk, deg):
    return SheafClass(Surface.P1, rk, deg)


def random_block(F, rng):
    kind = rng.choice(["J", "J", "inf", "col", "row", "zs", "zt"])
    n = rng.randint(1, 2)
    if kind == "J":
        return jordan(F.random(rng, 3), n)
    if kind == "inf":
        return KCFBlock(INF_JORDAN, n)
    if kind == "col":
        return KCFBlock(COLUMN, n)
    if kind == "row":
        return KCFBlock(ROW, n)
    return KCFBlock(ZERO_SOURCE if kind == "zs" else ZERO_TARGET, 1)


def random_pencil(F, rng, max_dim=5):
    """Either a fully random pencil or a conjugated sum of blocks, both with dims <= max_dim."""
    if rng.random() < 0.5:
        m, n = rng.randint(0, max_dim), rng.randint(0, max_dim)
        rank_cap = rng.randint(0, max(m, n))
        f = []
        for _ in range(2):
            A = la.random_matrix(F, rng, m, rank_cap, 2)
            B = la.random_matrix(F, rng, rank_cap, n, 2)
            f.append(la.matmul(F, A, B, inner=rank_cap, cols=n) if m else ())
        return Pencil.from_matrices(F, f[0], f[1], n)
    blocks = []
    while True:
        b = random_block(F, rng)
        s = sum(x.dims[0] for x in blocks) + b.dims[0]
        t = sum(x.dims[1] for x in blocks) + b.dims[1]
        if s > max_dim or t > max_dim:
            break
        blocks.append(b)
    if not blocks:
        blocks = [jordan(F.zero)]
    p = assemble(F, blocks)
    return shuffle(p, rng)


def shuffle(p, rng):
    F = p.field
    g0 = la.random_invertible(F, rng, p.target_dim) if p.target_dim else ()
    gs = la.random_invertible(F, rng, p.source_dim) if p.source_dim else ()
    return conjugate(p, g0, gs)


def multiset(blocks):
    return Counter(blocks)


# --- canonical form --------------------------------------------------------------------


def test_kcf_examples():
    assert kcf_blocks(Pencil.from_matrices(QQ, ((1,),), ((5,),))) == [jordan(5)]
    assert kcf_blocks(Pencil.from_matrices(QQ, ((1, 0), (0, 1)), ((0, 1), (0, 0)))) == [jordan(0, 2)]
    rng = random.Random(7)
    p = shuffle(assemble(QQ, [jordan(1), KCFBlock(COLUMN, 1)]), rng)
    assert multiset(kcf_blocks(p)) == multiset([jordan(1), KCFBlock(COLUMN, 1)])


def test_zero_pencil_degenerate_blocks():
    p = Pencil.from_matrices(QQ, ((0, 0, 0),) * 2, ((0, 0, 0),) * 2)
    assert multiset(kcf_blocks(p)) == Counter({KCFBlock(ZERO_SOURCE): 3, KCFBlock(ZERO_TARGET): 2})


def test_irreducible_eigenvalues_give_generalized_blocks():
    # x^2 + 1 has no root over Q or F_3
    for F in (QQ, F3):
        p = Pencil.from_matrices(F, ((1, 0), (0, 1)), ((0, F(-1)), (1, 0)))
        (b,) = kcf_blocks(p)
        assert b.kind == GEN_JORDAN and b.poly == (F.one, F.zero, F.one)
        (s,) = blocks_to_sheaf([b], 0, F)
        assert s.kind == "FatPoint" and s.degree == 2


@pytest.mark.parametrize("F", [QQ, F5], ids=str)
@given(seed=st.integers(0, 10 ** 6))
@settings(max_examples=60, deadline=None)
def test_kcf_reassembles(F, seed):
    p = random_pencil(F, random.Random(seed))
    res = kcf(p)
    assert conjugate(p, res.g0, res.g_src) == res.canonical
    assert res.canonical == assemble(F, res.blocks)
    assert kcf_blocks(res.canonical) == list(res.blocks)


@pytest.mark.parametrize("F", [QQ, F5], ids=str)
@given(seed=st.integers(0, 10 ** 6))
@settings(max_examples=40, deadline=None)
def test_blocks_basis_invariant(F, seed):
    rng = random.Random(seed)
    p = random_pencil(F, rng)
    assert kcf_blocks(shuffle(p, rng)) == kcf_blocks(p)


# --- stability from blocks -----------------------------------------------------------


def test_stability_from_blocks_examples():
    assert stability_from_blocks([jordan(2)])[0] is Status.STABLE
    assert stability_from_blocks([jordan(0), jordan(1)])[0] is Status.STRICTLY_SEMISTABLE
    status, idx, _ = stability_from_blocks([KCFBlock(COLUMN, 1), jordan(0)])
    assert status is Status.UNSTABLE and idx == 1
    assert stability_from_blocks([KCFBlock(COLUMN, 3)])[0] is Status.STABLE
    assert stability_from_blocks([KCFBlock(ROW, 1)])[0] is Status.STABLE
    assert stability_from_blocks([jordan(0, 2)])[0] is Status.STRICTLY_SEMISTABLE
    with pytest.raises(ZeroVector):
        stability_from_blocks([])


# --- sheaves on P1 ----------------------------------------------------------------------


def test_blocks_to_sheaf_examples():
    assert [str(s) for s in blocks_to_sheaf([KCFBlock(COLUMN, 4)], 0)] == ["O(4)"]
    assert [str(s) for s in blocks_to_sheaf([jordan(0)], 0, F5)] == ["fat point length 1 at [0:1]"]
    assert [str(s) for s in blocks_to_sheaf([jordan(2)], 0, F5)] == ["fat point length 1 at [3:1]"]
    assert [str(s) for s in blocks_to_sheaf([KCFBlock(INF_JORDAN, 2)], 1)] == ["fat point length 2 at [1:0]"]
    with pytest.raises(NotASheaf):
        blocks_to_sheaf([KCFBlock(ROW, 1)], 0)


@given(seed=st.integers(0, 10 ** 6), k=st.integers(-3, 3))
@settings(max_examples=100, deadline=None)
def test_birkhoff_grothendieck_totals(seed, k):
    rng = random.Random(seed)
    p = random_pencil(F5, rng)
    blocks = kcf_blocks(p)
    if any(b.kind in (ROW, ZERO_SOURCE) for b in blocks):
        with pytest.raises(NotASheaf):
            blocks_to_sheaf(blocks, k, F5)
        return
    total = sheaf_total(blocks_to_sheaf(blocks, k, F5))
    assert total == from_dim_vector(p.dims, CollectionId.P1(k))


# --- classification ---------------------------------------------------------------------


def test_classify_K2_examples():
    for m in (1, 2, 3):
        desc = classify_K2((m, m))
        assert desc.label() == f"P^{m}" and desc.dimension == m
        assert desc.has_stable == (m == 1)
    assert classify_K2((1, 2)).status == "Point" and classify_K2((1, 2)).has_stable
    assert classify_K2((1, 3)).is_empty
    assert classify_K2((2, 4)).status == "Point" and not classify_K2((2, 4)).has_stable
    assert classify_K2((2, 5)).is_empty
    assert classify_K2((2, 3)).has_stable
    assert classify_K2((4, 6)).status == "Point" and not classify_K2((4, 6)).has_stable
    with pytest.raises(ZeroVector):
        classify_K2((0, 0))


@pytest.mark.parametrize("a", range(0, 7))
@pytest.mark.parametrize("b", range(0, 7))
def test_classify_K2_symmetries(a, b):
    if a + b == 0:
        return
    desc = classify_K2((a, b))
    assert classify_K2((b, a)) == desc
    Ma = (2 * a - b, a)
    if b >= a > 0 and Ma[0] > 0:
        assert classify_K2(Ma) == desc


def test_reduce_Kn_examples():
    assert reduce_Kn(3, 1, 3)[1].status == "Point"
    trace, desc = reduce_Kn(3, 2, 2)
    assert desc.label() == "P^5" and trace[-1].rule == "projective space"
    for m in range(1, 6):
        assert reduce_Kn(3, m, 3 * m)[1].status == "Point"
    assert reduce_Kn(3, 1, 2)[1].label() == "G_2(3)"
    assert reduce_Kn(3, 1, 4)[1].is_empty


@pytest.mark.parametrize("n", [2, 3, 4])
def test_reduce_Kn_trace_and_dimension(n):
    for a in range(0, 9):
        for b in range(0, 9):
            if a + b == 0:
                continue
            trace, desc = reduce_Kn(n, a, b)
            sums = [s.a + s.b for s in trace if s.rule.startswith("reflect")]
            assert all(x > y for x, y in zip(sums, sums[1:]))
            assert all(s.a >= 0 and s.b >= 0 for s in trace)
            if desc.status == "SymbolicKronecker":
                # reflections preserve the expected dimension
                assert desc.dimension == moduli_dimension(kronecker_quiver(n), (a, b))
            if n == 2:
                assert desc.is_empty == classify_K2((a, b)).is_empty


def test_classify_P1_examples():
    assert classify_P1(P1(2, 4)).status == "Point" and not classify_P1(P1(2, 4)).has_stable
    d = classify_P1(P1(0, 3))
    assert d.label() == "P^3" and not d.has_stable
    assert classify_P1(P1(2, 3)).is_empty
    assert classify_P1_via_K2(P1(2, 3)).is_empty
    assert classify_P1(P1(0, 1)).has_stable
    with pytest.raises(NegativeRank):
        classify_P1(P1(-1, 0))


@pytest.mark.parametrize("rk", range(0, 5))
@pytest.mark.parametrize("deg", range(-6, 7))
def test_classify_P1_routes_agree(rk, deg):
    if rk == 0 and deg == 0:
        return
    assert classify_P1(P1(rk, deg)) == classify_P1_via_K2(P1(rk, deg))
