from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from quivsheaf.exactalg import RatPoly
from quivsheaf.ktheory import (
    P1XP1_STD,
    P2_FIRST,
    P2_SECOND,
    CollectionId,
    NoTwistFound,
    NonPositiveRank,
    NotALineBundle,
    Polarization,
    SheafClass,
    Surface,
    SurfaceMismatch,
    WrongSurface,
    bogomolov_delta,
    collection_data,
    derived_regions,
    euler_pairing,
    from_dim_vector,
    hilbert_polynomial,
    line_bundle,
    line_bundle_p1xp1,
    normalize_twist,
    psi_oracle,
    region_membership,
    sigma_g_eval,
    theta_arrays,
    theta_components,
    to_dim_vector,
    twist,
)

from strategies import p1_classes, p1xp1_classes, p2_classes

t = RatPoly.t()
P1, P2, PP = Surface.P1, Surface.P2, Surface.P1xP1
H2 = Polarization.default(P2)
O_P2 = line_bundle(P2, 0)
O_PP = line_bundle(PP, (0, 0))
ALL = [CollectionId.P1(0), CollectionId.P1(3), P2_FIRST, P2_SECOND, P1XP1_STD]


def p2(rk, deg, chi):
    return SheafClass.from_coords(P2, (rk, deg, chi))


def pp(rk, dh, df, chi):
    return SheafClass.from_coords(PP, (rk, dh, df, chi))


def polarizations():
    return st.tuples(st.integers(1, 4), st.integers(1, 4)).map(lambda ab: Polarization(PP, ab))


def classes_for(cid):
    return {P1: p1_classes(), P2: p2_classes(), PP: p1xp1_classes()}[cid.surface]


# --- closed formulas ------------------------------------------------------------------


def test_chi_formulas():
    assert O_P2.chi == 1
    assert line_bundle(P2, 1).chi == 3
    assert O_PP.chi == 1
    assert line_bundle_p1xp1(1, -1).coords() == (1, 1, -1, 0)


def test_hilbert_polynomial_examples():
    assert hilbert_polynomial(O_P2, H2) == (t * t + 3 * t) * Fraction(1, 2) + 1
    assert hilbert_polynomial(SheafClass(P1, 0, 5), Polarization(P1, 1)) == 5
    assert hilbert_polynomial(O_PP, Polarization(PP, (1, 1))) == t * t + 2 * t + 1
    with pytest.raises(SurfaceMismatch):
        hilbert_polynomial(O_P2, Polarization(PP, (1, 1)))


def test_twist_examples():
    assert twist(O_P2, O_P2) == O_P2
    v = twist(O_P2, line_bundle(P2, 1))
    assert (v.rank, v.c1, v.ch2, v.chi) == (1, 1, Fraction(1, 2), 3)
    w = twist(O_PP, line_bundle(PP, (1, -1)))
    assert (w.rank, w.c1, w.ch2) == (1, (1, -1), -1)
    with pytest.raises(NotALineBundle):
        twist(O_P2, p2(2, 0, 2))
    with pytest.raises(NotALineBundle):
        twist(O_P2, SheafClass(P2, 1, 1, Fraction(3, 2)))


def test_euler_pairing_examples():
    assert euler_pairing(O_P2, O_P2) == 1
    ideal = SheafClass(P2, 1, 0, -1)
    assert euler_pairing(ideal, ideal) == -1
    # chi(O(-1)^dual (x) O) = h0(O(1)) = 3
    assert euler_pairing(line_bundle(P2, -1), O_P2) == 3


def test_bogomolov_examples():
    assert bogomolov_delta(SheafClass(P2, 1, 0, -1)) == 2
    assert bogomolov_delta(p2(3, 0, 3)) == 0
    assert bogomolov_delta(SheafClass(PP, 1, (1, -1), -1)) == 0
    with pytest.raises(WrongSurface):
        bogomolov_delta(SheafClass(P1, 1, 0))


def test_dim_vector_examples():
    assert to_dim_vector(p2(1, 0, 1), P2_FIRST) == (0, 1, 0)
    assert to_dim_vector(p2(1, 0, 0), P2_FIRST) == (1, 3, 1)
    assert to_dim_vector(pp(1, 0, 0, -1), P1XP1_STD) == (2, 3, 2, 2)
    assert from_dim_vector((1, 3, 1), P2_SECOND).coords() == (4, -2, -1)
    assert from_dim_vector((0, 1), CollectionId.P1(0)).coords() == (1, 0)
    assert from_dim_vector((0, 7, 0), P2_FIRST).coords() == (7, 0, 7)
    with pytest.raises(SurfaceMismatch):
        to_dim_vector(O_P2, P1XP1_STD)


def test_theta_examples():
    assert theta_arrays(p2(1, 0, 0), P2_FIRST) == (-t, RatPoly.const(-1), t + 3)
    assert theta_arrays(p2(1, 0, 0), P2_SECOND) == (-t, t, RatPoly.const(1))
    assert theta_arrays(from_dim_vector((1, 3, 1), P2_SECOND), P2_SECOND) == (-2 * t + 1, RatPoly.const(-2), 2 * t + 5)
    for ell in (1, 2, 3):
        for a, b in ((1, 1), (2, 1), (1, 3)):
            v = pp(1, 0, 0, 1 - ell)
            got = theta_arrays(v, P1XP1_STD, Polarization(PP, (a, b)))
            assert got == (-b * t + (ell - 1), RatPoly.const(-ell), (b - a) * t + (1 - ell), a * t + (ell + 1))


def test_sigma_g_examples():
    A = Polarization(P1, 1)
    assert sigma_g_eval(line_bundle(P2, 1), O_P2, H2) == t + 2
    assert sigma_g_eval(SheafClass(P1, 1, 1), SheafClass(P1, 1, 0), A) == 1
    assert sigma_g_eval(O_P2, O_P2, H2).is_zero()


def test_region_examples():
    assert region_membership(p2(2, 0, 0), P2_FIRST).in_R_A
    flags = region_membership(p2(1, 0, 0), P2_SECOND)
    assert not flags.in_R_A and flags.in_Rtilde
    assert not region_membership(SheafClass(P1, 1, -1), CollectionId.P1(0)).in_R_A


def test_normalize_twist_examples():
    n = normalize_twist(p2(1, 5, 0), "P2_first")
    assert n.twist == -5 and n.cls.c1 == 0
    n = normalize_twist(SheafClass(P1, 2, 3), "P1")
    assert n.twist == 1 and n.cls == SheafClass(P1, 2, 3) and str(n.collection) == "P1:k=1"
    n = normalize_twist(p2(2, 0, 0), "P2_first")
    assert n.twist == 0 and n.cls == p2(2, 0, 0)
    with pytest.raises(NonPositiveRank):
        normalize_twist(p2(0, 1, 0), "P2_first")
    with pytest.raises(NoTwistFound):
        normalize_twist(p2(1, 0, 1), "P2_second")


def test_collection_ids_roundtrip():
    for s in ("P1:k=-2", "P2:first", "P2:second", "P1xP1:std"):
        assert str(CollectionId.parse(s)) == s


# --- properties -------------------------------------------------------------------------


@pytest.mark.parametrize("cid", ALL, ids=str)
def test_matrix_pairs_are_inverse(cid):
    data = collection_data(cid)
    n = len(data.vertices)
    prod = [[sum(data.to_dims[i][k] * data.from_dims[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    assert prod == [[int(i == j) for j in range(n)] for i in range(n)]


@pytest.mark.parametrize("cid", ALL, ids=str)
@given(data=st.data())
def test_round_trip(cid, data):
    v = data.draw(classes_for(cid))
    assert from_dim_vector(to_dim_vector(v, cid), cid) == v
    d = data.draw(st.lists(st.integers(-9, 9), min_size=len(collection_data(cid).vertices),
                           max_size=len(collection_data(cid).vertices)))
    assert to_dim_vector(from_dim_vector(d, cid), cid) == tuple(d)


@pytest.mark.parametrize("cid", ALL, ids=str)
def test_psi_oracle_on_line_bundles(cid):
    if cid.surface is P1:
        grid = [line_bundle(P1, a) for a in range(-3, 4)]
    elif cid.surface is P2:
        grid = [line_bundle(P2, a) for a in range(-3, 4)]
    else:
        grid = [line_bundle(PP, (a, b)) for a in range(-3, 4) for b in range(-3, 4)]
    for L in grid:
        assert to_dim_vector(L, cid) == psi_oracle(L, cid)


@pytest.mark.parametrize("cid", ALL, ids=str)
@given(data=st.data())
@settings(max_examples=200)
def test_theta_pairing_identity(cid, data):
    v, w = data.draw(classes_for(cid)), data.draw(classes_for(cid))
    A = data.draw(polarizations()) if cid.surface is PP else Polarization.default(cid.surface)
    theta = theta_arrays(v, cid, A)
    pair = lambda d: sum((th * x for th, x in zip(theta, d)), RatPoly())
    assert pair(to_dim_vector(w, cid)) == sigma_g_eval(v, w, A)
    assert pair(to_dim_vector(v, cid)).is_zero()


@given(p2_classes(rank=st.integers(1, 8)))
def test_theta_sign_facts_p2(v):
    assume(region_membership(v, P2_FIRST).in_R_A)
    tm, _ = theta_components(v, P2_FIRST, H2)
    assert tm[0] < 0 < tm[2]


@given(p1xp1_classes(rank=st.integers(1, 8)), polarizations())
def test_theta_sign_facts_p1xp1(v, A):
    assume(region_membership(v, P1XP1_STD, A).in_R_A)
    tm, _ = theta_components(v, P1XP1_STD, A)
    assert tm[0] < 0 < tm[3]


@pytest.mark.parametrize("cid", [P2_FIRST, P2_SECOND, P1XP1_STD], ids=str)
@given(data=st.data())
@settings(max_examples=200)
def test_closed_form_regions_match_definitions(cid, data):
    v = data.draw(classes_for(cid))
    A = data.draw(polarizations()) if cid.surface is PP else H2
    closed, derived = region_membership(v, cid, A), derived_regions(v, cid, A)
    assert closed.in_R_A == derived.in_R_A
    assert closed.in_RG_A == derived.in_RG_A
    assert closed.in_S0_A == derived.in_S0_A
    assert closed.in_S_A == derived.in_S_A


@given(st.one_of(p2_classes(), p1xp1_classes()), st.integers(-5, 5), st.integers(-5, 5))
def test_twist_invariance_of_delta(v, a, b):
    L = line_bundle(P2, a) if v.surface is P2 else line_bundle(PP, (a, b))
    assert bogomolov_delta(twist(v, L)) == bogomolov_delta(v)


@given(p2_classes(), st.integers(-5, 5))
def test_twist_shifts_hilbert_polynomial(v, k):
    assert hilbert_polynomial(twist(v, line_bundle(P2, k)), H2) == hilbert_polynomial(v, H2).shift(k)


@given(st.one_of(p2_classes(), p1xp1_classes()))
def test_self_pairing_and_delta(v):
    assert euler_pairing(v, v) == v.rank ** 2 - bogomolov_delta(v)


@given(p2_classes(rank=st.integers(1, 8)))
def test_normalize_lands_in_region(v):
    n = normalize_twist(v, "P2_first")
    assert region_membership(n.cls, P2_FIRST).in_R_A
    assert not region_membership(twist(v, line_bundle(P2, n.twist - 1)), P2_FIRST).in_R_A


@given(p1xp1_classes(rank=st.integers(1, 8)), polarizations())
def test_normalize_p1xp1_lands_in_region(v, A):
    assert region_membership(normalize_twist(v, "P1xP1_std", A).cls, P1XP1_STD, A).in_R_A


@given(p1_classes(rank=st.integers(0, 8), deg=st.integers(0, 20)))
def test_normalize_p1(v):
    assume(v.rank or v.c1)
    n = normalize_twist(v, "P1")
    assert region_membership(v, n.collection).in_R_A
