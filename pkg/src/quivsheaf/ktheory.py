"""Numerical K-theory on P1, P2 and P1xP1.

A class stores rank, first Chern class and ch2; the Euler characteristic is
always derived by Riemann-Roch.  The four exceptional collections enter
only through integer matrices converting ``(rk, deg..., chi)`` coordinates
into dimension vectors of the associated quiver.

Coordinate conventions:

* P1: ``(rk, deg)``.
* P2: ``(rk, deg, chi)`` with ``deg = c1 . H``.
* P1xP1: ``(rk, deg_H, deg_F, chi)``.  ``c1 = alpha H + beta F`` is stored
  as ``(alpha, beta)``, so ``deg_H = beta`` and ``deg_F = alpha``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .exactalg import RatPoly, format_rational, rat


class KTheoryError(ValueError):
    pass


class SurfaceMismatch(KTheoryError):
    pass


class NotALineBundle(KTheoryError):
    pass


class DimensionMismatch(KTheoryError):
    pass


class WrongSurface(KTheoryError):
    pass


class NonPositiveRank(KTheoryError):
    pass


class NoTwistFound(KTheoryError):
    pass


class Surface(enum.Enum):
    P1 = "P1"
    P2 = "P2"
    P1xP1 = "P1xP1"


C1 = Union[int, tuple]


@dataclass(frozen=True)
class SheafClass:
    surface: Surface
    rank: int
    c1: C1
    ch2: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "ch2", rat(self.ch2))
        if self.surface is Surface.P1xP1:
            a, b = self.c1
            object.__setattr__(self, "c1", (int(a), int(b)))
        else:
            object.__setattr__(self, "c1", int(self.c1))
        if self.surface is Surface.P1 and self.ch2 != 0:
            raise KTheoryError("classes on P1 carry no ch2")
        if (2 * self.ch2).denominator != 1:
            raise KTheoryError("ch2 must lie in (1/2)Z")
        if self.surface is not Surface.P1 and self.chi.denominator != 1:
            raise KTheoryError("the Euler characteristic of this class is not an integer")

    # degrees against the fixed generators
    @property
    def degree(self) -> int:
        if self.surface is Surface.P1xP1:
            raise WrongSurface("use deg_H / deg_F on P1xP1")
        return self.c1

    @property
    def deg_H(self) -> int:
        return self.c1[1]

    @property
    def deg_F(self) -> int:
        return self.c1[0]

    @property
    def chi(self) -> Fraction:
        if self.surface is Surface.P1:
            return Fraction(self.rank + self.c1)
        if self.surface is Surface.P2:
            return self.rank + Fraction(3, 2) * self.c1 + self.ch2
        return self.rank + self.deg_H + self.deg_F + self.ch2

    def coords(self) -> tuple[int, ...]:
        if self.surface is Surface.P1:
            return (self.rank, self.c1)
        if self.surface is Surface.P2:
            return (self.rank, self.c1, int(self.chi))
        return (self.rank, self.deg_H, self.deg_F, int(self.chi))

    @classmethod
    def from_coords(cls, surface: Surface, coords: Sequence[int]) -> SheafClass:
        c = [int(x) for x in coords]
        if surface is Surface.P1:
            if len(c) != 2:
                raise DimensionMismatch("P1 coordinates are (rk, deg)")
            return cls(surface, c[0], c[1])
        if surface is Surface.P2:
            if len(c) != 3:
                raise DimensionMismatch("P2 coordinates are (rk, deg, chi)")
            rk, deg, chi = c
            return cls(surface, rk, deg, chi - rk - Fraction(3, 2) * deg)
        if len(c) != 4:
            raise DimensionMismatch("P1xP1 coordinates are (rk, deg_H, deg_F, chi)")
        rk, dh, df, chi = c
        return cls(surface, rk, (df, dh), Fraction(chi - rk - dh - df))

    def __neg__(self):
        c1 = tuple(-x for x in self.c1) if isinstance(self.c1, tuple) else -self.c1
        return SheafClass(self.surface, -self.rank, c1, -self.ch2)

    def __add__(self, other: SheafClass) -> SheafClass:
        _same(self, other)
        if isinstance(self.c1, tuple):
            c1 = (self.c1[0] + other.c1[0], self.c1[1] + other.c1[1])
        else:
            c1 = self.c1 + other.c1
        return SheafClass(self.surface, self.rank + other.rank, c1, self.ch2 + other.ch2)

    def __sub__(self, other):
        return self + (-other)

    def scaled(self, m: int) -> SheafClass:
        c1 = tuple(m * x for x in self.c1) if isinstance(self.c1, tuple) else m * self.c1
        return SheafClass(self.surface, m * self.rank, c1, m * self.ch2)

    def to_json(self) -> dict:
        out = {"surface": self.surface.value, "rank": self.rank,
               "c1": list(self.c1) if isinstance(self.c1, tuple) else self.c1}
        if self.surface is not Surface.P1:
            out["ch2"] = format_rational(self.ch2)
        return out

    @classmethod
    def from_json(cls, data: dict, surface: Surface | None = None) -> SheafClass:
        surf = Surface(data["surface"]) if "surface" in data else surface
        if surf is None:
            raise KTheoryError("missing surface")
        c1 = data.get("c1", 0)
        if isinstance(c1, list):
            c1 = tuple(c1)
        return cls(surf, int(data["rank"]), c1, rat(data.get("ch2", 0)))

    def __str__(self):
        if self.surface is Surface.P1:
            return f"(rk={self.rank}, deg={self.c1})"
        return f"(rk={self.rank}, c1={self.c1}, ch2={format_rational(self.ch2)})"


def _same(v: SheafClass, w: SheafClass) -> None:
    if v.surface is not w.surface:
        raise SurfaceMismatch(f"{v.surface.value} vs {w.surface.value}")


def intersect(surface: Surface, c: C1, d: C1) -> int:
    if surface is Surface.P2:
        return c * d
    if surface is Surface.P1xP1:
        return c[0] * d[1] + c[1] * d[0]
    raise WrongSurface("intersection form only on surfaces")


def line_bundle(surface: Surface, c1: C1) -> SheafClass:
    if surface is Surface.P1:
        return SheafClass(surface, 1, c1)
    return SheafClass(surface, 1, c1, Fraction(intersect(surface, c1, c1), 2))


def line_bundle_p1xp1(deg_h: int, deg_f: int) -> SheafClass:
    """The line bundle with the given degrees against H and F."""
    return line_bundle(Surface.P1xP1, (deg_f, deg_h))


def tangent_p2() -> SheafClass:
    return SheafClass(Surface.P2, 2, 3, Fraction(3, 2))


@dataclass(frozen=True)
class Polarization:
    surface: Surface
    coeffs: C1 = 1

    def __post_init__(self):
        c = self.coeffs
        if self.surface is Surface.P1xP1:
            if isinstance(c, int):
                c = (c, c)
            c = (int(c[0]), int(c[1]))
            ok = c[0] > 0 and c[1] > 0
        else:
            c = int(c)
            ok = c > 0
        if not ok:
            raise KTheoryError("polarization coefficients must be positive")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def default(cls, surface: Surface) -> Polarization:
        return cls(surface, (1, 1) if surface is Surface.P1xP1 else 1)

    @property
    def a(self) -> int:
        return self.coeffs[0] if isinstance(self.coeffs, tuple) else self.coeffs

    @property
    def b(self) -> int:
        return self.coeffs[1]

    def to_json(self) -> dict:
        if self.surface is Surface.P1xP1:
            return {"a": self.coeffs[0], "b": self.coeffs[1]}
        return {"degA": self.coeffs}


def deg_A(v: SheafClass, A: Polarization) -> int:
    _check_pol(v, A)
    if v.surface is Surface.P1xP1:
        return A.a * v.deg_H + A.b * v.deg_F
    return A.a * v.c1


def _check_pol(v: SheafClass, A: Polarization) -> None:
    if v.surface is not A.surface:
        raise SurfaceMismatch(f"class on {v.surface.value}, polarization on {A.surface.value}")


def hilbert_polynomial(v: SheafClass, A: Polarization) -> RatPoly:
    _check_pol(v, A)
    if v.surface is Surface.P1:
        return RatPoly((v.c1 + v.rank, v.rank * A.a))
    if v.surface is Surface.P2:
        h = A.a
        return RatPoly((v.chi, Fraction(3 * h * v.rank, 2) + h * v.c1, Fraction(h * h * v.rank, 2)))
    a, b = A.coeffs
    return RatPoly((v.chi, a * v.deg_H + b * v.deg_F + v.rank * (a + b), a * b * v.rank))


def twist(v: SheafClass, L: SheafClass) -> SheafClass:
    _same(v, L)
    if L.rank != 1:
        raise NotALineBundle("twisting class must have rank 1")
    if v.surface is Surface.P1:
        return SheafClass(v.surface, v.rank, v.c1 + v.rank * L.c1)
    if L.ch2 * 2 != intersect(L.surface, L.c1, L.c1):
        raise NotALineBundle("ch2 of a line bundle is c1^2/2")
    if v.surface is Surface.P2:
        c1 = v.c1 + v.rank * L.c1
    else:
        c1 = (v.c1[0] + v.rank * L.c1[0], v.c1[1] + v.rank * L.c1[1])
    ch2 = v.ch2 + intersect(v.surface, v.c1, L.c1) + v.rank * L.ch2
    return SheafClass(v.surface, v.rank, c1, ch2)


def _chi_of_product(surface: Surface, rk: int, c1: C1, ch2: Fraction) -> Fraction:
    if surface is Surface.P1:
        return Fraction(rk + c1)
    if surface is Surface.P2:
        return rk + Fraction(3, 2) * c1 + ch2
    return rk + c1[0] + c1[1] + ch2


def euler_pairing(v: SheafClass, w: SheafClass) -> int:
    """chi(v, w) = chi(v^dual (x) w) by Riemann-Roch."""
    _same(v, w)
    s = v.surface
    rk = v.rank * w.rank
    if s is Surface.P1:
        return rk + v.rank * w.c1 - w.rank * v.c1
    if s is Surface.P2:
        c1 = v.rank * w.c1 - w.rank * v.c1
    else:
        c1 = (v.rank * w.c1[0] - w.rank * v.c1[0], v.rank * w.c1[1] - w.rank * v.c1[1])
    ch2 = v.rank * w.ch2 + w.rank * v.ch2 - intersect(s, v.c1, w.c1)
    chi = _chi_of_product(s, rk, c1, ch2)
    assert chi.denominator == 1
    return int(chi)


def bogomolov_delta(v: SheafClass) -> Fraction:
    if v.surface is Surface.P1:
        raise WrongSurface("the discriminant is defined on surfaces only")
    return intersect(v.surface, v.c1, v.c1) - 2 * v.rank * v.ch2


# --- exceptional collections ------------------------------------------------


@dataclass(frozen=True)
class CollectionId:
    tag: str
    k: int = 0

    _TAGS = ("P1", "P2_first", "P2_second", "P1xP1_std")

    def __post_init__(self):
        if self.tag not in self._TAGS:
            raise KTheoryError(f"unknown collection {self.tag!r}")

    @classmethod
    def P1(cls, k: int) -> CollectionId:
        return cls("P1", k)

    @classmethod
    def parse(cls, s: str) -> CollectionId:
        s = s.strip()
        if s.startswith("P1:k="):
            return cls("P1", int(s[5:]))
        table = {"P2:first": "P2_first", "P2:second": "P2_second", "P1xP1:std": "P1xP1_std"}
        if s in table:
            return cls(table[s])
        if s in cls._TAGS[1:]:
            return cls(s)
        raise KTheoryError(f"unknown collection {s!r}")

    def __str__(self):
        if self.tag == "P1":
            return f"P1:k={self.k}"
        return {"P2_first": "P2:first", "P2_second": "P2:second", "P1xP1_std": "P1xP1:std"}[self.tag]

    @property
    def surface(self) -> Surface:
        return {"P1": Surface.P1, "P2_first": Surface.P2, "P2_second": Surface.P2,
                "P1xP1_std": Surface.P1xP1}[self.tag]

    @property
    def quiver_name(self) -> str:
        return {"P1": "K2", "P2_first": "B3_J", "P2_second": "B3_Jprime", "P1xP1_std": "Q4_J"}[self.tag]


P2_FIRST = CollectionId("P2_first")
P2_SECOND = CollectionId("P2_second")
P1XP1_STD = CollectionId("P1xP1_std")


@dataclass(frozen=True)
class CollectionData:
    vertices: tuple
    to_dims: tuple      # coordinates -> dimension vector
    from_dims: tuple    # dimension vector -> coordinates
    dual_objects: tuple  # left dual objects, one per vertex, as classes
    psi_sign: int        # dimension vector = psi_sign * chi(dual object, v)
    kx_subobjects: tuple  # dimension vectors of subobjects of the point complex
    kx_bad_quotients: tuple  # quotients of the point complex with nonzero H^{-1}


def collection_data(cid: CollectionId) -> CollectionData:
    if cid.tag == "P1":
        k = cid.k
        return CollectionData(
            vertices=(-1, 0),
            to_dims=((-k, 1), (1 - k, 1)),
            from_dims=((-1, 1), (1 - k, k)),
            dual_objects=(line_bundle(Surface.P1, k + 1), line_bundle(Surface.P1, k)),
            psi_sign=1,
            kx_subobjects=(),
            kx_bad_quotients=(),
        )
    if cid.tag == "P2_first":
        return CollectionData(
            vertices=(-1, 0, 1),
            to_dims=((1, 2, -1), (3, 3, -2), (1, 1, -1)),
            from_dims=((-1, 1, -1), (1, 0, -1), (0, 1, -3)),
            dual_objects=(line_bundle(Surface.P2, 2), tangent_p2(), line_bundle(Surface.P2, 1)),
            psi_sign=-1,
            kx_subobjects=((0, 0, 1), (0, 1, 1), (0, 2, 1), (1, 2, 1)),
            kx_bad_quotients=((1, 0, 0),),
        )
    if cid.tag == "P2_second":
        return CollectionData(
            vertices=(-1, 0, 1),
            to_dims=((1, 2, -1), (1, 1, -1), (0, 0, -1)),
            from_dims=((-1, 2, -1), (1, -1, 0), (0, 0, -1)),
            dual_objects=(line_bundle(Surface.P2, 2), line_bundle(Surface.P2, 1), line_bundle(Surface.P2, 0)),
            psi_sign=-1,
            kx_subobjects=((0, 0, 1), (0, 1, 1), (1, 1, 1)),
            kx_bad_quotients=((1, 0, 0),),
        )
    return CollectionData(
        vertices=((0, -1), (0, 0), (1, -1), (1, 0)),
        to_dims=((1, 1, 2, -1), (2, 0, 2, -1), (1, 1, 1, -1), (1, 0, 1, -1)),
        from_dims=((-1, 1, 1, -1), (0, 0, 1, -1), (1, 0, -1, 0), (0, 1, 0, -2)),
        dual_objects=(line_bundle_p1xp1(2, 1), line_bundle_p1xp1(2, 0),
                      line_bundle_p1xp1(1, 1), line_bundle_p1xp1(1, 0)),
        psi_sign=-1,
        kx_subobjects=((0, 0, 0, 1), (0, 1, 0, 1), (0, 0, 1, 1), (0, 1, 1, 1), (1, 1, 1, 1)),
        kx_bad_quotients=((1, 0, 0, 0),),
    )


def _apply(M, x):
    return tuple(sum(a * b for a, b in zip(row, x)) for row in M)


def _check_coll(v: SheafClass, cid: CollectionId) -> None:
    if v.surface is not cid.surface:
        raise SurfaceMismatch(f"class on {v.surface.value}, collection {cid}")


def to_dim_vector(v: SheafClass, cid: CollectionId) -> tuple[int, ...]:
    _check_coll(v, cid)
    return _apply(collection_data(cid).to_dims, v.coords())


def from_dim_vector(d: Sequence[int], cid: CollectionId) -> SheafClass:
    data = collection_data(cid)
    if len(d) != len(data.vertices):
        raise DimensionMismatch(f"{cid} needs {len(data.vertices)} entries, got {len(d)}")
    return SheafClass.from_coords(cid.surface, _apply(data.from_dims, [int(x) for x in d]))


def psi_oracle(v: SheafClass, cid: CollectionId) -> tuple[int, ...]:
    """Dimension vector computed from Euler pairings with the dual collection."""
    data = collection_data(cid)
    return tuple(data.psi_sign * euler_pairing(E, v) for E in data.dual_objects)


# --- alternating forms and weights -----------------------------------------


def sigma_m(v: SheafClass, w: SheafClass, A: Polarization) -> int:
    _same(v, w)
    return deg_A(v, A) * w.rank - deg_A(w, A) * v.rank


def sigma_chi(v: SheafClass, w: SheafClass) -> Fraction:
    _same(v, w)
    return v.chi * w.rank - w.chi * v.rank


def sigma_g_eval(v: SheafClass, w: SheafClass, A: Polarization) -> RatPoly:
    _same(v, w)
    _check_pol(v, A)
    if v.surface is Surface.P1:
        # on a curve the slope and Euler forms coincide; only the slope part is kept
        return RatPoly.const(v.c1 * w.rank - w.c1 * v.rank)
    return RatPoly.linear(sigma_m(v, w, A), sigma_chi(v, w))


def _linear_forms(v: SheafClass, A: Polarization) -> tuple[tuple, tuple]:
    """Coefficients of w -> sigma_M(v, w) and w -> sigma_chi(v, w) in coordinates of w."""
    if v.surface is Surface.P1:
        lm = (v.c1, -v.rank)
        return lm, lm
    if v.surface is Surface.P2:
        h = A.a
        return (h * v.c1, -h * v.rank, 0), (v.chi, 0, -v.rank)
    a, b = A.coeffs
    return (deg_A(v, A), -a * v.rank, -b * v.rank, 0), (v.chi, 0, 0, -v.rank)


def theta_components(v: SheafClass, cid: CollectionId, A: Polarization) -> tuple[tuple, tuple]:
    """The arrays (theta_M, theta_chi) pairing with dimension vectors like sigma_M, sigma_chi."""
    _check_coll(v, cid)
    _check_pol(v, A)
    N = collection_data(cid).from_dims
    lm, lc = _linear_forms(v, A)
    n = len(N)
    tm = tuple(sum(Fraction(N[i][j]) * lm[i] for i in range(n)) for j in range(n))
    tc = tuple(sum(Fraction(N[i][j]) * lc[i] for i in range(n)) for j in range(n))
    return tm, tc


def theta_arrays(v: SheafClass, cid: CollectionId, A: Polarization | None = None) -> tuple[RatPoly, ...]:
    A = A or Polarization.default(v.surface)
    tm, tc = theta_components(v, cid, A)
    if v.surface is Surface.P1:
        return tuple(RatPoly.const(x) for x in tm)
    return tuple(RatPoly.linear(m, c) for m, c in zip(tm, tc))


# --- regions ----------------------------------------------------------------


@dataclass(frozen=True)
class RegionFlags:
    in_R_A: bool
    in_RG_A: bool
    in_S0_A: bool
    in_S_A: bool

    @property
    def in_Rtilde(self) -> bool:
        return self.in_RG_A and self.in_S_A

    def to_json(self) -> dict:
        return {"in_R_A": self.in_R_A, "in_RG_A": self.in_RG_A, "in_S0_A": self.in_S0_A,
                "in_S_A": self.in_S_A, "in_Rtilde": self.in_Rtilde}


def _pos(slope, const) -> bool:
    return RatPoly.linear(slope, const).sign() > 0


def region_membership(v: SheafClass, cid: CollectionId, A: Polarization | None = None) -> RegionFlags:
    A = A or Polarization.default(v.surface)
    _check_coll(v, cid)
    _check_pol(v, A)
    rk = v.rank
    if cid.tag == "P1":
        inside = rk >= 0 and v.c1 >= cid.k * rk
        return RegionFlags(inside, inside, inside, inside)
    if cid.tag == "P2_first":
        deg, chi = v.c1, v.chi
        r = rk > 0 and abs(deg) < rk
        rg = rk > 0 and _pos(deg + rk, chi) and _pos(rk - deg, 3 * rk - chi)
        s = (rk > 0 and _pos(rk - deg, 3 * rk - chi) and _pos(deg + rk, rk + chi)
             and deg != -rk)
        return RegionFlags(r, rg, r, s)
    if cid.tag == "P2_second":
        deg, chi = v.c1, v.chi
        r = 0 < -deg < rk
        # -t rk < t deg + chi < rk
        rg = _pos(deg + rk, chi) and _pos(-deg, rk - chi)
        # -(t+1) rk < t deg + chi < rk and deg != -rk
        s = _pos(deg + rk, chi + rk) and _pos(-deg, rk - chi) and deg != -rk
        return RegionFlags(r, rg, r, s)
    a, b = A.coeffs
    da, chi = deg_A(v, A), v.chi
    r = rk > 0 and -b * rk < da < a * rk
    rg = rk > 0 and _pos(da + b * rk, chi) and _pos(a * rk - da, 2 * rk - chi)
    s = (rk > 0 and _pos(a * rk - da, 2 * rk - chi) and _pos(da + b * rk, rk + chi)
         and da != -b * rk)
    return RegionFlags(r, rg, r, s)


def derived_regions(v: SheafClass, cid: CollectionId, A: Polarization | None = None) -> RegionFlags:
    """Regions evaluated from their definitions rather than the closed forms.

    Slope and reduced-Hilbert-polynomial bounds come from the Chern data of
    the dual collection and its twist by the canonical class; the point
    conditions come from the listed subobjects and quotients of the point
    complex.  Used to cross-check :func:`region_membership`.
    """
    A = A or Polarization.default(v.surface)
    if cid.tag == "P1":
        return region_membership(v, cid, A)
    data = collection_data(cid)
    s = v.surface
    omega = line_bundle(s, -3 if s is Surface.P2 else (-2, -2))
    duals = data.dual_objects
    twisted = tuple(twist(E, omega) for E in duals)
    rk = v.rank
    if rk > 0:
        mu = Fraction(deg_A(v, A), rk)
        lo = max(Fraction(deg_A(E, A), E.rank) for E in twisted)
        hi = min(Fraction(deg_A(E, A), E.rank) for E in duals)
        r = lo < mu < hi
        red = hilbert_polynomial(v, A) * Fraction(1, rk)
        lo_p = max((hilbert_polynomial(E, A) * Fraction(1, E.rank) for E in twisted),
                   key=_LexKey)
        hi_p = min((hilbert_polynomial(E, A) * Fraction(1, E.rank) for E in duals),
                   key=_LexKey)
        rg = (red - lo_p).sign() > 0 and (hi_p - red).sign() > 0
    else:
        r = rg = False
    tm, tc = theta_components(v, cid, A)
    full = data.kx_subobjects[-1]
    proper = [w for w in data.kx_subobjects if w != full]
    s0 = all(_dot(tm, w) > 0 for w in proper)
    sg = all(RatPoly.linear(_dot(tm, w), _dot(tc, w)).sign() > 0 for w in data.kx_subobjects)
    sg = sg and all(_dot(tm, q) != 0 for q in data.kx_bad_quotients)
    return RegionFlags(r, rg, s0, sg)


class _LexKey:
    __slots__ = ("p",)

    def __init__(self, p: RatPoly):
        self.p = p

    def __lt__(self, other):
        return (self.p - other.p).sign() < 0


def _dot(x, y):
    return sum(a * b for a, b in zip(x, y))


# --- normalization by twisting ---------------------------------------------


@dataclass(frozen=True)
class Normalized:
    twist: C1
    cls: SheafClass
    collection: CollectionId


def normalize_twist(v: SheafClass, family: str, A: Polarization | None = None) -> Normalized:
    """Twist ``v`` into the theorem region of a collection family.

    ``family`` is one of ``P1``, ``P2_first``, ``P2_second``, ``P1xP1_std``.
    On P1 the collection index is chosen instead of twisting: ``k`` is the
    largest integer with ``deg >= k rk`` (rank zero classes of nonnegative
    degree use ``k = 0``).  On P2 the twist is an integer, on P1xP1 it is
    the ``c1`` of the twisting line bundle.
    """
    A = A or Polarization.default(v.surface)
    rk = v.rank
    if family == "P1":
        if v.surface is not Surface.P1:
            raise SurfaceMismatch("P1 family needs a class on P1")
        if rk < 0:
            raise NonPositiveRank("rank must be nonnegative on P1")
        if rk == 0:
            if v.c1 < 0:
                raise NoTwistFound("a rank zero class of negative degree lies in no region")
            return Normalized(0, v, CollectionId.P1(0))
        k = v.c1 // rk
        return Normalized(k, v, CollectionId.P1(k))
    if rk <= 0:
        raise NonPositiveRank("twist normalization needs positive rank")
    if family == "P2_first":
        _check_coll(v, P2_FIRST)
        k = (-v.c1 - rk) // rk + 1
        w = twist(v, line_bundle(Surface.P2, k))
        assert region_membership(w, P2_FIRST, A).in_R_A
        return Normalized(k, w, P2_FIRST)
    if family == "P2_second":
        _check_coll(v, P2_SECOND)
        k = -math.ceil(Fraction(v.c1, rk))
        w = twist(v, line_bundle(Surface.P2, k))
        if not region_membership(w, P2_SECOND, A).in_Rtilde:
            raise NoTwistFound("zero-slope twist has chi >= rank (needs ch2 < 0)")
        return Normalized(k, w, P2_SECOND)
    if family == "P1xP1_std":
        _check_coll(v, P1XP1_STD)
        a, b = A.coeffs
        da = deg_A(v, A)
        radius = abs(da) // rk + a + b + 2
        for total in range(radius + 1):
            for alpha in range(-total, total + 1):
                rest = total - abs(alpha)
                for beta in sorted({-rest, rest}):
                    # L = alpha H + beta F changes deg_A by rk (a beta + b alpha)
                    if -b * rk < da + rk * (a * beta + b * alpha) < a * rk:
                        w = twist(v, line_bundle(Surface.P1xP1, (alpha, beta)))
                        return Normalized((alpha, beta), w, P1XP1_STD)
        raise NoTwistFound("search radius exhausted")
    raise KTheoryError(f"unknown family {family!r}")
