"""Quivers with relations, representations and King stability.

Four presentations are supported: Kronecker quivers ``K_n``, the Beilinson
quiver ``B3`` with the symmetric or antisymmetric relations, and the four
vertex quiver ``Q4`` attached to P1xP1.  Stability of a concrete
representation is decided exactly by enumerating subrepresentations over a
prime field, or, for ``K_2``, from the Kronecker canonical form.

Weights are tuples of :class:`RatPoly`; a representation ``V`` with
``theta . dim V = 0`` is semistable when every subrepresentation pairs to a
lexicographically nonnegative polynomial.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from . import linalg as la
from .exactalg import RatPoly, format_rational


class QuiverError(ValueError):
    pass


class ShapeMismatch(QuiverError):
    pass


class DimensionMismatch(QuiverError):
    pass


class BudgetExceeded(QuiverError):
    pass


class UnsupportedMode(QuiverError):
    pass


class NotOrthogonal(QuiverError):
    pass


DEFAULT_BUDGET = 5_000_000
CHAMBER_BUDGET = 2_000_000  # subdimension vectors visited by the chamber routines


@dataclass(frozen=True)
class Arrow:
    label: str
    source: int
    target: int


@dataclass(frozen=True)
class Relation:
    name: str
    terms: tuple  # (coefficient, first arrow, second arrow): path "second after first"


@dataclass(frozen=True)
class QuiverPresentation:
    name: str
    vertices: tuple
    arrows: tuple
    relations: tuple = ()

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def arrow(self, label: str) -> Arrow:
        for a in self.arrows:
            if a.label == label:
                return a
        raise KeyError(label)

    def topological_order(self) -> list[int]:
        indeg = [0] * self.n_vertices
        for a in self.arrows:
            indeg[a.target] += 1
        order, ready = [], [i for i in range(self.n_vertices) if indeg[i] == 0]
        while ready:
            i = ready.pop(0)
            order.append(i)
            for a in self.arrows:
                if a.source == i:
                    indeg[a.target] -= 1
                    if indeg[a.target] == 0:
                        ready.append(a.target)
        if len(order) != self.n_vertices:
            raise QuiverError("quiver has an oriented cycle")
        return order


def kronecker_quiver(n: int) -> QuiverPresentation:
    if n < 1:
        raise QuiverError("K_n needs n >= 1")
    arrows = tuple(Arrow(f"e{j}", 0, 1) for j in range(n))
    return QuiverPresentation(f"K{n}", (-1, 0), arrows)


def _b3_arrows() -> tuple:
    a = tuple(Arrow(f"a{i}", 0, 1) for i in (1, 2, 3))
    b = tuple(Arrow(f"b{i}", 1, 2) for i in (1, 2, 3))
    return a + b


def b3_j() -> QuiverPresentation:
    rels = []
    for i in (1, 2, 3):
        for j in range(i, 4):
            if i == j:
                terms = ((2, f"a{i}", f"b{i}"),)
            else:
                terms = ((1, f"a{j}", f"b{i}"), (1, f"a{i}", f"b{j}"))
            rels.append(Relation(f"b{i}a{j}+b{j}a{i}", terms))
    return QuiverPresentation("B3_J", (-1, 0, 1), _b3_arrows(), tuple(rels))


def b3_jprime() -> QuiverPresentation:
    rels = []
    for i in (1, 2, 3):
        for j in range(i + 1, 4):
            rels.append(Relation(f"b{i}a{j}-b{j}a{i}", ((1, f"a{j}", f"b{i}"), (-1, f"a{i}", f"b{j}"))))
    return QuiverPresentation("B3_Jprime", (-1, 0, 1), _b3_arrows(), tuple(rels))


def q4_j() -> QuiverPresentation:
    verts = ((0, -1), (0, 0), (1, -1), (1, 0))
    arrows = []
    for j in (1, 2):
        arrows.append(Arrow(f"a1_{j}", 0, 1))
    for j in (1, 2):
        arrows.append(Arrow(f"a2_{j}", 0, 2))
    for i in (1, 2):
        arrows.append(Arrow(f"b1_{i}", 1, 3))
    for i in (1, 2):
        arrows.append(Arrow(f"b2_{i}", 2, 3))
    rels = []
    for i in (1, 2):
        for j in (1, 2):
            rels.append(Relation(f"b1_{i}a1_{j}+b2_{j}a2_{i}",
                                 ((1, f"a1_{j}", f"b1_{i}"), (1, f"a2_{i}", f"b2_{j}"))))
    return QuiverPresentation("Q4_J", verts, tuple(arrows), tuple(rels))


def quiver_by_name(name: str) -> QuiverPresentation:
    key = name.strip()
    if key in ("B3", "B3_J"):
        return b3_j()
    if key in ("B3_Jprime", "B3_J'", "B3'"):
        return b3_jprime()
    if key in ("Q4", "Q4_J"):
        return q4_j()
    if key.startswith("K"):
        return kronecker_quiver(int(key[1:].lstrip("_:n=")))
    raise QuiverError(f"unknown quiver {name!r}")


# --- representations --------------------------------------------------------


@dataclass(frozen=True)
class Representation:
    quiver: QuiverPresentation
    field: object
    dims: tuple
    matrices: dict
    reduced_mod_p: bool = False

    def __post_init__(self):
        dims = tuple(int(x) for x in self.dims)
        object.__setattr__(self, "dims", dims)
        if len(dims) != self.quiver.n_vertices:
            raise DimensionMismatch("one dimension per vertex expected")
        if any(x < 0 for x in dims):
            raise DimensionMismatch("dimensions are nonnegative")
        mats = {}
        for a in self.quiver.arrows:
            M = self.matrices.get(a.label)
            ds, dt = dims[a.source], dims[a.target]
            if M is None:
                M = la.zeros(self.field, dt, ds)
            M = tuple(tuple(self.field(x) for x in row) for row in M)
            if dt == 0 and M in ((), ((),)):
                M = ()
            if len(M) != dt or any(len(row) != ds for row in M):
                raise ShapeMismatch(f"arrow {a.label} needs a {dt}x{ds} matrix")
            mats[a.label] = M
        extra = set(self.matrices) - {a.label for a in self.quiver.arrows}
        if extra:
            raise ShapeMismatch(f"unknown arrows {sorted(extra)}")
        object.__setattr__(self, "matrices", mats)

    def to_json(self) -> dict:
        F = self.field
        return {
            "quiver": self.quiver.name,
            "field": F.name,
            "dims": list(self.dims),
            "matrices": {k: [[F.fmt(x) for x in row] for row in M] for k, M in self.matrices.items()},
        }

    @classmethod
    def from_json(cls, data: dict) -> Representation:
        F = la.field_from_name(str(data.get("field", "Q")))
        q = quiver_by_name(data["quiver"])
        mats = {k: tuple(tuple(F(x) for x in row) for row in M) for k, M in data.get("matrices", {}).items()}
        return cls(q, F, tuple(data["dims"]), mats)

    def reduce_mod(self, p: int) -> Representation:
        F = la.PrimeField(p)
        mats = {k: tuple(tuple(F(x) for x in row) for row in M) for k, M in self.matrices.items()}
        return Representation(self.quiver, F, self.dims, mats, reduced_mod_p=True)

    def change_basis(self, g: Sequence) -> Representation:
        """Apply invertible matrices ``g[i]`` at each vertex: ``M_h -> g_t M_h g_s^{-1}``."""
        F = self.field
        ginv = [la.inverse(F, gi) if gi else () for gi in g]
        mats = {}
        for a in self.quiver.arrows:
            M = self.matrices[a.label]
            ds, dt = self.dims[a.source], self.dims[a.target]
            M = la.matmul(F, g[a.target], M, inner=dt, cols=ds) if dt else ()
            mats[a.label] = la.matmul(F, M, ginv[a.source], inner=ds, cols=ds) if dt else ()
        return Representation(self.quiver, F, self.dims, mats, self.reduced_mod_p)


def random_representation(q: QuiverPresentation, F, dims: Sequence[int], rng, bound: int = 3) -> Representation:
    mats = {a.label: la.random_matrix(F, rng, dims[a.target], dims[a.source], bound) for a in q.arrows}
    return Representation(q, F, tuple(dims), mats)


def _compose(F, second: tuple, first: tuple, dt: int, dm: int, ds: int):
    if dt == 0:
        return ()
    if ds == 0:
        return tuple(() for _ in range(dt))
    if dm == 0:
        return la.zeros(F, dt, ds)
    return la.matmul(F, second, first)


def check_relations(r: Representation) -> list[str]:
    F = r.field
    bad = []
    for rel in r.quiver.relations:
        total = None
        for coef, first, second in rel.terms:
            a, b = r.quiver.arrow(first), r.quiver.arrow(second)
            if a.target != b.source:
                raise ShapeMismatch(f"relation {rel.name} composes non-adjacent arrows")
            P = _compose(F, r.matrices[second], r.matrices[first],
                         r.dims[b.target], r.dims[a.target], r.dims[a.source])
            P = la.scale(F, F(coef), P)
            total = P if total is None else la.matadd(F, total, P)
        if total and not la.is_zero_matrix(total):
            bad.append(rel.name)
    return bad


# --- weights ----------------------------------------------------------------


def as_weight(theta: Sequence) -> tuple[RatPoly, ...]:
    return tuple(RatPoly.coerce(x) for x in theta)


def weight_pairing(theta: Sequence, d: Sequence[int]) -> RatPoly:
    theta = as_weight(theta)
    if len(theta) != len(d):
        raise DimensionMismatch("weight and dimension vector have different lengths")
    out = RatPoly()
    for th, x in zip(theta, d):
        if x:
            out = out + th * x
    return out


def mirror_weight(theta: Sequence) -> tuple[RatPoly, ...]:
    """Weight on the opposite quiver (vertices reversed) matching dual representations."""
    return tuple(-x for x in reversed(as_weight(theta)))


def _subvectors(d: Sequence[int]) -> Iterator[tuple[int, ...]]:
    return itertools.product(*(range(x + 1) for x in d))


def _require_orthogonal(theta, d):
    if not weight_pairing(theta, d).is_zero():
        raise NotOrthogonal("weight does not pair to zero with the dimension vector")


# --- stability verdicts -----------------------------------------------------


class Status(enum.Enum):
    STABLE = "Stable"
    STRICTLY_SEMISTABLE = "StrictlySemistable"
    UNSTABLE = "Unstable"


@dataclass(frozen=True)
class Witness:
    basis: tuple  # per vertex: RREF rows spanning W_i
    dims: tuple


@dataclass(frozen=True)
class StabilityVerdict:
    status: Status
    witness: Witness | None = None
    reason: str | None = None
    mod_p_evidence_only: bool = False

    @property
    def semistable(self) -> bool:
        return self.status is not Status.UNSTABLE

    def to_json(self, F=None) -> dict:
        out = {"status": self.status.value}
        if self.reason:
            out["reason"] = self.reason
        if self.mod_p_evidence_only:
            out["caveat"] = "mod-p evidence only"
        if self.witness is not None:
            fmt = F.fmt if F is not None else str
            out["witness"] = {
                "dims": list(self.witness.dims),
                "basis": [[[fmt(x) for x in row] for row in B] for B in self.witness.basis],
            }
        return out


def is_subrepresentation(r: Representation, basis: Sequence) -> bool:
    F = r.field
    for a in r.quiver.arrows:
        W_s = basis[a.source]
        if not W_s:
            continue
        dt = r.dims[a.target]
        images = [la.matvec(F, r.matrices[a.label], w) for w in W_s] if dt else []
        if not la.contains(F, basis[a.target], images, dt):
            return False
    return True


def iter_subrepresentations(r: Representation, minimal_at: frozenset = frozenset()) -> Iterator[tuple]:
    """All subrepresentations, as per-vertex RREF bases, in a fixed order.

    Vertices are filled in topological order; at each vertex only subspaces
    containing the images of the already chosen source subspaces are
    produced, so every tuple yielded is arrow-invariant.  At vertices in
    ``minimal_at`` only the smallest admissible subspace is produced.
    """
    F = r.field
    if not isinstance(F, la.PrimeField):
        raise UnsupportedMode("exhaustive enumeration needs a prime field")
    q = r.quiver
    order = q.topological_order()
    incoming = {v: [a for a in q.arrows if a.target == v] for v in range(q.n_vertices)}
    chosen: list = [None] * q.n_vertices

    def rec(pos: int):
        if pos == len(order):
            yield tuple(chosen)
            return
        v = order[pos]
        n = r.dims[v]
        images = []
        if n:
            for a in incoming[v]:
                for w in chosen[a.source]:
                    images.append(la.matvec(F, r.matrices[a.label], w))
        U = la.span_rref(F, images, n)
        for W in ((U,) if v in minimal_at else la.subspaces_containing(F, U, n)):
            chosen[v] = W
            yield from rec(pos + 1)
        chosen[v] = None

    yield from rec(0)


def enumeration_budget(r: Representation) -> int:
    p = r.field.p
    return math.prod(la.subspace_count(x, p) for x in r.dims)


def _check_budget(r: Representation, budget: int) -> None:
    if not isinstance(r.field, la.PrimeField):
        raise UnsupportedMode("exhaustive enumeration needs a prime field")
    need = enumeration_budget(r)
    if need > budget:
        raise BudgetExceeded(f"search space {need} exceeds budget {budget}")


def _verify(r: Representation, theta, w: Witness, expect_sign: int) -> None:
    dims = tuple(len(B) for B in w.basis)
    if dims != w.dims or not is_subrepresentation(r, w.basis):
        raise AssertionError("witness is not a subrepresentation")
    if weight_pairing(theta, dims).sign() != expect_sign:
        raise AssertionError("witness does not have the claimed weight sign")


def _positive_sinks(q: QuiverPresentation, theta) -> frozenset:
    # Enlarging W at a sink with positive weight only raises the pairing and
    # keeps W a proper nonzero subrepresentation, so the minimum and every
    # nonpositive value are already attained by the smallest choice there.
    sources = {a.source for a in q.arrows}
    return frozenset(v for v in range(q.n_vertices) if v not in sources and theta[v].sign() > 0)


def find_destabilizer(r: Representation, theta: Sequence, mode: str = "exhaustive",
                      budget: int = DEFAULT_BUDGET) -> StabilityVerdict:
    theta = as_weight(theta)
    if len(theta) != r.quiver.n_vertices:
        raise DimensionMismatch("weight length differs from the vertex count")
    caveat = r.reduced_mod_p
    if not weight_pairing(theta, r.dims).is_zero():
        return StabilityVerdict(Status.UNSTABLE, None, "weight_not_orthogonal", caveat)
    mode = mode.lower()
    if mode in ("kroneckercanonical", "kronecker", "kcf"):
        from .kronecker import destabilizer_from_kcf
        return destabilizer_from_kcf(r, theta)
    if mode != "exhaustive":
        raise UnsupportedMode(f"unknown mode {mode!r}")
    _check_budget(r, budget)
    total = r.dims
    zero = tuple(0 for _ in total)
    signs: dict = {}
    tie = None
    for W in iter_subrepresentations(r, _positive_sinks(r.quiver, theta)):
        dims = tuple(len(B) for B in W)
        if dims == zero or dims == total:
            continue
        s = signs.get(dims)
        if s is None:
            s = signs[dims] = weight_pairing(theta, dims).sign()
        if s < 0:
            w = Witness(W, dims)
            _verify(r, theta, w, -1)
            return StabilityVerdict(Status.UNSTABLE, w, None, caveat)
        if s == 0 and tie is None:
            tie = Witness(W, dims)
    if tie is not None:
        _verify(r, theta, tie, 0)
        return StabilityVerdict(Status.STRICTLY_SEMISTABLE, tie, None, caveat)
    return StabilityVerdict(Status.STABLE, None, None, caveat)


# --- Harder-Narasimhan filtrations -------------------------------------------


@dataclass(frozen=True)
class HNStep:
    basis: tuple       # per vertex basis of the filtration piece V_i
    dims: tuple        # dimension vector of V_i
    quotient_dims: tuple  # dimension vector of V_i / V_{i-1}
    slope: Fraction | RatPoly


def hn_slope(theta, d) -> RatPoly:
    """Slope ``(-theta) . d / sum(d)``; decreasing along HN filtrations."""
    return weight_pairing(theta, d) * Fraction(-1, sum(d))


def quotient_representation(r: Representation, W: Sequence) -> tuple[Representation, list]:
    """Quotient ``V / W`` and, per vertex, the free coordinates used as its basis."""
    F = r.field
    frees, projs = [], []
    for v, n in enumerate(r.dims):
        free, P = la.complement_coordinates(F, W[v], n)
        frees.append(free)
        projs.append(P)
    mats = {}
    for a in r.quiver.arrows:
        M = r.matrices[a.label]
        cols = []
        for c in frees[a.source]:
            img = tuple(row[c] for row in M)
            cols.append(la.matvec(F, projs[a.target], img) if projs[a.target] else ())
        qt, qs = len(frees[a.target]), len(frees[a.source])
        mats[a.label] = tuple(tuple(cols[j][i] for j in range(qs)) for i in range(qt))
    dims = tuple(len(f) for f in frees)
    return Representation(r.quiver, F, dims, mats, r.reduced_mod_p), frees


def _lift(F, W: Sequence, frees: list, S: Sequence, dims: Sequence[int]) -> tuple:
    out = []
    for v, n in enumerate(dims):
        rows = list(W[v])
        for s in S[v]:
            x = [F.zero] * n
            for c, val in zip(frees[v], s):
                x[c] = val
            rows.append(tuple(x))
        out.append(la.span_rref(F, rows, n))
    return tuple(out)


class _LexPoly:
    __slots__ = ("p",)

    def __init__(self, p):
        self.p = p

    def __lt__(self, other):
        return (self.p - other.p).sign() < 0

    def __eq__(self, other):
        return self.p == other.p


def _max_destabilizing(r: Representation, theta) -> tuple:
    """Nonzero subrepresentation of minimal King slope, largest among ties."""
    best, best_key = None, None
    zero = tuple(0 for _ in r.dims)
    cache: dict = {}
    for W in iter_subrepresentations(r):
        dims = tuple(len(B) for B in W)
        if dims == zero:
            continue
        mu = cache.get(dims)
        if mu is None:
            mu = cache[dims] = weight_pairing(theta, dims) * Fraction(1, sum(dims))
        if best is None or (mu - best_key[0]).sign() < 0 or (mu == best_key[0] and sum(dims) > best_key[1]):
            best, best_key = W, (mu, sum(dims))
    return best


def hn_filtration(r: Representation, theta: Sequence, mode: str = "exhaustive",
                  budget: int = DEFAULT_BUDGET) -> list[HNStep]:
    theta = as_weight(theta)
    if sum(r.dims) == 0:
        return []
    mode = mode.lower()
    if mode in ("kroneckercanonical", "kronecker", "kcf"):
        from .kronecker import hn_from_kcf
        return hn_from_kcf(r, theta)
    if mode != "exhaustive":
        raise UnsupportedMode(f"unknown mode {mode!r}")
    _check_budget(r, budget)
    F = r.field
    steps: list[HNStep] = []
    current = tuple(() for _ in r.dims)  # V_{i-1} inside r
    prev_dims = tuple(0 for _ in r.dims)
    while prev_dims != r.dims:
        Q, frees = quotient_representation(r, current)
        S = _max_destabilizing(Q, theta)
        nxt = _lift(F, current, frees, S, r.dims)
        dims = tuple(len(B) for B in nxt)
        qd = tuple(x - y for x, y in zip(dims, prev_dims))
        steps.append(HNStep(nxt, dims, qd, hn_slope(theta, qd)))
        current, prev_dims = nxt, dims
    return steps


def induced_weight(theta: Sequence, d: Sequence[int]) -> tuple[RatPoly, ...]:
    """Weight orthogonal to ``d`` whose stability matches slope stability of theta."""
    theta = as_weight(theta)
    tot = sum(d)
    pair = weight_pairing(theta, d)
    return tuple(th * tot - pair for th in theta)


# --- walls and chambers -------------------------------------------------------


def _primitive(v: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for x in v:
        g = math.gcd(g, int(x))
    if g == 0:
        return tuple(int(x) for x in v)
    return tuple(int(x) // g for x in v)


def _proportional(u: Sequence[int], v: Sequence[int]) -> bool:
    return all(u[i] * v[j] == u[j] * v[i] for i in range(len(u)) for j in range(len(u)))


@dataclass(frozen=True)
class Wall:
    normal: tuple          # primitive d'
    members: tuple         # every qualifying d' with this primitive direction
    hyperplane: tuple      # primitive normal of the wall inside d^perp

    def to_json(self) -> dict:
        return {"normal": list(self.normal), "members": [list(m) for m in self.members],
                "hyperplane_normal": list(self.hyperplane)}


def _hyperplane_key(d: Sequence[int], dp: Sequence[int]) -> tuple[int, ...]:
    dd = sum(x * x for x in d)
    dpd = sum(x * y for x, y in zip(dp, d))
    proj = _primitive([dd * a - dpd * b for a, b in zip(dp, d)])
    for x in proj:
        if x:
            return proj if x > 0 else tuple(-y for y in proj)
    return proj


def _check_chamber_size(d: Sequence[int]) -> None:
    need = math.prod(n + 1 for n in d)
    if need > CHAMBER_BUDGET:
        raise BudgetExceeded(f"{need} subdimension vectors exceed the chamber budget {CHAMBER_BUDGET}")


def walls(d: Sequence[int]) -> list[Wall]:
    d = tuple(int(x) for x in d)
    if not any(d):
        raise DimensionMismatch("walls need a nonzero dimension vector")
    _check_chamber_size(d)
    groups: dict = {}
    for dp in _subvectors(d):
        if not any(dp) or _proportional(dp, d):
            continue
        groups.setdefault(_primitive(dp), []).append(dp)
    out = [Wall(k, tuple(v), _hyperplane_key(d, k)) for k, v in groups.items()]
    out.sort(key=lambda w: w.normal)
    return out


def distinct_hyperplanes(d: Sequence[int]) -> list[tuple[int, ...]]:
    """Distinct walls of ``d^perp`` as hyperplanes (several d' can cut the same one)."""
    return sorted({w.hyperplane for w in walls(d)})


def _common_scale(theta) -> tuple[int, int]:
    """Top degree and a positive common denominator of the weight's coefficients."""
    top, den = 0, 1
    for th in theta:
        if not th.is_zero():
            top = max(top, th.degree)
        for c in th.coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
    return top, den


def _pairing_table(values: Sequence[int], d: Sequence[int]) -> list[int]:
    """``values . d'`` for every ``0 <= d' <= d`` in ``itertools.product`` order."""
    _check_chamber_size(d)
    sums = [0]
    for w, n in zip(values, d):
        sums = [s + k * w for s in sums for k in range(n + 1)]
    return sums


def _lex_encoded(theta, d: Sequence[int]) -> list[int]:
    """One integer per ``d' <= d`` whose sign is the lexicographic sign of ``theta . d'``.

    Each coefficient row pairs to at most ``B`` in absolute value, so with
    ``K = 2B + 1`` the base-``K`` packing keeps the top nonzero row dominant.
    """
    theta = as_weight(theta)
    top, den = _common_scale(theta)
    rows = [[int(th.coeff(k) * den) for th in theta] for k in range(top + 1)]
    bound = max(sum(abs(c) * n for c, n in zip(row, d)) for row in rows)
    K = 2 * bound + 1
    packed = [0] * len(theta)
    for row in reversed(rows):
        packed = [p * K + c for p, c in zip(packed, row)]
    return _pairing_table(packed, d)


def _sign(x: int) -> int:
    return (x > 0) - (x < 0)


def sign_vector(theta: Sequence, d: Sequence[int]) -> tuple[int, ...]:
    return tuple(_sign(x) for x in _lex_encoded(theta, d))


def numerically_equivalent(theta1: Sequence, theta2: Sequence, d: Sequence[int]) -> bool:
    _require_orthogonal(theta1, d)
    _require_orthogonal(theta2, d)
    return all(_sign(a) == _sign(b) for a, b in zip(_lex_encoded(theta1, d), _lex_encoded(theta2, d)))


def _to_primitive_integers(v: Sequence[Fraction]) -> tuple[int, ...]:
    den = 1
    for x in v:
        den = den * x.denominator // math.gcd(den, x.denominator)
    return _primitive([int(x * den) for x in v])


def integral_weight_in_class(theta: Sequence, d: Sequence[int]) -> tuple[int, ...]:
    _require_orthogonal(theta, d)
    theta = as_weight(theta)
    top, den = _common_scale(theta)
    if top > 1:
        raise QuiverError("weights of degree at most one are supported")
    # scaling by a positive constant keeps the chamber
    tm = [int(th.coeff(1) * den) for th in theta]
    tc = [int(th.coeff(0) * den) for th in theta]
    pm = _pairing_table(tm, d)
    nz = [abs(x) for x in pm if x]
    if not nz:
        out = _primitive(tc)
    else:
        big = max(abs(x) for x in _pairing_table(tc, d))
        eps = Fraction(min(nz), 2 * big) if big else Fraction(1)
        out = _to_primitive_integers([m + eps * c for m, c in zip(tm, tc)])
    assert numerically_equivalent(theta, out, d)
    return out


def is_theta_coprime(theta: Sequence, d: Sequence[int]) -> bool:
    _require_orthogonal(theta, d)
    table = _lex_encoded(theta, d)
    # the first entry is d' = 0 and the last is d' = d
    return all(x != 0 for x in table[1:-1])


def euler_form(q: QuiverPresentation, d: Sequence[int], e: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(d, e)) - sum(d[a.source] * e[a.target] for a in q.arrows)


def relation_count(q: QuiverPresentation, d: Sequence[int]) -> int:
    """Number of scalar equations imposed by the relations on representations of dimension d."""
    total = 0
    for rel in q.relations:
        _, first, second = rel.terms[0]
        total += d[q.arrow(first).source] * d[q.arrow(second).target]
    return total


def moduli_dimension(q: QuiverPresentation, d: Sequence[int]) -> int:
    return 1 - euler_form(q, d, d) - relation_count(q, d)
