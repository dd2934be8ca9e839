"""Matrix pencils, Kronecker quiver moduli and the P1 dictionary.

A representation of ``K_2`` is a pencil ``(f0, f1)`` of ``d0 x d_{-1}``
matrices.  :func:`kcf` returns its Kronecker canonical form together with a
basis change, :func:`stability_from_blocks` reads stability off the blocks,
and :func:`classify_K2` / :func:`reduce_Kn` describe the moduli spaces
``K(n; a, b)`` from the dimension vector alone.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import sympy
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import invariant_factors

from . import linalg as la
from .exactalg import RatPoly
from .ktheory import (CollectionId, SheafClass, Surface, from_dim_vector,
                      normalize_twist, to_dim_vector, NoTwistFound)
from .quivercore import (HNStep, Representation, StabilityVerdict, Status, UnsupportedMode,
                         Witness, _verify, as_weight, hn_slope, kronecker_quiver, weight_pairing)


class KroneckerError(ValueError):
    pass


class NotASheaf(KroneckerError):
    pass


class ZeroVector(KroneckerError):
    pass


class NegativeRank(KroneckerError):
    pass


# --- pencils and blocks ---------------------------------------------------------


@dataclass(frozen=True)
class Pencil:
    field: object
    f0: tuple
    f1: tuple
    source_dim: int
    target_dim: int

    def __post_init__(self):
        for M in (self.f0, self.f1):
            if len(M) != self.target_dim or any(len(r) != self.source_dim for r in M):
                raise KroneckerError("both maps need shape target_dim x source_dim")

    @classmethod
    def from_matrices(cls, F, f0: Sequence, f1: Sequence, source_dim: int | None = None) -> Pencil:
        f0 = la.convert(F, f0)
        f1 = la.convert(F, f1)
        if source_dim is None:
            source_dim = len(f0[0]) if f0 else 0
        return cls(F, f0, f1, source_dim, len(f0))

    @classmethod
    def from_representation(cls, r: Representation) -> Pencil:
        if r.quiver.name != "K2":
            raise UnsupportedMode("Kronecker canonical form needs the quiver K2")
        return cls(r.field, r.matrices["e0"], r.matrices["e1"], r.dims[0], r.dims[1])

    def to_representation(self) -> Representation:
        mats = {"e0": self.f0, "e1": self.f1}
        return Representation(kronecker_quiver(2), self.field, (self.source_dim, self.target_dim), mats)

    @property
    def dims(self) -> tuple[int, int]:
        return (self.source_dim, self.target_dim)

    def to_json(self) -> dict:
        return self.to_representation().to_json()

    @classmethod
    def from_json(cls, data: dict) -> Pencil:
        data = dict(data)
        data.setdefault("quiver", "K2")
        return cls.from_representation(Representation.from_json(data))


JORDAN = "Jordan"
GEN_JORDAN = "GeneralizedJordan"
INF_JORDAN = "JordanAtInfinity"
COLUMN = "ColumnBlock"
ROW = "RowBlock"
ZERO_SOURCE = "ZeroSource"
ZERO_TARGET = "ZeroTarget"

_KIND_ORDER = {COLUMN: 0, ZERO_TARGET: 1, JORDAN: 2, GEN_JORDAN: 3, INF_JORDAN: 4, ROW: 5, ZERO_SOURCE: 6}


@dataclass(frozen=True)
class KCFBlock:
    """One indecomposable summand.

    ``n`` is the block size; for generalized Jordan blocks ``poly`` is the
    monic irreducible polynomial (constant term first) and ``n`` its power.
    """

    kind: str
    n: int = 1
    eigenvalue: object = None
    poly: tuple | None = None

    @property
    def dims(self) -> tuple[int, int]:
        if self.kind in (JORDAN, INF_JORDAN):
            return (self.n, self.n)
        if self.kind == GEN_JORDAN:
            e = (len(self.poly) - 1) * self.n
            return (e, e)
        if self.kind == COLUMN:
            return (self.n, self.n + 1)
        if self.kind == ROW:
            return (self.n + 1, self.n)
        if self.kind == ZERO_SOURCE:
            return (1, 0)
        return (0, 1)

    def sort_key(self):
        ev = -1 if self.eigenvalue is None else self.eigenvalue
        return (_KIND_ORDER[self.kind], self.n, ev, self.poly or ())

    def to_json(self, F=None) -> dict:
        out = {"kind": self.kind, "n": self.n}
        fmt = F.fmt if F is not None else str
        if self.eigenvalue is not None:
            out["eigenvalue"] = fmt(self.eigenvalue)
        if self.poly is not None:
            out["poly"] = [fmt(c) for c in self.poly]
        return out

    def __str__(self):
        if self.kind == JORDAN:
            return f"Jordan({self.eigenvalue},{self.n})"
        if self.kind == GEN_JORDAN:
            return f"GeneralizedJordan({list(self.poly)},{self.n})"
        if self.kind in (ZERO_SOURCE, ZERO_TARGET):
            return self.kind
        return f"{self.kind}({self.n})"


def jordan(lam, n: int = 1) -> KCFBlock:
    return KCFBlock(JORDAN, n, lam)


def block_pencil(F, b: KCFBlock) -> tuple[tuple, tuple]:
    """The normal form ``(f0, f1)`` of a single block."""
    s, t = b.dims
    if b.kind == JORDAN:
        J = tuple(tuple(b.eigenvalue if i == j else (F.one if j == i + 1 else F.zero) for j in range(s))
                  for i in range(s))
        return la.identity(F, s), J
    if b.kind == GEN_JORDAN:
        return la.identity(F, s), _companion(F, _poly_power(F, b.poly, b.n))
    if b.kind == INF_JORDAN:
        N = tuple(tuple(F.one if i == j + 1 else F.zero for j in range(s)) for i in range(s))
        return N, la.identity(F, s)
    if b.kind == COLUMN:
        n = b.n
        f0 = tuple(tuple(F.one if i == j else F.zero for j in range(n)) for i in range(n + 1))
        f1 = tuple(tuple(F.one if i == j + 1 else F.zero for j in range(n)) for i in range(n + 1))
        return f0, f1
    if b.kind == ROW:
        n = b.n
        f0 = tuple(tuple(F.one if i == j else F.zero for j in range(n + 1)) for i in range(n))
        f1 = tuple(tuple(F.one if j == i + 1 else F.zero for j in range(n + 1)) for i in range(n))
        return f0, f1
    if b.kind == ZERO_SOURCE:
        return (), ()
    return ((),), ((),)


def _poly_mul(F, a: Sequence, b: Sequence) -> list:
    out = [F.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = la._reduce(F, out[i + j] + x * y)
    return out


def _poly_power(F, p: Sequence, e: int) -> list:
    out = [F.one]
    for _ in range(e):
        out = _poly_mul(F, out, p)
    return out


def _companion(F, q: Sequence) -> tuple:
    """Companion matrix of a monic polynomial (constant term first)."""
    N = len(q) - 1
    rows = []
    for i in range(N):
        row = [F.one if i == j + 1 else F.zero for j in range(N)]
        row[N - 1] = la._reduce(F, -q[i])
        rows.append(tuple(row))
    return tuple(rows)


def assemble(F, blocks: Sequence[KCFBlock]) -> Pencil:
    """Block-diagonal direct sum of the normal forms, in the given order."""
    s = sum(b.dims[0] for b in blocks)
    t = sum(b.dims[1] for b in blocks)
    f0 = [[F.zero] * s for _ in range(t)]
    f1 = [[F.zero] * s for _ in range(t)]
    so = to = 0
    for b in blocks:
        g0, g1 = block_pencil(F, b)
        bs, bt = b.dims
        for i in range(bt):
            for j in range(bs):
                f0[to + i][so + j] = g0[i][j]
                f1[to + i][so + j] = g1[i][j]
        so += bs
        to += bt
    return Pencil(F, tuple(map(tuple, f0)), tuple(map(tuple, f1)), s, t)


# --- canonical form ------------------------------------------------------------


def _toeplitz_kernel_dims(F, A: tuple, B: tuple, m: int, n: int, kmax: int) -> list[int]:
    """``N_k = dim`` of polynomial solutions of degree <= k of ``(A + x B) v = 0``."""
    out = []
    for k in range(kmax + 1):
        rows = []
        for blk in range(k + 2):
            for r in range(m):
                row = [F.zero] * ((k + 1) * n)
                if blk <= k:
                    for c in range(n):
                        row[blk * n + c] = A[r][c]
                if blk >= 1:
                    for c in range(n):
                        row[(blk - 1) * n + c] = B[r][c]
                rows.append(tuple(row))
        out.append(len(la.nullspace(F, tuple(rows), (k + 1) * n)))
    return out


def _minimal_indices(F, A, B, m: int, n: int) -> dict[int, int]:
    if n == 0:
        return {}
    if m == 0:
        return {0: n}
    N = _toeplitz_kernel_dims(F, A, B, m, n, n)
    counts = {}
    for e in range(n + 1):
        c = N[e] - 2 * (N[e - 1] if e >= 1 else 0) + (N[e - 2] if e >= 2 else 0)
        if c:
            counts[e] = c
    return counts


def _sym_domain(F):
    x = sympy.Symbol("x")
    dom = sympy.QQ if F.characteristic == 0 else sympy.GF(F.p)
    return x, dom


def _to_sym(F, a):
    if F.characteristic == 0:
        return sympy.Rational(a.numerator, a.denominator)
    return sympy.Integer(a)


def _from_sym(F, c):
    if F.characteristic == 0:
        c = sympy.Rational(c)
        return Fraction(int(c.p), int(c.q))
    return int(c) % F.p


def _elementary_divisors(F, P: tuple, Q: tuple, m: int, n: int) -> list[tuple[tuple, int]]:
    """Elementary divisors of ``Q - x P`` as (monic irreducible, exponent) pairs."""
    if m == 0 or n == 0:
        return []
    x, dom = _sym_domain(F)
    K = dom[x]
    rows = [[K.from_sympy(_to_sym(F, Q[i][j]) - _to_sym(F, P[i][j]) * x) for j in range(n)] for i in range(m)]
    out = []
    for f in invariant_factors(DomainMatrix(rows, (m, n), K)):
        poly = sympy.Poly(K.to_sympy(f), x, domain=dom)
        if poly.is_zero or poly.degree() <= 0:
            continue
        _, facs = poly.factor_list()
        for g, e in facs:
            g = g.monic()
            coeffs = tuple(_from_sym(F, c) for c in reversed(g.all_coeffs()))
            out.append((coeffs, int(e)))
    return out


def kcf_blocks(p: Pencil) -> list[KCFBlock]:
    """Block multiset of a pencil, in canonical order."""
    F = p.field
    m, n = p.target_dim, p.source_dim
    blocks = []
    for e, c in _minimal_indices(F, p.f0, p.f1, m, n).items():
        blocks += [KCFBlock(ZERO_SOURCE, 1) if e == 0 else KCFBlock(ROW, e)] * c
    t0 = la.transpose(p.f0, m)
    t1 = la.transpose(p.f1, m)
    for e, c in _minimal_indices(F, t0, t1, n, m).items():
        blocks += [KCFBlock(ZERO_TARGET, 1) if e == 0 else KCFBlock(COLUMN, e)] * c
    for g, e in _elementary_divisors(F, p.f0, p.f1, m, n):
        if len(g) == 2:
            blocks.append(KCFBlock(JORDAN, e, la._reduce(F, -g[0])))
        else:
            blocks.append(KCFBlock(GEN_JORDAN, e, None, g))
    for g, e in _elementary_divisors(F, p.f1, p.f0, m, n):
        if g == (F.zero, F.one):
            blocks.append(KCFBlock(INF_JORDAN, e))
    blocks.sort(key=KCFBlock.sort_key)
    return blocks


def _hom_space(p: Pencil, c: Pencil) -> tuple[list, int, int]:
    """Basis of pairs (g0, g_src) with ``g0 f_j = c_j g_src``, flattened."""
    F = p.field
    m, n = p.target_dim, p.source_dim
    nv = m * m + n * n
    rows = []
    for f, cj in ((p.f0, c.f0), (p.f1, c.f1)):
        for r in range(m):
            for col in range(n):
                row = [F.zero] * nv
                for k in range(m):
                    row[r * m + k] = la._reduce(F, row[r * m + k] + f[k][col])
                for k in range(n):
                    idx = m * m + k * n + col
                    row[idx] = la._reduce(F, row[idx] - cj[r][k])
                rows.append(tuple(row))
    return la.nullspace(F, tuple(rows), nv) if rows else [tuple(F.one if i == j else F.zero for j in range(nv)) for i in range(nv)], m, n


@dataclass(frozen=True)
class KCFResult:
    blocks: tuple
    g0: tuple      # target change of basis
    g_src: tuple   # source change of basis
    canonical: Pencil


def kcf(p: Pencil, seed: int = 0, tries: int = 400) -> KCFResult:
    """Canonical form with ``g0 f_j g_src^{-1} = c_j`` for the assembled blocks ``c``."""
    F = p.field
    blocks = kcf_blocks(p)
    c = assemble(F, blocks)
    basis, m, n = _hom_space(p, c)
    rng = random.Random(seed)
    for _ in range(tries):
        vec = [F.zero] * (m * m + n * n)
        for b in basis:
            a = F.random(rng, 4)
            if a:
                vec = [la._reduce(F, x + a * y) for x, y in zip(vec, b)]
        g0 = tuple(tuple(vec[r * m:(r + 1) * m]) for r in range(m))
        gs = tuple(tuple(vec[m * m + r * n:m * m + (r + 1) * n]) for r in range(n))
        if la.is_invertible(F, g0) and la.is_invertible(F, gs):
            return KCFResult(tuple(blocks), g0, gs, c)
    raise AssertionError("no isomorphism to the canonical form was found")


def conjugate(p: Pencil, g0: tuple, gs: tuple) -> Pencil:
    """The pencil ``g0 f_j g_src^{-1}``."""
    F = p.field
    m, n = p.target_dim, p.source_dim
    if m == 0 or n == 0:
        return p
    gi = la.inverse(F, gs)
    f0 = la.matmul(F, la.matmul(F, g0, p.f0), gi)
    f1 = la.matmul(F, la.matmul(F, g0, p.f1), gi)
    return Pencil(F, f0, f1, n, m)


# --- stability from blocks --------------------------------------------------------


def standard_weight(d: Sequence[int]) -> tuple[int, int]:
    return (-d[1], d[0])


def _pair(d, b) -> int:
    th = standard_weight(d)
    return th[0] * b[0] + th[1] * b[1]


def _single_block_stable(b: KCFBlock) -> bool:
    if b.kind in (JORDAN, INF_JORDAN, GEN_JORDAN):
        return b.n == 1
    return True


def _block_offsets(blocks):
    out, so, to = [], 0, 0
    for b in blocks:
        out.append((so, to))
        so += b.dims[0]
        to += b.dims[1]
    return out


def _inner_sub(F, b: KCFBlock) -> tuple[list, list]:
    """A proper subrepresentation of dimension ratio one in a block with n >= 2."""
    s = b.dims[0]
    if b.kind == JORDAN:
        v = tuple(F.one if i == 0 else F.zero for i in range(s))
        return [v], [v]
    if b.kind == INF_JORDAN:
        v = tuple(F.one if i == s - 1 else F.zero for i in range(s))
        return [v], [v]
    # kernel of g(C) inside the companion block of g^n
    C = block_pencil(F, b)[1]
    acc = la.zeros(F, s, s)
    power = la.identity(F, s)
    for coef in b.poly:
        acc = la.matadd(F, acc, la.scale(F, coef, power))
        power = la.matmul(F, C, power)
    ker = la.nullspace(F, acc, s)
    return ker, ker


def stability_from_blocks(blocks: Sequence[KCFBlock], F=None) -> tuple[Status, int | None, tuple | None]:
    """Verdict for the standard weight ``(-d0, d_{-1})`` of the total dimension.

    Returns the status, the index of a block carrying a witness, and for a
    single non-stable block the witness vectors inside that block.
    """
    blocks = list(blocks)
    d = (sum(b.dims[0] for b in blocks), sum(b.dims[1] for b in blocks))
    if d == (0, 0):
        raise ZeroVector("empty block list")
    for i, b in enumerate(blocks):
        if _pair(d, b.dims) < 0:
            return Status.UNSTABLE, i, None
    if len(blocks) > 1:
        return Status.STRICTLY_SEMISTABLE, 0, None
    if _single_block_stable(blocks[0]):
        return Status.STABLE, None, None
    inner = _inner_sub(F, blocks[0]) if F is not None else None
    return Status.STRICTLY_SEMISTABLE, 0, inner


def _pull_back(F, res: KCFResult, src_vecs: list, tgt_vecs: list) -> tuple:
    """Map canonical-coordinate vectors back to the input coordinates and span them."""
    n, m = res.canonical.source_dim, res.canonical.target_dim
    gs_inv = la.inverse(F, res.g_src) if n else ()
    g0_inv = la.inverse(F, res.g0) if m else ()
    W_s = la.span_rref(F, [la.matvec(F, gs_inv, v) for v in src_vecs], n)
    W_t = la.span_rref(F, [la.matvec(F, g0_inv, v) for v in tgt_vecs], m)
    return (W_s, W_t)


def _block_vectors(F, res: KCFResult, idxs) -> tuple[list, list]:
    n, m = res.canonical.source_dim, res.canonical.target_dim
    offs = _block_offsets(res.blocks)
    src, tgt = [], []
    for i in idxs:
        so, to = offs[i]
        bs, bt = res.blocks[i].dims
        src += [tuple(F.one if c == so + j else F.zero for c in range(n)) for j in range(bs)]
        tgt += [tuple(F.one if c == to + j else F.zero for c in range(m)) for j in range(bt)]
    return src, tgt


def _embed(F, res: KCFResult, i: int, vecs: list, which: int) -> list:
    n = res.canonical.source_dim if which == 0 else res.canonical.target_dim
    off = _block_offsets(res.blocks)[i][which]
    out = []
    for v in vecs:
        x = [F.zero] * n
        x[off:off + len(v)] = v
        out.append(tuple(x))
    return out


def _weight_scale(theta, d) -> int:
    """Sign of ``c`` in ``theta = c * standard_weight(d)``."""
    std = standard_weight(d)
    for th, s in zip(theta, std):
        if s:
            return (th * Fraction(1, s)).sign()
    return 0


def destabilizer_from_kcf(r: Representation, theta) -> StabilityVerdict:
    p = Pencil.from_representation(r)
    F = r.field
    caveat = r.reduced_mod_p
    theta = as_weight(theta)
    d = r.dims
    total = sum(d)
    scale = _weight_scale(theta, d) if all(d) else 0
    if scale == 0:
        # every subrepresentation pairs to zero
        if total == 1:
            return StabilityVerdict(Status.STABLE, None, None, caveat)
        v = tuple(F.one if i == 0 else F.zero for i in range(d[1]))
        W = ((), (v,)) if d[1] else ((tuple(F.one if i == 0 else F.zero for i in range(d[0])),), ())
        w = Witness(W, tuple(len(x) for x in W))
        _verify(r, theta, w, 0)
        return StabilityVerdict(Status.STRICTLY_SEMISTABLE, w, None, caveat)
    if scale < 0:
        W = ((), la.identity(F, d[1]))
        w = Witness(W, (0, d[1]))
        _verify(r, theta, w, -1)
        return StabilityVerdict(Status.UNSTABLE, w, None, caveat)
    res = kcf(p)
    status, idx, inner = stability_from_blocks(res.blocks, F)
    if status is Status.STABLE:
        return StabilityVerdict(status, None, None, caveat)
    if inner is not None:
        W = _pull_back(F, res, _embed(F, res, idx, inner[0], 0), _embed(F, res, idx, inner[1], 1))
    else:
        W = _pull_back(F, res, *_block_vectors(F, res, [idx]))
    w = Witness(W, tuple(len(x) for x in W))
    _verify(r, theta, w, -1 if status is Status.UNSTABLE else 0)
    return StabilityVerdict(status, w, None, caveat)


def hn_from_kcf(r: Representation, theta) -> list[HNStep]:
    """HN filtration by grouping blocks of equal slope, steepest first."""
    theta = as_weight(theta)
    if (theta[0] - theta[1]).sign() > 0:
        raise UnsupportedMode("block grouping needs theta_{-1} <= theta_0")
    F = r.field
    res = kcf(Pencil.from_representation(r))
    slopes = [hn_slope(theta, b.dims) for b in res.blocks]
    distinct = []
    for s in slopes:
        if s not in distinct:
            distinct.append(s)
    distinct.sort(key=lambda s: _Key(s), reverse=True)
    steps, chosen, prev = [], [], (0, 0)
    for s in distinct:
        chosen += [i for i, x in enumerate(slopes) if x == s]
        W = _pull_back(F, res, *_block_vectors(F, res, chosen))
        dims = tuple(len(x) for x in W)
        qd = (dims[0] - prev[0], dims[1] - prev[1])
        steps.append(HNStep(W, dims, qd, hn_slope(theta, qd)))
        prev = dims
    return steps


class _Key:
    __slots__ = ("p",)

    def __init__(self, p: RatPoly):
        self.p = p

    def __lt__(self, other):
        return (self.p - other.p).sign() < 0


# --- sheaves on P1 -------------------------------------------------------------------


@dataclass(frozen=True)
class SheafSummand:
    kind: str                 # "LineBundle" or "FatPoint"
    degree: int               # degree of the line bundle, or length times residue degree
    length: int = 0
    point: str | None = None  # "[a:b]" for rational points
    poly: tuple | None = None  # defining polynomial of a point of higher degree

    def sheaf_class(self) -> SheafClass:
        return SheafClass(Surface.P1, 1 if self.kind == "LineBundle" else 0, self.degree)

    def __str__(self):
        if self.kind == "LineBundle":
            return f"O({self.degree})"
        where = self.point if self.point else f"the point {list(self.poly)}"
        return f"fat point length {self.length} at {where}"

    def to_json(self, F=None) -> dict:
        out = {"kind": self.kind, "degree": self.degree, "description": str(self)}
        if self.kind == "FatPoint":
            out["length"] = self.length
        if self.point:
            out["point"] = self.point
        if self.poly is not None:
            fmt = F.fmt if F is not None else str
            out["poly"] = [fmt(c) for c in self.poly]
        return out


def blocks_to_sheaf(blocks: Sequence[KCFBlock], k: int, F=None) -> list[SheafSummand]:
    out = []
    fmt = F.fmt if F is not None else str
    for b in blocks:
        if b.kind in (ROW, ZERO_SOURCE):
            raise NotASheaf(f"{b} gives a complex that is not a sheaf")
        if b.kind == COLUMN:
            out.append(SheafSummand("LineBundle", k + b.n))
        elif b.kind == ZERO_TARGET:
            out.append(SheafSummand("LineBundle", k))
        elif b.kind == JORDAN:
            lam = b.eigenvalue
            out.append(SheafSummand("FatPoint", b.n, b.n, f"[{fmt(-lam if F is None else la._reduce(F, -lam))}:1]"))
        elif b.kind == INF_JORDAN:
            out.append(SheafSummand("FatPoint", b.n, b.n, "[1:0]"))
        else:
            out.append(SheafSummand("FatPoint", (len(b.poly) - 1) * b.n, b.n, None, b.poly))
    return out


def sheaf_total(summands: Sequence[SheafSummand]) -> SheafClass:
    total = SheafClass(Surface.P1, 0, 0)
    for s in summands:
        total = total + s.sheaf_class()
    return total


# --- moduli descriptions ---------------------------------------------------------------


@dataclass(frozen=True)
class ModuliDescription:
    """A moduli space of semistable objects together with its stable locus.

    ``stable_locus`` is ``"empty"``, ``"equal"`` (every semistable point is
    stable), ``"open"`` (a proper nonempty open subset) or ``"unknown"``.
    """

    status: str
    dimension: int | None = None
    stable_locus: str = "empty"
    params: dict = field(default_factory=dict)

    @property
    def has_stable(self) -> bool | None:
        if self.stable_locus == "unknown":
            return None
        return self.stable_locus in ("equal", "open")

    @property
    def is_empty(self) -> bool:
        return self.status == "Empty"

    def label(self) -> str:
        p = self.params
        if self.status == "ProjectiveSpace":
            return f"P^{p['m']}"
        if self.status == "Grassmannian":
            return f"G_{p['k']}({p['n']})"
        if self.status == "SymbolicKronecker":
            return f"K({p['n']};{p['a']},{p['b']})"
        if self.status == "Point":
            return "point" + (" (stable)" if self.has_stable else "")
        return self.status

    def stable_label(self) -> str:
        if self.stable_locus == "empty":
            return "empty"
        if self.stable_locus == "equal":
            return self.label()
        if self.stable_locus == "open":
            return f"open subset of {self.label()}"
        return "unknown"

    def to_json(self) -> dict:
        out = {"status": self.status, "label": self.label(), "dimension": self.dimension,
               "stable_locus": self.stable_locus, "has_stable": self.has_stable}
        out.update(self.params)
        return out


EMPTY = ModuliDescription("Empty", None, "empty")


def point(stable: bool) -> ModuliDescription:
    return ModuliDescription("Point", 0, "equal" if stable else "empty")


def projective_space(m: int, stable_locus: str) -> ModuliDescription:
    return ModuliDescription("ProjectiveSpace", m, stable_locus, {"m": m})


def kronecker_dimension(n: int, a: int, b: int) -> int:
    return n * a * b + 1 - a * a - b * b


def classify_K2(d: Sequence[int]) -> ModuliDescription:
    a, b = (int(x) for x in d)  # a = d_{-1}, b = d_0
    if a < 0 or b < 0:
        raise KroneckerError("dimension vectors are nonnegative")
    if a == 0 and b == 0:
        raise ZeroVector("zero dimension vector")
    if a == 0 or b == 0:
        return point(a + b == 1)
    if a == b:
        return projective_space(a, "equal" if a == 1 else "empty")
    if b > a:
        # the line p d0 = (p+1) d_{-1} with p > 0: q copies of the column block L_p
        q = b - a
        return point(q == 1) if a % q == 0 else EMPTY
    q = a - b
    return point(q == 1) if b % q == 0 else EMPTY


@dataclass(frozen=True)
class ReductionStep:
    a: int
    b: int
    rule: str


def reduce_Kn(n: int, a: int, b: int) -> tuple[list[ReductionStep], ModuliDescription]:
    if n < 1:
        raise KroneckerError("K_n needs n >= 1")
    if a < 0 or b < 0:
        raise KroneckerError("dimension vectors are nonnegative")
    if a == 0 and b == 0:
        raise ZeroVector("zero dimension vector")
    trace = [ReductionStep(a, b, "start")]
    while True:
        if a == 0 or b == 0:
            trace.append(ReductionStep(a, b, "one vertex"))
            return trace, point(a + b == 1)
        if n * a < b or a > n * b:
            trace.append(ReductionStep(a, b, "empty"))
            return trace, EMPTY
        if b == n * a or a == n * b:
            trace.append(ReductionStep(a, b, "point"))
            return trace, point(min(a, b) == 1)
        if a == 1 or b == 1:
            k = b if a == 1 else a
            trace.append(ReductionStep(a, b, "grassmannian"))
            return trace, ModuliDescription("Grassmannian", k * (n - k), "equal", {"k": k, "n": n})
        if n == 2 and a == b:
            trace.append(ReductionStep(a, b, "projective space"))
            return trace, projective_space(a, "empty")
        if n == 3 and (a, b) == (2, 2):
            trace.append(ReductionStep(a, b, "projective space"))
            return trace, projective_space(5, "open")
        if n * a < 2 * b:
            a, b = n * a - b, a
            trace.append(ReductionStep(a, b, "reflect (a,b) -> (na-b,a)"))
            continue
        if n * b < 2 * a:
            a, b = b, n * b - a
            trace.append(ReductionStep(a, b, "reflect (a,b) -> (b,nb-a)"))
            continue
        trace.append(ReductionStep(a, b, "fundamental region"))
        return trace, ModuliDescription("SymbolicKronecker", kronecker_dimension(n, a, b), "open",
                                        {"n": n, "a": a, "b": b})


def classify_P1(v: SheafClass) -> ModuliDescription:
    if v.surface is not Surface.P1:
        raise KroneckerError("classify_P1 needs a class on P1")
    rk, deg = v.rank, v.c1
    if rk < 0:
        raise NegativeRank("rank must be nonnegative")
    if rk == 0 and deg == 0:
        raise ZeroVector("zero class")
    if rk > 0:
        return point(rk == 1) if deg % rk == 0 else EMPTY
    if deg > 0:
        return projective_space(deg, "equal" if deg == 1 else "empty")
    return EMPTY


def classify_P1_via_K2(v: SheafClass) -> ModuliDescription:
    """Same answer through the dimension vector in a region-adapted collection."""
    try:
        k = normalize_twist(v, "P1").twist
    except NoTwistFound:
        return EMPTY
    d = to_dim_vector(v, CollectionId.P1(k))
    if min(d) < 0:
        return EMPTY
    return classify_K2(d)
