"""Exact linear algebra over the rationals and prime fields.

Matrices are tuples of row tuples.  Vectors are tuples.  Every routine
takes the field as its first argument so the same code serves both the
rational canonical-form work and the finite-field subspace searches.
"""

from __future__ import annotations

import functools
import itertools
import random
from fractions import Fraction
from typing import Iterator, Sequence

Matrix = tuple
Vector = tuple


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, int(p ** 0.5) + 1))


class RationalField:
    name = "Q"
    characteristic = 0
    zero = Fraction(0)
    one = Fraction(1)

    def __call__(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, str):
            return Fraction(x.strip())
        return Fraction(x)

    def inv(self, a):
        return 1 / a

    def random(self, rng: random.Random, bound: int = 5):
        return Fraction(rng.randint(-bound, bound))

    def fmt(self, a) -> str:
        return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "QQ"


class PrimeField:
    """Integers modulo a prime, stored as ints in ``range(p)``."""

    def __init__(self, p: int):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.name = f"F_{p}"
        self.zero = 0
        self.one = 1

    def __call__(self, x):
        if isinstance(x, str):
            x = Fraction(x.strip())
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"{x} has no image in {self.name}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def random(self, rng: random.Random, bound: int = 0):
        return rng.randrange(self.p)

    def elements(self) -> range:
        return range(self.p)

    def fmt(self, a) -> str:
        return str(a)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))

    def __repr__(self):
        return f"GF({self.p})"


QQ = RationalField()


def field_from_name(name: str):
    name = name.strip()
    if name in ("Q", "QQ"):
        return QQ
    for prefix in ("F_", "GF", "F"):
        if name.startswith(prefix):
            return PrimeField(int(name[len(prefix):].strip("()")))
    raise ValueError(f"unknown field {name!r}")


def _reduce(F, a):
    return a % F.p if isinstance(F, PrimeField) else a


def zeros(F, rows: int, cols: int) -> Matrix:
    return tuple(tuple(F.zero for _ in range(cols)) for _ in range(rows))


def identity(F, n: int) -> Matrix:
    return tuple(tuple(F.one if i == j else F.zero for j in range(n)) for i in range(n))


def convert(F, M) -> Matrix:
    return tuple(tuple(F(x) for x in row) for row in M)


def shape(M: Matrix, cols_hint: int | None = None) -> tuple[int, int]:
    if not M:
        return 0, cols_hint or 0
    return len(M), len(M[0])


def transpose(M: Matrix, cols: int = 0) -> Matrix:
    if not M:
        return tuple(() for _ in range(cols))
    return tuple(zip(*M))


def matmul(F, A: Matrix, B: Matrix, inner: int | None = None, cols: int | None = None) -> Matrix:
    """Product of an ``r x k`` and a ``k x c`` matrix; empty shapes need hints."""
    r = len(A)
    k = len(A[0]) if A else (inner if inner is not None else len(B))
    c = len(B[0]) if B else (cols or 0)
    if B and len(B) != k:
        raise ValueError("inner dimensions differ")
    Bt = transpose(B, c)
    out = []
    for row in A:
        out.append(tuple(_reduce(F, sum(x * y for x, y in zip(row, col))) if k else F.zero for col in Bt))
    return tuple(out)


def matvec(F, A: Matrix, v: Vector) -> Vector:
    return tuple(_reduce(F, sum(x * y for x, y in zip(row, v))) for row in A)


def matadd(F, A: Matrix, B: Matrix) -> Matrix:
    return tuple(tuple(_reduce(F, x + y) for x, y in zip(ra, rb)) for ra, rb in zip(A, B))


def scale(F, c, A: Matrix) -> Matrix:
    return tuple(tuple(_reduce(F, c * x) for x in row) for row in A)


def is_zero_matrix(M: Matrix) -> bool:
    return all(x == 0 for row in M for x in row)


def rref(F, rows: Sequence[Sequence], ncols: int) -> tuple[Matrix, tuple[int, ...]]:
    """Reduced row echelon form; returns the nonzero rows and pivot columns."""
    A = [list(r) for r in rows]
    pivots = []
    r = 0
    prime = isinstance(F, PrimeField)
    p = F.p if prime else None
    for c in range(ncols):
        piv = None
        for i in range(r, len(A)):
            if A[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = F.inv(A[r][c])
        if prime:
            A[r] = [x * inv % p for x in A[r]]
        else:
            A[r] = [x * inv for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                if prime:
                    A[i] = [(x - f * y) % p for x, y in zip(A[i], A[r])]
                else:
                    A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return tuple(tuple(row) for row in A[:r]), tuple(pivots)


def rank(F, M: Matrix, ncols: int | None = None) -> int:
    if not M:
        return 0
    return len(rref(F, M, ncols if ncols is not None else len(M[0]))[1])


def nullspace(F, M: Matrix, ncols: int) -> list[Vector]:
    """Basis of ``{x : M x = 0}``."""
    R, piv = rref(F, M, ncols) if M else ((), ())
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        x = [F.zero] * ncols
        x[f] = F.one
        for row, pc in zip(R, piv):
            x[pc] = _reduce(F, -row[f])
        basis.append(tuple(x))
    return basis


def inverse(F, M: Matrix) -> Matrix:
    n = len(M)
    aug = [tuple(M[i]) + identity(F, n)[i] for i in range(n)]
    R, piv = rref(F, aug, 2 * n)
    if tuple(piv[:n]) != tuple(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return tuple(tuple(row[n:]) for row in R)


def is_invertible(F, M: Matrix) -> bool:
    n = len(M)
    return n == 0 or rank(F, M, n) == n


def span_rref(F, vectors: Sequence[Vector], n: int) -> Matrix:
    return rref(F, vectors, n)[0] if vectors else ()


def contains(F, basis: Matrix, vectors: Sequence[Vector], n: int) -> bool:
    """Whether every vector lies in the row span of ``basis``."""
    if not vectors:
        return True
    k = len(basis)
    return rank(F, tuple(basis) + tuple(vectors), n) == k


def random_matrix(F, rng: random.Random, rows: int, cols: int, bound: int = 3) -> Matrix:
    return tuple(tuple(F.random(rng, bound) for _ in range(cols)) for _ in range(rows))


def random_invertible(F, rng: random.Random, n: int, bound: int = 3) -> Matrix:
    while True:
        M = random_matrix(F, rng, n, n, bound)
        if is_invertible(F, M):
            return M


def gaussian_binomial(n: int, k: int, q: int) -> int:
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def subspace_count(n: int, q: int) -> int:
    return sum(gaussian_binomial(n, k, q) for k in range(n + 1))


@functools.lru_cache(maxsize=None)
def subspaces_of_dim(p: int, n: int, k: int) -> tuple[Matrix, ...]:
    """All ``k``-dimensional subspaces of ``F_p^n`` as RREF bases.

    Ordered lexicographically by pivot columns, then by the free entries.
    """
    out = []
    for piv in itertools.combinations(range(n), k):
        slots = [(i, c) for i, pc in enumerate(piv) for c in range(pc + 1, n) if c not in piv]
        for vals in itertools.product(range(p), repeat=len(slots)):
            rows = [[0] * n for _ in range(k)]
            for i, pc in enumerate(piv):
                rows[i][pc] = 1
            for (i, c), v in zip(slots, vals):
                rows[i][c] = v
            out.append(tuple(tuple(r) for r in rows))
    return tuple(out)


@functools.lru_cache(maxsize=None)
def all_subspaces(p: int, n: int) -> tuple[Matrix, ...]:
    return tuple(S for k in range(n + 1) for S in subspaces_of_dim(p, n, k))


def subspaces_containing(F: PrimeField, U: Matrix, n: int) -> list[Matrix]:
    """All subspaces of ``F_p^n`` containing the row span of the RREF basis ``U``."""
    u = len(U)
    if u == 0:
        return list(all_subspaces(F.p, n))
    piv = [next(c for c, x in enumerate(row) if x) for row in U]
    free = [c for c in range(n) if c not in piv]
    out = []
    for S in all_subspaces(F.p, n - u):
        lifted = []
        for row in S:
            v = [0] * n
            for c, x in zip(free, row):
                v[c] = x
            lifted.append(tuple(v))
        W, _ = rref(F, tuple(U) + tuple(lifted), n)
        out.append(W)
    out.sort(key=_subspace_key)
    return out


def _subspace_key(W: Matrix):
    piv = tuple(next(c for c, x in enumerate(row) if x) for row in W)
    return (piv, W)


def complement_coordinates(F, W: Matrix, n: int) -> tuple[tuple[int, ...], Matrix]:
    """Non-pivot columns of ``W`` and the quotient projection ``F^n -> F^n / W``.

    The projection sends ``x`` to the non-pivot coordinates of ``x`` reduced by ``W``.
    """
    piv = [next(c for c, x in enumerate(row) if x) for row in W]
    free = tuple(c for c in range(n) if c not in piv)
    proj = []
    for j in range(n):
        e = [F.zero] * n
        e[j] = F.one
        for row, pc in zip(W, piv):
            f = e[pc]
            if f != 0:
                e = [_reduce(F, x - f * y) for x, y in zip(e, row)]
        proj.append(tuple(e[c] for c in free))
    # proj[j] is the image of the j-th basis vector; as a matrix act on columns
    P = tuple(tuple(proj[j][i] for j in range(n)) for i in range(len(free)))
    return free, P
