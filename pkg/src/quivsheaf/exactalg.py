"""Exact rational polynomials and the orderings used to compare stabilities.

Polynomials carry rational coefficients, constant term first.  Two
orderings matter: the lexicographic order (compare from the top
coefficient down) and the Gieseker preorder on polynomials with positive
leading coefficient, where ``p <= q`` exactly when ``p*q' - p'*q`` is
lexicographically nonpositive.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Fraction
Scalar = Union[int, Fraction]

NEG_INF = float("-inf")


class ExactAlgError(ValueError):
    pass


class NonPositiveLeading(ExactAlgError):
    pass


class ZeroInput(ExactAlgError):
    pass


def rat(x) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot read {x!r} as an exact rational")


def format_rational(x: Scalar) -> str:
    x = rat(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


class Order(enum.Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


class GComparison(enum.Enum):
    STRICTLY_LESS = "StrictlyLess"
    EQUIVALENT = "Equivalent"
    STRICTLY_GREATER = "StrictlyGreater"


class RatPoly:
    """Immutable univariate polynomial in ``t`` over the rationals."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable = ()):
        c = [rat(a) for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self._c = tuple(c)

    @classmethod
    def const(cls, a) -> RatPoly:
        return cls((a,))

    @classmethod
    def t(cls) -> RatPoly:
        return cls((0, 1))

    @classmethod
    def linear(cls, slope, intercept) -> RatPoly:
        """The polynomial ``slope*t + intercept``."""
        return cls((intercept, slope))

    @classmethod
    def coerce(cls, x) -> RatPoly:
        if isinstance(x, RatPoly):
            return x
        return cls((x,))

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._c

    @property
    def degree(self):
        return len(self._c) - 1 if self._c else NEG_INF

    def is_zero(self) -> bool:
        return not self._c

    def coeff(self, i: int) -> Fraction:
        return self._c[i] if 0 <= i < len(self._c) else Fraction(0)

    @property
    def leading(self) -> Fraction:
        return self._c[-1] if self._c else Fraction(0)

    def __call__(self, x):
        acc = Fraction(0)
        for a in reversed(self._c):
            acc = acc * x + a
        return acc

    def derivative(self) -> RatPoly:
        return RatPoly(i * a for i, a in enumerate(self._c) if i)

    def shift(self, k) -> RatPoly:
        """Return ``p(t + k)``."""
        out = RatPoly()
        base = RatPoly((k, 1))
        for a in reversed(self._c):
            out = out * base + RatPoly.const(a)
        return out

    def sign(self) -> int:
        """Sign of the polynomial in the lexicographic order."""
        if not self._c:
            return 0
        return 1 if self._c[-1] > 0 else -1

    def __add__(self, other):
        other = RatPoly.coerce(other)
        n = max(len(self._c), len(other._c))
        return RatPoly(self.coeff(i) + other.coeff(i) for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return RatPoly(-a for a in self._c)

    def __sub__(self, other):
        return self + (-RatPoly.coerce(other))

    def __rsub__(self, other):
        return RatPoly.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, RatPoly):
            s = rat(other)
            return RatPoly(a * s for a in self._c)
        if not self._c or not other._c:
            return RatPoly()
        out = [Fraction(0)] * (len(self._c) + len(other._c) - 1)
        for i, a in enumerate(self._c):
            if a:
                for j, b in enumerate(other._c):
                    out[i + j] += a * b
        return RatPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, RatPoly):
            return self._c == other._c
        if isinstance(other, (int, Fraction)):
            return self._c == RatPoly.const(other)._c
        return NotImplemented

    def __hash__(self):
        return hash(self._c)

    def __repr__(self):
        return f"RatPoly({[format_rational(a) for a in self._c]})"

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for i in range(len(self._c) - 1, -1, -1):
            a = self._c[i]
            if a == 0:
                continue
            mag = abs(a)
            if i == 0:
                body = format_rational(mag)
            else:
                var = "t" if i == 1 else f"t^{i}"
                body = var if mag == 1 else f"{format_rational(mag)}{var}"
            sign = "-" if a < 0 else "+"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def to_json(self) -> list[str]:
        return [format_rational(a) for a in self._c]

    @classmethod
    def from_json(cls, data: Sequence) -> RatPoly:
        return cls(rat(a) for a in data)


def lex_compare(p: RatPoly, q: RatPoly) -> Order:
    s = (RatPoly.coerce(p) - RatPoly.coerce(q)).sign()
    return Order(s)


def sigma_p(p: RatPoly, q: RatPoly) -> RatPoly:
    """The alternating form ``p*q' - p'*q``."""
    p, q = RatPoly.coerce(p), RatPoly.coerce(q)
    return p * q.derivative() - p.derivative() * q


def is_proportional(p: RatPoly, q: RatPoly) -> bool:
    p, q = RatPoly.coerce(p), RatPoly.coerce(q)
    if p.is_zero() or q.is_zero():
        raise ZeroInput("proportionality needs nonzero polynomials")
    if p.degree != q.degree:
        return False
    c = q.leading / p.leading
    return p * c == q


def _check_positive(p: RatPoly) -> None:
    if p.is_zero() or p.leading <= 0:
        raise NonPositiveLeading(f"{p} does not have a positive leading coefficient")


_FROM_SIGN = {
    -1: GComparison.STRICTLY_LESS,
    0: GComparison.EQUIVALENT,
    1: GComparison.STRICTLY_GREATER,
}


def _verdict_from_leq(p_leq_q: bool, q_leq_p: bool) -> GComparison:
    if p_leq_q and q_leq_p:
        return GComparison.EQUIVALENT
    return GComparison.STRICTLY_LESS if p_leq_q else GComparison.STRICTLY_GREATER


def _flip(v: GComparison) -> GComparison:
    if v is GComparison.STRICTLY_LESS:
        return GComparison.STRICTLY_GREATER
    if v is GComparison.STRICTLY_GREATER:
        return GComparison.STRICTLY_LESS
    return v


def gieseker_by_sigma(p: RatPoly, q: RatPoly) -> GComparison:
    return _FROM_SIGN[sigma_p(p, q).sign()]


def gieseker_by_normalized(p: RatPoly, q: RatPoly) -> GComparison:
    """Higher degree comes first; equal degrees compare monic normalizations."""
    if p.degree != q.degree:
        return GComparison.STRICTLY_LESS if p.degree > q.degree else GComparison.STRICTLY_GREATER
    return _FROM_SIGN[lex_compare(p * (1 / p.leading), q * (1 / q.leading)).value]


def gieseker_by_scaled(p: RatPoly, q: RatPoly) -> GComparison:
    """Compare ``b_n p`` with ``a_n q`` where ``n = deg p`` and ``deg p >= deg q``.

    The scaled comparison is only sound when ``p`` has the larger degree, so
    the other case is evaluated with the arguments swapped.
    """
    if p.degree < q.degree:
        return _flip(gieseker_by_scaled(q, p))
    n = p.degree
    a_n, b_n = p.coeff(n), q.coeff(n)
    p_leq_q = lex_compare(p * b_n, q * a_n) is not Order.GREATER
    if p.degree > q.degree:
        # distinct degrees are never proportional
        return _verdict_from_leq(p_leq_q, False)
    q_leq_p = lex_compare(q * a_n, p * b_n) is not Order.GREATER
    return _verdict_from_leq(p_leq_q, q_leq_p)


def gieseker_compare(p: RatPoly, q: RatPoly, cross_check: bool = False) -> GComparison:
    p, q = RatPoly.coerce(p), RatPoly.coerce(q)
    _check_positive(p)
    _check_positive(q)
    verdict = gieseker_by_sigma(p, q)
    if cross_check:
        others = (gieseker_by_normalized(p, q), gieseker_by_scaled(p, q))
        if any(o is not verdict for o in others):
            raise AssertionError(f"Gieseker characterizations disagree on {p}, {q}")
    return verdict
