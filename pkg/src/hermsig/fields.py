"""Exact arithmetic in Q and real quadratic fields Q(sqrt d).

All sign decisions happen here. Real closures are never built: the sign of
``a + b*sqrt(d)`` under an embedding is decided by comparing ``a**2`` with
``d*b**2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from numbers import Rational as _RationalABC

from gmpy2 import mpq
from sympy import factorint

from . import _linalg

__all__ = [
    "BaseField",
    "FieldElement",
    "Ordering",
    "QQ",
    "congruence_diagonalize",
    "is_square",
    "orderings",
    "rational_sqrt",
    "sign_at",
    "symmetric_signature",
]


def _is_squarefree(d: int) -> bool:
    return all(e == 1 for e in factorint(d).values())


@dataclass(frozen=True)
class BaseField:
    """Q (``d is None``) or the real quadratic field Q(sqrt d)."""

    d: int | None = None

    def __post_init__(self):
        if self.d is not None:
            if not isinstance(self.d, int) or self.d <= 1 or not _is_squarefree(self.d):
                raise ValueError(f"d must be a square-free integer > 1, got {self.d!r}")

    @property
    def kind(self) -> str:
        return "Rationals" if self.d is None else "RealQuadratic"

    @property
    def degree(self) -> int:
        return 1 if self.d is None else 2

    def __call__(self, a=0, b=0) -> "FieldElement":
        if isinstance(a, FieldElement):
            if b:
                raise TypeError("cannot combine a FieldElement with a second coordinate")
            if a.b and a.d != self.d:
                raise ValueError(f"{a!r} does not lie in {self}")
            return FieldElement(a.a, a.b, self.d)
        if b and self.d is None:
            raise ValueError("Q has no sqrt(d) coordinate")
        return FieldElement(a, b, self.d)

    @property
    def sqrt_d(self) -> "FieldElement":
        if self.d is None:
            raise ValueError("Q has no sqrt(d)")
        return FieldElement(0, 1, self.d)

    def orderings(self) -> tuple["Ordering", ...]:
        return tuple(Ordering(i, self) for i in range(self.degree))

    def __str__(self):
        return "Q" if self.d is None else f"Q(sqrt{self.d})"


QQ = BaseField()


_MPQ = type(mpq(0))
_FZERO = mpq(0)
_FONE = mpq(1)
RATIONAL_TYPES = (int, _MPQ, Fraction)


def _to_mpq(x):
    if isinstance(x, (_MPQ, int, str)):
        return mpq(x)
    if isinstance(x, _RationalABC):
        return mpq(int(x.numerator), int(x.denominator))
    return mpq(x)


class FieldElement:
    """``a + b*sqrt(d)`` with rational ``a, b``; ``d is None`` means Q.

    Coordinates are stored as ``gmpy2.mpq`` (a ``numbers.Rational`` that
    compares and hashes like ``Fraction``).

    Elements of Q may be combined with elements of any Q(sqrt d); mixing two
    different quadratic fields raises ``ValueError``. Instances are treated
    as immutable.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a=0, b=0, d=None):
        self.a = a if type(a) is _MPQ else _to_mpq(a)
        self.b = b if type(b) is _MPQ else _to_mpq(b)
        if self.b and d is None:
            raise ValueError("nonzero sqrt coordinate requires d")
        self.d = d

    @classmethod
    def _make(cls, a, b, d):
        obj = object.__new__(cls)
        obj.a = a
        obj.b = b
        obj.d = d
        return obj

    @staticmethod
    def _coerce(x):
        if isinstance(x, FieldElement):
            return x
        if isinstance(x, RATIONAL_TYPES) or isinstance(x, _RationalABC):
            return FieldElement._make(_to_mpq(x), _FZERO, None)
        return None

    def _join(self, other):
        if self.d is None:
            return other.d
        if other.d is None or other.d == self.d:
            return self.d
        raise ValueError(f"cannot mix Q(sqrt{self.d}) and Q(sqrt{other.d})")

    @property
    def field(self) -> BaseField:
        return BaseField(self.d)

    def is_rational(self) -> bool:
        return not self.b

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o.a and not o.b and (o.d is None or o.d == self.d):
            return self
        return FieldElement._make(self.a + o.a, self.b + o.b, self._join(o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement._make(self.a - o.a, self.b - o.b, self._join(o))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return FieldElement._make(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = self._join(o)
        if not self.b and not o.b:
            if not self.a or not o.a:
                return FieldElement._make(_FZERO, _FZERO, d)
            return FieldElement._make(self.a * o.a, _FZERO, d)
        return FieldElement._make(
            self.a * o.a + d * self.b * o.b, self.a * o.b + self.b * o.a, d
        )

    __rmul__ = __mul__

    def conj(self):
        """Galois conjugate ``a - b*sqrt(d)``."""
        return FieldElement._make(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        if not self.b:
            return self.a * self.a
        return self.a * self.a - self.d * self.b * self.b

    def inverse(self):
        if not self:
            raise ZeroDivisionError("inverse of zero")
        if not self.b:
            return FieldElement._make(1 / self.a, _FZERO, self.d)
        n = self.norm()
        return FieldElement._make(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = FieldElement._make(_FONE, _FZERO, self.d)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.a != o.a or self.b != o.b:
            return False
        return not self.b or self.d == o.d

    def __hash__(self):
        if not self.b:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __repr__(self):
        if not self.b:
            return f"FieldElement({self.a})"
        return f"FieldElement({self.a}, {self.b}, d={self.d})"

    def __str__(self):
        if not self.b:
            return str(self.a)
        if not self.a:
            return f"{self.b}*sqrt{self.d}"
        sign = "+" if self.b > 0 else "-"
        return f"{self.a} {sign} {abs(self.b)}*sqrt{self.d}"


@dataclass(frozen=True)
class Ordering:
    """Real embedding of the base field: ``index`` 0 sends sqrt d to +sqrt d."""

    index: int
    field: BaseField = QQ

    def __post_init__(self):
        if self.index not in range(self.field.degree):
            raise ValueError(f"{self.field} has no ordering with index {self.index}")

    def __str__(self):
        return f"P{self.index}"


def orderings(F: BaseField) -> tuple[Ordering, ...]:
    return F.orderings()


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def sign_at(x, P: Ordering) -> int:
    """Exact sign of x under the embedding P."""
    x = FieldElement._coerce(x)
    sa = _sign(x.a)
    b = -x.b if P.index == 1 else x.b
    sb = _sign(b)
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    # opposite signs: compare a^2 with d*b^2
    lhs = x.a * x.a
    rhs = x.d * b * b
    if lhs > rhs:
        return sa
    if lhs < rhs:
        return sb
    return 0


def rational_sqrt(q) -> Fraction | None:
    """Square root of a rational, or None if it is not a rational square."""
    q = Fraction(q)
    if q < 0:
        return None
    n, m = q.numerator, q.denominator
    rn, rm = isqrt(n), isqrt(m)
    if rn * rn == n and rm * rm == m:
        return Fraction(rn, rm)
    return None


def is_square(x) -> bool:
    """Whether x is a square in its field (Q when ``x.d is None``)."""
    x = FieldElement._coerce(x)
    if not x:
        return True
    if x.d is None:
        return rational_sqrt(x.a) is not None
    if not x.b:
        # (p + q sqrt d)^2 rational forces p = 0 or q = 0
        return rational_sqrt(x.a) is not None or rational_sqrt(x.a / x.d) is not None
    r = rational_sqrt(x.norm())
    if r is None:
        return False
    for p2 in ((x.a + r) / 2, (x.a - r) / 2):
        p = rational_sqrt(p2)
        if p:
            q = x.b / (2 * p)
            if p * p + x.d * q * q == x.a:
                return True
    return False


def _to_field_matrix(M):
    if hasattr(M, "shape"):
        out = _linalg.apply(FieldElement._coerce, M)
    else:
        out = _linalg.as_matrix([[FieldElement._coerce(x) for x in row] for row in M])
    if any(x is None for x in out.flat):
        raise TypeError("matrix entries must be rationals or FieldElements")
    return out


_ONE = FieldElement(1)
_ZERO = FieldElement(0)


def congruence_diagonalize(M):
    """Symmetric congruence diagonalization ``G^t M G = diag(entries, 0...)``.

    Returns ``(G, diagonal)`` where ``diagonal`` lists all n diagonal entries
    (nonzero ones first).
    """
    M = _to_field_matrix(M)
    n = M.shape[0]
    if M.shape != (n, n) or not _linalg.equal(M, M.T):
        raise ValueError("symmetric matrix expected")
    G, entries, zeros = _linalg.hermitian_diagonalize(M, lambda x: x, [_ONE], _ONE, _ZERO)
    return G, entries + [_ZERO] * zeros


def symmetric_signature(M, P: Ordering) -> int:
    """Sylvester signature of a symmetric matrix under the embedding P."""
    _, diag = congruence_diagonalize(M)
    return sum(sign_at(x, P) for x in diag)
