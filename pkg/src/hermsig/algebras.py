"""Algebras with involution stored in the shape (M_l(D), Int(Phi) o theta^t).

``D`` is one of the base field itself, a quaternion division algebra
``(a, b)_F``, or a quadratic extension ``K = F(sqrt delta)`` (second kind).
Elements of ``A`` are ``l x l`` numpy object arrays of :class:`DElement`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np
from sympy import factorint

from . import _linalg
from .errors import (
    DimensionMismatch,
    IllegalEpsilon,
    InvolutionAxiomViolation,
    NotDivision,
    NotInvertible,
    SingularPhi,
)
from .fields import QQ, RATIONAL_TYPES, BaseField, FieldElement, is_square, orderings, sign_at

__all__ = [
    "AlgebraWithInvolution",
    "CanonicalTheta",
    "DElement",
    "Division",
    "apply_sigma",
    "hamilton",
    "involution_type",
    "is_symmetric",
    "make_algebra",
    "matrix_algebra",
    "quaternion_algebra",
    "reduced_trace",
    "unitary_algebra",
]

_SCALAR_TYPES = RATIONAL_TYPES + (FieldElement,)

SPLIT = "split"
QUATERNION = "quaternion"
QUADRATIC_EXT = "quadratic_ext"


def _legendre(u: int, p: int) -> int:
    r = pow(u % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else 1


def _hilbert_symbol(a: int, b: int, p: int) -> int:
    """Hilbert symbol (a, b)_p for nonzero integers; ``p = -1`` is the real place."""
    if p == -1:
        return -1 if a < 0 and b < 0 else 1
    alpha = beta = 0
    while a % p == 0:
        a //= p
        alpha += 1
    while b % p == 0:
        b //= p
        beta += 1
    if p != 2:
        sign = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
        return sign * _legendre(a, p) ** beta * _legendre(b, p) ** alpha

    def eps(x):
        return ((x - 1) // 2) % 2

    def omega(x):
        return ((x * x - 1) // 8) % 2

    e = eps(a) * eps(b) + alpha * omega(b) + beta * omega(a)
    return -1 if e % 2 else 1


def _rational_quaternion_is_division(a: Fraction, b: Fraction) -> bool:
    # a and b up to squares: num * den has the same square class as num / den
    ia, ib = a.numerator * a.denominator, b.numerator * b.denominator
    primes = {-1, 2} | set(factorint(abs(ia))) | set(factorint(abs(ib)))
    primes.discard(1)
    return any(_hilbert_symbol(ia, ib, p) == -1 for p in primes)


@dataclass(frozen=True)
class Division:
    """The division algebra D: split (D = F), quaternion, or quadratic extension."""

    kind: str
    field: BaseField = QQ
    a: FieldElement | None = None
    b: FieldElement | None = None
    delta: FieldElement | None = None

    @classmethod
    def split(cls, F: BaseField = QQ) -> "Division":
        return cls(SPLIT, F)

    @classmethod
    def quaternion(cls, F: BaseField, a, b) -> "Division":
        a, b = F(a), F(b)
        if not a or not b:
            raise NotDivision("quaternion parameters must be nonzero")
        if any(sign_at(a, P) < 0 and sign_at(b, P) < 0 for P in orderings(F)):
            pass  # ramified at a real place, hence not split
        elif F.d is None:
            if not _rational_quaternion_is_division(a.a, b.a):
                raise NotDivision(f"({a}, {b})_Q is split")
        else:
            raise NotDivision(
                f"({a}, {b}) over {F} is unramified at every real place; "
                "division cannot be certified over real quadratic fields"
            )
        return cls(QUATERNION, F, a=a, b=b)

    @classmethod
    def quadratic_ext(cls, F: BaseField, delta) -> "Division":
        delta = F(delta)
        if not delta or is_square(delta):
            raise NotDivision(f"delta = {delta} is a square in {F}")
        return cls(QUADRATIC_EXT, F, delta=delta)

    @property
    def dim(self) -> int:
        """Dimension over F."""
        return {SPLIT: 1, QUADRATIC_EXT: 2, QUATERNION: 4}[self.kind]

    @property
    def degree(self) -> int:
        """Degree over the centre."""
        return 2 if self.kind == QUATERNION else 1

    @property
    def first_kind(self) -> bool:
        return self.kind != QUADRATIC_EXT

    @cached_property
    def zero(self) -> "DElement":
        return DElement(self, (self.field(0),) * self.dim)

    @cached_property
    def one(self) -> "DElement":
        return self.scalar(1)

    def scalar(self, x) -> "DElement":
        x = self.field(x)
        return DElement(self, (x,) + (self.field(0),) * (self.dim - 1))

    def element(self, coords) -> "DElement":
        coords = tuple(self.field(c) for c in coords)
        if len(coords) != self.dim:
            raise DimensionMismatch(f"{self.kind} elements have {self.dim} coordinates")
        return DElement(self, coords)

    def coerce(self, x) -> "DElement":
        if isinstance(x, DElement):
            if x.div != self:
                raise ValueError("element of a different division algebra")
            return x
        if isinstance(x, (list, tuple)):
            return self.element(x)
        return self.scalar(x)

    @cached_property
    def basis(self) -> tuple["DElement", ...]:
        z, o = self.field(0), self.field(1)
        return tuple(
            DElement(self, tuple(o if i == j else z for j in range(self.dim)))
            for i in range(self.dim)
        )

    def is_ramified_at(self, P) -> bool:
        """Quaternion (a, b) stays division at P iff a <_P 0 and b <_P 0."""
        return (
            self.kind == QUATERNION
            and sign_at(self.a, P) < 0
            and sign_at(self.b, P) < 0
        )

    def __str__(self):
        if self.kind == SPLIT:
            return str(self.field)
        if self.kind == QUATERNION:
            return f"({self.a}, {self.b})_{self.field}"
        return f"{self.field}(sqrt({self.delta}))"


class DElement:
    """Element of a division algebra, stored by coordinates over F.

    Quaternion coordinates are ``(w, x, y, z)`` for ``w + x i + y j + z k``
    with ``i^2 = a``, ``j^2 = b``, ``k = ij``.
    """

    __slots__ = ("div", "c")

    def __init__(self, div: Division, coords):
        self.div = div
        self.c = tuple(coords)

    def _other(self, x):
        if isinstance(x, DElement):
            return x
        if isinstance(x, _SCALAR_TYPES):
            return self.div.scalar(x)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return DElement(self.div, tuple(p + q for p, q in zip(self.c, o.c)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return DElement(self.div, tuple(p - q for p, q in zip(self.c, o.c)))

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return DElement(self.div, tuple(-p for p in self.c))

    def __mul__(self, other):
        if isinstance(other, _SCALAR_TYPES):
            return DElement(self.div, tuple(p * other for p in self.c))
        if not isinstance(other, DElement):
            return NotImplemented
        div = self.div
        if div.kind == SPLIT:
            return DElement(div, (self.c[0] * other.c[0],))
        if not any(self.c) or not any(other.c):
            return div.zero
        if div.kind == QUADRATIC_EXT:
            x1, y1 = self.c
            x2, y2 = other.c
            return DElement(div, (x1 * x2 + div.delta * y1 * y2, x1 * y2 + y1 * x2))
        a, b = div.a, div.b
        w1, x1, y1, z1 = self.c
        w2, x2, y2, z2 = other.c
        return DElement(
            div,
            (
                w1 * w2 + a * x1 * x2 + b * y1 * y2 - a * b * z1 * z2,
                w1 * x2 + x1 * w2 - b * y1 * z2 + b * z1 * y2,
                w1 * y2 + y1 * w2 + a * x1 * z2 - a * z1 * x2,
                w1 * z2 + z1 * w2 + x1 * y2 - y1 * x2,
            ),
        )

    def __rmul__(self, other):
        if isinstance(other, _SCALAR_TYPES):
            return DElement(self.div, tuple(other * p for p in self.c))
        return NotImplemented

    def conj(self) -> "DElement":
        """Canonical conjugation (quaternion bar, or sqrt(delta) -> -sqrt(delta))."""
        if self.div.kind == SPLIT:
            return self
        return DElement(self.div, (self.c[0],) + tuple(-p for p in self.c[1:]))

    def norm(self) -> FieldElement:
        """Reduced norm to F (quaternions) or field norm K -> F."""
        div = self.div
        if div.kind == SPLIT:
            return self.c[0]
        if div.kind == QUADRATIC_EXT:
            x, y = self.c
            return x * x - div.delta * y * y
        w, x, y, z = self.c
        return w * w - div.a * x * x - div.b * y * y + div.a * div.b * z * z

    def inverse(self) -> "DElement":
        n = self.norm()
        if not n:
            raise ZeroDivisionError("inverse of zero")
        if self.div.kind == SPLIT:
            return DElement(self.div, (n.inverse(),))
        return self.conj() * n.inverse()

    def __truediv__(self, other):
        if isinstance(other, _SCALAR_TYPES):
            return self * FieldElement._coerce(other).inverse()
        return self * other.inverse()

    def trace(self):
        """Reduced trace to the centre: F for first-kind D, K itself otherwise."""
        if self.div.kind == SPLIT:
            return self.c[0]
        if self.div.kind == QUATERNION:
            return 2 * self.c[0]
        return self

    def is_scalar(self) -> bool:
        return not any(self.c[1:])

    def __bool__(self):
        return any(self.c)

    def __eq__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self.c == o.c and (self.div == o.div or not any(self.c))

    def __hash__(self):
        if self.is_scalar():
            return hash(self.c[0])
        return hash(self.c)

    def __repr__(self):
        if self.div.kind == SPLIT:
            return f"D({self.c[0]})"
        return "D(" + ", ".join(str(x) for x in self.c) + ")"

    def __str__(self):
        if self.div.kind == SPLIT or self.is_scalar():
            return str(self.c[0])
        names = ("", "i", "j", "k") if self.div.kind == QUATERNION else ("", "r")
        parts = []
        for x, nm in zip(self.c, names):
            if x:
                parts.append(f"({x}){nm}" if nm else f"({x})")
        return " + ".join(parts)


IDENTITY = "identity"
CONJUGATION = "conjugation"
TWISTED = "twisted"


@dataclass(frozen=True)
class CanonicalTheta:
    """Involution of D: identity, conjugation, or ``x -> s xbar s^-1``.

    The twisted form requires a nonzero pure quaternion ``s`` and gives an
    orthogonal involution.
    """

    kind: str
    s: DElement | None = None

    @classmethod
    def identity(cls):
        return cls(IDENTITY)

    @classmethod
    def conjugation(cls):
        return cls(CONJUGATION)

    @classmethod
    def twisted(cls, s: DElement):
        return cls(TWISTED, s)

    @cached_property
    def _s_inv(self):
        return self.s.inverse()

    def __call__(self, x: DElement) -> DElement:
        if self.kind == IDENTITY:
            return x
        if self.kind == CONJUGATION:
            return x.conj()
        return self.s * x.conj() * self._s_inv

    def type_on(self, D: Division) -> str:
        if D.kind == QUADRATIC_EXT:
            return "unitary"
        if D.kind == SPLIT or self.kind == TWISTED:
            return "orthogonal"
        return "symplectic"


def _check_theta(D: Division, theta: CanonicalTheta):
    allowed = {
        SPLIT: {IDENTITY},
        QUATERNION: {CONJUGATION, TWISTED},
        QUADRATIC_EXT: {CONJUGATION},
    }[D.kind]
    if theta.kind not in allowed:
        raise InvolutionAxiomViolation(f"{theta.kind} is not an involution on {D.kind} D")
    if theta.kind == TWISTED:
        s = theta.s
        if not isinstance(s, DElement) or s.div != D or not s or s.c[0]:
            raise InvolutionAxiomViolation("twisting element must be a nonzero pure quaternion")
    _check_theta_axioms(D, theta)


@lru_cache(maxsize=256)
def _check_theta_axioms(D: Division, theta: CanonicalTheta):
    for x in D.basis:
        if theta(theta(x)) != x:
            raise InvolutionAxiomViolation("theta is not of order 2")
        for y in D.basis:
            if theta(x * y) != theta(y) * theta(x):
                raise InvolutionAxiomViolation("theta is not an anti-automorphism")


class AlgebraWithInvolution:
    """(M_l(D), Int(Phi) o theta^t) with ``theta(Phi)^t = epsilon * Phi``.

    Build instances with :func:`make_algebra`, which validates the data.
    """

    def __init__(self, field, division, theta, ell, phi, phi_inv, epsilon):
        self.field = field
        self.division = division
        self.theta = theta
        self.ell = ell
        self.phi = phi
        self.phi_inv = phi_inv
        self.epsilon = epsilon
        phi.flags.writeable = False
        phi_inv.flags.writeable = False

    # identity -------------------------------------------------------------

    @cached_property
    def key(self):
        return (self.field, self.division, self.theta, self.ell, tuple(self.phi.flat))

    def __eq__(self, other):
        if not isinstance(other, AlgebraWithInvolution):
            return NotImplemented
        return self is other or self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return (
            f"AlgebraWithInvolution(M_{self.ell}({self.division}), "
            f"theta={self.theta.kind}, eps={self.epsilon}, "
            f"phi={[[str(x) for x in row] for row in self.phi]})"
        )

    # numerical invariants -------------------------------------------------

    @property
    def degree(self) -> int:
        """n = deg A = l * deg D."""
        return self.ell * self.division.degree

    @property
    def dim_F(self) -> int:
        return self.ell * self.ell * self.division.dim

    @property
    def first_kind(self) -> bool:
        return self.division.first_kind

    @property
    def involution_type(self) -> str:
        t = self.theta.type_on(self.division)
        if t == "unitary" or self.epsilon == 1:
            return t
        return "symplectic" if t == "orthogonal" else "orthogonal"

    @property
    def is_corner(self) -> bool:
        """The (F, id, -1) case where skew-symmetric Phi gives a symplectic sigma."""
        return self.epsilon == -1

    # element handling -----------------------------------------------------

    @property
    def zero(self):
        return _linalg.zeros(self.ell, self.ell, self.division.zero)

    @property
    def one(self):
        return _linalg.identity(self.ell, self.division.one, self.division.zero)

    def element(self, x):
        """Coerce nested lists / scalars / DElements to an l x l matrix over D.

        Scalars and single DElements are read as multiples of the identity.
        """
        D = self.division
        if isinstance(x, np.ndarray) and x.ndim == 2:
            if x.shape != (self.ell, self.ell):
                raise DimensionMismatch(f"expected {self.ell}x{self.ell}, got {x.shape}")
            return _linalg.apply(D.coerce, x)
        if isinstance(x, (list, tuple)) and x and isinstance(x[0], (list, tuple, np.ndarray)) \
                and len(x) == self.ell and all(len(r) == self.ell for r in x) \
                and not (self.ell == 1 and D.dim > 1 and len(x) == D.dim):
            return _linalg.as_matrix([[D.coerce(e) for e in row] for row in x])
        d = D.coerce(x)
        return _linalg.identity(self.ell, d, D.zero)

    def check_element(self, X):
        if not isinstance(X, np.ndarray) or X.shape != (self.ell, self.ell):
            raise DimensionMismatch(f"expected an {self.ell}x{self.ell} matrix over D")
        return X

    def mul(self, X, Y):
        return X @ Y

    def inverse(self, X):
        return _linalg.inverse(X, self.division.one, self.division.zero)

    def is_invertible(self, X) -> bool:
        try:
            self.inverse(X)
        except NotInvertible:
            return False
        return True

    def theta_t(self, X):
        """theta applied entrywise, then transposed."""
        return _linalg.conj_transpose(X, self.theta)

    @cached_property
    def phi_is_identity(self) -> bool:
        return _linalg.equal(self.phi, self.one)

    def sigma(self, X):
        self.check_element(X)
        if self.phi_is_identity:
            return self.theta_t(X)
        return self.phi @ self.theta_t(X) @ self.phi_inv

    def is_symmetric(self, X, eps: int = 1) -> bool:
        S = self.sigma(X)
        return _linalg.equal(S, X if eps == 1 else -X)

    def reduced_trace(self, X):
        self.check_element(X)
        out = X[0, 0].trace()
        for j in range(1, self.ell):
            out = out + X[j, j].trace()
        return out

    # F-linear structure ---------------------------------------------------

    @cached_property
    def basis(self) -> tuple:
        """F-basis: matrix units (row-major) times the D-basis."""
        out = []
        D = self.division
        for p in range(self.ell):
            for q in range(self.ell):
                for beta in D.basis:
                    E = self.zero
                    E[p, q] = beta
                    E.flags.writeable = False
                    out.append(E)
        return tuple(out)

    def coordinates(self, X) -> list:
        return [c for x in X.flat for c in x.c]

    def from_coordinates(self, coords):
        D = self.division
        k = D.dim
        it = iter(coords)
        entries = [D.element([next(it) for _ in range(k)]) for _ in range(self.ell ** 2)]
        out = np.empty((self.ell, self.ell), dtype=object)
        for idx, e in enumerate(entries):
            out[divmod(idx, self.ell)] = e
        return out

    @cached_property
    def sym_basis(self) -> tuple:
        """F-basis of Sym(A, sigma), from symmetrized basis elements.

        Each vector is normalized so its first nonzero coordinate is 1.
        """
        zero = self.field(0)
        cands = [E + self.sigma(E) for E in self.basis]
        vecs = [self.coordinates(X) for X in cands]
        chosen = _linalg.independent_subset(vecs, zero)
        out = []
        for i in chosen:
            v = vecs[i]
            lead = next(c for c in v if c)
            X = self.from_coordinates([c / lead for c in v])
            X.flags.writeable = False
            out.append(X)
        return tuple(out)

    @cached_property
    def untwisted(self) -> "AlgebraWithInvolution":
        """(M_l(D), theta^t): the target of scaling by Phi^-1."""
        return make_algebra(self.field, self.division, self.theta, self.ell, None)

    @cached_property
    def division_level(self) -> "AlgebraWithInvolution":
        """(D, theta) as a 1x1 matrix algebra."""
        return make_algebra(self.field, self.division, self.theta, 1, None)


def make_algebra(F: BaseField, D: Division, theta: CanonicalTheta, ell: int, Phi=None):
    """Validate and build (M_ell(D), Int(Phi) o theta^t); ``Phi=None`` means identity."""
    if D.field != F:
        raise ValueError("division algebra is defined over a different field")
    if not isinstance(ell, int) or ell < 1:
        raise DimensionMismatch("ell must be a positive integer")
    _check_theta(D, theta)
    if Phi is None:
        phi = _linalg.identity(ell, D.one, D.zero)
    else:
        if isinstance(Phi, np.ndarray):
            rows = Phi.tolist()
        elif ell == 1 and not isinstance(Phi, (list, tuple)):
            rows = [[Phi]]
        else:
            rows = Phi
        if len(rows) != ell or any(len(r) != ell for r in rows):
            raise DimensionMismatch(f"Phi must be {ell}x{ell}")
        phi = _linalg.as_matrix([[D.coerce(x) for x in r] for r in rows])
    try:
        phi_inv = _linalg.inverse(phi, D.one, D.zero)
    except NotInvertible:
        raise SingularPhi("Phi is not invertible") from None
    tphi = _linalg.conj_transpose(phi, theta)
    if _linalg.equal(tphi, phi):
        eps = 1
    elif _linalg.equal(tphi, -phi):
        eps = -1
    else:
        raise InvolutionAxiomViolation("theta(Phi)^t is neither Phi nor -Phi")
    if eps == -1 and not (D.kind == SPLIT and theta.kind == IDENTITY):
        raise IllegalEpsilon("epsilon = -1 is only allowed for (F, id); choose theta so that epsilon = 1")
    # sigma^2 = Int(Phi theta(Phi)^-t) = Int(eps) = id follows from the checks above
    return AlgebraWithInvolution(F, D, theta, ell, phi, phi_inv, eps)


# convenience constructors ---------------------------------------------------


def matrix_algebra(F: BaseField = QQ, ell: int = 1, Phi=None):
    """(M_ell(F), ad_Phi); Phi = None gives transposition."""
    return make_algebra(F, Division.split(F), CanonicalTheta.identity(), ell, Phi)


def quaternion_algebra(F: BaseField, a, b, ell: int = 1, Phi=None, s=None):
    """M_ell((a, b)_F) with conjugation, or the twist by pure quaternion s."""
    D = Division.quaternion(F, a, b)
    if s is None:
        theta = CanonicalTheta.conjugation()
    else:
        theta = CanonicalTheta.twisted(D.coerce(s))
    return make_algebra(F, D, theta, ell, Phi)


def hamilton(ell: int = 1, Phi=None):
    return quaternion_algebra(QQ, -1, -1, ell, Phi)


def unitary_algebra(F: BaseField, delta, ell: int = 1, Phi=None):
    """M_ell(F(sqrt delta)) with conjugate-transpose twisted by Phi."""
    D = Division.quadratic_ext(F, delta)
    return make_algebra(F, D, CanonicalTheta.conjugation(), ell, Phi)


# functional aliases ---------------------------------------------------------


def reduced_trace(A: AlgebraWithInvolution, X):
    return A.reduced_trace(X)


def involution_type(A: AlgebraWithInvolution) -> str:
    return A.involution_type


def apply_sigma(A: AlgebraWithInvolution, X):
    return A.sigma(X)


def is_symmetric(A: AlgebraWithInvolution, u) -> bool:
    return A.is_symmetric(A.check_element(u))
