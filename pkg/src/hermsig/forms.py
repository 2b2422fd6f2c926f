"""Hermitian forms as Gram matrices, quadratic and Pfister forms over F.

A ``k``-dimensional form over ``A = M_l(D)`` is stored as a ``kl x kl``
matrix over D; the ``(i, j)`` entry of the form is the ``l x l`` block in
block-row ``i`` and block-column ``j``. This is also exactly the Gram matrix
of the collapsed form over D (row-major flattening).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import _linalg
from .algebras import AlgebraWithInvolution
from .errors import (
    AlgebraMismatch,
    DimensionMismatch,
    NotHermitian,
    NotInvertible,
    ZeroCoefficient,
)
from .fields import QQ, BaseField, FieldElement, Ordering, sign_at

__all__ = [
    "Diagonalization",
    "HarrisonSet",
    "HermitianForm",
    "QuadraticFormF",
    "diagonalize",
    "evaluate",
    "harrison",
    "nonsingular_part",
    "orth_sum",
    "pfister",
    "represents",
    "scale_by",
    "tensor",
]


def _kron_phi(A: AlgebraWithInvolution, k: int, inverse=False):
    P = A.phi_inv if inverse else A.phi
    zero = A.division.zero
    return _linalg.block_diag([P] * k, zero) if k else _linalg.zeros(0, 0, zero)


class HermitianForm:
    """An epsilon-hermitian form over (A, sigma), possibly singular.

    ``padded`` marks forms produced by :func:`nonsingular_part` whose trailing
    zero rows only pad a D-rank that is not a multiple of l; ``rank`` always
    counts the D-level rank.
    """

    def __init__(self, algebra: AlgebraWithInvolution, gram, epsilon: int = 1,
                 check: bool = True, padded: bool = False):
        ell = algebra.ell
        D = algebra.division
        if isinstance(gram, np.ndarray) and gram.ndim == 2:
            G = _linalg.apply(D.coerce, gram)
        else:
            rows = list(gram)
            G = _linalg.as_matrix([[D.coerce(x) for x in r] for r in rows]) if rows \
                else _linalg.zeros(0, 0, D.zero)
        N = G.shape[0]
        if G.shape != (N, N) or N % ell:
            raise DimensionMismatch(f"Gram matrix must be square of size a multiple of {ell}")
        if epsilon not in (1, -1):
            raise ValueError("epsilon must be +1 or -1")
        self.algebra = algebra
        self.gram = G
        self.epsilon = epsilon
        self.padded = padded
        G.flags.writeable = False
        if check and not self._is_hermitian():
            raise NotHermitian("Gram matrix is not epsilon-hermitian for sigma")

    @classmethod
    def diagonal(cls, A: AlgebraWithInvolution, entries, epsilon: int = 1, check: bool = True):
        """<u_1, ..., u_k>_sigma from elements of A."""
        blocks = [A.element(u) for u in entries]
        G = _linalg.block_diag(blocks, A.division.zero) if blocks \
            else _linalg.zeros(0, 0, A.division.zero)
        return cls(A, G, epsilon, check=check)

    @classmethod
    def one(cls, A: AlgebraWithInvolution):
        """<1>_sigma."""
        return cls(A, A.one, 1, check=False)

    @classmethod
    def from_blocks(cls, A: AlgebraWithInvolution, blocks, epsilon: int = 1):
        """Build from a k x k nested list of A-elements."""
        k = len(blocks)
        ell = A.ell
        G = _linalg.zeros(k * ell, k * ell, A.division.zero)
        for i, row in enumerate(blocks):
            if len(row) != k:
                raise DimensionMismatch("block Gram matrix must be square")
            for j, x in enumerate(row):
                G[i * ell:(i + 1) * ell, j * ell:(j + 1) * ell] = A.element(x)
        return cls(A, G, epsilon)

    def _is_hermitian(self) -> bool:
        A = self.algebra
        k = self.dim
        target = self.gram if self.epsilon == 1 else -self.gram
        if A.phi_is_identity:
            return _linalg.equal(A.theta_t(self.gram), target)
        lhs = _kron_phi(A, k) @ A.theta_t(self.gram) @ _kron_phi(A, k, inverse=True) if k \
            else self.gram
        return _linalg.equal(lhs, target)

    @property
    def dim(self) -> int:
        return self.gram.shape[0] // self.algebra.ell

    def block(self, i: int, j: int):
        ell = self.algebra.ell
        return self.gram[i * ell:(i + 1) * ell, j * ell:(j + 1) * ell].copy()

    @cached_property
    def rank(self) -> int:
        """Rank of the collapsed form over D."""
        from .morita import to_division_level

        if not self.dim:
            return 0
        d = diagonalize(to_division_level(self))
        return d.rank

    def is_nonsingular(self) -> bool:
        if not self.dim:
            return True
        try:
            _linalg.inverse(self.gram, self.algebra.division.one, self.algebra.division.zero)
        except NotInvertible:
            return False
        return True

    def __eq__(self, other):
        if not isinstance(other, HermitianForm):
            return NotImplemented
        return (
            self.algebra == other.algebra
            and self.epsilon == other.epsilon
            and _linalg.equal(self.gram, other.gram)
        )

    __hash__ = None

    def __repr__(self):
        rows = [[str(x) for x in r] for r in self.gram]
        return f"HermitianForm(dim={self.dim}, eps={self.epsilon}, gram={rows})"


@dataclass
class Diagonalization:
    """Result of diagonalizing a division-level form.

    ``theta(G)^t H G`` is block diagonal: the 1x1 ``entries`` (or, for
    alternating forms over F, 2x2 skew ``blocks``) followed by ``zeros``
    zero rows.
    """

    G: np.ndarray
    entries: list
    zeros: int
    epsilon: int = 1
    blocks: list = field(default_factory=list)

    @property
    def rank(self) -> int:
        return len(self.entries) + 2 * len(self.blocks)

    def diagonal_matrix(self, zero):
        parts = [_linalg.as_matrix([[u]]) for u in self.entries] + list(self.blocks)
        parts.append(_linalg.zeros(self.zeros, self.zeros, zero))
        return _linalg.block_diag(parts, zero)


def diagonalize(h: HermitianForm) -> Diagonalization:
    """Congruence-diagonalize a form over a division-level algebra (D, theta).

    Forms over a general (M_l(D), sigma) are first carried down to (D, theta)
    by scaling and collapsing.
    """
    from .morita import to_division_level

    A = h.algebra
    if A.ell != 1 or A.phi[0, 0] != A.division.one:
        h = to_division_level(h)
        A = h.algebra
    D = A.division
    theta = A.theta
    H = h.gram
    if not h._is_hermitian():
        raise NotHermitian("form is not epsilon-hermitian")
    if h.epsilon == -1 and D.kind == "split":
        G, nblocks, zeros = _linalg.skew_diagonalize(H, D.one, D.zero)
        J = _linalg.as_matrix([[D.zero, D.one], [-D.one, D.zero]])
        return Diagonalization(G, [], zeros, -1, [J.copy() for _ in range(nblocks)])
    G, entries, zeros = _linalg.hermitian_diagonalize(
        H, theta, D.basis, D.one, D.zero, eps=h.epsilon
    )
    return Diagonalization(G, entries, zeros, h.epsilon)


def nonsingular_part(h: HermitianForm) -> HermitianForm:
    """h^ns: diagonalize at the division level, drop zeros, lift back.

    When the D-rank r is not a multiple of l the lifted Gram matrix is padded
    with zero rows to the next multiple (flagged by ``padded``).
    """
    from .morita import lift, to_division_level

    A = h.algebra
    low = to_division_level(h)
    d = diagonalize(low)
    Dlevel = low.algebra
    zero = A.division.zero
    parts = [_linalg.as_matrix([[u]]) for u in d.entries] + list(d.blocks)
    r = d.rank
    pad = (-r) % A.ell
    if pad:
        parts.append(_linalg.zeros(pad, pad, zero))
    G = _linalg.block_diag(parts, zero) if parts else _linalg.zeros(0, 0, zero)
    phi = HermitianForm(Dlevel, G, low.epsilon, check=False)
    out = lift(phi, A)
    out.padded = bool(pad)
    out.__dict__["rank"] = r
    return out


def _same_algebra(h1: HermitianForm, h2: HermitianForm):
    if h1.algebra != h2.algebra or h1.epsilon != h2.epsilon:
        raise AlgebraMismatch("forms live over different algebras or signs")


def orth_sum(h1: HermitianForm, h2: HermitianForm) -> HermitianForm:
    _same_algebra(h1, h2)
    G = _linalg.block_diag([h1.gram, h2.gram], h1.algebra.division.zero)
    return HermitianForm(h1.algebra, G, h1.epsilon, check=False)


def scale_by(c, h: HermitianForm) -> HermitianForm:
    c = h.algebra.field(c)
    if not c:
        raise ZeroCoefficient("scaling factor must be nonzero")
    return HermitianForm(h.algebra, _linalg.apply(lambda x: x * c, h.gram), h.epsilon, check=False)


@dataclass(frozen=True)
class QuadraticFormF:
    """Diagonal quadratic form <c_1, ..., c_m> over F."""

    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(FieldElement._coerce(c) or c for c in self.coeffs))

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def gram(self):
        zero = FieldElement(0)
        M = _linalg.zeros(self.dim, self.dim, zero)
        for i, c in enumerate(self.coeffs):
            M[i, i] = c
        return M

    def signature(self, P: Ordering) -> int:
        return sum(sign_at(c, P) for c in self.coeffs)

    def __mul__(self, other: "QuadraticFormF") -> "QuadraticFormF":
        return QuadraticFormF(tuple(a * b for a in self.coeffs for b in other.coeffs))

    def __add__(self, other: "QuadraticFormF") -> "QuadraticFormF":
        return QuadraticFormF(self.coeffs + other.coeffs)

    def __str__(self):
        return "<" + ", ".join(str(c) for c in self.coeffs) + ">"


def pfister(*bs) -> QuadraticFormF:
    """<<b_1, ..., b_t>>, entries b^e ordered by e in {0,1}^t lexicographically."""
    bs = [FieldElement._coerce(b) for b in bs]
    if any(not b for b in bs):
        raise ZeroCoefficient("Pfister form slots must be nonzero")
    out = []
    for e in itertools.product((0, 1), repeat=len(bs)):
        v = FieldElement(1)
        for b, bit in zip(bs, e):
            if bit:
                v = v * b
        out.append(v)
    return QuadraticFormF(tuple(out))


@dataclass(frozen=True)
class HarrisonSet:
    generators: tuple
    members: frozenset

    def __contains__(self, P):
        return P in self.members

    def __iter__(self):
        return iter(sorted(self.members, key=lambda P: P.index))

    def __len__(self):
        return len(self.members)


def _infer_field(elements, F):
    if F is not None:
        return F
    ds = {e.d for e in elements if e.d is not None}
    if len(ds) > 1:
        raise ValueError("elements from different quadratic fields")
    return BaseField(ds.pop()) if ds else QQ


def harrison(*bs, field: BaseField | None = None) -> HarrisonSet:
    """H(b_1, ..., b_t) = orderings where every b_i is positive."""
    bs = tuple(FieldElement._coerce(b) for b in bs)
    if any(not b for b in bs):
        raise ZeroCoefficient("Harrison set generators must be nonzero")
    F = _infer_field(bs, field)
    members = frozenset(P for P in F.orderings() if all(sign_at(b, P) > 0 for b in bs))
    return HarrisonSet(bs, members)


def tensor(q: QuadraticFormF, h: HermitianForm) -> HermitianForm:
    """q (x) h for a diagonal quadratic form q over F."""
    A = h.algebra
    zero = A.division.zero
    parts = []
    for c in q.coeffs:
        c = A.field(c)
        parts.append(_linalg.apply(lambda x, c=c: x * c, h.gram))
    G = _linalg.block_diag(parts, zero) if parts else _linalg.zeros(0, 0, zero)
    return HermitianForm(A, G, h.epsilon, check=False)


def _stack(h: HermitianForm, x):
    """Stack a vector of dim(h) elements of A into a (k*l) x l matrix."""
    A = h.algebra
    if isinstance(x, np.ndarray) and x.shape == (h.dim * A.ell, A.ell):
        return x
    xs = list(x)
    if len(xs) != h.dim:
        raise DimensionMismatch(f"vector must have {h.dim} entries")
    if not xs:
        return _linalg.zeros(0, A.ell, A.division.zero)
    return np.concatenate([A.element(v) for v in xs], axis=0)


def bilinear(h: HermitianForm, x, y):
    """h(x, y) = sum_ij sigma(x_i) H_ij y_j as an element of A."""
    A = h.algebra
    X, Y = _stack(h, x), _stack(h, y)
    zero = A.division.zero
    if not h.dim:
        return A.zero
    inner = _kron_phi(A, h.dim, inverse=True) @ h.gram @ Y
    return A.phi @ _linalg.matmul(A.theta_t(X), inner, zero)


def evaluate(h: HermitianForm, x):
    """h(x, x); x is a sequence of dim(h) elements of A."""
    return bilinear(h, x, x)


def represents(h: HermitianForm, u, x) -> bool:
    return _linalg.equal(evaluate(h, x), h.algebra.element(u))
