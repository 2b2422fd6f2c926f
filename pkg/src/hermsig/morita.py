"""Carrying forms between (M_l(D), ad_Phi), (M_l(D), theta^t) and (D, theta).

Block convention: a k-dimensional form over M_l(D) with Gram blocks
``H_ij`` corresponds to the kl-dimensional form over D whose Gram matrix is
the row-major flattening of the blocks (the same array).
"""

from __future__ import annotations

from dataclasses import dataclass

from . import _linalg
from .algebras import AlgebraWithInvolution, make_algebra
from .errors import AlgebraMismatch, IndivisibleDimension, NotInvertible, NotSymmetric
from .forms import HermitianForm, _kron_phi

__all__ = [
    "MoritaContext",
    "adjoint_involution",
    "collapse",
    "lift",
    "scale",
    "to_division_level",
]


def _is_untwisted(A: AlgebraWithInvolution) -> bool:
    return A.phi_is_identity


def _times_phi(A, k, G, inverse=False):
    """(I_k (x) Phi^{+-1}) G, skipping the product when Phi = I."""
    if A.phi_is_identity:
        return G.copy()
    return _linalg.matmul(_kron_phi(A, k, inverse), G, A.division.zero)


def scale(h: HermitianForm) -> HermitianForm:
    """(M, h) -> (M, Phi^-1 h): a form for theta^t, sign multiplied by eps(A)."""
    A = h.algebra
    k = h.dim
    G = _times_phi(A, k, h.gram, inverse=True)
    return HermitianForm(A.untwisted, G, h.epsilon * A.epsilon, check=False)


def unscale(h: HermitianForm, A: AlgebraWithInvolution) -> HermitianForm:
    """Inverse of :func:`scale` into the algebra A."""
    if h.algebra != A.untwisted:
        raise AlgebraMismatch("form does not live over (M_l(D), theta^t) of A")
    G = _times_phi(A, h.dim, h.gram)
    return HermitianForm(A, G, h.epsilon * A.epsilon, check=False)


def collapse(h: HermitianForm) -> HermitianForm:
    """Reinterpret a k-dim form over (M_l(D), theta^t) as a kl-dim form over (D, theta)."""
    A = h.algebra
    if not _is_untwisted(A):
        raise AlgebraMismatch("collapse expects a form over (M_l(D), theta^t); scale first")
    return HermitianForm(A.division_level, h.gram, h.epsilon, check=False)


def to_division_level(h: HermitianForm) -> HermitianForm:
    return collapse(scale(h))


def lift(phi: HermitianForm, A: AlgebraWithInvolution) -> HermitianForm:
    """Preimage of a division-level form under scale-then-collapse."""
    low = phi.algebra
    if low != A.division_level:
        raise AlgebraMismatch("form must live over (D, theta) of the target algebra")
    N = phi.gram.shape[0]
    if N % A.ell:
        raise IndivisibleDimension(f"dimension {N} is not a multiple of l = {A.ell}")
    k = N // A.ell
    G = _times_phi(A, k, phi.gram)
    return HermitianForm(A, G, phi.epsilon * A.epsilon, check=False)


@dataclass(frozen=True)
class MoritaContext:
    """The chain (A, sigma) -> (M_l(D), theta^t) -> (D, theta) for a fixed A."""

    algebra: AlgebraWithInvolution

    @property
    def division_level(self) -> AlgebraWithInvolution:
        return self.algebra.division_level

    def scale(self, h):
        self._check(h)
        return scale(h)

    def collapse(self, h):
        return collapse(h)

    def down(self, h):
        self._check(h)
        return to_division_level(h)

    def lift(self, phi):
        return lift(phi, self.algebra)

    def _check(self, h):
        if h.algebra != self.algebra:
            raise AlgebraMismatch("form does not live over this algebra")


def adjoint_involution(A: AlgebraWithInvolution, u) -> AlgebraWithInvolution:
    """(A, Int(u^-1) o sigma) in canonical shape, i.e. with Phi' = u^-1 Phi."""
    u = A.check_element(A.element(u))
    if not A.is_symmetric(u):
        raise NotSymmetric("u must be sigma-symmetric")
    try:
        u_inv = A.inverse(u)
    except NotInvertible:
        raise NotInvertible("u must be invertible") from None
    return make_algebra(A.field, A.division, A.theta, A.ell, u_inv @ A.phi)
