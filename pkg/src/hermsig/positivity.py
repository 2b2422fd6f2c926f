"""Involution trace forms, positivity of involutions and the X-sigma tests."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import isqrt

import numpy as np

from . import _linalg
from .algebras import AlgebraWithInvolution, CanonicalTheta, make_algebra
from .errors import ContractViolation, EmptyXSigma, NotAPerfectSquare, NotSymmetric
from .fields import Ordering, congruence_diagonalize, sign_at
from .forms import HermitianForm, diagonalize
from .morita import to_division_level
from .signatures import ReferenceTuple, is_maximal, x_tilde

__all__ = [
    "AuditReport",
    "PSVerdict",
    "TraceForm",
    "choose_positive_theta",
    "involution_signature",
    "is_nd_at",
    "is_pd_at",
    "is_psd_at",
    "maximality_trace_audit",
    "ps_prime_check",
    "trace_form",
    "x_sigma",
]


@dataclass
class TraceForm:
    """Gram matrix of (x, y) -> Trd(sigma(x) u y) on the fixed F-basis of A.

    For unitary algebras ``gram`` holds the F-symmetric transfer form
    ``Tr_{K/F}`` on the 2l^2-element F-basis, and ``hermitian_gram`` the
    K-valued hermitian matrix on the matrix-unit K-basis.
    """

    algebra: AlgebraWithInvolution
    u: np.ndarray
    gram: np.ndarray
    hermitian_gram: np.ndarray | None = None

    @property
    def second_kind(self) -> bool:
        return self.hermitian_gram is not None

    def diagonal(self):
        if not hasattr(self, "_diagonal"):
            self._diagonal = congruence_diagonalize(self.gram)[1]
        return self._diagonal

    def signature(self, P: Ordering) -> int:
        s = sum(sign_at(x, P) for x in self.diagonal())
        if self.second_kind:
            if s % 2:
                raise ContractViolation("transfer form signature must be even")
            return s // 2
        return s


def trace_form(A: AlgebraWithInvolution, u=1) -> TraceForm:
    u = A.check_element(A.element(u))
    if not A.is_symmetric(u):
        raise NotSymmetric("u must be sigma-symmetric")
    ell = A.ell
    dbasis = A.division.basis
    values = []
    for E in A.basis:
        # Trd(Y E_pq beta) only sees the (q, p) entry of Y
        Y = A.sigma(E) @ u
        values.append([
            (Y[q, p] * beta).trace()
            for p in range(ell) for q in range(ell) for beta in dbasis
        ])
    if A.first_kind:
        return TraceForm(A, u, _linalg.as_matrix(values))
    gram = _linalg.as_matrix([[2 * v.c[0] for v in row] for row in values])
    # K-basis: the matrix units with entry 1 sit at even positions of the F-basis
    k_idx = range(0, len(values), 2)
    herm = _linalg.as_matrix([[values[r][s] for s in k_idx] for r in k_idx])
    return TraceForm(A, u, gram, herm)


def is_psd_at(T: TraceForm, P: Ordering) -> bool:
    return all(sign_at(x, P) >= 0 for x in T.diagonal())


def is_pd_at(T: TraceForm, P: Ordering) -> bool:
    return all(sign_at(x, P) > 0 for x in T.diagonal())


def is_nd_at(T: TraceForm, P: Ordering) -> bool:
    return all(sign_at(x, P) < 0 for x in T.diagonal())


@lru_cache(maxsize=256)
def _unit_trace_form(A: AlgebraWithInvolution) -> TraceForm:
    return trace_form(A, 1)


def involution_signature(A: AlgebraWithInvolution, P: Ordering) -> int:
    """sqrt of the signature of T_(A, sigma) at P."""
    s = _unit_trace_form(A).signature(P)
    r = isqrt(s) if s >= 0 else -1
    if r < 0 or r * r != s:
        raise NotAPerfectSquare(f"trace form signature {s} at {P} is not a perfect square")
    return r


def x_sigma(A: AlgebraWithInvolution) -> frozenset:
    """Orderings where sigma is positive: the Harrison set of the diagonal of T_(A, sigma)."""
    diag = _unit_trace_form(A).diagonal()
    members = frozenset(
        P for P in A.field.orderings() if all(sign_at(b, P) > 0 for b in diag)
    )
    by_signature = frozenset(
        P for P in A.field.orderings() if involution_signature(A, P) == A.degree
    )
    if members != by_signature:
        raise ContractViolation("Harrison set of the trace form disagrees with sign = deg A")
    return members


@dataclass
class OrderingAudit:
    P: Ordering
    maximal: bool
    psd: bool
    agree: bool
    invertible: bool
    definite_iff_pm_maximal: bool | None = None
    refinement: bool | None = None


@dataclass
class AuditReport:
    u: np.ndarray
    x_sigma: frozenset
    orderings: list = field(default_factory=list)

    @property
    def agree(self) -> bool:
        return all(
            o.agree and o.definite_iff_pm_maximal is not False and o.refinement is not False
            for o in self.orderings
        )


def maximality_trace_audit(A: AlgebraWithInvolution, eta: ReferenceTuple, u) -> AuditReport:
    """Compare eta-maximality of u with semidefiniteness of T_(A, sigma, u) on X_sigma."""
    if not eta.forms or not _linalg.equal(eta.forms[0].gram, HermitianForm.one(A).gram):
        raise ValueError("reference tuple must start with <1>_sigma")
    u = A.element(u)
    xs = x_sigma(A)
    T = trace_form(A, u)
    invertible = A.is_invertible(u)
    report = AuditReport(u, xs)
    for P in sorted(xs, key=lambda P: P.index):
        maximal = is_maximal(A, eta, u, P)
        psd = is_psd_at(T, P)
        entry = OrderingAudit(P, maximal, psd, maximal == psd, invertible)
        if invertible:
            neg_max = is_maximal(A, eta, -u, P)
            pd, nd = is_pd_at(T, P), is_nd_at(T, P)
            entry.definite_iff_pm_maximal = (pd or nd) == (maximal or neg_max)
            one_max = is_maximal(A, eta, A.one, P)
            minus_one_max = is_maximal(A, eta, -A.one, P)
            checks = []
            if one_max:
                checks.append(pd == maximal)
            if minus_one_max:
                checks.append(nd == maximal)
            entry.refinement = all(checks)
        report.orderings.append(entry)
    return report


@dataclass
class PSVerdict:
    holds: bool
    x_tilde: frozenset
    x_sigma: frozenset
    witness: np.ndarray | None = None
    ordering: Ordering | None = None


def ps_prime_check(A: AlgebraWithInvolution) -> PSVerdict:
    """Decide whether every non-nil ordering is one where sigma is positive."""
    xt = x_tilde(A)
    xs = x_sigma(A)
    if xt == xs:
        return PSVerdict(True, xt, xs)
    bad = min(xt - xs, key=lambda P: P.index)
    return PSVerdict(False, xt, xs, A.one, bad)


def choose_positive_theta(A: AlgebraWithInvolution) -> CanonicalTheta:
    """Int(a_1^-1) o theta, a_1 the first diagonal entry of <1>_sigma over (D, theta)."""
    xs = x_sigma(A)
    if not xs:
        raise EmptyXSigma("sigma is positive at no ordering")
    low = to_division_level(HermitianForm.one(A))
    a1 = diagonalize(low).entries[0]
    theta = A.theta
    if theta.kind == "twisted":
        tau = CanonicalTheta.twisted(a1.inverse() * theta.s)
    else:
        # a_1 is central here, so the twist does not change theta
        tau = theta
    tau_alg = make_algebra(A.field, A.division, tau, 1, None)
    if not xs <= x_sigma(tau_alg):
        raise ContractViolation("twisted involution is not positive on X_sigma")
    return tau
