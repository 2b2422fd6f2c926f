"""Ordering classification, signatures of hermitian forms and maximality.

At a non-nil ordering P the signature of a form is computed after carrying
it down to (D, theta) and diagonalizing it as <d_1, ..., d_r>: each entry
contributes the Sylvester signature of the F-quadratic form
``x -> Trd(t^-1 theta(x) d x)``, and the sum is divided by the constant c_P.
Here ``t`` is a theta-symmetric unit chosen so that ``Int(t^-1) o theta`` is
positive at P; for t = 1 this is the plain trace form of <d>.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from . import _linalg
from .algebras import AlgebraWithInvolution
from .errors import ContractViolation, NotHermitian, SearchExhausted, SingularForm
from .fields import FieldElement, Ordering, congruence_diagonalize, sign_at, symmetric_signature
from .forms import HermitianForm, diagonalize, nonsingular_part
from .morita import to_division_level

__all__ = [
    "OrderingProfile",
    "ReferenceTuple",
    "classify_ordering",
    "graded_coefficients",
    "is_maximal",
    "maximal_form",
    "positive_twist",
    "raw_signature",
    "reference_tuple",
    "signed_signature",
    "x_tilde",
]


@dataclass(frozen=True)
class OrderingProfile:
    P: Ordering
    nil: bool
    eps_P: int
    lambda_P: int
    n_P: int
    M_P: int
    m_P: int
    c_P: int


def classify_ordering(A: AlgebraWithInvolution, P: Ordering) -> OrderingProfile:
    D = A.division
    kind = A.involution_type
    if D.kind == "quadratic_ext":
        nil = sign_at(D.delta, P) > 0
        return OrderingProfile(P, nil, 1, 1, A.degree, 0 if nil else 1,
                               0 if nil else A.ell, 2)
    ramified = D.is_ramified_at(P)
    if kind == "symplectic":
        nil = not ramified
    else:
        nil = ramified
    lam = 2 if ramified else 1
    M = 0 if nil else D.degree // lam
    if D.kind == "split":
        c = 1
    else:
        c = 4 if ramified else 2
    return OrderingProfile(P, nil, -1 if nil else 1, lam, A.degree // lam, M, A.ell * M, c)


def x_tilde(A: AlgebraWithInvolution) -> frozenset:
    """Orderings that are not nil for (A, sigma)."""
    return frozenset(P for P in A.field.orderings() if not classify_ordering(A, P).nil)


def graded_coefficients(n: int, max_height: int):
    """Integer coefficient vectors in a fixed order: by height, then support size.

    The first nonzero coefficient is always positive.
    """
    for H in range(1, max_height + 1):
        values = [v for k in range(1, H + 1) for v in (k, -k)]
        for size in range(1, n + 1):
            for support in itertools.combinations(range(n), size):
                for coeffs in itertools.product(values, repeat=size):
                    if coeffs[0] < 0 or max(abs(c) for c in coeffs) != H:
                        continue
                    vec = [0] * n
                    for i, c in zip(support, coeffs):
                        vec[i] = c
                    yield vec


def _combine(basis, coeffs, zero):
    out = zero
    for c, b in zip(coeffs, basis):
        if c:
            out = out + b * c
    return out


def _f_value(D, z) -> FieldElement:
    """F-valued reduced trace (Tr_{K/F} in the second-kind case)."""
    if D.kind == "split":
        return z.c[0]
    return 2 * z.c[0]


def _twisted_trace_form(Dlevel: AlgebraWithInvolution, t_inv, d):
    D = Dlevel.division
    theta = Dlevel.theta
    basis = D.basis
    left = [t_inv * theta(e) * d for e in basis]
    return _linalg.as_matrix([[_f_value(D, l * e) for e in basis] for l in left])


def _is_positive_definite(M, P) -> bool:
    _, diag = congruence_diagonalize(M)
    return all(sign_at(x, P) > 0 for x in diag)


TWIST_HEIGHT = 6


@lru_cache(maxsize=None)
def positive_twist(Dlevel: AlgebraWithInvolution, P: Ordering):
    """A theta-symmetric unit t of D with Int(t^-1) o theta positive at P.

    Candidates: t = 1, then graded integer combinations of a basis of
    Sym(D, theta). Returns None if none is found (only expected at nil P).
    """
    D = Dlevel.division
    sym = [X[0, 0] for X in Dlevel.sym_basis]
    candidates = itertools.chain([D.one], (
        _combine(sym, c, D.zero) for c in graded_coefficients(len(sym), TWIST_HEIGHT)
    ))
    for t in candidates:
        if not t:
            continue
        t_inv = t.inverse()
        if _is_positive_definite(_twisted_trace_form(Dlevel, t_inv, t), P):
            return t
    return None


@lru_cache(maxsize=4096)
def _entry_signature(Dlevel: AlgebraWithInvolution, t, d, P: Ordering) -> int:
    return symmetric_signature(_twisted_trace_form(Dlevel, t.inverse(), d), P)


def _division_entries(h: HermitianForm):
    if h.epsilon * h.algebra.epsilon != 1:
        raise NotHermitian("signatures are defined for hermitian forms")
    if not h.padded and not h.is_nonsingular():
        raise SingularForm("form is singular; take its nonsingular part first")
    low = to_division_level(h)
    return low.algebra, diagonalize(low).entries


def raw_signature(A: AlgebraWithInvolution, h: HermitianForm, P: Ordering) -> int:
    prof = classify_ordering(A, P)
    if h.algebra != A:
        raise ValueError("form does not live over A")
    if prof.nil:
        if not h.padded and not h.is_nonsingular():
            raise SingularForm("form is singular; take its nonsingular part first")
        return 0
    Dlevel, entries = _division_entries(h)
    t = positive_twist(Dlevel, P)
    if t is None:
        raise ContractViolation(f"no positive twist found at non-nil {P}")
    total = sum(_entry_signature(Dlevel, t, d, P) for d in entries)
    q, r = divmod(total, prof.c_P)
    if r:
        raise ContractViolation(f"trace signature {total} not divisible by c_P = {prof.c_P}")
    if abs(q) > len(entries) * prof.M_P:
        raise ContractViolation("signature exceeds rank bound")
    return q


@dataclass(frozen=True)
class ReferenceTuple:
    algebra: AlgebraWithInvolution
    forms: tuple
    signs: dict

    def sign(self, P: Ordering) -> int:
        return self.signs.get(P, 0)


REFERENCE_HEIGHT = 3


def reference_tuple(A: AlgebraWithInvolution, max_height: int = REFERENCE_HEIGHT) -> ReferenceTuple:
    """(<1>_sigma, <u_1>_sigma, ...) covering every non-nil ordering.

    Extra entries are found by scanning graded integer combinations of the
    Sym(A, sigma) basis for an invertible u with nonzero signature at P.
    """
    forms = [HermitianForm.one(A)]
    sigs = [{}]
    signs = {}
    for P in A.field.orderings():
        if classify_ordering(A, P).nil:
            continue
        for f, s in zip(forms, sigs):
            if P not in s:
                s[P] = raw_signature(A, f, P)
        if all(s[P] == 0 for s in sigs):
            found = None
            sym = A.sym_basis
            for c in graded_coefficients(len(sym), max_height):
                u = _combine(sym, c, A.zero)
                if not A.is_invertible(u):
                    continue
                f = HermitianForm(A, u, 1, check=False)
                if raw_signature(A, f, P):
                    found = f
                    break
            if found is None:
                raise SearchExhausted(f"no reference form found at {P} up to height {max_height}")
            forms.append(found)
            sigs.append({P: raw_signature(A, found, P)})
        first = next(s[P] for s in sigs if s.get(P))
        signs[P] = 1 if first > 0 else -1
    return ReferenceTuple(A, tuple(forms), signs)


def signed_signature(A: AlgebraWithInvolution, eta: ReferenceTuple, h: HermitianForm,
                     P: Ordering) -> int:
    if classify_ordering(A, P).nil:
        raw_signature(A, h, P)  # still validates nonsingularity
        return 0
    return eta.sign(P) * raw_signature(A, h, P)


def _as_form(A, u_or_h):
    if isinstance(u_or_h, HermitianForm):
        return u_or_h
    u = A.element(u_or_h)
    return HermitianForm(A, u, 1)


def is_maximal(A: AlgebraWithInvolution, eta: ReferenceTuple, u_or_h, P: Ordering) -> bool:
    """sign^eta_P h^ns = rank(h^ns) * M_P (always true at nil P)."""
    prof = classify_ordering(A, P)
    if prof.nil:
        return True
    ns = nonsingular_part(_as_form(A, u_or_h))
    return signed_signature(A, eta, ns, P) == ns.rank * prof.M_P


def maximal_form(A: AlgebraWithInvolution, eta: ReferenceTuple, P: Ordering) -> HermitianForm:
    """<Phi * diag(d, ..., d)>_sigma with signed signature l * M_P at non-nil P."""
    if classify_ordering(A, P).nil:
        raise ValueError(f"{P} is nil for this algebra")
    t = positive_twist(A.division_level, P)
    D = A.division
    for d in (t, -t):
        dI = _linalg.identity(A.ell, d, D.zero)
        h = HermitianForm(A, A.phi @ dI, 1, check=False)
        if signed_signature(A, eta, h, P) > 0:
            return h
    raise ContractViolation("no sign of the positive twist gives a positive signature")
