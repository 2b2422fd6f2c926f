"""Weighted sums of hermitian squares: verification and construction.

A certificate for ``u`` with base element ``a`` and weights ``b_1..b_t``
lists, for each ``e in {0,1}^t``, at most ``2^s`` elements ``x`` so that

    u = sum_e b^e sum_x sigma(x) a x.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, log2

from sympy.solvers.diophantine.diophantine import sum_of_four_squares

from . import _linalg
from .algebras import AlgebraWithInvolution
from .errors import (
    ContractViolation,
    DomainError,
    MalformedCertificate,
    NotInvertible,
    NotPSD,
    NotSymmetric,
)
from .fields import QQ, FieldElement, congruence_diagonalize, sign_at
from .forms import HermitianForm, diagonalize
from .signatures import graded_coefficients

__all__ = [
    "SOHSCertificate",
    "bounded_search",
    "four_squares",
    "split_psd_certificate",
    "verify_sohs",
]


@dataclass
class SOHSCertificate:
    a: object
    weights: tuple = ()
    exponent: int = 0
    terms: dict = field(default_factory=dict)

    def keys(self):
        return ["".join(map(str, e)) for e in itertools.product((0, 1), repeat=len(self.weights))]

    @property
    def term_count(self) -> int:
        return sum(len(v) for v in self.terms.values())


def _exponent_for(count: int) -> int:
    return ceil(log2(count)) if count > 1 else 0


def _weight_product(weights, key):
    v = FieldElement(1)
    for b, bit in zip(weights, key):
        if bit == "1":
            v = v * b
    return v


def verify_sohs(A: AlgebraWithInvolution, u, cert: SOHSCertificate) -> bool:
    """Exact check of u = sum_e b^e sum_i sigma(x_ie) a x_ie."""
    try:
        a = A.element(cert.a)
        weights = tuple(A.field(b) for b in cert.weights)
        u = A.element(u)
    except (TypeError, ValueError) as exc:
        raise MalformedCertificate(f"cannot read certificate: {exc}") from None
    if not A.is_symmetric(a) or not A.is_invertible(a):
        raise MalformedCertificate("a must be an invertible symmetric element")
    if any(not b for b in weights):
        raise MalformedCertificate("weights must be nonzero")
    if not isinstance(cert.exponent, int) or cert.exponent < 0:
        raise MalformedCertificate("exponent must be a non-negative integer")
    valid = set(cert.keys())
    total = A.zero
    for key, xs in cert.terms.items():
        if key not in valid:
            raise MalformedCertificate(f"term key {key!r} is not a {len(weights)}-bit string")
        xs = list(xs)
        if len(xs) > 2 ** cert.exponent:
            raise MalformedCertificate(f"{len(xs)} terms for e={key!r} exceed 2^{cert.exponent}")
        w = _weight_product(weights, key)
        for x in xs:
            try:
                X = A.element(x)
            except (TypeError, ValueError) as exc:
                raise MalformedCertificate(f"bad term: {exc}") from None
            total = total + A.sigma(X) @ a @ X * w
    return _linalg.equal(total, u)


def four_squares(q) -> tuple:
    """(a, b, c, d) with a^2 + b^2 + c^2 + d^2 = q, sorted in decreasing order.

    Writes q = N / r^2 with N = numerator * denominator and splits the
    integer N.
    """
    q = Fraction(q)
    if q < 0:
        raise ValueError("four_squares needs a non-negative rational")
    r = q.denominator
    N = q.numerator * r
    parts = sorted(sum_of_four_squares(N), reverse=True)
    return tuple(Fraction(int(p), r) for p in parts)


def _rational(x) -> Fraction:
    x = FieldElement._coerce(x)
    if x is None or x.b:
        raise DomainError("split certificates are generated over Q only")
    return x.a


def split_psd_certificate(U) -> SOHSCertificate:
    """U = sum X_k^t X_k for a positive semidefinite rational symmetric U."""
    M = _linalg.as_matrix([[_rational(x) for x in row] for row in U]) \
        if not hasattr(U, "shape") else _linalg.apply(_rational, U)
    n = M.shape[0]
    if M.shape != (n, n) or not _linalg.equal(M, M.T):
        raise NotSymmetric("U must be a symmetric square matrix")
    F = _linalg.apply(FieldElement, M)
    G, diag = congruence_diagonalize(F)
    P0 = QQ.orderings()[0]
    for i, d in enumerate(diag):
        if sign_at(d, P0) < 0:
            raise NotPSD(f"congruence diagonal entry {d} is negative", index=i, entry=d)
    one, zero = FieldElement(1), FieldElement(0)
    R = _linalg.inverse(G, one, zero)  # U = R^t diag R
    splits = [four_squares(d.a) for d in diag]
    xs = []
    for k in range(4):
        X = _linalg.zeros(n, n, zero)
        for i in range(n):
            c = splits[i][k]
            if c:
                X[i] = [c * x for x in R[i]]
        if not _linalg.is_zero(X):
            xs.append(X)
    cert = SOHSCertificate(a=1, weights=(), exponent=_exponent_for(len(xs)), terms={"": xs})
    return cert


def _is_plain_split(A: AlgebraWithInvolution) -> bool:
    return (
        A.division.kind == "split"
        and A.field == QQ
        and A.epsilon == 1
        and _linalg.equal(A.phi, A.one)
    )


def _split_as_algebra_elements(A, cert):
    D = A.division
    cert.terms = {k: [_linalg.apply(D.coerce, X) for X in v] for k, v in cert.terms.items()}
    cert.a = A.one
    return cert


class _Representer:
    """Sums of at most four entries of a value table, by meet-in-the-middle.

    ``values`` is a list of ``(value, tag)`` with tags ``(key_index, j, d)``;
    only the first tag per ``(value, key_index)`` is kept.
    """

    def __init__(self, values):
        seen = set()
        self.entries = []
        for v, tag in values:
            if (v, tag[0]) not in seen:
                seen.add((v, tag[0]))
                self.entries.append((v, tag))
        self.single = {}
        for v, tag in self.entries:
            self.single.setdefault(v, []).append(tag)
        self._pairs = None

    @property
    def pairs(self):
        if self._pairs is None:
            self._pairs = {}
            for i, (v1, t1) in enumerate(self.entries):
                for v2, t2 in self.entries[i:]:
                    self._pairs.setdefault(v1 + v2, []).append((t1, t2))
        return self._pairs

    def find(self, target, budget):
        if not target:
            return []
        for tag in self.single.get(target, ()):
            if budget([tag]):
                return [tag]
        for v, tag in self.entries:
            for t2 in self.single.get(target - v, ()):
                if budget([tag, t2]):
                    return [tag, t2]
        pairs = self.pairs
        for v, tag in self.entries:
            for t1, t2 in pairs.get(target - v, ()):
                if budget([tag, t1, t2]):
                    return [tag, t1, t2]
        for sv, plist in pairs.items():
            rest = pairs.get(target - sv)
            if not rest:
                continue
            for t1, t2 in plist:
                for t3, t4 in rest:
                    if budget([t1, t2, t3, t4]):
                        return [t1, t2, t3, t4]
        return None


def _square_coordinates(D, form):
    """(kappa, coords) when form(d) = kappa * sum of squares of d's coords in coords.

    ``form`` maps D to D; kappa must be a nonzero element of F.
    """
    basis = D.basis
    kappa = form(basis[0])
    if not kappa or not kappa.is_scalar():
        return None
    coords = [0]
    for r in range(1, D.dim):
        if form(basis[r]) != kappa:
            continue
        if all(form(basis[r] + basis[q]) == kappa * 2 for q in coords):
            coords.append(r)
    return kappa.c[0], coords


def _pack_squares(target, D, kappa, coords):
    """Terms d with sum kappa * |d|^2 = target, from a four-square split."""
    if not target.is_scalar():
        return None
    ratio = target.c[0] / kappa
    if ratio.b or ratio.a < 0:
        return None
    squares = [q for q in four_squares(ratio.a) if q]
    out = []
    for start in range(0, len(squares), len(coords)):
        chunk = squares[start:start + len(coords)]
        c = [D.field(0)] * D.dim
        for r, q in zip(coords, chunk):
            c[r] = D.field(q)
        out.append(D.element(c))
    return out


def bounded_search(A: AlgebraWithInvolution, u, a=1, weights=(), max_exponent: int = 3,
                   height_bound: int = 2):
    """Best-effort search for a certificate; None does not prove non-existence."""
    u = A.element(u)
    if not A.is_symmetric(u):
        raise NotSymmetric("u must be sigma-symmetric")
    a = A.element(a)
    weights = tuple(A.field(b) for b in weights)
    if _is_plain_split(A) and not weights and _linalg.equal(a, A.one):
        try:
            cert = split_psd_certificate(_linalg.apply(lambda x: x.c[0], u))
        except NotPSD:
            return None
        if cert.exponent > max_exponent:
            return None
        return _split_as_algebra_elements(A, cert)
    if not A.is_symmetric(a) or not A.is_invertible(a):
        raise NotInvertible("a must be an invertible symmetric element")

    D = A.division
    theta = A.theta
    ell = A.ell
    Dlevel = A.division_level
    # Phi^-1 u = theta(Y)^t Delta Y and Phi^-1 a = theta(W)^t E W over (D, theta)
    du = diagonalize(HermitianForm(Dlevel, A.phi_inv @ u, A.epsilon, check=False))
    da = diagonalize(HermitianForm(Dlevel, A.phi_inv @ a, A.epsilon, check=False))
    if du.blocks or da.blocks or da.zeros:
        return None
    Y = _linalg.inverse(du.G, D.one, D.zero)
    Winv = da.G
    deltas = du.entries
    eps = da.entries
    keys = ["".join(map(str, e)) for e in itertools.product((0, 1), repeat=len(weights))]
    wvals = [_weight_product(weights, k) for k in keys]

    packings = []
    for j, ej in enumerate(eps):
        for ki, w in enumerate(wvals):
            sq = _square_coordinates(D, lambda d, ej=ej, w=w: theta(d) * ej * d * w)
            if sq is not None:
                packings.append((ki, j, *sq))

    def value_table():
        pool = [D.element(c) for c in graded_coefficients(D.dim, height_bound)]
        for d in pool:
            base = theta(d)
            for j, ej in enumerate(eps):
                core = base * ej * d
                for ki, w in enumerate(wvals):
                    yield core * w, (ki, j, d)

    cap = 2 ** max_exponent
    counts = [0] * len(keys)

    def budget(tags):
        extra = [0] * len(keys)
        for ki, _, _ in tags:
            extra[ki] += 1
        return all(counts[k] + extra[k] <= cap for k in range(len(keys)))

    searcher = None
    plan = []
    for i, delta in enumerate(deltas):
        found = None
        for ki, j, kappa, coords in packings:
            ds = _pack_squares(delta, D, kappa, coords)
            if ds is not None and budget([(ki, j, d) for d in ds]):
                found = (1, [(ki, j, d) for d in ds])
                break
        if found is None:
            if searcher is None:
                searcher = _Representer(list(value_table()))
            for c in range(1, height_bound + 1):
                tags = searcher.find(delta * (c * c), budget)
                if tags is not None:
                    found = (c, tags)
                    break
        if found is None:
            return None
        c, tags = found
        for ki, j, d in tags:
            counts[ki] += 1
            plan.append((ki, i, j, d * Fraction(1, c)))

    terms = {k: [] for k in keys}
    for ki, i, j, d in plan:
        V = _linalg.zeros(ell, ell, D.zero)
        V[j, i] = d
        terms[keys[ki]].append(Winv @ V @ Y)
    terms = {k: v for k, v in terms.items() if v}
    exponent = _exponent_for(max(counts, default=0))
    cert = SOHSCertificate(a=a, weights=weights, exponent=exponent, terms=terms)
    if not verify_sohs(A, u, cert):
        raise ContractViolation("constructed certificate failed verification")
    return cert
