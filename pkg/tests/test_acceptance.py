"""Acceptance suite: one PASS/FAIL line per criterion, exact arithmetic throughout.

Run with ``pytest tests/test_acceptance.py -v`` or ``python tests/test_acceptance.py``.
"""

import random
import sys
import time
from fractions import Fraction
from math import isqrt
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from _samplers import (  # noqa: E402
    QS2,
    R2,
    corpus,
    diagonalization_families,
    float_signature,

    rand_hermitian,
    rand_singular_symmetric,
    rand_symmetric,
)

from hermsig import _linalg  # noqa: E402
from hermsig.algebras import matrix_algebra, quaternion_algebra  # noqa: E402
from hermsig.certificates import four_squares, split_psd_certificate, verify_sohs  # noqa: E402
from hermsig.errors import NotInvertible, NotPSD  # noqa: E402
from hermsig.fields import QQ, FieldElement  # noqa: E402
from hermsig.forms import HermitianForm, diagonalize  # noqa: E402
from hermsig.morita import adjoint_involution, collapse, lift, scale  # noqa: E402
from hermsig.positivity import (  # noqa: E402
    _unit_trace_form,
    involution_signature,
    maximality_trace_audit,
    ps_prime_check,
)
from hermsig.signatures import (  # noqa: E402
    classify_ordering,
    is_maximal,
    maximal_form,
    reference_tuple,
    signed_signature,
)

SEED = 20240601
ALGEBRAS = corpus()


def _report(n, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
    print(line)
    return line


# --------------------------------------------------------------------------
# criterion checks: each returns (ok, detail)


def check_diagonalization(per_family=200):
    rng = random.Random(SEED + 1)
    bad = []
    for name, (Dl, eps) in diagonalization_families().items():
        D = Dl.division
        for _ in range(per_family):
            n = rng.randint(1, 4)
            H = rand_hermitian(rng, Dl, n, eps)
            res = diagonalize(HermitianForm(Dl, H, eps))
            G = res.G
            lhs = Dl.theta_t(G) @ H @ G
            if not _linalg.equal(lhs, res.diagonal_matrix(D.zero)):
                bad.append((name, "identity"))
            elif not _invertible(G, D):
                bad.append((name, "G singular"))
            elif any(not u for u in res.entries):
                bad.append((name, "zero entry"))
    return not bad, f"{6 * per_family} forms in 6 families, failures={bad[:3]}"


def _invertible(G, D):
    try:
        _linalg.inverse(G, D.one, D.zero)
    except NotInvertible:
        return False
    return True


MORITA_ALGEBRAS = ("M2t", "ad", "sp", "M3", "M2H", "M2Had", "M2Fphi", "U2")


def check_morita(per_algebra=30):
    rng = random.Random(SEED + 2)
    bad = []
    total = 0
    for name in MORITA_ALGEBRAS:
        A = ALGEBRAS[name]
        Dl = A.division_level
        ell = A.ell
        for trial in range(per_algebra):
            k = rng.randint(1, 2)
            eps = -1 if (A.division.kind == "split" and trial % 3 == 2) else 1
            H = rand_hermitian(rng, Dl, k * ell, eps, singular=trial % 4 == 3)
            phi = HermitianForm(Dl, H, eps)
            h = lift(phi, A)
            total += 1
            if h.dim != k or h.algebra != A:
                bad.append((name, "shape"))
                continue
            back = collapse(scale(h))
            if back != phi:
                bad.append((name, "round trip"))
            if h.rank != phi.rank:
                bad.append((name, "rank"))
            if phi.is_nonsingular() and h.rank != ell * h.dim:
                bad.append((name, "rank multiplicativity"))
    return not bad and total >= 200, f"{total} forms over {len(MORITA_ALGEBRAS)} algebras, failures={bad[:3]}"


SIGNATURE_FAMILIES = ("Q", "M2t", "ad", "sp", "H", "M2H", "Hs", "qc", "qj", "m13",
                      "M2Fphi", "U1", "U2", "U5")


def check_signature_cross(per_family=100):
    rng = random.Random(SEED + 3)
    bad = []
    for name in SIGNATURE_FAMILIES:
        A = ALGEBRAS[name]
        eta = reference_tuple(A)
        for _ in range(per_family):
            u = rand_symmetric(rng, A)
            h = HermitianForm(A, u, 1)
            twisted = adjoint_involution(A, u)
            for P in A.field.orderings():
                lam = classify_ordering(A, P).lambda_P
                lhs = lam * abs(signed_signature(A, eta, h, P))
                rhs = involution_signature(twisted, P)
                if lhs != rhs:
                    bad.append((name, P.index, lhs, rhs))
    return not bad, f"{per_family} units x {len(SIGNATURE_FAMILIES)} families, failures={bad[:3]}"


def check_perfect_squares():
    bad = []
    count = 0
    for name, A in ALGEBRAS.items():
        T = _unit_trace_form(A)
        for P in A.field.orderings():
            s = T.signature(P)
            count += 1
            # floating-point eigenvalues as an independent oracle for the exact value
            oracle = float_signature(T.gram, P)
            if T.second_kind:
                oracle //= 2
            r = isqrt(s) if s >= 0 else -1
            if s != oracle or r * r != s or involution_signature(A, P) != r:
                bad.append((name, P.index, s, oracle))
    return not bad, f"{count} (algebra, ordering) pairs, failures={bad}"


def check_nil_tables():
    ok = True
    notes = []
    sp = ALGEBRAS["sp"]
    sp4 = matrix_algebra(QQ, 4, [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]])
    sp_r2 = matrix_algebra(QS2, 2, [[0, 1], [-1, 0]])
    for A in (sp, sp4, sp_r2):
        if not all(classify_ordering(A, P).nil for P in A.field.orderings()):
            ok = False
            notes.append("split symplectic not nil")
    H = classify_ordering(ALGEBRAS["H"], QQ.orderings()[0])
    if H.nil or H.lambda_P != 2:
        ok = False
        notes.append("hamilton")
    qc = ALGEBRAS["qc"]
    P0, P1 = QS2.orderings()
    if classify_ordering(qc, P0).nil or not classify_ordering(qc, P1).nil:
        ok = False
        notes.append("(-1,-sqrt2)")
    return ok, "split symplectic all nil; hamilton non-nil lambda=2; (-1,-sqrt2): P0 non-nil, P1 nil" \
        if ok else str(notes)


def check_maximal_attainment():
    bad = []
    count = 0
    for name, A in ALGEBRAS.items():
        eta = reference_tuple(A)
        for P in A.field.orderings():
            prof = classify_ordering(A, P)
            if prof.nil:
                continue
            count += 1
            h = maximal_form(A, eta, P)
            if signed_signature(A, eta, h, P) != A.ell * prof.M_P or prof.m_P != A.ell * prof.M_P:
                bad.append((name, P.index))
    return not bad, f"{count} non-nil (algebra, ordering) pairs, failures={bad}"


AUDIT_FAMILIES = ("Q", "M2t", "ad", "H", "M2H", "M2Had", "Hs", "qc", "qi", "M2Fphi", "U1", "U2")


def check_audit(per_family=100):
    rng = random.Random(SEED + 7)
    bad = []
    singular = 0
    for name in AUDIT_FAMILIES:
        A = ALGEBRAS[name]
        eta = reference_tuple(A)
        for i in range(per_family):
            if i % 4 == 3:
                u = rand_singular_symmetric(rng, A)
                singular += 1
            else:
                u = rand_symmetric(rng, A, invertible=False)
            if not maximality_trace_audit(A, eta, u).agree:
                bad.append((name, i))
    return not bad, (f"{per_family} elements x {len(AUDIT_FAMILIES)} families "
                     f"({singular} singular), failures={bad[:3]}")


def _psd_matrix(rng, n):
    B = [[Fraction(rng.randint(-3, 3), rng.choice((1, 1, 2))) for _ in range(n)]
         for _ in range(rng.randint(1, n))]
    return [[sum(B[k][i] * B[k][j] for k in range(len(B))) for j in range(n)] for i in range(n)]


def _indefinite_matrix(rng, n):
    while True:
        M = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                M[i][j] = M[j][i] = Fraction(rng.randint(-4, 4))
        w = np.linalg.eigvalsh(np.array(M, dtype=float))
        if w.min() < -1e-6:
            return M


def check_split_end_to_end(count=100):
    rng = random.Random(SEED + 8)
    bad = []
    for _ in range(count):
        n = rng.randint(1, 5)
        A = matrix_algebra(QQ, n)
        eta = reference_tuple(A)
        U = _psd_matrix(rng, n)
        cert = split_psd_certificate(U)
        if not verify_sohs(A, A.element(U), cert):
            bad.append(("psd verify", U))
        if not all(is_maximal(A, eta, A.element(U), P) for P in QQ.orderings()):
            bad.append(("psd maximal", U))
    for _ in range(count):
        n = rng.randint(1, 5)
        A = matrix_algebra(QQ, n)
        eta = reference_tuple(A)
        U = _indefinite_matrix(rng, n)
        try:
            split_psd_certificate(U)
            bad.append(("indefinite certified", U))
        except NotPSD as exc:
            if FieldElement._coerce(exc.entry).a >= 0:
                bad.append(("witness entry", U))
        if is_maximal(A, eta, A.element(U), QQ.orderings()[0]):
            bad.append(("indefinite maximal", U))
    return not bad, f"{count} PSD certified and verified, {count} indefinite rejected, failures={bad[:2]}"


def check_ps_verdicts():
    m2t = ps_prime_check(matrix_algebra(QQ, 2))
    ad = ps_prime_check(matrix_algebra(QQ, 2, [[1, 0], [0, -1]]))
    qc = ps_prime_check(quaternion_algebra(QS2, -1, -R2))
    ok = (
        m2t.holds
        and not ad.holds
        and _linalg.equal(ad.witness, matrix_algebra(QQ, 2, [[1, 0], [0, -1]]).one)
        and ad.ordering.index == 0
        and qc.holds
    )
    return ok, f"M2(Q),t holds={m2t.holds}; ad diag(1,-1) holds={ad.holds} witness=1; " \
               f"(-1,-sqrt2),conj holds={qc.holds}"


def check_four_squares(count=100):
    rng = random.Random(SEED + 10)
    bad = []
    qs = [Fraction(q) for q in range(501)]
    qs += [Fraction(rng.randint(0, 10 ** 6), rng.randint(1, 10 ** 6)) for _ in range(count)]
    for q in qs:
        parts = four_squares(q)
        if len(parts) != 4 or sum(p * p for p in parts) != q or any(p < 0 for p in parts):
            bad.append(q)
    return not bad, f"{len(qs)} rationals, failures={bad[:3]}"


CRITERIA = [
    (1, "diagonalization soundness", check_diagonalization),
    (2, "Morita round trip", check_morita),
    (3, "signature cross-check", check_signature_cross),
    (4, "perfect-square trace signatures", check_perfect_squares),
    (5, "nil tables", check_nil_tables),
    (6, "maximal signature attained", check_maximal_attainment),
    (7, "maximality / trace-form audit", check_audit),
    (8, "split end-to-end certificates", check_split_end_to_end),
    (9, "positivity verdicts", check_ps_verdicts),
    (10, "four squares", check_four_squares),
]


@pytest.mark.parametrize("number,title,check", CRITERIA, ids=[f"c{n}_{t.replace(' ', '_')}"
                                                              for n, t, _ in CRITERIA])
def test_criterion(number, title, check, capsys):
    ok, detail = check()
    with capsys.disabled():
        print()
        _report(number, ok, f"{title}: {detail}")
    assert ok, detail


def main():
    start = time.perf_counter()
    results = []
    for number, title, check in CRITERIA:
        t0 = time.perf_counter()
        ok, detail = check()
        _report(number, ok, f"{title}: {detail} [{time.perf_counter() - t0:.1f}s]")
        results.append(ok)
    print(f"{sum(results)}/{len(results)} criteria passed in {time.perf_counter() - start:.1f}s")
    return 0 if all(results) else 1


if __name__ == "__main__":
    sys.exit(main())
