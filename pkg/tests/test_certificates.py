import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _samplers import QS2, R2, corpus, rand_symmetric
from hermsig import _linalg
from hermsig.algebras import hamilton, matrix_algebra, unitary_algebra
from hermsig.certificates import (
    SOHSCertificate,
    bounded_search,
    four_squares,
    split_psd_certificate,
    verify_sohs,
)
from hermsig.errors import MalformedCertificate, NotPSD, NotSymmetric
from hermsig.fields import QQ, FieldElement
from hermsig.positivity import is_psd_at, trace_form

ALGEBRAS = corpus()


def _brute_force_four_squares(n):
    r = int(n ** 0.5) + 1
    return {tuple(sorted(c, reverse=True)) for c in itertools.product(range(r), repeat=4)
            if sum(x * x for x in c) == n}


def test_four_squares_examples():
    assert four_squares(7) == (2, 1, 1, 1)
    assert (2, 1, 1, 1) in _brute_force_four_squares(7)
    assert four_squares(0) == (0, 0, 0, 0)
    assert four_squares(Fraction(3, 2)) == (1, Fraction(1, 2), Fraction(1, 2), 0)
    with pytest.raises(ValueError):
        four_squares(-1)


@given(st.fractions(min_value=0, max_value=10 ** 6, max_denominator=10 ** 6))
def test_four_squares_identity(q):
    parts = four_squares(q)
    assert sum(p * p for p in parts) == q
    assert list(parts) == sorted(parts, reverse=True) and parts[-1] >= 0


def test_verify_examples():
    Q = matrix_algebra()
    assert verify_sohs(Q, 2, SOHSCertificate(a=1, exponent=1, terms={"": [1, 1]}))
    H = hamilton()
    i = H.division.element([0, 1, 0, 0])
    assert verify_sohs(H, 2, SOHSCertificate(a=1, exponent=1, terms={"": [1, i]}))
    assert not verify_sohs(H, -1, SOHSCertificate(a=1, exponent=1, terms={"": [1, i]}))


def test_verify_weighted():
    Q = matrix_algebra()
    # 1 + 2*1 + 3*1 + 6*1 = 12 with weights (2, 3)
    cert = SOHSCertificate(a=1, weights=(2, 3), exponent=0,
                           terms={"00": [1], "10": [1], "01": [1], "11": [1]})
    assert verify_sohs(Q, 12, cert)
    cert.terms["11"] = [1, 1]
    with pytest.raises(MalformedCertificate):
        verify_sohs(Q, 18, cert)


def test_verify_rejects_malformed():
    Q = matrix_algebra()
    with pytest.raises(MalformedCertificate):
        verify_sohs(Q, 1, SOHSCertificate(a=0, terms={"": [1]}))
    with pytest.raises(MalformedCertificate):
        verify_sohs(Q, 1, SOHSCertificate(a=1, weights=(0,), terms={"0": [1]}))
    with pytest.raises(MalformedCertificate):
        verify_sohs(Q, 1, SOHSCertificate(a=1, terms={"1": [1]}))
    with pytest.raises(MalformedCertificate):
        verify_sohs(Q, 2, SOHSCertificate(a=1, exponent=0, terms={"": [1, 1]}))
    H = hamilton()
    i = H.division.element([0, 1, 0, 0])
    with pytest.raises(MalformedCertificate):
        verify_sohs(H, 1, SOHSCertificate(a=i, terms={"": [1]}))


def test_split_certificate_examples():
    M2 = matrix_algebra(QQ, 2)
    cert = split_psd_certificate([[2, 1], [1, 2]])
    assert verify_sohs(M2, M2.element([[2, 1], [1, 2]]), cert)
    assert cert.term_count == 3 and cert.exponent == 2
    cert = split_psd_certificate([[1, 0], [0, 0]])
    assert cert.term_count == 1
    assert _linalg.equal(cert.terms[""][0], M2.element([[1, 0], [0, 0]]))
    with pytest.raises(NotPSD) as exc:
        split_psd_certificate([[1, 2], [2, 1]])
    assert FieldElement._coerce(exc.value.entry) == -3 and exc.value.index == 1
    with pytest.raises(NotSymmetric):
        split_psd_certificate([[1, 2], [0, 1]])


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(
    st.lists(st.integers(-4, 4), min_size=n, max_size=n), min_size=1, max_size=n)))
def test_split_certificate_for_gram_matrices(B):
    n = len(B[0])
    U = [[sum(Fraction(B[k][i] * B[k][j]) for k in range(len(B))) for j in range(n)] for i in range(n)]
    A = matrix_algebra(QQ, n)
    cert = split_psd_certificate(U)
    assert verify_sohs(A, A.element(U), cert)
    assert cert.term_count <= 4


def test_bounded_search_examples():
    H = hamilton()
    cert = bounded_search(H, 5)
    assert cert is not None and verify_sohs(H, 5, cert)
    assert bounded_search(H, -1) is None
    M2 = matrix_algebra(QQ, 2)
    u = M2.element([[2, 0], [0, 0]])
    cert = bounded_search(M2, u)
    assert cert is not None and verify_sohs(M2, u, cert)
    with pytest.raises(NotSymmetric):
        bounded_search(H, H.element(H.division.element([0, 1, 0, 0])))


@pytest.mark.parametrize("name", ["H", "M2H", "U1", "U2", "M2t", "qc"])
def test_bounded_search_certificates_verify(name):
    A = ALGEBRAS[name]
    rng = random.Random(name)
    for _ in range(6):
        u = rand_symmetric(rng, A, bound=2)
        cert = bounded_search(A, u)
        T = trace_form(A, u)
        if cert is not None:
            assert verify_sohs(A, u, cert)
            # a sum of hermitian squares has a PSD trace form wherever sigma is positive
            assert all(is_psd_at(T, P) for P in A.field.orderings()
                       if is_psd_at(trace_form(A), P))
    assert bounded_search(A, A.one) is not None


def test_bounded_search_with_weights():
    Q = matrix_algebra()
    cert = bounded_search(Q, 5, weights=(2,))
    assert cert is not None and verify_sohs(Q, 5, cert)
    A = matrix_algebra(QS2)
    cert = bounded_search(A, A.element(R2 + 2), weights=(R2,))
    assert cert is None or verify_sohs(A, A.element(R2 + 2), cert)


def test_bounded_search_unitary_with_base_element():
    U = unitary_algebra(QQ, -3)
    cert = bounded_search(U, 6, a=2)
    assert cert is not None and verify_sohs(U, 6, cert)
