import random

import pytest

from _samplers import QS2, R2, corpus, float_signature, rand_singular_symmetric, rand_symmetric
from hermsig.algebras import CanonicalTheta, hamilton, matrix_algebra, quaternion_algebra
from hermsig.errors import EmptyXSigma, NotSymmetric
from hermsig.fields import QQ
from hermsig.morita import adjoint_involution
from hermsig.positivity import (
    choose_positive_theta,
    involution_signature,
    is_nd_at,
    is_pd_at,
    is_psd_at,
    maximality_trace_audit,
    ps_prime_check,
    trace_form,
    x_sigma,
)
from hermsig.signatures import classify_ordering, reference_tuple, signed_signature
from hermsig.forms import HermitianForm

ALGEBRAS = corpus()
P0 = QQ.orderings()[0]
AD = ALGEBRAS["ad"]


def test_trace_form_examples():
    T = trace_form(hamilton())
    assert all(T.gram[r, s] == (2 if r == s else 0) for r in range(4) for s in range(4))
    M2 = matrix_algebra(QQ, 2)
    assert trace_form(M2).signature(P0) == 4
    assert trace_form(AD).signature(P0) == 0
    with pytest.raises(NotSymmetric):
        trace_form(M2, M2.element([[0, 1], [0, 0]]))


def test_trace_form_of_singular_element_is_psd():
    M2 = matrix_algebra(QQ, 2)
    T = trace_form(M2, M2.element([[1, 0], [0, 0]]))
    assert is_psd_at(T, P0) and not is_pd_at(T, P0)
    assert sorted(x.a for x in T.diagonal()) == [0, 0, 1, 1]


def test_definiteness_predicates():
    H = hamilton()
    assert is_pd_at(trace_form(H), P0)
    assert is_nd_at(trace_form(H, -1), P0)
    assert not is_psd_at(trace_form(H, -1), P0)


def test_involution_signature_examples():
    assert involution_signature(hamilton(), P0) == 2
    assert involution_signature(matrix_algebra(QQ, 2), P0) == 2
    assert involution_signature(AD, P0) == 0


@pytest.mark.parametrize("name", sorted(ALGEBRAS))
def test_trace_signature_matches_float_oracle(name):
    A = ALGEBRAS[name]
    T = trace_form(A)
    for P in A.field.orderings():
        oracle = float_signature(T.gram, P)
        if T.second_kind:
            oracle //= 2
        assert T.signature(P) == oracle
        assert involution_signature(A, P) ** 2 == oracle


def test_x_sigma_examples():
    assert x_sigma(hamilton()) == frozenset({P0})
    assert x_sigma(AD) == frozenset()
    assert x_sigma(ALGEBRAS["qc"]) == frozenset({QS2.orderings()[0]})


@pytest.mark.parametrize("name", sorted(ALGEBRAS))
def test_x_sigma_is_within_non_nil_orderings(name):
    A = ALGEBRAS[name]
    for P in x_sigma(A):
        assert not classify_ordering(A, P).nil


@pytest.mark.parametrize("name", ["H", "M2t", "qc", "U2", "M2H", "qj", "m13"])
def test_signature_of_twisted_involution(name):
    A = ALGEBRAS[name]
    eta = reference_tuple(A)
    rng = random.Random(name)
    for _ in range(8):
        u = rand_symmetric(rng, A)
        B = adjoint_involution(A, u)
        for P in A.field.orderings():
            lam = classify_ordering(A, P).lambda_P
            assert lam * abs(signed_signature(A, eta, HermitianForm(A, u), P)) == involution_signature(B, P)


def test_audit_examples():
    H = hamilton()
    eta = reference_tuple(H)
    rep = maximality_trace_audit(H, eta, 1)
    assert rep.agree and rep.orderings[0].maximal and rep.orderings[0].psd
    rep = maximality_trace_audit(H, eta, -1)
    assert rep.agree and not rep.orderings[0].maximal and not rep.orderings[0].psd
    M2 = matrix_algebra(QQ, 2)
    rep = maximality_trace_audit(M2, reference_tuple(M2), M2.element([[2, 1], [1, 2]]))
    assert rep.agree and rep.orderings[0].maximal and rep.orderings[0].psd


@pytest.mark.parametrize("name", ["H", "M2t", "qc", "U1", "M2Fphi", "Hs"])
def test_audit_agrees_on_random_elements(name):
    A = ALGEBRAS[name]
    eta = reference_tuple(A)
    rng = random.Random(name)
    for i in range(15):
        u = rand_singular_symmetric(rng, A) if i % 3 == 0 else rand_symmetric(rng, A, invertible=False)
        assert maximality_trace_audit(A, eta, u).agree


def test_ps_prime_verdicts():
    assert ps_prime_check(matrix_algebra(QQ, 2)).holds
    v = ps_prime_check(AD)
    assert not v.holds and v.ordering == P0
    assert v.x_tilde == frozenset({P0}) and v.x_sigma == frozenset()
    assert ps_prime_check(ALGEBRAS["qc"]).holds
    assert not ps_prime_check(ALGEBRAS["M2Fphi"]).holds


def test_choose_positive_theta():
    assert choose_positive_theta(hamilton()) == CanonicalTheta.conjugation()
    assert choose_positive_theta(hamilton(2)) == CanonicalTheta.conjugation()
    assert choose_positive_theta(matrix_algebra(QQ, 2)) == CanonicalTheta.identity()
    with pytest.raises(EmptyXSigma):
        choose_positive_theta(AD)
    with pytest.raises(EmptyXSigma):
        choose_positive_theta(ALGEBRAS["Hs"])  # orthogonal on a ramified algebra


def test_choose_positive_theta_twisted():
    qi = ALGEBRAS["qi"]
    assert choose_positive_theta(qi) == qi.theta
    # <1> over M_2 with Phi = diag(2, 1) collapses to <1/2, 1>, so s is rescaled by 2
    A = quaternion_algebra(QS2, -1, -R2, 2, [[2, 0], [0, 1]], s=[0, 1, 0, 0])
    tau = choose_positive_theta(A)
    D = A.division
    assert tau.kind == "twisted" and tau.s == D.element([0, 2, 0, 0])
    assert all(tau(x) == A.theta(x) for x in D.basis)
    assert x_sigma(A) == frozenset({QS2.orderings()[1]})
