"""A guided tour: signatures, positivity and certificates on a few small algebras.

Run with ``python demos/walkthrough.py``.
"""

import json
from pathlib import Path

from hermsig import cli
from hermsig.algebras import hamilton, matrix_algebra, unitary_algebra
from hermsig.certificates import bounded_search, split_psd_certificate, verify_sohs
from hermsig.fields import QQ
from hermsig.forms import HermitianForm, diagonalize
from hermsig.positivity import maximality_trace_audit, ps_prime_check, trace_form, x_sigma
from hermsig.signatures import classify_ordering, reference_tuple, signed_signature

FIXTURES = Path(__file__).parent / "fixtures"
P = QQ.orderings()[0]


def section(title):
    print()
    print(title)
    print("-" * len(title))


section("Hamilton quaternions with conjugation")
H = hamilton()
prof = classify_ordering(H, P)
print("lambda =", prof.lambda_P, " n =", prof.n_P, " M =", prof.M_P, " nil =", prof.nil)
eta = reference_tuple(H)
h = HermitianForm.diagonal(H, [1, -1, 2])
print("signature of <1, -1, 2> =", signed_signature(H, eta, h, P))
res = diagonalize(HermitianForm.diagonal(H, [3, 0, -5]))
print("diagonal entries of <3, 0, -5>:", [str(e) for e in res.entries], "zeros:", res.zeros)

section("Positive involutions")
adj = matrix_algebra(QQ, 2, [[1, 0], [0, -1]])
print("trace form of transpose on M2(Q):", trace_form(matrix_algebra(QQ, 2)).signature(P))
print("trace form of the adjoint of <1,-1>:", trace_form(adj).signature(P))
print("X_sigma(Hamilton) nonempty:", bool(x_sigma(H)))
print("X_sigma(adjoint of <1,-1>) nonempty:", bool(x_sigma(adj)))
v = ps_prime_check(adj)
print("positivity-of-one check holds:", v.holds, " failing ordering:", v.ordering)

section("Maximality versus a positive semidefinite trace form")
for u in (1, -1):
    rep = maximality_trace_audit(H, eta, u)
    o = rep.orderings[0]
    print(f"u = {u:2d}: maximal={o.maximal} psd={o.psd} agree={rep.agree}")

section("Sum-of-hermitian-squares certificates")
cert = split_psd_certificate([[2, 1], [1, 2]])
M2 = matrix_algebra(QQ, 2)
print("[[2,1],[1,2]] in M2(Q): terms =", cert.term_count, " exponent =", cert.exponent,
      " verified:", verify_sohs(M2, M2.element([[2, 1], [1, 2]]), cert))
cert = bounded_search(H, 5)
print("5 in Hamilton: terms =", [str(x[0, 0]) for x in cert.terms[""]], " verified:", verify_sohs(H, 5, cert))
print("-1 in Hamilton:", bounded_search(H, -1))
U = unitary_algebra(QQ, -3)
cert = bounded_search(U, 7)
print("7 in Q(sqrt -3) with conjugation: verified:", cert is not None and verify_sohs(U, 7, cert))

section("The command line on the bundled fixtures")
for sub, name in [("classify", "hamilton.json"), ("ps-check", "m2_adjoint_diag.json"),
                  ("certify", "psd_matrix.json"), ("certify", "indefinite_matrix.json")]:
    print(f"$ hermsig {sub} --json --input demos/fixtures/{name}")
    code = cli.run([sub, "--json", "--input", str(FIXTURES / name)])
    print(f"(exit {code})")

section("Fixture formats")
print(json.dumps(json.loads((FIXTURES / "hamilton_five.json").read_text()), indent=1))
