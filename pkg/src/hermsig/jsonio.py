"""JSON encodings of field elements, algebras, forms and certificates.

* Rational: ``"p/q"`` or ``"p"`` (integers are accepted on input).
* FieldElement: ``[a, b]`` for ``a + b sqrt d``; a bare rational is accepted.
  Over Q, coordinates are written as bare rationals.
* DElement: list of its coordinates (1, 2 or 4); a bare scalar is embedded.
* Element of A: ``l x l`` nested list of DElements; a bare DElement means
  that multiple of the identity. The matrix reading wins when both apply.
* Algebra: ``{"field": {"kind": "Q"|"Qsqrt", "d": int}, "division": {...},
  "ell": int, "phi": element}``.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

import numpy as np

from .algebras import AlgebraWithInvolution, CanonicalTheta, Division, make_algebra
from .certificates import SOHSCertificate
from .errors import MalformedCertificate, ParseError
from .fields import QQ, BaseField, FieldElement
from .forms import HermitianForm

__all__ = [
    "algebra_from_json",
    "algebra_to_json",
    "certificate_from_json",
    "certificate_to_json",
    "delement_to_json",
    "element_from_json",
    "element_to_json",
    "field_element_from_json",
    "field_element_to_json",
    "form_from_json",
    "form_to_json",
    "rational_from_json",
    "rational_to_json",
]


def rational_to_json(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def rational_from_json(obj) -> Fraction:
    if isinstance(obj, bool):
        raise ParseError(f"not a rational: {obj!r}")
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, str):
        try:
            return Fraction(obj.strip())
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"not a rational: {obj!r}") from None
    raise ParseError(f"not a rational: {obj!r} (floats are not accepted)")


def field_element_to_json(x: FieldElement, F: BaseField | None = None):
    x = FieldElement._coerce(x)
    if (F is None and x.d is None) or (F is not None and F.d is None):
        return rational_to_json(x.a)
    return [rational_to_json(x.a), rational_to_json(x.b)]


def _is_scalar_json(obj) -> bool:
    return isinstance(obj, (int, str)) and not isinstance(obj, bool)


def field_element_from_json(obj, F: BaseField) -> FieldElement:
    if _is_scalar_json(obj):
        return F(rational_from_json(obj))
    if isinstance(obj, list) and len(obj) == 2 and all(_is_scalar_json(c) for c in obj):
        a, b = (rational_from_json(c) for c in obj)
        if b and F.d is None:
            raise ParseError("sqrt coordinate given for an element of Q")
        return F(a, b)
    raise ParseError(f"not a field element: {obj!r}")


def delement_to_json(x, F: BaseField):
    return [field_element_to_json(c, F) for c in x.c]


def delement_from_json(obj, D: Division):
    F = D.field
    if isinstance(obj, list) and len(obj) == D.dim:
        try:
            return D.element([field_element_from_json(c, F) for c in obj])
        except ParseError:
            if D.dim != 2:
                raise
    return D.scalar(field_element_from_json(obj, F))


def element_to_json(A: AlgebraWithInvolution, X):
    return [[delement_to_json(x, A.field) for x in row] for row in X]


def element_from_json(obj, A: AlgebraWithInvolution):
    D = A.division
    ell = A.ell
    if isinstance(obj, list) and len(obj) == ell and all(
        isinstance(r, list) and len(r) == ell for r in obj
    ):
        try:
            return A.element([[delement_from_json(x, D) for x in row] for row in obj])
        except ParseError:
            pass
    try:
        return A.element(delement_from_json(obj, D))
    except ParseError:
        raise ParseError(f"not an element of an {ell}x{ell} matrix algebra over D: {obj!r}") from None


def _field_from_json(obj) -> BaseField:
    if obj is None:
        return QQ
    if not isinstance(obj, dict) or obj.get("kind") not in ("Q", "Qsqrt"):
        raise ParseError('field must be {"kind": "Q"} or {"kind": "Qsqrt", "d": int}')
    if obj["kind"] == "Q":
        return QQ
    d = obj.get("d")
    if not isinstance(d, int) or isinstance(d, bool):
        raise ParseError("Qsqrt field needs an integer d")
    try:
        return BaseField(d)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def algebra_from_json(obj) -> AlgebraWithInvolution:
    if not isinstance(obj, dict):
        raise ParseError("algebra descriptor must be an object")
    F = _field_from_json(obj.get("field"))
    div = obj.get("division", {"kind": "split"})
    if not isinstance(div, dict):
        raise ParseError("division must be an object")
    kind = div.get("kind")
    try:
        if kind == "split":
            D = Division.split(F)
            theta = CanonicalTheta.identity()
        elif kind == "quaternion":
            D = Division.quaternion(
                F, field_element_from_json(div["a"], F), field_element_from_json(div["b"], F)
            )
            if div.get("s") is not None:
                theta = CanonicalTheta.twisted(delement_from_json(div["s"], D))
            else:
                theta = CanonicalTheta.conjugation()
        elif kind == "quadratic_ext":
            D = Division.quadratic_ext(F, field_element_from_json(div["delta"], F))
            theta = CanonicalTheta.conjugation()
        else:
            raise ParseError(f"unknown division kind {kind!r}")
    except KeyError as exc:
        raise ParseError(f"division descriptor is missing {exc}") from None
    ell = obj.get("ell", 1)
    if not isinstance(ell, int) or isinstance(ell, bool) or ell < 1:
        raise ParseError("ell must be a positive integer")
    phi = obj.get("phi")
    if phi is None:
        return make_algebra(F, D, theta, ell, None)
    if not (isinstance(phi, list) and len(phi) == ell
            and all(isinstance(r, list) and len(r) == ell for r in phi)):
        raise ParseError(f"phi must be an {ell}x{ell} nested array")
    rows = [[delement_from_json(x, D) for x in r] for r in phi]
    return make_algebra(F, D, theta, ell, rows)


def algebra_to_json(A: AlgebraWithInvolution) -> dict:
    F = A.field
    field = {"kind": "Q"} if F.d is None else {"kind": "Qsqrt", "d": F.d}
    D = A.division
    if D.kind == "split":
        div = {"kind": "split"}
    elif D.kind == "quaternion":
        div = {"kind": "quaternion", "a": field_element_to_json(D.a, F),
               "b": field_element_to_json(D.b, F)}
        if A.theta.kind == "twisted":
            div["s"] = delement_to_json(A.theta.s, F)
    else:
        div = {"kind": "quadratic_ext", "delta": field_element_to_json(D.delta, F)}
    return {"field": field, "division": div, "ell": A.ell, "phi": element_to_json(A, A.phi)}


def form_from_json(obj, A: AlgebraWithInvolution | None = None) -> HermitianForm:
    if not isinstance(obj, dict):
        raise ParseError("form descriptor must be an object")
    if A is None or obj.get("algebra") is not None:
        A = algebra_from_json(obj.get("algebra"))
    gram = obj.get("gram")
    if not isinstance(gram, list) or any(not isinstance(r, list) for r in gram):
        raise ParseError("gram must be a nested array")
    eps = obj.get("epsilon", 1)
    if eps not in (1, -1):
        raise ParseError("epsilon must be 1 or -1")
    D = A.division
    rows = [[delement_from_json(x, D) for x in r] for r in gram]
    return HermitianForm(A, rows, eps)


def form_to_json(h: HermitianForm) -> dict:
    A = h.algebra
    return {
        "algebra": algebra_to_json(A),
        "gram": [[delement_to_json(x, A.field) for x in r] for r in h.gram],
        "epsilon": h.epsilon,
    }


def certificate_to_json(A: AlgebraWithInvolution, cert: SOHSCertificate) -> dict:
    return {
        "a": element_to_json(A, A.element(cert.a)),
        "weights": [field_element_to_json(b, A.field) for b in cert.weights],
        "exponent": cert.exponent,
        "terms": {k: [element_to_json(A, A.element(x)) for x in v] for k, v in sorted(cert.terms.items())},
    }


def certificate_from_json(obj, A: AlgebraWithInvolution) -> SOHSCertificate:
    if not isinstance(obj, dict):
        raise MalformedCertificate("certificate must be an object")
    try:
        a = element_from_json(obj.get("a", "1"), A)
        weights = tuple(field_element_from_json(b, A.field) for b in obj.get("weights", []))
        exponent = obj.get("exponent", 0)
        terms_obj = obj.get("terms", {})
        if not isinstance(terms_obj, dict):
            raise MalformedCertificate("terms must map bit strings to element lists")
        terms = {str(k): [element_from_json(x, A) for x in v] for k, v in terms_obj.items()}
    except ParseError as exc:
        raise MalformedCertificate(str(exc)) from None
    if not isinstance(exponent, int) or isinstance(exponent, bool):
        raise MalformedCertificate("exponent must be an integer")
    return SOHSCertificate(a=a, weights=weights, exponent=exponent, terms=terms)


def ordering_key(P) -> str:
    return f"P{P.index}"


def to_plain(obj):
    """Make dataclass-free values JSON-serializable (Fractions, field elements)."""
    if isinstance(obj, Rational) and not isinstance(obj, (bool, int)):
        return rational_to_json(obj)
    if isinstance(obj, FieldElement):
        return field_element_to_json(obj)
    if isinstance(obj, dict):
        return {k: to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_plain(v) for v in obj.tolist()]
    return obj
