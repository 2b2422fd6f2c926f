"""Command-line front end.

Exit codes: 0 success, 2 domain error, 64 unreadable input, 70 internal
contract violation.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .algebras import matrix_algebra
from .certificates import bounded_search, split_psd_certificate, verify_sohs
from .errors import ContractViolation, DomainError, ParseError, SearchExhausted
from .fields import QQ, Ordering
from .forms import HermitianForm, nonsingular_part
from .jsonio import (
    algebra_from_json,
    algebra_to_json,
    certificate_from_json,
    certificate_to_json,
    element_from_json,
    element_to_json,
    field_element_from_json,
    field_element_to_json,
    form_from_json,
    ordering_key,
    to_plain,
)
from .positivity import (
    involution_signature,
    is_psd_at,
    maximality_trace_audit,
    ps_prime_check,
    trace_form,
    x_sigma,
)
from .signatures import (
    classify_ordering,
    is_maximal,
    reference_tuple,
    signed_signature,
    x_tilde,
)

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_PARSE = 64
EXIT_CONTRACT = 70

SUBCOMMANDS = (
    "classify", "signature", "maximal", "trace-form", "x-sigma",
    "ps-check", "certify", "verify", "audit",
)


def _load(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None


def _algebra(doc):
    """Accept either a bare algebra descriptor or an object with an "algebra" key."""
    if isinstance(doc, dict) and "algebra" in doc:
        return algebra_from_json(doc["algebra"])
    return algebra_from_json(doc)


def _orderings(A, args):
    orderings = A.field.orderings()
    if args.ordering is None:
        return orderings
    try:
        return (Ordering(args.ordering, A.field),)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def _element(doc, A, key="u", default=None):
    if not isinstance(doc, dict) or key not in doc:
        if default is not None:
            return A.element(default)
        raise ParseError(f'input needs a "{key}" entry')
    return element_from_json(doc[key], A)


def _form_or_element(doc, A):
    if isinstance(doc, dict) and "form" in doc:
        return form_from_json(doc["form"], A)
    return HermitianForm(A, _element(doc, A, default=1), 1)


def cmd_classify(doc, args):
    A = _algebra(doc)
    out = {}
    for P in _orderings(A, args):
        p = classify_ordering(A, P)
        out[ordering_key(P)] = {
            "nil": p.nil, "lambda": p.lambda_P, "nP": p.n_P, "MP": p.M_P, "mP": p.m_P,
        }
    return out


def cmd_signature(doc, args):
    A = _algebra(doc)
    h = _form_or_element(doc, A)
    ns = nonsingular_part(h)
    eta = reference_tuple(A, max_height=args.height_bound + 1)
    sig = {ordering_key(P): signed_signature(A, eta, ns, P) for P in _orderings(A, args)}
    return {"rank": ns.rank, "signature": sig}


def cmd_maximal(doc, args):
    A = _algebra(doc)
    h = _form_or_element(doc, A)
    eta = reference_tuple(A, max_height=args.height_bound + 1)
    return {ordering_key(P): is_maximal(A, eta, h, P) for P in _orderings(A, args)}


def cmd_trace_form(doc, args):
    A = _algebra(doc)
    u = _element(doc, A, default=1)
    T = trace_form(A, u)
    out = {
        "gram": [[field_element_to_json(x, A.field) for x in row] for row in T.gram],
        "signature": {ordering_key(P): T.signature(P) for P in _orderings(A, args)},
        "psd": {ordering_key(P): is_psd_at(T, P) for P in _orderings(A, args)},
    }
    if T.second_kind:
        out["hermitian_gram"] = [[[field_element_to_json(c, A.field) for c in x.c] for x in row]
                                 for row in T.hermitian_gram]
    return out


def _indices(S):
    return sorted(P.index for P in S)


def cmd_x_sigma(doc, args):
    A = _algebra(doc)
    return {
        "x_sigma": _indices(x_sigma(A)),
        "x_tilde": _indices(x_tilde(A)),
        "involution_signature": {ordering_key(P): involution_signature(A, P)
                                 for P in _orderings(A, args)},
    }


def cmd_ps_check(doc, args):
    A = _algebra(doc)
    v = ps_prime_check(A)
    if v.holds:
        return {"holds": True, "witness": None, "ordering": None}
    return {"holds": False, "witness": "1", "ordering": v.ordering.index}


def cmd_certify(doc, args):
    if isinstance(doc, list):
        doc = {"u": doc}
    if not isinstance(doc, dict) or "u" not in doc:
        raise ParseError('certify needs a matrix or an object with "u"')
    if "algebra" in doc:
        A = algebra_from_json(doc["algebra"])
    else:
        u_obj = doc["u"]
        n = len(u_obj) if isinstance(u_obj, list) else 1
        A = matrix_algebra(QQ, n)
    u = element_from_json(doc["u"], A)
    a_obj = doc.get("a")
    weights_obj = doc.get("weights", [])
    plain = "algebra" not in doc and a_obj is None and not weights_obj
    if plain:
        cert = split_psd_certificate([[x.c[0] for x in row] for row in u])
        cert.terms = {k: [A.element(X) for X in v] for k, v in cert.terms.items()}
    else:
        a = element_from_json(a_obj, A) if a_obj is not None else A.one
        weights = [field_element_from_json(b, A.field) for b in weights_obj]
        cert = bounded_search(A, u, a, weights, max_exponent=args.max_exponent,
                              height_bound=args.height_bound)
        if cert is None:
            raise SearchExhausted(
                "no certificate found within the search bounds (this does not prove none exists)"
            )
    return {
        "algebra": algebra_to_json(A),
        "u": element_to_json(A, u),
        "certificate": certificate_to_json(A, cert),
    }


def cmd_verify(doc, args):
    if not isinstance(doc, dict) or "certificate" not in doc:
        raise ParseError('verify needs {"algebra", "u", "certificate"}')
    A = _algebra(doc) if "algebra" in doc else matrix_algebra(QQ, len(doc["u"]))
    u = _element(doc, A)
    cert = certificate_from_json(doc["certificate"], A)
    return {"valid": verify_sohs(A, u, cert)}


def cmd_audit(doc, args):
    A = _algebra(doc)
    u = _element(doc, A, default=1)
    eta = reference_tuple(A, max_height=args.height_bound + 1)
    rep = maximality_trace_audit(A, eta, u)
    return {
        "agree": rep.agree,
        "x_sigma": _indices(rep.x_sigma),
        "orderings": {
            ordering_key(o.P): {
                "maximal": o.maximal,
                "psd": o.psd,
                "agree": o.agree,
                "definite_iff_pm_maximal": o.definite_iff_pm_maximal,
                "refinement": o.refinement,
            }
            for o in rep.orderings
        },
    }


HANDLERS = {
    "classify": cmd_classify,
    "signature": cmd_signature,
    "maximal": cmd_maximal,
    "trace-form": cmd_trace_form,
    "x-sigma": cmd_x_sigma,
    "ps-check": cmd_ps_check,
    "certify": cmd_certify,
    "verify": cmd_verify,
    "audit": cmd_audit,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hermsig",
        description="Signatures, positivity and sum-of-hermitian-squares certificates "
                    "for algebras with involution.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("--input", "-i", default="-", help="JSON input file ('-' for stdin)")
    parser.add_argument("--ordering", type=int, default=None,
                        help="restrict per-ordering output to this index")
    parser.add_argument("--json", action="store_true", help="emit JSON instead of text")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for randomized internals (the current core is deterministic)")
    parser.add_argument("--height-bound", type=int, default=2,
                        help="coordinate height bound for searches")
    parser.add_argument("--max-exponent", type=int, default=3,
                        help="largest exponent s allowed in generated certificates")
    return parser


def _human(obj, indent=0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            if isinstance(v, dict):
                lines.append(f"{pad}{k}:")
                lines.append(_human(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v)}")
        return "\n".join(lines)
    return pad + json.dumps(obj)


def _emit(obj, as_json: bool, stream):
    if as_json:
        stream.write(json.dumps(obj, sort_keys=False, separators=(",", ":")) + "\n")
    else:
        stream.write(_human(obj) + "\n")


def _error(exc, code: str, as_json: bool, extra=None):
    err = {"code": code, "message": str(exc)}
    if extra:
        err.update(extra)
    obj = {"error": err}
    _emit(obj, as_json, sys.stdout if as_json else sys.stderr)


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc = _load(args.input)
        result = HANDLERS[args.subcommand](doc, args)
    except ParseError as exc:
        _error(exc, exc.code, args.json)
        return EXIT_PARSE
    except DomainError as exc:
        extra = {}
        if getattr(exc, "index", None) is not None:
            extra["index"] = exc.index
            extra["entry"] = field_element_to_json(exc.entry)
        _error(exc, exc.code, args.json, extra)
        return EXIT_DOMAIN
    except ContractViolation as exc:
        _error(exc, exc.code, args.json)
        return EXIT_CONTRACT
    _emit(to_plain(result), args.json, sys.stdout)
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
