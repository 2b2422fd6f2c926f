"""Exact signatures, positivity tests and sum-of-hermitian-squares certificates
for central simple algebras with involution over Q and real quadratic fields."""

__version__ = "0.1.0"

from .algebras import (
    AlgebraWithInvolution,
    CanonicalTheta,
    DElement,
    Division,
    apply_sigma,
    hamilton,
    involution_type,
    is_symmetric,
    make_algebra,
    matrix_algebra,
    quaternion_algebra,
    reduced_trace,
    unitary_algebra,
)
from .certificates import (
    SOHSCertificate,
    bounded_search,
    four_squares,
    split_psd_certificate,
    verify_sohs,
)
from .errors import ContractViolation, DomainError
from .fields import (
    QQ,
    BaseField,
    FieldElement,
    Ordering,
    congruence_diagonalize,
    orderings,
    sign_at,
    symmetric_signature,
)
from .forms import (
    HarrisonSet,
    HermitianForm,
    QuadraticFormF,
    diagonalize,
    evaluate,
    harrison,
    nonsingular_part,
    orth_sum,
    pfister,
    represents,
    scale_by,
    tensor,
)
from .morita import MoritaContext, adjoint_involution, collapse, lift, scale
from .positivity import (
    PSVerdict,
    TraceForm,
    choose_positive_theta,
    involution_signature,
    is_psd_at,
    maximality_trace_audit,
    ps_prime_check,
    trace_form,
    x_sigma,
)
from .signatures import (
    OrderingProfile,
    ReferenceTuple,
    classify_ordering,
    is_maximal,
    maximal_form,
    raw_signature,
    reference_tuple,
    signed_signature,
    x_tilde,
)

__all__ = [
    "AlgebraWithInvolution",
    "BaseField",
    "CanonicalTheta",
    "ContractViolation",
    "DElement",
    "Division",
    "DomainError",
    "FieldElement",
    "HarrisonSet",
    "HermitianForm",
    "MoritaContext",
    "Ordering",
    "OrderingProfile",
    "PSVerdict",
    "QQ",
    "QuadraticFormF",
    "ReferenceTuple",
    "SOHSCertificate",
    "TraceForm",
    "adjoint_involution",
    "apply_sigma",
    "bounded_search",
    "choose_positive_theta",
    "classify_ordering",
    "collapse",
    "congruence_diagonalize",
    "diagonalize",
    "evaluate",
    "four_squares",
    "hamilton",
    "harrison",
    "involution_signature",
    "involution_type",
    "is_maximal",
    "is_psd_at",
    "is_symmetric",
    "lift",
    "make_algebra",
    "matrix_algebra",
    "maximal_form",
    "maximality_trace_audit",
    "nonsingular_part",
    "orderings",
    "orth_sum",
    "pfister",
    "ps_prime_check",
    "quaternion_algebra",
    "raw_signature",
    "reduced_trace",
    "reference_tuple",
    "represents",
    "scale",
    "scale_by",
    "sign_at",
    "signed_signature",
    "split_psd_certificate",
    "symmetric_signature",
    "tensor",
    "trace_form",
    "unitary_algebra",
    "verify_sohs",
    "x_sigma",
    "x_tilde",
    "__version__",
]
