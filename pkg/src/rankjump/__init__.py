"""Certified Mordell-Weil rank jumps on elliptic fibrations over Q.

Exact arithmetic end to end: rational points of a fibration's total space
are projected into fibers, screened for torsion, and certified independent
via interval Gram determinants of canonical heights, yielding auditable
rank lower bounds that exceed the declared generic rank.
"""

from .curves import Curve, INFINITY, Point, add, integral_model, is_torsion, mul, neg, on_curve
from .engine import (
    BillingCertificate,
    NeronCheckReport,
    ScanReport,
    WitnessCertificate,
    billing_build,
    certify_fiber,
    neron_check,
    scan,
)
from .errors import RankJumpError
from .families import (
    CubicPencil,
    Family,
    TwistLinear,
    TwistPoly,
    TwistQuadratic,
    WeierstrassPencil,
    family_from_json,
    fiber_at,
    validate_family,
    witness_stream,
)
from .heights import GramCertificate, HeightEstimate, canonical_height, gram_certify, height_pairing

__version__ = "0.1.0"

__all__ = [
    "BillingCertificate",
    "CubicPencil",
    "Curve",
    "Family",
    "GramCertificate",
    "HeightEstimate",
    "INFINITY",
    "NeronCheckReport",
    "Point",
    "RankJumpError",
    "ScanReport",
    "TwistLinear",
    "TwistPoly",
    "TwistQuadratic",
    "WeierstrassPencil",
    "WitnessCertificate",
    "add",
    "billing_build",
    "canonical_height",
    "certify_fiber",
    "family_from_json",
    "fiber_at",
    "gram_certify",
    "height_pairing",
    "integral_model",
    "is_torsion",
    "mul",
    "neg",
    "neron_check",
    "on_curve",
    "scan",
    "validate_family",
    "witness_stream",
    "__version__",
]
