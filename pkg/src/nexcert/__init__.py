"""Exact certificates for surjective displacement and unique fixed points of
nonexpansive maps on polyhedral normed spaces."""

__version__ = "0.1.0"

from .certificate import Certificate, Verdict
from .certify import (
    certify_surjective,
    certify_unique,
    certify_unique_eigenvector,
    certify_unique_subtopical,
    certify_unique_via_semiderivative,
    certify_via_recession,
    face_lattice_map,
    illumination_check,
    invariant_face_search,
    recession_map,
    semiderivative,
)
from .polynorm import builtin_norm, custom_norm, enumerate_proper_faces
from .topical import certify_subtopical, certify_topical

__all__ = [
    "Certificate",
    "Verdict",
    "builtin_norm",
    "custom_norm",
    "enumerate_proper_faces",
    "certify_surjective",
    "certify_unique",
    "certify_unique_eigenvector",
    "certify_unique_subtopical",
    "certify_unique_via_semiderivative",
    "certify_via_recession",
    "certify_subtopical",
    "certify_topical",
    "face_lattice_map",
    "illumination_check",
    "invariant_face_search",
    "recession_map",
    "semiderivative",
]
