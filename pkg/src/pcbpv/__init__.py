"""Polarized call-by-push-value with equirecursive types.

Submodules: ``core`` (syntax, validation, normalization), ``parser``,
``dynamics``, ``inhabit`` (emptiness and fullness), ``subtype``,
``typecheck``, ``semantics`` (bounded semantic oracle), ``frontends``
(isorecursive, call-by-name and call-by-value) and ``cli``.
"""

from .core import Signature, normalize_signature, validate_signature, validate_type
from .dynamics import evaluate, step
from .inhabit import compute_inhabited
from .parser import (
    ParseError, parse_computation, parse_lambda_signature, parse_signature, parse_type,
    parse_value, print_signature,
)
from .subtype import SubtypeState, sub_types
from .typecheck import TypingError, check_signature

__version__ = "0.1.0"

__all__ = [
    "ParseError", "Signature", "SubtypeState", "TypingError", "check_signature",
    "compute_inhabited", "evaluate", "normalize_signature", "parse_computation",
    "parse_lambda_signature", "parse_signature", "parse_type", "parse_value", "print_signature",
    "step", "sub_types", "validate_signature", "validate_type",
]
