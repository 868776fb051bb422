"""Finite-ring functional equations and linking orders for GL_2 and a quaternion algebra.

The finite side (fields, characters, rings, transforms, representations)
verifies the functional equations numerically; the lattice side checks the
module identities of the linking orders exactly over F_p((t)).
"""
from .errors import (
    ConstructionError,
    NotAUnitError,
    NotRegularError,
    SizeCapError,
    TrivialCharacterError,
    WindowError,
)
from .fields import FieldElement, FieldSpec, field_create
from .results import CheckResult, Report

__version__ = "0.1.0"

__all__ = [
    "field_create", "FieldSpec", "FieldElement", "CheckResult", "Report",
    "SizeCapError", "NotAUnitError", "NotRegularError", "TrivialCharacterError",
    "ConstructionError", "WindowError",
]
