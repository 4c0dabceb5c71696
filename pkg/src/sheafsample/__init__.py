"""Cellular sheaves, sheaf cohomology and sheaf-theoretic sampling analysis."""

from .complex import Cover, SimplicialComplex, make_face, nerve, orientation_index
from .errors import SheafError
from .sampling import (
    SamplingReport,
    SheafMorphism,
    SimplicialMap,
    ambiguity_sheaf,
    euler_check,
    full_stalk_sampling,
    induced_h0_map,
    induced_map,
    is_sampling_morphism,
    nyquist_check,
    obstruction_check,
    restrict_to_subcomplex,
    sampling_sheaf,
    validate_morphism,
)
from .sheaf import (
    CellularSheaf,
    CohomologyResult,
    coboundary,
    cochain_space,
    cohomology,
    d_squared_check,
    global_sections,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "CellularSheaf",
    "CohomologyResult",
    "Cover",
    "SamplingReport",
    "SheafError",
    "SheafMorphism",
    "SimplicialComplex",
    "SimplicialMap",
    "ambiguity_sheaf",
    "coboundary",
    "cochain_space",
    "cohomology",
    "d_squared_check",
    "euler_check",
    "full_stalk_sampling",
    "global_sections",
    "induced_h0_map",
    "induced_map",
    "is_sampling_morphism",
    "make_face",
    "nerve",
    "nyquist_check",
    "obstruction_check",
    "orientation_index",
    "restrict_to_subcomplex",
    "sampling_sheaf",
    "validate",
    "validate_morphism",
]
