"""Exact toric machinery for finite-colength ideals in two power series variables.

The package computes group orbits of monomial ideals, one-parameter flat
limits, the normal fan attached to an orbit closure, boundary diagrams, and
coordinate spans of small multi-factor families, all in exact arithmetic.
"""

from .errors import (
    DomainError,
    HilbfanError,
    ParseError,
    RankError,
    StructuralZero,
    UnsupportedMeasuringSequence,
)
from .fan import (
    AdjacentLimits,
    BoundaryDiagram,
    Cone,
    Fan2D,
    adjacent,
    boundary_diagram,
    graded_cell_counts,
    median_check,
    median_point,
    multiplicativity_check,
    self_intersections,
    standard_fan,
)
from .limits import BoxIdeal, elementary_limit, elementary_limit_box, line_limit_exponents
from .orbit import (
    G32,
    G41,
    G51,
    Family,
    ParamIdeal,
    directional_limit,
    param_ideal,
    power_param_ideal,
    ray_limits,
    select_family,
)
from .poly import VARS, MultiPoly
from .scalars import Scalar
from .segre3 import (
    Facet,
    SupportPicture,
    coordinate_span,
    hull3_faces,
    minor_span,
    support_picture,
    window_matrix,
)
from .staircase import (
    Staircase,
    enumerate_between,
    from_cells,
    from_monomials,
    measuring_sequence,
)
from .svg import diagram_svg, fan_svg, support3_svg
from .verify import (
    ClaimReport,
    run_all,
    verify_alignment_properties,
    verify_claim,
    verify_figure1,
    verify_figure2,
    verify_figure3,
    verify_limit_identities,
)

__all__ = [
    "AdjacentLimits",
    "BoundaryDiagram",
    "BoxIdeal",
    "ClaimReport",
    "Cone",
    "DomainError",
    "Facet",
    "Family",
    "Fan2D",
    "G32",
    "G41",
    "G51",
    "HilbfanError",
    "MultiPoly",
    "ParamIdeal",
    "ParseError",
    "RankError",
    "Scalar",
    "Staircase",
    "StructuralZero",
    "SupportPicture",
    "UnsupportedMeasuringSequence",
    "VARS",
    "adjacent",
    "boundary_diagram",
    "coordinate_span",
    "diagram_svg",
    "directional_limit",
    "elementary_limit",
    "elementary_limit_box",
    "enumerate_between",
    "fan_svg",
    "from_cells",
    "from_monomials",
    "graded_cell_counts",
    "hull3_faces",
    "line_limit_exponents",
    "measuring_sequence",
    "median_check",
    "median_point",
    "minor_span",
    "multiplicativity_check",
    "param_ideal",
    "power_param_ideal",
    "ray_limits",
    "run_all",
    "select_family",
    "self_intersections",
    "standard_fan",
    "support3_svg",
    "support_picture",
    "verify_alignment_properties",
    "verify_claim",
    "verify_figure1",
    "verify_figure2",
    "verify_figure3",
    "verify_limit_identities",
    "window_matrix",
]

__version__ = "0.1.0"
