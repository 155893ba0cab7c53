"""Completion of partial affine planes and partial inversive planes."""

from ._accel import backend, set_backend
from .bounds import bound_report, exceeds, remark_check, which_min
from .completion import (
    complete_low_valency,
    complete_pap,
    complete_partial_projective_search,
    extend_to_partial_projective,
    extend_with_class_points,
    strip_infinity,
)
from .constructions import (
    affine_plane,
    affine_space_line_design,
    baer_example,
    delete_blocks,
    miquelian_inversive_plane,
    projective_plane,
    random_deletion,
    transversal_design,
)
from .incidence import DesignParams, GddType, IncidenceStructure, is_design, is_partial_design, new_structure
from .inversive import corollary310_router, derive_and_complete_all, glue_completion
from .io import parse, serialize
from .oracle import CompletionResult, Method, OracleOutcome, oracle_complete
from .parallelism import classify_parallelism

__version__ = "0.1.0"
