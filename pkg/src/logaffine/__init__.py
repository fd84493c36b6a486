"""Combinatorial models of log affine surfaces.

The package builds tropical domains from rational fans, welds them
into surfaces with normal-crossing divisors, computes logarithmic
cohomology dimensions, validates convex polytopes carried by the
welded surfaces (compactness, lattice smoothness, principal-value
volumes), and assembles the invariant records used to compare the
resulting classification data.
"""

from __future__ import annotations

from .classification import (
    CutReport,
    InvariantRecord,
    LogBundle,
    ObstructionStatus,
    StratumEntry,
    cut_report,
    effective_moduli_dimension,
    make_bundle,
    make_invariant_record,
    moduli_dimension,
    obstruction_vanishes,
    records_equivalent,
)
from .domains import TropicalDomain, build_domain, corner_quadrants, residue
from .errors import (
    ContinuationError,
    DegenerateVertexError,
    DelzantError,
    DependentGeneratorsError,
    DimensionMismatchError,
    FaceInUseError,
    GeometryError,
    GloballyObstructedError,
    InvalidFanError,
    NonCompactError,
    NonIntegerEntryError,
    NonOrientableError,
    NotMatchedError,
    ObstructionUnknownError,
    PolytopeError,
    SingularFaceError,
    SpecFileError,
    TransversalityError,
    UnsupportedDimensionError,
    WeldingError,
)
from .fans import Fan, FanReport, is_complete, make_fan, star, validate_fan
from .fileio import (
    PolytopeFile,
    WeldingFile,
    load_workspace_file,
    parse_bundle_file,
    parse_fan_file,
    parse_polytope_file,
    parse_welding_file,
    serialize_bundle,
    serialize_fan,
    serialize_polytope,
    serialize_record,
    serialize_welding,
    sniff_kind,
)
from .polytopes import (
    DelzantResult,
    LogPolytope,
    PolytopeSpec,
    build_polytope,
    check_face_lemmas,
    delzant_check,
    is_compact_2d,
    make_polytope_spec,
    polytope_moduli,
    polytope_topology,
    regularized_volume,
)
from .rational import (
    AffineFunctional,
    is_saturated_lattice_basis,
    smith_normal_form,
    vector,
)
from .render import render_fan, render_polytope, render_welding
from .topology import (
    CellComplex,
    betti_numbers,
    cell_complex,
    classify_closed_surface,
    divisor_topology,
    euler_characteristic,
    log_cohomology_dims,
)
from .welding import (
    MatchedPair,
    WeldedSpace,
    WeldingSpec,
    affine_monodromy,
    build_welded_space,
    coerced_pairs,
    is_locally_obstructed,
    is_matched_pair,
    make_welding_spec,
    weld_pair,
)

__version__ = "0.1.0"

__all__ = [
    "AffineFunctional",
    "CellComplex",
    "ContinuationError",
    "CutReport",
    "DegenerateVertexError",
    "DelzantError",
    "DelzantResult",
    "DependentGeneratorsError",
    "DimensionMismatchError",
    "FaceInUseError",
    "Fan",
    "FanReport",
    "GeometryError",
    "GloballyObstructedError",
    "InvalidFanError",
    "InvariantRecord",
    "LogBundle",
    "LogPolytope",
    "MatchedPair",
    "NonCompactError",
    "NonIntegerEntryError",
    "NonOrientableError",
    "NotMatchedError",
    "ObstructionStatus",
    "ObstructionUnknownError",
    "PolytopeError",
    "PolytopeFile",
    "PolytopeSpec",
    "SingularFaceError",
    "SpecFileError",
    "StratumEntry",
    "TransversalityError",
    "TropicalDomain",
    "UnsupportedDimensionError",
    "WeldedSpace",
    "WeldingError",
    "WeldingFile",
    "WeldingSpec",
    "affine_monodromy",
    "betti_numbers",
    "build_domain",
    "build_polytope",
    "build_welded_space",
    "cell_complex",
    "check_face_lemmas",
    "classify_closed_surface",
    "coerced_pairs",
    "corner_quadrants",
    "cut_report",
    "delzant_check",
    "divisor_topology",
    "effective_moduli_dimension",
    "euler_characteristic",
    "is_compact_2d",
    "is_complete",
    "is_locally_obstructed",
    "is_matched_pair",
    "is_saturated_lattice_basis",
    "load_workspace_file",
    "log_cohomology_dims",
    "make_bundle",
    "make_fan",
    "make_invariant_record",
    "make_polytope_spec",
    "make_welding_spec",
    "moduli_dimension",
    "obstruction_vanishes",
    "parse_bundle_file",
    "parse_fan_file",
    "parse_polytope_file",
    "parse_welding_file",
    "polytope_moduli",
    "polytope_topology",
    "records_equivalent",
    "regularized_volume",
    "render_fan",
    "render_polytope",
    "render_welding",
    "residue",
    "serialize_bundle",
    "serialize_fan",
    "serialize_polytope",
    "serialize_record",
    "serialize_welding",
    "sniff_kind",
    "smith_normal_form",
    "star",
    "validate_fan",
    "vector",
    "weld_pair",
]
