"""Simultaneous Taylor-truncation toolkit.

Classify families of truncation-index sequences, construct polynomial
witnesses whose partial sums approximate several targets at one shared index,
and probe the coefficient gap structure those witnesses inherit.
"""

__version__ = "0.1.0"

from .bernstein_walsh import (
    ContourBoundReport,
    NewtonForm,
    RecipPower,
    best_approx_error,
    bw_construct,
    bw_construct_full,
    local_bound_check,
)
from .construct import (
    ConstructionReport,
    ConstructionScenario,
    FinalErrors,
    StagedPolynomial,
    StageRecord,
    TargetBundle,
    UmultReport,
    build_stage,
    read_witness,
    run_construction,
    runge_seed,
    verify_umult,
    write_witness,
)
from .gaps import (
    CollapseTable,
    GapScan,
    GapStructure,
    InvarianceTable,
    SelectorTable,
    center_invariance_check,
    detect_gaps,
    gap_selector,
    norm_filter,
    read_coefficients,
    tail_collapse_check,
    write_coefficients,
)
from .geometry import (
    ArcPrim,
    CompactSetSample,
    Contour,
    DiskPrim,
    DomainSpec,
    OpenDisk,
    OpenHalfPlane,
    PolygonPrim,
    RegionUnion,
    SegmentPrim,
    make_contour,
    make_exhaustion,
)
from .polynomials import ComplexPolynomial, DegreeBand, from_roots, horner_noise, zero
from .potential import ExtremalPoints, capacity, fekete_points, green_eval, theta
from .scenario import Scenario, ScenarioError, load_scenario, parse_scenario
from .sequences import (
    CriterionCertificate,
    CriterionResult,
    IndexSequence,
    SequenceFamily,
    criterion_subsequence,
    is_well_ordered,
    limsup_ratio,
    rearrange_well_ordered,
)
