"""squarescope: a numerical lab for inscribed squares on closed curves.

The package finds and classifies inscribed squares of sampled Jordan
curves, traces square-envelope candidates on the parameter cylinder,
checks parity invariants linking both, and provides the one-dimensional
spiral calculus (relation-avoiding paths, split pairs, trochoid
solvability) used to study origin paths.
"""

from .curves import (
    ClosedCurve,
    SignField,
    circle_curve,
    curve_from_csv,
    curve_from_json,
    curve_to_csv,
    curve_to_json,
    ellipse_curve,
    load_curve,
    random_generic_curve,
    save_curve,
    validate_curve,
)
from .envelope import (
    AntidiagonalReport,
    CylinderPath,
    DegreeReport,
    EnvelopeCandidate,
    EnvelopeCheck,
    Lemma2Report,
    antidiagonal_winding,
    build_envelope_candidate,
    degree_consistency,
    lemma2_check,
    sigma_sign,
    trace_quadrant_components,
    verify_envelope,
)
from .errors import (
    BranchJump,
    ContinuumSuspected,
    DegenerateParams,
    DegenerateSamples,
    EmptyInterval,
    InsufficientSamples,
    NotSimple,
    OnBoundary,
    OnPath,
    PointOnLoop,
    SquarescopeError,
    TruncationTooShort,
    WindowExhausted,
    ZeroElement,
    ZeroOnLoop,
)
from .geometry import Point2, dist_mod1, rotate90, square_corners, winding_number
from .spirals import (
    DerivationRun,
    LiftedPath,
    MultiplierRelation,
    OriginPath1D,
    RelationCheck,
    SpiralAngle,
    SplitPair,
    derivation_trajectory,
    derive,
    find_spiral_angle,
    in_region_U,
    is_good,
    is_relation_avoiding,
    k_index,
    lift_log,
    spiral_path,
    square_corner_set,
    square_relation_holds,
    swept_area_pair,
)
from .squares import (
    SquareCandidate,
    SquareSearch,
    SquareType,
    TorusZero,
    classify_square,
    count_by_type,
    find_inscribed_squares,
    g_map,
    in_region_A,
    prop2_case,
    torus_grid_eval,
)
from .trochoid import (
    HalfLine,
    HullQuery,
    SolveResult,
    TrochoidArc,
    TrochoidInstance,
    arc_for,
    c_of_s,
    exists_solution,
    hull_membership,
    in_hull_H,
    instance_period_window,
    lhs_value,
    radial_property_check,
    random_arc,
    random_instance,
    rhs_value,
    t_interval,
    trochoid_point,
    with_lambda,
)

__version__ = "0.1.0"
