"""Non-real-valued measures on sets over the Puiseux field.

Values live in an ordered semiring of cuts: Zero, infinitesimal sizes
``Inf(level)`` (the size of ``t**level``) and standard sizes ``Std(r)``.  A
tropical variant collapses standard sizes and accepts sets with infinite
bounds.
"""

from .dsl import format_map, format_set, parse_map, parse_mexpr, parse_scalar, parse_set
from .errors import (
    BracketDiverged,
    ClassViolation,
    DslSyntaxError,
    MeasureError,
    NoStdInterior,
    NotFinite,
    NotMonomial,
    OutOfDomain,
    OutOfRange,
    ToleranceUnreachable,
    UnsupportedImage,
)
from .measure import (
    EngineConfig,
    LevelBracket,
    bracket_measure,
    lebesgue_std,
    measure_cell,
    measure_nu,
    measure_product,
    measure_sb,
    measure_unit,
)
from .puiseux import T, PuiseuxScalar, format_scalar, standard_part, valuation
from .semiring import (
    ONE,
    ZERO,
    Inf,
    Level,
    MeasureValue,
    Std,
    TropicalValue,
    cls,
    t_add,
    t_leq,
    t_mul,
    to_tropical,
    v_add,
    v_leq,
    v_mul,
)
from .sets import (
    DefinableSet,
    MonomialCell,
    MonomialFn,
    has_interior,
    has_std_interior,
    make_box,
    make_cell,
    product,
    restrict_by_thickness_level,
    std_part,
    union,
)
from .transforms import AffineMap, IsoPipeline, ShearMap, Swap, apply, check_invariance

__version__ = "0.1.0"
