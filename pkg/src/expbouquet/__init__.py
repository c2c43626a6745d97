"""Tools for the exponential family ``z -> e^z + a``: orbit classification
with tower arithmetic for astronomically fast escape, hair tracing by
symbolic addresses, a deterministic parallel rasterizer, and the drift map
``z -> z + 1 + e^-z`` with its exponential semiconjugacy.
"""

from .classify import (
    Attracting,
    Basin,
    ConvergenceError,
    EscapingSlow,
    FastEscaping,
    NonEscapingBounded,
    ParabolicSuspect,
    PostsingularlyFinite,
    SingularValueEscapes,
    Undecided,
    Undetermined,
    classify_param,
    classify_point,
    fast_escape_test,
    find_cycle,
    is_meandering_candidate,
    report_line,
)
from .expmap import (
    OrbitSample,
    Params,
    deriv_map,
    eval_map,
    max_modulus,
    max_modulus_iterates,
    orbit,
    orbit_to_csv,
)
from .fatoufn import (
    fatou_classify,
    fatou_eval,
    fatou_orbit,
    h_eval,
    semiconj_residual,
)
from .render import (
    ImageGrid,
    RenderSpec,
    classification_csv,
    classify_grid,
    default_viewport,
    escape_fraction,
    render,
    write_pgm,
)
from .symbolic import (
    ExternalAddress,
    HairPoint,
    Membership,
    PreconditionError,
    SeparationConfig,
    endpoint_estimate,
    find_domination_index,
    inverse_branch,
    itinerary,
    real_part_margin,
    separating_set_membership,
    separation_index,
    strip_index,
    trace_hair,
)
from .towerfloat import H, LN_H, TowerReal, tf_cmp, tf_exp, tf_from_real, tf_ln

__version__ = "0.1.0"

__all__ = [
    "Attracting",
    "Basin",
    "ConvergenceError",
    "EscapingSlow",
    "ExternalAddress",
    "FastEscaping",
    "H",
    "HairPoint",
    "ImageGrid",
    "LN_H",
    "Membership",
    "NonEscapingBounded",
    "OrbitSample",
    "ParabolicSuspect",
    "Params",
    "PostsingularlyFinite",
    "PreconditionError",
    "RenderSpec",
    "SeparationConfig",
    "SingularValueEscapes",
    "TowerReal",
    "Undecided",
    "Undetermined",
    "classification_csv",
    "classify_grid",
    "classify_param",
    "classify_point",
    "default_viewport",
    "deriv_map",
    "endpoint_estimate",
    "escape_fraction",
    "eval_map",
    "fast_escape_test",
    "fatou_classify",
    "fatou_eval",
    "fatou_orbit",
    "find_cycle",
    "find_domination_index",
    "h_eval",
    "inverse_branch",
    "is_meandering_candidate",
    "itinerary",
    "max_modulus",
    "max_modulus_iterates",
    "orbit",
    "orbit_to_csv",
    "real_part_margin",
    "render",
    "report_line",
    "semiconj_residual",
    "separating_set_membership",
    "separation_index",
    "strip_index",
    "tf_cmp",
    "tf_exp",
    "tf_from_real",
    "tf_ln",
    "trace_hair",
    "write_pgm",
]
