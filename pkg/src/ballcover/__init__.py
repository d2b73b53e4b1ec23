"""Ball coverings by congruent subsets, with deterministic numerical audits.

The library builds finite coverings of a ball in (R^m, l_p), certifies the
congruence of their members with explicit witness motions, classifies the
centre against set interiors, and numerically checks the resulting
all-or-no-interiors dichotomy, an antipodal-pair search on the sphere, and a
counterexample separating l_{3/2} from inner-product geometry.
"""

from .audits import (
    AntipodalResult,
    CenterClassification,
    CoverageGapError,
    DichotomyReport,
    antipodal_search,
    check_congruence,
    check_coverage,
    classify_center,
    counterexample_r2_32,
    dichotomy_audit,
    sample_members,
)
from .coverings import (
    Covering,
    DirectionNet,
    direction_net,
    duplicate_extend,
    halfball_covering,
    ommatidium_covering,
    slab_covering,
    universal_covering,
    universal_witness,
)
from .motions import (
    ComposedLinear,
    Identity,
    LinearIsometry,
    Motion,
    PlanarRotation,
    ScaledLinear,
    SignedPermutation,
    compose,
    decompose,
    identity_motion,
    motion_audit,
    planar_rotation_between,
    scale_linear_part,
    translation,
    trivial_shift_premise,
)
from .reports import AuditReport, make_report
from .serialization import (
    SerializationError,
    covering_from_dict,
    covering_to_dict,
    load_covering,
    motion_from_dict,
    motion_to_dict,
    save_covering,
    shape_from_dict,
    shape_to_dict,
    space_from_dict,
    space_to_dict,
)
from .shapes import (
    ClosedBall,
    FiniteUnion,
    Image,
    InteriorStatus,
    Ommatidium,
    OpenBall,
    Shape,
    SlabCap,
    Sphere,
    contains,
    image,
    interior_classify,
)
from .spaces import (
    ConvexityWitness,
    Space,
    angle,
    inner,
    ncs_violation_search,
    sample_ball,
    sample_sphere,
)

__version__ = "0.1.0"

__all__ = [
    "AntipodalResult",
    "AuditReport",
    "CenterClassification",
    "ClosedBall",
    "ComposedLinear",
    "ConvexityWitness",
    "CoverageGapError",
    "Covering",
    "DichotomyReport",
    "DirectionNet",
    "FiniteUnion",
    "Identity",
    "Image",
    "InteriorStatus",
    "LinearIsometry",
    "Motion",
    "Ommatidium",
    "OpenBall",
    "PlanarRotation",
    "ScaledLinear",
    "SerializationError",
    "Shape",
    "SignedPermutation",
    "SlabCap",
    "Space",
    "Sphere",
    "angle",
    "antipodal_search",
    "check_congruence",
    "check_coverage",
    "classify_center",
    "compose",
    "contains",
    "counterexample_r2_32",
    "covering_from_dict",
    "covering_to_dict",
    "decompose",
    "dichotomy_audit",
    "direction_net",
    "duplicate_extend",
    "halfball_covering",
    "identity_motion",
    "image",
    "inner",
    "interior_classify",
    "load_covering",
    "make_report",
    "motion_audit",
    "motion_from_dict",
    "motion_to_dict",
    "ncs_violation_search",
    "ommatidium_covering",
    "planar_rotation_between",
    "sample_ball",
    "sample_members",
    "sample_sphere",
    "save_covering",
    "scale_linear_part",
    "shape_from_dict",
    "shape_to_dict",
    "slab_covering",
    "space_from_dict",
    "space_to_dict",
    "translation",
    "trivial_shift_premise",
    "universal_covering",
    "universal_witness",
]
