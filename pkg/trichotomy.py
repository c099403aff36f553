"""Conjugacy-class count of maximal finite subgroups of Homeo+(M) for a
locally symmetric M, or of proper actions of a uniform lattice on H/K, read
off from the dimension and the singular set of the isometric action."""
import logging
from typing import Literal, Optional

from pydantic import BaseModel

logger = logging.getLogger(__name__)

SingularKind = Literal["empty", "zero_dim", "positive_dim"]
Case = Literal[
    "unique_class",
    "countably_many",
    "continuum",
    "dim4_positive_continuum",
    "dim4_discrete_unknown",
    "dim2_regime",
]

_DESCRIPTIONS = {
    "manifold": {
        "unique_class": "a unique conjugacy class of maximal finite subgroups, that of Isom+(M)",
        "countably_many": "countably infinitely many maximal finite subgroups up to conjugacy",
        "continuum": "a continuum of maximal finite subgroups up to conjugacy",
    },
    "lattice": {
        "unique_class": "topological strong rigidity: a unique proper action on H/K up to conjugacy",
        "countably_many": "countably many proper actions up to conjugacy, all locally rigid",
        "continuum": "uncountably many proper actions up to conjugacy",
    },
}
_SHARED = {
    "dim4_positive_continuum": "dimension 4 with positive-dimensional singular set: uncountably many classes",
    "dim4_discrete_unknown": "dimension 4 with finite singular set: countably many classes, uniqueness unknown",
    "dim2_regime": "surface case: no weakly exclusive group; see the genus pipeline",
}


class ProfileError(ValueError):
    pass


class GeometryProfile(BaseModel):
    ambient_dim: int
    singular: SingularKind
    singular_dim: Optional[int] = None
    has_order_two_with_fixed_points: bool = False
    context: Literal["manifold", "lattice"] = "manifold"


class TrichotomyOutcome(BaseModel):
    case: Case
    locally_rigid: bool
    description: str

    @property
    def summary(self) -> str:
        return f"{self.case}; locally_rigid={'true' if self.locally_rigid else 'false'}"


def validate_profile(p: GeometryProfile) -> None:
    if p.ambient_dim < 2:
        raise ProfileError(f"ambient dimension must be at least 2, got {p.ambient_dim}")
    if p.singular == "empty":
        if p.singular_dim is not None:
            raise ProfileError("an empty singular set has no dimension")
        if p.has_order_two_with_fixed_points:
            raise ProfileError("an order-2 element with a fixed point makes the singular set nonempty")
    elif p.singular == "zero_dim":
        if p.singular_dim not in (None, 0):
            raise ProfileError(f"zero_dim singular set declared with dimension {p.singular_dim}")
        if p.ambient_dim % 2:
            raise ProfileError(
                f"parity: a 0-dimensional singular set has odd codimension {p.ambient_dim} in dimension "
                f"{p.ambient_dim}; fixed sets of orientation-preserving maps have even codimension"
            )
    else:
        if p.ambient_dim == 2:
            raise ProfileError("a surface has no positive-dimensional fixed sets of nontrivial orientation-preserving maps")
        d = p.singular_dim
        if d is not None:
            if not 1 <= d <= p.ambient_dim - 2:
                raise ProfileError(f"positive singular dimension must lie in 1..{p.ambient_dim - 2}, got {d}")
            if (p.ambient_dim - d) % 2:
                raise ProfileError(f"parity: codimension {p.ambient_dim - d} of the singular set is odd")


def trichotomy_classify(p: GeometryProfile) -> TrichotomyOutcome:
    validate_profile(p)
    rigid = p.singular in ("empty", "zero_dim")
    if p.ambient_dim == 2:
        case = "dim2_regime"
    elif p.ambient_dim == 4:
        case = "dim4_positive_continuum" if p.singular == "positive_dim" else "dim4_discrete_unknown"
    elif p.singular == "positive_dim":
        case = "continuum"
    elif p.singular == "zero_dim" and p.ambient_dim % 4 == 2 and p.has_order_two_with_fixed_points:
        case = "countably_many"
    else:
        case = "unique_class"
    description = _DESCRIPTIONS[p.context].get(case) or _SHARED[case]
    logger.info("profile %s classified as %s", p.model_dump(), case)
    return TrichotomyOutcome(case=case, locally_rigid=rigid, description=description)
