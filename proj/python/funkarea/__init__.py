"""Area function of Funk metrics on strongly convex bodies."""

import json as _json

from ._funkarea import (
    Body,
    ConfigError,
    ConvergenceError,
    DomainError,
    FunkError,
    InteriorViolation,
    RegularityError,
    Rule,
    TaylorModel,
    area,
    area_derivative,
    area_gradient,
    area_hessian,
    averaged_metrics,
    balanced_field,
    balancing_point,
    ball_area,
    cm_coefficient,
    default_resolution,
    funk_gradient,
    funk_norm,
    randers_center,
    sphere_area,
    taylor,
    validate,
)

__version__ = "0.1.0"


def body_from_dict(doc):
    """Build a body from the same description the CLI reads."""
    return Body.from_json(_json.dumps(doc))


__all__ = [name for name in dir() if not name.startswith("_")]
