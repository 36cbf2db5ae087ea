"""High-precision flows t -> M**t, growth detection, shadowing and bilipschitz checks."""

from .bilipschitz import BilipschitzResult, verify_uniform_bilipschitz
from .checks import cocycle_error, growth_envelopes, verify_report
from .growth import (
    RESOLVED,
    UNRESOLVED,
    ApproximateAJF,
    GrowthConfig,
    GrowthProfile,
    growth_profile,
    reconstruct_ajf_from_growth,
)
from .shadowing import PseudoOrbit, Segment, ShadowResult, random_pseudo_orbit, shadow_pseudo_orbit, shadowing_bound
from .subgroup import OneParameterSubgroup, Splitting, evaluate_subgroup, metric_distance, splitting

__all__ = [
    "RESOLVED",
    "UNRESOLVED",
    "ApproximateAJF",
    "BilipschitzResult",
    "GrowthConfig",
    "GrowthProfile",
    "OneParameterSubgroup",
    "PseudoOrbit",
    "Segment",
    "ShadowResult",
    "Splitting",
    "cocycle_error",
    "evaluate_subgroup",
    "growth_envelopes",
    "growth_profile",
    "metric_distance",
    "random_pseudo_orbit",
    "reconstruct_ajf_from_growth",
    "shadow_pseudo_orbit",
    "shadowing_bound",
    "splitting",
    "verify_report",
    "verify_uniform_bilipschitz",
]
