"""Opportunistic treating-interference-as-noise analysis for multi-state
interference networks: TIN-optimality, GDoF regions and power control."""
from .netmodel import GdofTuple, NetworkSpec, PowerAllocation, SpecError, example_spec
from .potential import decide_feasibility
from .powerctl import allocate, natural_pi
from .region import enumerate_region, remove_redundant
from .tincheck import check_tin_optimality

__all__ = [
    "GdofTuple",
    "NetworkSpec",
    "PowerAllocation",
    "SpecError",
    "allocate",
    "check_tin_optimality",
    "decide_feasibility",
    "enumerate_region",
    "example_spec",
    "natural_pi",
    "remove_redundant",
]
