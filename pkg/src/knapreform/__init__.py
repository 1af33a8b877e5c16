"""Exact LLL reformulations of knapsack feasibility problems, near-parallel
branching directions, and certified width bounds."""
from .reform import KnapsackInstance, build_nullspace, build_rangespace
from .parallel import decompose, extract_null_direction, extract_range_direction
from .pipeline import Options, analyze

__all__ = [
    "KnapsackInstance", "build_rangespace", "build_nullspace",
    "decompose", "extract_range_direction", "extract_null_direction",
    "Options", "analyze",
]
