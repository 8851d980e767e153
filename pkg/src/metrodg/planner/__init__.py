from .dispatch import (
    DEFAULT_BASE_WINDOW,
    DEFAULT_DG_WINDOWS,
    ConstantOutput,
    DgPlan,
    DispatchPolicy,
    DispatchResult,
    ImprovementReport,
    SizingSpec,
    ThresholdClip,
    apply_dispatch,
    improvement_indices,
    loss_reduction_pct,
    plan_for,
    size_dg,
)
from .sweep import SweepPoint, flattening_capacity, sweep_capacities

__all__ = [
    "DEFAULT_BASE_WINDOW",
    "DEFAULT_DG_WINDOWS",
    "ConstantOutput",
    "DgPlan",
    "DispatchPolicy",
    "DispatchResult",
    "ImprovementReport",
    "SizingSpec",
    "SweepPoint",
    "ThresholdClip",
    "apply_dispatch",
    "flattening_capacity",
    "improvement_indices",
    "loss_reduction_pct",
    "plan_for",
    "size_dg",
    "sweep_capacities",
]
