from .assessment import (
    IMMEDIATE,
    CostAssumptions,
    EconomicReport,
    UnitError,
    evaluate_economics,
)

__all__ = [
    "IMMEDIATE",
    "CostAssumptions",
    "EconomicReport",
    "UnitError",
    "evaluate_economics",
]
