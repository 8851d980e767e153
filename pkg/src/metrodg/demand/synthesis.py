from __future__ import annotations

import logging
import math
from dataclasses import dataclass

from metrodg.curve import (
    GridMismatch,
    LoadCurve,
    TimeGrid,
    UnitMismatch,
    linear_combine,
    load_factor,
    peak,
)
from metrodg.errors import ValidationError

from .passengers import LpsModel, PassengerProfile, synthesize_lps
from .timetable import ServiceTimetable, TractionModel, synthesize_tps

logger = logging.getLogger(__name__)

RATIO_BAND = (0.5, 0.7)
DEFAULT_RATIO = 0.6


class ZeroLps(ValidationError):
    pass


@dataclass(frozen=True)
class CombinationRatio:
    """LPS peak as a fraction of the TPS peak."""

    r: float = DEFAULT_RATIO
    allow_override: bool = False

    def __post_init__(self) -> None:
        low, high = RATIO_BAND
        if not self.allow_override and not low <= self.r <= high:
            raise ValidationError(
                f"Combination ratio {self.r} is outside the {low:.0%}-{high:.0%} "
                "band of LPS to TPS demand; set allow_ratio_override to use it."
            )
        if not math.isfinite(self.r) or not 0 < self.r <= 1:
            raise ValidationError(
                f"Combination ratio must lie in (0, 1], got {self.r}."
            )


def combine_metro(
    tps: LoadCurve, lps: LoadCurve, ratio: CombinationRatio
) -> LoadCurve:
    """Rescales `lps` so its peak is r * peak(tps) and adds it to `tps`."""
    if tps.grid != lps.grid:
        raise GridMismatch("TPS and LPS curves must share a grid.")
    if tps.unit != lps.unit:
        raise UnitMismatch("TPS and LPS curves must share a unit.")
    lps_peak = peak(lps)
    if lps_peak == 0:
        raise ZeroLps("LPS curve is all zero; cannot rescale it to the ratio.")
    factor = ratio.r * peak(tps) / lps_peak
    logger.debug("Scaling LPS by %.6g to reach r=%.3f of TPS peak.", factor, ratio.r)
    return linear_combine([(tps, 1.0), (lps, factor)])


def synthesize_metro(
    timetable: ServiceTimetable,
    traction: TractionModel,
    profile: PassengerProfile,
    lps_model: LpsModel,
    ratio: CombinationRatio,
    grid: TimeGrid,
    lps_peak_mw: float = 1.0,
) -> tuple[LoadCurve, LoadCurve, LoadCurve]:
    """Returns (tps, lps, combined) curves on `grid`."""
    tps = synthesize_tps(timetable, traction, grid)
    lps = synthesize_lps(profile.to_grid(grid), lps_model, lps_peak_mw)
    combined = combine_metro(tps, lps, ratio)
    if peak(combined) > 0:
        logger.info(
            "Synthesised metro curve: peak %.3f MW, LF %.3f.",
            peak(combined),
            load_factor(combined),
        )
    return tps, lps, combined
