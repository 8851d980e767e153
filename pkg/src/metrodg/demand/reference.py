from __future__ import annotations

import logging

import numpy as np
from scipy.optimize import bisect

from metrodg.curve import FULL_DAY, LoadCurve, TimeGrid, Unit, load_factor
from metrodg.errors import ValidationError

logger = logging.getLogger(__name__)

REFERENCE_LF = 0.53
BASE_PLATEAU = 0.6
MAX_REFERENCE_STEP = 30
SHOULDER = None

# (start_min, end_min, level at start, level at end); SHOULDER is the
# calibrated level s, everything else is per-unit of peak.
TEMPLATE = (
    (0, 300, 0.0, 0.0),
    (300, 360, SHOULDER, SHOULDER),
    (360, 420, SHOULDER, 1.0),
    (420, 540, 1.0, 1.0),
    (540, 570, 1.0, BASE_PLATEAU),
    (570, 960, BASE_PLATEAU, BASE_PLATEAU),
    (960, 1020, BASE_PLATEAU, 1.0),
    (1020, 1140, 1.0, 1.0),
    (1140, 1200, 1.0, SHOULDER),
    (1200, 1380, SHOULDER, SHOULDER),
    (1380, 1440, 0.0, 0.0),
)


class CalibrationOutOfRange(ValidationError):
    pass


def template_curve(shoulder: float, grid: TimeGrid) -> LoadCurve:
    """Samples the reference template at interval midpoints."""
    if grid.step_minutes > MAX_REFERENCE_STEP:
        raise ValidationError(
            f"Reference curve needs a grid step of at most {MAX_REFERENCE_STEP} "
            f"minutes to resolve 09:30, got {grid.step_minutes}."
        )
    midpoints = grid.midpoints()
    values = np.zeros(grid.samples_per_day)
    for start, end, first, last in TEMPLATE:
        first = shoulder if first is SHOULDER else first
        last = shoulder if last is SHOULDER else last
        inside = (midpoints >= start) & (midpoints < end)
        fraction = (midpoints[inside] - start) / (end - start)
        values[inside] = first + (last - first) * fraction
    return LoadCurve(grid, values, Unit.PU)


def calibrate_shoulder(
    lf_target: float = REFERENCE_LF, grid: TimeGrid | None = None
) -> float:
    """Shoulder level s giving the template a 24 h load factor of `lf_target`."""
    grid = grid or TimeGrid()
    if not 0 < lf_target < 1:
        raise ValidationError(f"lf_target must lie in (0, 1), got {lf_target}.")

    def residual(shoulder: float) -> float:
        return load_factor(template_curve(shoulder, grid), FULL_DAY) - lf_target

    low, high = 0.0, BASE_PLATEAU
    at_low, at_high = residual(low), residual(high)
    if at_low * at_high > 0:
        raise CalibrationOutOfRange(
            f"No shoulder level in [{low}, {high}] reaches LF {lf_target}; "
            f"attainable range is [{at_low + lf_target:.4f}, "
            f"{at_high + lf_target:.4f}]."
        )
    if at_low == 0:
        return low
    if at_high == 0:
        return high
    shoulder = bisect(residual, low, high, xtol=1e-13)
    logger.debug(
        "Reference shoulder calibrated to %.9f for LF %.3f.", shoulder, lf_target
    )
    return shoulder


def reference_curve(
    lf_target: float = REFERENCE_LF, grid: TimeGrid | None = None
) -> LoadCurve:
    """
    Two-peak metro template (per-unit of peak) with the morning/evening
    shoulder solved so the 24 h load factor hits `lf_target`.
    """
    grid = grid or TimeGrid()
    return template_curve(calibrate_shoulder(lf_target, grid), grid)
