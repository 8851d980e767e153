from .passengers import (
    LpsModel,
    PassengerProfile,
    default_passenger_profile,
    read_profile_csv,
    synthesize_lps,
)
from .reference import (
    REFERENCE_LF,
    CalibrationOutOfRange,
    calibrate_shoulder,
    reference_curve,
    template_curve,
)
from .synthesis import (
    DEFAULT_RATIO,
    RATIO_BAND,
    CombinationRatio,
    ZeroLps,
    combine_metro,
    synthesize_metro,
)
from .timetable import (
    ServiceInterval,
    ServiceTimetable,
    TractionModel,
    default_timetable,
    fleet_size,
    read_timetable_csv,
    synthesize_tps,
    trains_in_service,
)

__all__ = [
    "DEFAULT_RATIO",
    "RATIO_BAND",
    "REFERENCE_LF",
    "CalibrationOutOfRange",
    "CombinationRatio",
    "LpsModel",
    "PassengerProfile",
    "ServiceInterval",
    "ServiceTimetable",
    "TractionModel",
    "ZeroLps",
    "calibrate_shoulder",
    "combine_metro",
    "default_passenger_profile",
    "default_timetable",
    "fleet_size",
    "read_profile_csv",
    "read_timetable_csv",
    "reference_curve",
    "synthesize_lps",
    "synthesize_metro",
    "synthesize_tps",
    "template_curve",
    "trains_in_service",
]
