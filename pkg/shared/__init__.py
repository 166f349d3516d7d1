"""
delpezzo-lines shared modules

Configuration, logging, lattice arithmetic and the models exchanged between
services.
"""

from shared.config import Settings, get_settings
from shared.models import (
    CheckResult,
    DeformationClass,
    GramReport,
    LineCount,
    Report,
    ReportStatus,
    Side,
    Species,
    TritangentVerdict,
)

__all__ = [
    # Config
    "Settings",
    "get_settings",
    # Models
    "CheckResult",
    "DeformationClass",
    "GramReport",
    "LineCount",
    "Report",
    "ReportStatus",
    "Side",
    "Species",
    "TritangentVerdict",
]
