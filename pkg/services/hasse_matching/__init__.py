"""
Hasse Matching Service

Cover matchings of positive roots that pair off cancelling real lines.
"""

from services.hasse_matching.service import HasseMatchingService, HassePoset, Pairing

__all__ = ["HasseMatchingService", "HassePoset", "Pairing"]
