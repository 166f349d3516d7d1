"""
Tritangent Service

Binary forms, resultant signs and real tritangent sections on the quadric cone.
"""

from services.tritangent.forms import BinaryForm, gram_matrix, resultant
from services.tritangent.service import TritangentService, classify_tritangent

__all__ = ["BinaryForm", "TritangentService", "classify_tritangent", "gram_matrix", "resultant"]
