"""
Command line and acceptance suite.

Entry point: services.cli.main:main.
"""

from services.cli.verification import GROUPS, VerificationService

__all__ = ["GROUPS", "VerificationService"]
