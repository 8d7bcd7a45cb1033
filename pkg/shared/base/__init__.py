"""
Service base classes
"""

from .lab_service import BaseLabService
