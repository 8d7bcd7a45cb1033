"""
BSDE laboratory shared numerical library
"""

__version__ = "1.0.0"
