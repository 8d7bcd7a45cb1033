"""
Configuration constants, paths and presets for the BSDE laboratory
"""
