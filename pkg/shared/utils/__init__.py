"""
Logging, system and concurrency utilities
"""
