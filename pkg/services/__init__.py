"""
Runnable front ends of the BSDE laboratory
"""
