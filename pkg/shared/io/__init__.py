"""
Binary dumps of Brownian path bundles
"""

from .path_dump import dump_bundle, load_bundle
