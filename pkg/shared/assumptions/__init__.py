"""
Sampling-based checks of the assumption classes
"""

from .lattice import Lattice, PairSample, PointGrid, make_lattice
from .moduli import concave_nondecreasing, linear_growth, osgood_divergent
from .checks import (
    CHECKS,
    CheckReport,
    check_dominance,
    check_H1,
    check_H1a,
    check_H1b,
    check_H1prime,
    check_H2,
    check_H2prime,
    check_H2prime_H4star,
    check_H3,
    check_H4_family,
    check_H4star,
    check_H5,
    check_H5_and_H1a,
    check_implications,
    check_remark1,
    run_checks,
)
