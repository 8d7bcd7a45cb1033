"""
Theorem experiments with common random numbers and statistical tolerances
"""

from .spec import ExperimentSpec, TolerancePolicy, THEOREM_IDS
from .report import Assertion, ExperimentReport, TableRow, backward_steps, tail_ratio
from .runner import run_experiment, run_T1, run_T2_T9, run_T3_T4, run_T5_T8, run_T10
