"""
Generators g(t, b, y, z), terminal conditions and the reference examples
"""

from .spec import AssumptionParams, GeneratorSpec, TerminalCondition, shifted
from .examples import example1, example2, example3
from .truncation import truncate_y, remark1_bound
from .registry import get_generator, get_terminal, list_generators, list_terminals
