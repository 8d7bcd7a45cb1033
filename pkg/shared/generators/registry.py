"""
Label lookup for built-in generators and terminal conditions
"""

from .builtin import (
    abs_z_generator,
    constant_generator,
    linear_y_generator,
    lipschitz_yz_generator,
    min_abs_z_one_generator,
    neg_y_generator,
    oscillating_z_generator,
    sqrt_abs_z_generator,
    step_y_closed_generator,
    step_y_right_generator,
    zero_generator,
)
from .examples import example1, example2, example3
from .expression import expression_generator, expression_terminal
from .spec import AssumptionParams
from .terminals import BUILTIN_TERMINALS, terminal_condition
from ..errors import InvalidArgumentError

EXPRESSION_PREFIX = "expr:"

# label -> (factory(d, T, **options), description)
GENERATORS = {
    "example1": (lambda d, T: example1(d=d), "-|b|e^y + (|y|+sqrt|z|) sin|z| + t^(-1/2) + |b|^2"),
    "example2": (lambda d, T, alpha=0.5: example2(d=d, alpha=alpha),
                 "y-discontinuous: step(sin, cos) + [|y|+ln(1+|z|)] sin(y^2|z|^3) + b_1"),
    "example3": (lambda d, T: example3(d=d, T=T),
                 "|b|^2 e^-y + sqrt(1+|y|+|z|) + |z|^(1/3) + |t-T/2|^(-1/2)"),
    "zero": (lambda d, T: zero_generator(d=d), "g = 0"),
    "constant": (lambda d, T, c=1.0: constant_generator(c=c, d=d), "g = c"),
    "neg_y": (lambda d, T: neg_y_generator(d=d), "g = -y"),
    "linear_y": (lambda d, T, a=2.0, mu=None: linear_y_generator(a=a, d=d, mu=mu), "g = a y"),
    "sqrt_abs_z": (lambda d, T: sqrt_abs_z_generator(d=d), "g = sqrt|z|"),
    "min_abs_z_one": (lambda d, T: min_abs_z_one_generator(d=d), "g = min(|z|, 1)"),
    "abs_z": (lambda d, T: abs_z_generator(d=d), "g = |z| (declares H4, refuted at large |z|)"),
    "step_y_right": (lambda d, T: step_y_right_generator(d=d), "g = 1_{y>0}"),
    "step_y_closed": (lambda d, T: step_y_closed_generator(d=d), "g = 1_{y>=0} (declares H1a, refuted)"),
    "oscillating_z": (lambda d, T, omega=1e4: oscillating_z_generator(omega=omega, d=d),
                      "g = sin(omega z|z|), no uniform modulus in z"),
    "lipschitz_yz": (lambda d, T, a=-1.0, c=0.5: lipschitz_yz_generator(a=a, c=c, d=d),
                     "g = a y + c sin(z_1)"),
}


def get_generator(label, d=1, T=1.0, **options):
    """
    Build a generator by label

    Args:
        label: Registry label, or "expr:<expression>"
        d: Brownian dimension
        T: Horizon (used by time-dependent generators and expressions)
        options: Factory options (e.g. alpha for example2, c for constant)

    Returns:
        GeneratorSpec
    """
    if label.startswith(EXPRESSION_PREFIX):
        params = options.pop("params", None)
        if isinstance(params, dict):
            params = AssumptionParams.from_mapping(params)
        if options:
            raise InvalidArgumentError(f"expression generators take no options besides params, got {sorted(options)}")
        return expression_generator(label[len(EXPRESSION_PREFIX):], d=d, horizon=T, params=params, label=label)
    if label not in GENERATORS:
        raise InvalidArgumentError(f"Unknown generator: {label}. Available: {list(GENERATORS.keys())}")
    factory = GENERATORS[label][0]
    try:
        return factory(d, T, **options)
    except TypeError as e:
        raise InvalidArgumentError(f"bad options {sorted(options)} for generator {label}: {e}")


def get_terminal(label, d=1):
    """Build a terminal condition by label, or from "expr:<expression>" over b"""
    if label.startswith(EXPRESSION_PREFIX):
        return expression_terminal(label[len(EXPRESSION_PREFIX):], d=d, label=label)
    return terminal_condition(label)


def list_generators():
    """(label, description) pairs of every built-in generator"""
    return [(label, description) for label, (_, description) in GENERATORS.items()]


def list_terminals():
    """(label, integrability note) pairs of every built-in terminal condition"""
    return [(label, entry["integrability_note"]) for label, entry in BUILTIN_TERMINALS.items()]
