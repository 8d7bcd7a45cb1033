"""
Tests for generator types, reference examples, truncation and the registry
"""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from shared.errors import ContractError, InvalidArgumentError
from shared.generators import (
    AssumptionParams,
    example1,
    example2,
    example3,
    get_generator,
    get_terminal,
    list_generators,
    list_terminals,
    remark1_bound,
    shifted,
    truncate_y,
)
from shared.generators.examples import log_growth_offset
from shared.generators.terminals import (
    expected_terminal,
    shifted_terminal,
    truncated_terminal,
    truncation_breaks,
)

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)


def test_example1_declared_constants():
    """example1 claims mu = 1, lambda = 1, alpha = 1/2 and f = 0"""
    g = example1()
    assert g.params.mu == 1.0
    assert g.params.lam == 1.0
    assert g.params.alpha == 0.5
    assert g.has("H1", "H2", "H3", "H4")
    assert g.f(0.3, np.zeros(1)) == 0.0


def test_example1_value_at_unit_time():
    """g(1, 0, 0, 0) = 1 for example1"""
    assert example1().eval(1.0, np.zeros(1), 0.0, np.zeros(1)) == pytest.approx(1.0, abs=1e-15)


def test_example1_singularity_removed_at_zero():
    """The t^(-1/2) term is 0 at t = 0"""
    assert example1().eval(0.0, np.zeros(1), 0.0, np.zeros(1)) == 0.0


def test_example1_broadcasts():
    """Vectorized evaluation keeps the batch shape"""
    g = example1(d=2)
    out = g.eval(np.full(5, 0.5), np.ones((5, 2)), np.linspace(-1, 1, 5), np.zeros((5, 2)))
    assert out.shape == (5,)


def test_example2_jump_at_zero():
    """example2 is sin y for y <= 0 and cos y for y > 0 at z = 0, b = 0"""
    g = example2()
    b = np.zeros(1)
    z = np.zeros(1)
    assert g.eval(0.0, b, 0.0, z) == pytest.approx(0.0)
    assert g.eval(0.0, b, 1e-12, z) == pytest.approx(1.0)
    assert g.has("H1a", "H5")


def test_log_growth_offset_at_half():
    """kappa(1/2) is 0"""
    assert log_growth_offset(0.5) == pytest.approx(0.0, abs=1e-8)


@pytest.mark.parametrize("alpha", [0.1, 0.25, 0.75])
def test_log_growth_offset_dominates(alpha):
    """ln(1 + x) <= x^alpha + kappa(alpha) on a wide range of x"""
    kappa = log_growth_offset(alpha)
    x = np.logspace(-6, 12, 2000)
    assert np.all(np.log1p(x) <= x ** alpha + kappa + 1e-9)


def test_log_growth_offset_rejects_alpha_outside_unit_interval():
    """kappa needs alpha in (0, 1)"""
    with pytest.raises(InvalidArgumentError):
        log_growth_offset(1.0)


def test_example3_constants_and_modulus():
    """example3 claims lambda = 2, f = 1 and phi(u) = u^(1/3) + sqrt(u)"""
    g = example3(T=2.0)
    assert g.params.lam == 2.0
    assert g.f(0.1, np.zeros(1)) == 1.0
    assert g.params.phi(8.0) == pytest.approx(2.0 + math.sqrt(8.0))
    assert g.singular_times == (1.0,)


def test_assumption_params_validation():
    """Flags need their constants and alpha lies in (0, 1)"""
    with pytest.raises(InvalidArgumentError):
        AssumptionParams(flags={"H2"})
    with pytest.raises(InvalidArgumentError):
        AssumptionParams(alpha=1.0)
    with pytest.raises(InvalidArgumentError):
        AssumptionParams(flags={"H9"})


def test_require_reports_missing_flags():
    """require raises ContractError naming the missing flags"""
    with pytest.raises(ContractError, match="H4"):
        example2().require("H4", operation="envelope")


def test_shifted_generator():
    """g + c adds c pointwise and grows f by |c|"""
    g = shifted(example1(), -2.0)
    b = np.zeros(1)
    z = np.zeros(1)
    assert g.eval(1.0, b, 0.0, z) == pytest.approx(-1.0)
    assert g.f(0.5, b) == pytest.approx(2.0)


@given(finite, st.floats(min_value=1e-3, max_value=1e3))
def test_truncate_y_bounded_and_identity_inside(y, k):
    """|rho_k(y)| <= k, and rho_k(y) = y when |y| <= k"""
    value = truncate_y(y, k)
    assert abs(value) <= k
    if abs(y) <= k:
        assert value == y


@given(finite, finite, st.floats(min_value=1e-3, max_value=1e3))
def test_truncate_y_is_one_lipschitz(y1, y2, k):
    """|rho_k(y1) - rho_k(y2)| <= |y1 - y2|"""
    assert abs(truncate_y(y1, k) - truncate_y(y2, k)) <= abs(y1 - y2) * (1 + 1e-12) + 1e-12


@given(finite, st.floats(min_value=1e-3, max_value=1e3))
def test_truncate_y_is_idempotent(y, k):
    """rho_k(rho_k(y)) = rho_k(y)"""
    once = truncate_y(y, k)
    assert truncate_y(once, k) == once


def test_truncate_y_rejects_nonpositive_level():
    """k must be positive"""
    with pytest.raises(InvalidArgumentError):
        truncate_y(1.0, 0.0)


def test_growth_bound_holds_for_example1():
    """Sign-weighted growth bound holds on a grid for example1"""
    g = example1()
    y = np.linspace(-5, 5, 41)[:, None]
    z = np.linspace(-5, 5, 41)[None, :, None]
    t = 0.5
    b = np.array([0.3])
    lhs, rhs = remark1_bound(g, t, b, y, z)
    assert np.all(lhs <= rhs + 1e-9)


def test_growth_bound_needs_h2():
    """Generators without H2 are refused"""
    with pytest.raises(ContractError):
        remark1_bound(example2(), 0.0, np.zeros(1), 0.0, np.zeros(1))


def test_registry_lists_every_label():
    """Every listed generator label builds"""
    labels = [label for label, _ in list_generators()]
    assert {"example1", "example2", "example3", "zero", "neg_y", "oscillating_z"} <= set(labels)
    for label in labels:
        assert get_generator(label, d=1, T=1.0).d == 1


def test_registry_passes_factory_options():
    """Factory options reach the generator"""
    g = get_generator("constant", c=2.5)
    assert g.eval(0.0, np.zeros(1), 0.0, np.zeros(1)) == 2.5


def test_registry_unknown_label():
    """Unknown labels raise InvalidArgumentError"""
    with pytest.raises(InvalidArgumentError, match="Unknown generator"):
        get_generator("no_such_generator")
    with pytest.raises(InvalidArgumentError):
        get_generator("constant", omega=3.0)


def test_expression_generator_from_registry():
    """expr: labels build a generator over the declared variables"""
    g = get_generator("expr:-y + sqrt(absz)", d=2)
    assert g.depends_on == frozenset({"y", "z"})
    value = g.eval(0.0, np.zeros(2), 2.0, np.array([3.0, 4.0]))
    assert value == pytest.approx(-2.0 + math.sqrt(5.0))


def test_expression_params_from_configuration():
    """Plain params mappings become declared constants"""
    g = get_generator("expr:-y + 1", params={"mu": 0, "lam": 1, "alpha": 0.5, "f": 2.0, "rho": 1.0,
                                             "flags": ["H1", "H2", "H2'", "H4"]})
    assert g.has("H2", "H2'", "H4")
    assert g.params.mu == 0.0
    assert g.f(0.5, np.zeros(1)) == 2.0
    assert g.params.rho(3.0) == 3.0
    with pytest.raises(InvalidArgumentError):
        get_generator("expr:y", params={"slope": 1.0})


def test_builtin_terminals():
    """Built-in terminals evaluate on B_T"""
    b_T = np.array([[3.0], [-2.0]])
    assert get_terminal("BT").eval(b_T).tolist() == [3.0, -2.0]
    assert get_terminal("BT2").eval(b_T).tolist() == [9.0, 4.0]
    assert get_terminal("absBT").eval(b_T).tolist() == [3.0, 2.0]
    assert get_terminal("expBT2over4").heavy_tailed
    assert {label for label, _ in list_terminals()} >= {"zero", "BT", "BT2", "expBT2over4"}


def test_truncated_terminal_modes():
    """Levi truncation is xi ^ L, clamp clips to [-L, L], indicator zeroes |B_T| > L"""
    b_T = np.array([[-3.0], [0.5], [3.0]])
    xi = get_terminal("BT")
    assert truncated_terminal(xi, 1.0, "levi").eval(b_T).tolist() == [-3.0, 0.5, 1.0]
    assert truncated_terminal(xi, 1.0, "clamp").eval(b_T).tolist() == [-1.0, 0.5, 1.0]
    assert truncated_terminal(xi, 1.0, "indicator").eval(b_T).tolist() == [0.0, 0.5, 0.0]
    assert truncated_terminal(xi, float("inf")) is xi


def test_shifted_terminal():
    """xi + xi' adds pointwise"""
    b_T = np.array([[2.0]])
    total = shifted_terminal(get_terminal("BT"), get_terminal("BT2"))
    assert total.eval(b_T).tolist() == [6.0]


def _standard_normal_pdf(x):
    return math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)


@pytest.mark.parametrize("mode, expected", [
    ("levi", 1.0 - 2.0 * _standard_normal_pdf(1.0)),
    ("clamp", 1.0 - 2.0 * _standard_normal_pdf(1.0)),
    ("indicator", math.erf(1.0 / math.sqrt(2.0)) - 2.0 * _standard_normal_pdf(1.0)),
])
def test_expected_truncated_square(mode, expected):
    """E[B_1^2 ^ 1], the clamp of B_1^2 at 1 and E[B_1^2 1{|B_1| <= 1}] in closed form"""
    xi = truncated_terminal(get_terminal("BT2"), 1.0, mode)
    value, error = expected_terminal(xi, 1.0, breaks=truncation_breaks(1.0, mode))
    assert value == pytest.approx(expected, abs=1e-9)
    assert error < 1e-8


def test_expected_terminal_scales_with_horizon():
    """E[B_T^2] = T and E[|B_T|] = sqrt(2 T / pi)"""
    assert expected_terminal(get_terminal("BT2"), 2.5)[0] == pytest.approx(2.5, rel=1e-9)
    assert expected_terminal(get_terminal("absBT"), 2.0)[0] == pytest.approx(math.sqrt(4.0 / math.pi), rel=1e-9)


def test_expected_terminal_refuses_heavy_tails():
    """Heavy-tailed terminals have no quadrature oracle"""
    with pytest.raises(InvalidArgumentError):
        expected_terminal(get_terminal("expBT2over4"), 1.0)


def test_truncation_breaks():
    """Indicator truncations jump at +-L, the others may kink at +-L and +-sqrt(L)"""
    assert truncation_breaks(float("inf"), "levi") == ()
    assert truncation_breaks(4.0, "indicator") == (-4.0, 4.0)
    assert truncation_breaks(4.0, "clamp") == (-4.0, -2.0, 2.0, 4.0)
