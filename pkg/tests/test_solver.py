"""
Tests for the regression backward solver and its diagnostics
"""

from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from shared.errors import ConfigurationError, InvalidArgumentError, StepFailureError
from shared.generators import get_generator, get_terminal
from shared.solver import Projection, SolverConfig, hermite_design, normalized_moment, solve, solve_truncated_family
from shared.solver.backward import _implicit_step
from shared.stochastic import NESTED_MODE, make_grid, refine, simulate_paths


def test_zero_generator_square_terminal(solver_setup):
    """g = 0, xi = B_T^2 gives y0 = E[B_T^2] = T within the Monte Carlo band"""
    cfg, bundle = solver_setup(N=4, M=4000, degree=2)
    result = solve(get_terminal("BT2"), get_generator("zero"), bundle, cfg)
    assert result.y0_stderr > 0
    assert abs(result.y0 - 1.0) <= 4.0 * result.y0_stderr
    # Projections keep the sample mean, so y0 is the mean of xi
    assert result.y0 == pytest.approx(float(np.mean(result.Y[:, -1])), abs=1e-10)


def test_constant_generator_gives_ct(solver_setup):
    """g = c, xi = 0 gives y0 = c T"""
    cfg, bundle = solver_setup(T=2.0, N=8, M=500)
    result = solve(get_terminal("zero"), get_generator("constant", c=1.5), bundle, cfg)
    assert result.y0 == pytest.approx(3.0, abs=1e-10)
    assert np.allclose(result.Y[:, 0], 3.0, atol=1e-10)


def test_linear_decay_of_centred_terminal(solver_setup):
    """g = -y, xi = B_T gives y0 close to 0"""
    cfg, bundle = solver_setup(N=10, M=4000)
    result = solve(get_terminal("BT"), get_generator("neg_y"), bundle, cfg)
    assert abs(result.y0) <= 4.0 * result.y0_stderr


def test_z_matches_gradient_for_linear_terminal(solver_setup):
    """g = 0, xi = B_T gives Z close to 1 at every step"""
    cfg, bundle = solver_setup(N=4, M=2000, degree=1)
    result = solve(get_terminal("BT"), get_generator("zero"), bundle, cfg)
    assert np.all(np.abs(result.Z.mean(axis=0) - 1.0) <= 0.25)


def test_terminal_column_is_xi(solver_setup):
    """Y at t_N equals xi(B_T) on every path"""
    cfg, bundle = solver_setup(N=4, M=300)
    xi = get_terminal("absBT")
    result = solve(xi, get_generator("neg_y"), bundle, cfg)
    assert np.array_equal(result.Y[:, -1], xi.eval(bundle.terminal()))
    assert result.Y.shape == (300, 5)
    assert result.Z.shape == (300, 4, 1)


def test_local_basis_keeps_sample_mean(solver_setup):
    """Bin averages also reproduce the sample mean of xi at t = 0"""
    cfg, bundle = solver_setup(N=4, M=2000, basis="local", bins=10)
    result = solve(get_terminal("BT2"), get_generator("zero"), bundle, cfg)
    assert result.y0 == pytest.approx(float(np.mean(result.Y[:, -1])), abs=1e-10)


def test_comparison_on_common_paths(solver_setup):
    """g <= g' and equal terminals give Y <= Y' + epsilon_reg pathwise"""
    cfg, bundle = solver_setup(N=5, M=1000, degree=2)
    xi = get_terminal("BT2")
    low = solve(xi, get_generator("zero"), bundle, cfg)
    high = solve(xi, get_generator("constant", c=1.0), bundle, cfg)
    allowance = max(low.epsilon_reg, high.epsilon_reg) + 1e-9
    assert np.all(low.Y <= high.Y + allowance)
    assert high.y0 - low.y0 == pytest.approx(1.0, abs=1e-8)


def test_truncated_family_is_monotone(solver_setup):
    """Levi truncations of B_T^2 increase with the level and end at the plain solve"""
    cfg, bundle = solver_setup(N=4, M=2000, degree=2)
    xi = get_terminal("BT2")
    g = get_generator("zero")
    family = solve_truncated_family(xi, g, bundle, cfg, [0.5, 1.0, 2.0, float("inf")], mode="levi", workers=1)
    values = [result.y0 for result in family]
    assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))
    assert values[-1] == solve(xi, g, bundle, cfg).y0
    assert family[0].terminal == "BT2|levi(0.5)"


def test_truncated_family_needs_increasing_levels(solver_setup):
    """Levels must strictly increase"""
    cfg, bundle = solver_setup(N=2, M=100)
    with pytest.raises(InvalidArgumentError):
        solve_truncated_family(get_terminal("BT"), get_generator("zero"), bundle, cfg, [2.0, 1.0])


def test_step_size_against_monotonicity_constant(solver_setup):
    """dt * mu >= 1 is a configuration error"""
    cfg, bundle = solver_setup(N=1, M=100)
    with pytest.raises(ConfigurationError, match="dt \\* mu"):
        solve(get_terminal("BT"), get_generator("linear_y", a=2.0), bundle, cfg)


def test_grid_mismatch(solver_setup):
    """The bundle grid must be the solver grid"""
    cfg, _ = solver_setup(N=4, M=100)
    other = simulate_paths(make_grid(1.0, 5), 1, 100, seed=1, workers=1)
    with pytest.raises(ConfigurationError):
        solve(get_terminal("BT"), get_generator("zero"), other, cfg)


def test_dimension_mismatch(solver_setup):
    """The bundle dimension must be the generator dimension"""
    cfg, bundle = solver_setup(N=2, M=100)
    with pytest.raises(InvalidArgumentError):
        solve(get_terminal("BT"), get_generator("zero", d=2), bundle, cfg)


def test_bisection_finishes_stiff_monotone_steps(solver_setup):
    """g = -30 y is stiff for Picard but monotone, so bisection solves each step"""
    cfg, bundle = solver_setup(N=10, M=500, degree=1)
    result = solve(get_terminal("BT"), get_generator("linear_y", a=-30.0), bundle, cfg)
    assert sum(result.diagnostics.fallback_paths) > 0
    # Y_i (1 + 30 dt) is the affine regression of B_T on B_{t_i}, dt = 0.1
    b = bundle.brownian_matrix()[:, -2, 0]
    scaled = 4.0 * result.Y[:, -2]
    assert np.allclose(np.polyval(np.polyfit(b, scaled, 1), b), scaled, atol=1e-6)


def test_picard_failure_without_monotonicity(solver_setup):
    """Without a monotone claim an unconverged Picard iteration is a step failure"""
    cfg, bundle = solver_setup(N=10, M=200, degree=1)
    with pytest.raises(StepFailureError) as info:
        solve(get_terminal("BT"), get_generator("expr:-30*y"), bundle, cfg)
    assert info.value.step == 9


def test_mean_path_table(solver_setup):
    """One row per node with mean and quantiles"""
    cfg, bundle = solver_setup(N=4, M=200)
    result = solve(get_terminal("BT"), get_generator("zero"), bundle, cfg)
    rows = result.mean_path_table()
    assert len(rows) == 5
    assert set(rows[0]) == {"t", "mean_y", "q05", "q50", "q95"}
    assert rows[-1]["t"] == 1.0


def test_summary_is_json_friendly(solver_setup):
    """summary carries y0, stderr, epsilon_reg and diagnostics"""
    cfg, bundle = solver_setup(N=4, M=200)
    summary = solve(get_terminal("BT"), get_generator("zero"), bundle, cfg).summary()
    assert {"y0", "stderr", "epsilon_reg", "config", "diagnostics"} <= set(summary)
    assert summary["config"]["N"] == 4
    assert set(summary["diagnostics"]["class_d_tail"]) == {"1.0", "10.0", "100.0"}


def test_zero_solution_has_zero_diagnostics(solver_setup):
    """Y = 0 and Z = 0 give vanishing S and M functionals and tails"""
    cfg, bundle = solver_setup(N=4, M=200)
    diagnostics = solve(get_terminal("zero"), get_generator("zero"), bundle, cfg).diagnostics
    assert all(value == 0.0 for value in diagnostics.s_beta.values())
    assert all(value == 0.0 for value in diagnostics.m_beta.values())
    assert all(value == 0.0 for value in diagnostics.class_d_tail.values())
    assert len(diagnostics.picard_iterations) == 4


def test_class_d_tail_shrinks_with_level(solver_setup):
    """E[|Y| 1{|Y| > L}] does not grow with L"""
    cfg, bundle = solver_setup(N=4, M=2000, degree=2)
    tails = solve(get_terminal("BT2"), get_generator("zero"), bundle, cfg).diagnostics.class_d_tail
    assert tails[1.0] >= tails[10.0] >= tails[100.0] >= 0.0


@pytest.mark.parametrize("beta", [0.25, 0.5, 0.75])
def test_normalized_moment_below_one_is_the_mean(beta):
    """For beta < 1 the exponent 1 ^ 1/beta is 1"""
    samples = np.array([0.5, 1.0, 4.0])
    estimate, stderr = normalized_moment(samples, beta)
    assert estimate == pytest.approx(samples.mean())
    assert stderr == pytest.approx(samples.std(ddof=1) / np.sqrt(3))


@settings(max_examples=50, deadline=None)
@given(arrays(np.float64, st.integers(min_value=2, max_value=50),
              elements=st.floats(min_value=0.0, max_value=1e3)))
def test_normalized_moment_jensen(samples):
    """(E X^2)^(1/2) >= E X for nonnegative samples"""
    root_mean_square, _ = normalized_moment(samples ** 2, 2.0)
    mean, _ = normalized_moment(samples, 1.0)
    assert root_mean_square >= mean * (1.0 - 1e-12) - 1e-12


def test_hermite_design_columns():
    """Total degree <= p gives C(p + d, d) columns, constant first"""
    states = np.random.default_rng(0).standard_normal((50, 2))
    design = hermite_design(states, 1.0, 3)
    assert design.shape == (50, 10)
    assert np.all(design[:, 0] == 1.0)


def test_solver_config_validation():
    """Unknown basis, bad betas and bad truncation are refused"""
    grid = make_grid(1.0, 4)
    with pytest.raises(InvalidArgumentError):
        SolverConfig(grid=grid, paths=10, basis="spline")
    with pytest.raises(InvalidArgumentError):
        SolverConfig(grid=grid, paths=10, betas=(1.5,))
    with pytest.raises(InvalidArgumentError):
        SolverConfig(grid=grid, paths=10, terminal_truncation=0.0)


def test_solver_config_from_preset():
    """The smoke preset supplies N, M and degree"""
    cfg = SolverConfig.from_preset("smoke")
    assert (cfg.grid.n_steps, cfg.paths, cfg.degree) == (10, 2000, 2)
    assert SolverConfig.from_preset("smoke", M=50).paths == 50
    with pytest.raises(InvalidArgumentError):
        SolverConfig.from_preset("huge")


def test_linear_decay_path_at_mid_horizon():
    """g = -y, xi = B_T gives Y_t = exp(-(T - t)) B_t; at t = 0.5 within 2% in L2"""
    cfg = SolverConfig(grid=make_grid(1.0, 100), paths=100_000, degree=3)
    bundle = simulate_paths(cfg.grid, 1, cfg.paths, seed=12)
    result = solve(get_terminal("BT"), get_generator("neg_y"), bundle, cfg)
    exact = np.exp(-0.5) * bundle.brownian_matrix()[:, 50, 0]
    error = np.sqrt(np.mean((result.Y[:, 50] - exact) ** 2)) / np.sqrt(np.mean(exact ** 2))
    assert error <= 0.02


def test_time_discretisation_bias_is_first_order():
    """Halving dt roughly halves the bias of y0 for g = -y, xi = B_T^2"""
    bundle = simulate_paths(make_grid(1.0, 4), 1, 2000, seed=14, mode=NESTED_MODE, workers=1)
    xi, g = get_terminal("BT2"), get_generator("neg_y")
    biases = []
    for _ in range(4):
        cfg = SolverConfig(grid=bundle.grid, paths=bundle.M, degree=2)
        result = solve(xi, g, bundle, cfg)
        # Nested bundles share B_T, so the exact value exp(-T) mean(xi) is common
        biases.append(result.y0 - np.exp(-1.0) * float(np.mean(result.Y[:, -1])))
        bundle = refine(bundle, workers=1)
    assert all(bias > 0 for bias in biases)
    ratios = [a / b for a, b in zip(biases, biases[1:])]
    assert all(1.7 <= ratio <= 2.3 for ratio in ratios)


def test_converged_paths_leave_the_picard_iteration(solver_setup):
    """After the first sweep g is only evaluated on paths still moving"""
    cfg, bundle = solver_setup(N=10, M=400)
    calls = []

    def func(t, b, y, z):
        calls.append(np.size(y))
        return -np.asarray(y) * (b[..., 0] > 0)

    g = replace(get_generator("neg_y"), func=func)
    b = bundle.brownian_matrix()[:, 5, :]
    conditional = np.linspace(-1.0, 1.0, 400)
    y, iterations, bisected = _implicit_step(g, cfg, 0.55, b, np.zeros((400, 1)), conditional, 0.1, 5)

    moving = int(np.sum(b[:, 0] > 0))
    assert calls[0] == 400
    assert iterations > 1 and bisected == 0
    assert all(count <= moving for count in calls[1:])
    assert np.allclose(y[b[:, 0] <= 0], conditional[b[:, 0] <= 0])
    assert np.allclose(y[b[:, 0] > 0], conditional[b[:, 0] > 0] / 1.1, rtol=0, atol=1e-9)


def test_driver_tolerance_relaxes_picard_tolerance():
    """An inexact generator loosens Picard to dt * driver_tol, never tightens it"""
    cfg = SolverConfig(grid=make_grid(1.0, 10), paths=10)
    assert cfg.with_driver_tol(1e-4).picard_tol == pytest.approx(1e-5)
    assert cfg.with_driver_tol(1e-12).picard_tol == cfg.picard_tol
    with pytest.raises(InvalidArgumentError):
        cfg.with_driver_tol(0.0)


def test_local_basis_condition_number_matches_design():
    """The stored condition number is the 2-norm condition number of the indicator design"""
    cfg = SolverConfig(grid=make_grid(1.0, 4), paths=300, basis="local", bins=7)
    states = np.random.default_rng(9).standard_normal((300, 1)) ** 3
    projection = Projection(cfg, states, 0.5, 1)
    design = np.zeros((300, projection.size))
    design[np.arange(300), projection.ids] = 1.0
    assert projection.condition == pytest.approx(np.linalg.cond(design), rel=1e-12)


def test_polynomial_condition_number_is_recorded_on_fit():
    """Polynomial projections record the condition number of their design"""
    cfg = SolverConfig(grid=make_grid(1.0, 4), paths=500, degree=3)
    states = np.random.default_rng(2).standard_normal((500, 1)) * np.sqrt(0.5)
    projection = Projection(cfg, states, 0.5, 1)
    projection.fit(states[:, 0] ** 2)
    assert projection.condition == pytest.approx(np.linalg.cond(projection.design), rel=1e-8)
