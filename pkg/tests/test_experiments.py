"""
Tests for theorem experiments, tolerance policies and report tables
"""

import math

import pytest

from services.experiments import (
    ExperimentReport,
    ExperimentSpec,
    TolerancePolicy,
    run_experiment,
    backward_steps,
    run_T2_T9,
    tail_ratio,
)
from shared.errors import ConfigurationError, ContractError, UsageError

SMALL = dict(N=4, M=500, degree=2)


def small_spec(**values):
    return ExperimentSpec(**dict(SMALL, **values))


def assertion(report, name):
    return next(a for a in report.assertions if a.name == name)


def test_minimal_family_for_z_independent_generator():
    """Every INF_Z approximant of g = -y is g, so the table is flat and below its bound"""
    report = run_experiment(small_spec(theorem="T1_minimal", generator="neg_y", terminal="BT", seed=1,
                                       n_list=(1, 2)))
    assert report.passed, report.witnesses
    rows = report.tables["y0_by_n"]
    assert rows[0].y0 == rows[1].y0
    assert assertion(report, "dominated_by_h").passed
    assert any("does not depend" in note for note in report.notes)


def test_comparison_with_constant_shift():
    """g' = g + 1 shifts y0 by T on common paths"""
    report = run_experiment(small_spec(theorem="T2_compare", generator="zero", terminal="BT2", seed=2,
                                       generator_prime_shift=1.0, T=2.0))
    assert report.passed, report.witnesses
    shift = assertion(report, "constant_shift")
    assert shift.detail["expected"] == 2.0
    assert shift.detail["shift"] == pytest.approx(2.0, abs=1e-8)
    assert assertion(report, "pathwise_ordering").detail["violation_rate"] == 0.0


def test_identical_inputs_give_identical_paths():
    """Comparing g with itself yields bit-identical solutions"""
    report = run_experiment(small_spec(theorem="T2_compare", generator="neg_y", terminal="BT", seed=3))
    assert assertion(report, "identical_inputs").passed


def test_comparison_refused_when_generators_not_ordered():
    """g = 1 is not below g' = 0, so the comparison is refused"""
    spec = small_spec(theorem="T2_compare", generator="constant", generator_options={"c": 1.0},
                      generator_prime="zero", terminal="BT", seed=4)
    with pytest.raises(ConfigurationError, match="refuted"):
        run_T2_T9(spec)


def test_comparison_refused_when_terminals_not_ordered():
    """xi' = -|B_T| below xi = |B_T| is refused"""
    spec = small_spec(theorem="T2_compare", generator="zero", terminal="absBT", terminal_prime="negAbsBT", seed=5)
    with pytest.raises(ConfigurationError, match="terminal ordering"):
        run_experiment(spec)


def test_levi_limit_of_square_terminal():
    """xi ^ L increases to B_T^2 and y0 approaches E[B_T^2] = 1"""
    report = run_experiment(small_spec(theorem="T3_levi", generator="zero", terminal="BT2", seed=6, M=2000,
                                       levels=(1.0, 2.0, 4.0, 8.0, 16.0), reference_value=1.0,
                                       tolerance=TolerancePolicy(stat_multiplier=4.0)))
    assert report.passed, report.witnesses
    assert assertion(report, "terminal_monotone").passed
    values = [row.y0 for row in report.tables["y0_by_level"]]
    assert values == sorted(values)
    assert report.tail_ratio < 0.5


def test_lebesgue_limit_with_indicator_truncation():
    """xi 1{|B_T| <= L} converges to the full solve"""
    report = run_experiment(small_spec(theorem="T4_lebesgue", generator="neg_y", terminal="BT", seed=7, M=1000,
                                       levels=(1.0, 2.0, 4.0, 8.0)))
    assert report.passed, report.witnesses
    assert all(row.verdict == "info" for row in report.tables["y0_by_level"])


def test_levi_levels_match_quadrature():
    """Each level of xi ^ L for g = 0 agrees with E[B_T^2 ^ L] by quadrature"""
    report = run_experiment(small_spec(theorem="T3_levi", generator="zero", terminal="BT2", seed=6, M=2000,
                                       levels=(1.0, 2.0, 4.0, 8.0, 16.0),
                                       tolerance=TolerancePolicy(stat_multiplier=4.0)))
    check = assertion(report, "quadrature_by_level")
    assert check.passed, check.detail
    rows = report.tables["quadrature"]
    assert [row.n_or_level for row in rows] == [1.0, 2.0, 4.0, 8.0, 16.0]
    phi_1 = math.exp(-0.5) / math.sqrt(2.0 * math.pi)
    assert rows[0].y0 == pytest.approx(1.0 - 2.0 * phi_1, abs=1e-8)
    assert all(b.y0 > a.y0 for a, b in zip(rows, rows[1:]))
    # Without a reference value the limit is checked against quadrature of xi itself
    assert assertion(report, "analytic_limit").detail["expected"] == pytest.approx(1.0, abs=1e-8)


def test_indicator_levels_match_quadrature():
    """g = 1 shifts E[B_T^2 1{|B_T| <= L}] by T at every level"""
    report = run_experiment(small_spec(theorem="T4_lebesgue", generator="constant", generator_options={"c": 1.0},
                                       terminal="BT2", seed=16, M=2000, levels=(0.5, 1.0, 2.0, 8.0),
                                       tolerance=TolerancePolicy(stat_multiplier=4.0)))
    assert report.passed, report.witnesses
    rows = report.tables["quadrature"]
    phi_1 = math.exp(-0.5) / math.sqrt(2.0 * math.pi)
    assert rows[1].y0 == pytest.approx(1.0 + math.erf(1.0 / math.sqrt(2.0)) - 2.0 * phi_1, abs=1e-8)
    assert all(row.verdict == "ok" for row in rows)


def test_quadrature_oracle_needs_constant_generator():
    """Generators reading y leave the levels without a quadrature check"""
    report = run_experiment(small_spec(theorem="T3_levi", generator="neg_y", terminal="BT2", seed=6,
                                       levels=(1.0, 2.0, 4.0)))
    assert "quadrature" not in report.tables
    assert all(a.name != "quadrature_by_level" for a in report.assertions)


def test_minimal_family_of_example1():
    """INF_Z solves of example1 increase in n and stay below the dominating solve"""
    report = run_experiment(small_spec(theorem="T1_minimal", generator="example1", terminal="negAbsBT", seed=17,
                                       N=10, n_list=(1, 2, 4)))
    monotone = assertion(report, "monotone_in_n")
    assert monotone.passed, monotone.detail
    assert monotone.detail["worst_backward_step"] <= monotone.detail["allowance"]
    assert assertion(report, "dominated_by_h").passed
    assert len(report.tables["y0_by_n"]) == 3
    assert not any("does not depend" in note for note in report.notes)


def test_maximal_family_of_example1_brackets_minimal():
    """SUP_Z solves decrease in n and stay above the INF_Z table"""
    report = run_experiment(small_spec(theorem="T1_maximal", generator="example1", terminal="negAbsBT", seed=18,
                                       N=10, n_list=(1, 2, 4)))
    assert assertion(report, "monotone_in_n").passed
    assert assertion(report, "bracket").passed
    assert len(report.tables["y0_by_n_mirror"]) == 3
    assert all(row.gap >= -assertion(report, "bracket").detail["allowance"]
               for row in report.tables["min_max_gap"])


def test_discontinuous_bracket_of_example2():
    """Joint envelopes of example2 bracket its direct solve"""
    report = run_experiment(small_spec(theorem="T5_discontinuous", generator="example2", terminal="zero", seed=19,
                                       T=0.5, N=8, M=300, n_list=(1, 2), bracket=True))
    assert assertion(report, "bracket").passed
    assert assertion(report, "direct_within_bracket").passed
    assert {"y0_by_n", "y0_by_n_mirror", "min_max_gap"} <= set(report.tables)
    assert any("uniqueness is not asserted" in note for note in report.notes)


def test_discontinuous_comparison_with_shift():
    """Envelope drivers of example2 and example2 + 1 stay ordered on common paths"""
    report = run_experiment(small_spec(theorem="T6_compare_disc", generator="example2", terminal="zero", seed=20,
                                       T=0.5, N=8, M=300, n_list=(1, 2), generator_prime_shift=1.0))
    assert report.passed, report.witnesses
    assert assertion(report, "pathwise_ordering").detail["violation_rate"] == 0.0
    rows = report.tables["y0"]
    assert rows[1].gap > 0


def test_discontinuous_levi_family():
    """Levi truncations under the example2 envelope driver increase with the level"""
    report = run_experiment(small_spec(theorem="T7_levi_disc", generator="example2", terminal="BT2", seed=21,
                                       T=0.5, N=8, M=300, n_list=(1, 2), levels=(0.5, 1.0, 2.0)))
    assert assertion(report, "monotone_in_level").passed
    assert assertion(report, "terminal_monotone").passed
    assert "quadrature" not in report.tables


def test_discontinuous_lebesgue_family():
    """Indicator truncations under the example2 envelope driver reach the full solve"""
    report = run_experiment(small_spec(theorem="T8_lebesgue_disc", generator="example2", terminal="BT", seed=22,
                                       T=0.5, N=8, M=300, n_list=(1, 2), levels=(0.5, 1.0, 8.0)))
    assert report.passed, report.witnesses
    assert assertion(report, "dominated_convergence").detail["errors"][-1] == 0.0


def test_general_comparison_of_example3():
    """example3 and example3 + 1/2 keep their order at every node"""
    report = run_experiment(small_spec(theorem="T9_compare_general", generator="example3", terminal="absBT",
                                       seed=23, N=8, generator_prime_shift=0.5))
    assert report.passed, report.witnesses
    assert assertion(report, "pathwise_ordering").detail["violation_rate"] == 0.0


def test_general_comparison_needs_uniform_modulus():
    """example1 claims neither H2' nor H4*"""
    with pytest.raises(ContractError):
        run_experiment(small_spec(theorem="T9_compare_general", generator="example1", terminal="BT", seed=23))


def test_uniqueness_of_example3_with_oscillating_control():
    """example3 tables meet while the oscillating control stays apart by more than its noise"""
    report = run_experiment(small_spec(theorem="T10_uniqueness", generator="example3", terminal="absBT", seed=24,
                                       N=20, M=500, n_list=(1, 4, 16, 32)))
    assert report.passed, report.witnesses
    power = assertion(report, "control_power")
    assert power.detail["control"].startswith("oscillating_z")
    assert power.detail["gap"] >= power.detail["required"] >= power.detail["noise"] > 0
    assert len(report.tables["control"]) == 2


@pytest.mark.parametrize("values, ordering, expected", [
    ([1.0, 2.0, 1.5, 3.0], "nondecreasing", [0.0, 0.5, 0.0]),
    ([3.0, 2.0, 2.25, 1.0], "nonincreasing", [0.0, 0.25, 0.0]),
    ([1.0], "nondecreasing", []),
])
def test_backward_steps(values, ordering, expected):
    """Only moves against the claimed ordering have a size"""
    assert backward_steps(values, ordering) == pytest.approx(expected)


def test_monotone_detail_lists_each_backward_step():
    """monotone_in_n reports one step size per increment next to the allowance"""
    report = run_experiment(small_spec(theorem="T1_minimal", generator="zero", terminal="BT", seed=10,
                                       n_list=(1, 2, 4)))
    detail = assertion(report, "monotone_in_n").detail
    assert detail["backward_steps"] == [0.0, 0.0]
    assert detail["worst_backward_step"] == 0.0
    assert detail["allowance"] > 0


def test_uniqueness_without_control():
    """Minimal and maximal tables of g = -y coincide"""
    report = run_experiment(small_spec(theorem="T10_uniqueness", generator="neg_y", terminal="BT", seed=8,
                                       n_list=(1, 2), control=None))
    assert report.passed, report.witnesses
    assert assertion(report, "min_max_gap").detail["gap"] == 0.0
    assert "control" not in report.tables


def test_discontinuous_runs_need_joint_growth():
    """Generators without H5 cannot use the joint envelopes"""
    with pytest.raises(ContractError):
        run_experiment(small_spec(theorem="T5_discontinuous", generator="example1", terminal="BT", seed=9))


def test_uniqueness_needs_uniform_modulus():
    """example2 claims no H4*, so the uniqueness experiment refuses it"""
    with pytest.raises(ContractError):
        run_experiment(small_spec(theorem="T10_uniqueness", generator="example2", terminal="BT", seed=9))


def test_report_serializes_tables():
    """to_dict and table_rows expose plain rows"""
    report = run_experiment(small_spec(theorem="T1_minimal", generator="zero", terminal="BT", seed=10,
                                       n_list=(1, 2, 4)))
    document = report.to_dict()
    assert document["theorem"] == "T1_minimal"
    assert set(report.table_rows()["y0_by_n"][0]) == {"n_or_level", "y0", "stderr", "gap", "verdict"}
    assert document["tail_ratio"] == 0.0


def test_failed_assertions_leave_witnesses():
    """A failing assertion records its detail as a witness"""
    report = ExperimentReport(theorem="T1_minimal", spec={})
    report.add("good", True)
    report.add("bad", False, gap=1.5)
    assert not report.passed
    assert report.witnesses == [{"assertion": "bad", "gap": 1.5}]


@pytest.mark.parametrize("values, expected", [
    ([1.0, 2.0, 2.5, 2.75], 0.25),
    ([1.0, 1.0, 1.0], 0.0),
    ([1.0, 1.0, 2.0], float("inf")),
    ([1.0, 2.0], None),
])
def test_tail_ratio(values, expected):
    """Last increment over first increment"""
    assert tail_ratio(values) == expected


def test_tolerance_policy_terms():
    """Ordering allowance, statistical band and their sum"""
    class Result:
        def __init__(self, epsilon_reg, y0_stderr):
            self.epsilon_reg = epsilon_reg
            self.y0_stderr = y0_stderr

    policy = TolerancePolicy(stat_multiplier=2.0, deterministic_slack=0.01)
    first, second = Result(0.1, 0.3), Result(0.2, 0.4)
    assert policy.ordering_allowance(first, second) == pytest.approx(0.21)
    assert policy.statistical_band(first, second) == pytest.approx(1.0)
    assert policy.combined(first, second) == pytest.approx(1.21)


def test_tolerance_presets():
    """Presets load by name and unknown names are usage errors"""
    assert TolerancePolicy.from_preset("loose").stat_multiplier == 4.0
    with pytest.raises(UsageError):
        TolerancePolicy.from_preset("sloppy")
    with pytest.raises(ConfigurationError):
        TolerancePolicy(tail_ratio_max=1.5)


def test_from_mapping_applies_preset_and_tolerance():
    """preset fills N, M and degree unless given; tolerance accepts a name or a mapping"""
    spec = ExperimentSpec.from_mapping({
        "theorem": "T1_minimal", "generator": "neg_y", "terminal": "BT", "seed": 1,
        "preset": "smoke", "M": 300, "tolerance": {"stat_multiplier": 5.0}, "control": "none",
    })
    assert (spec.N, spec.M, spec.degree) == (10, 300, 2)
    assert spec.tolerance.stat_multiplier == 5.0
    assert spec.control is None


@pytest.mark.parametrize("mapping, key", [
    ({"theorem": "T1_minimal", "generator": "neg_y", "terminal": "BT"}, "seed"),
    ({"theorem": "T1_minimal", "generator": "neg_y", "terminal": "BT", "seed": 1, "colour": 1}, "colour"),
    ({"theorem": "T1_minimal", "generator": "neg_y", "terminal": "BT", "seed": True}, "seed"),
    ({"theorem": "T1_minimal", "generator": "neg_y", "terminal": "BT", "seed": 1, "preset": "huge"}, "preset"),
    ({"theorem": "T1_minimal", "generator": "neg_y", "terminal": "BT", "seed": 1, "tolerance": 3}, "tolerance"),
    ({"theorem": "T1_minimal", "generator": "neg_y", "terminal": "BT", "seed": 1, "n_list": [2, 1]},
     "experiment"),
])
def test_from_mapping_errors_name_the_key(mapping, key):
    """Bad mappings raise UsageError naming the offending key"""
    with pytest.raises(UsageError) as info:
        ExperimentSpec.from_mapping(mapping)
    assert info.value.key == key


def test_unknown_theorem():
    """Theorem ids are validated"""
    with pytest.raises(ConfigurationError):
        ExperimentSpec(theorem="T11", generator="zero", terminal="BT", seed=1)
