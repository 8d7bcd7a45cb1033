"""
Tests for lattice assumption checks and the modulus classifiers
"""

import numpy as np
import pytest

from shared.assumptions import (
    check_dominance,
    check_H1a,
    check_H1prime,
    check_H2,
    check_H3,
    check_H4_family,
    check_H4star,
    check_H5,
    check_implications,
    check_remark1,
    concave_nondecreasing,
    linear_growth,
    make_lattice,
    osgood_divergent,
    run_checks,
)
from shared.assumptions.checks import FAIL_VERDICT, PASS_VERDICT
from shared.errors import ContractError, InvalidArgumentError
from shared.generators import example1, example2, example3, get_generator


def test_lattice_is_reproducible():
    """Same seed gives the same samples and pairs"""
    first = make_lattice(d=2, seed=7, t_count=4, b_count=3, pair_count=50)
    second = make_lattice(d=2, seed=7, t_count=4, b_count=3, pair_count=50)
    assert np.array_equal(first.b, second.b)
    assert np.array_equal(first.pairs().z2, second.pairs().z2)
    assert first.t[-1] == 1.0
    assert 0.0 in first.y


def test_lattice_rejects_bad_sizes():
    """Non-positive sizes are invalid"""
    with pytest.raises(InvalidArgumentError):
        make_lattice(t_count=0)


def test_H2_passes_for_example1(small_lattice):
    """example1 is monotone in y with mu = 1"""
    report = check_H2(example1(), small_lattice)
    assert report.passed
    assert report.verdict == PASS_VERDICT
    assert report.empirical_constant <= 1.0 + 1e-9


def test_H2_passes_for_neg_y_with_zero_mu(small_lattice):
    """g = -y satisfies H2 with mu = 0"""
    assert check_H2(get_generator("neg_y"), small_lattice, mu=0.0).passed


def test_H2_refutes_understated_mu(small_lattice):
    """g = 2y declaring mu = 1 is refuted with a witness"""
    report = check_H2(get_generator("linear_y", a=2.0, mu=1.0), small_lattice)
    assert not report.passed
    assert report.verdict == FAIL_VERDICT
    assert report.worst_slack < 0
    assert report.witness["lhs"] > report.witness["rhs"]
    assert report.empirical_constant == pytest.approx(2.0)


def test_H4_refutes_abs_z(small_lattice):
    """|z| violates the declared sqrt growth at large |z|"""
    report = check_H4_family(get_generator("abs_z"), small_lattice, "H4")
    assert not report.passed
    assert abs(report.witness["z"][0]) >= 10.0


def test_H4_passes_for_example1(small_lattice):
    """example1 satisfies its declared H4 constants"""
    assert check_H4_family(example1(), small_lattice, "H4").passed


@pytest.mark.parametrize("assumption", ["H2", "H4'", "H4*"])
def test_example3_passes_its_claims(small_lattice, assumption):
    """example3 satisfies H2, H4' and H4* with its declared constants"""
    (report,) = run_checks(example3(), [assumption], small_lattice)
    assert report.passed
    assert report.verdict == PASS_VERDICT


def test_example3_H4star_against_declared_phi(small_lattice):
    """The z-modulus u^(1/3) + sqrt(u) bounds every sampled z difference"""
    report = check_H4star(example3(), small_lattice)
    assert report.passed
    assert report.worst_slack >= 0


def test_H2_refutes_linear_y_below_its_slope(small_lattice):
    """g = 2y meets H2 with its own mu = 2 but is refuted at mu = 1"""
    g = get_generator("linear_y", a=2.0)
    assert check_H2(g, small_lattice).passed
    report = check_H2(g, small_lattice, mu=1.0)
    assert not report.passed
    assert report.witness["lhs"] > report.witness["rhs"]


def test_H4_unknown_variant(small_lattice):
    """Only H4, H4' and H4'' exist"""
    with pytest.raises(InvalidArgumentError):
        check_H4_family(example1(), small_lattice, "H4x")


def test_H5_passes_for_example2(small_lattice):
    """example2 satisfies H5 with C = 1"""
    assert check_H5(example2(), small_lattice).passed


def test_H1a_refutes_closed_step(small_lattice):
    """1_{y>=0} jumps at 0 when approached from the left"""
    report = check_H1a(get_generator("step_y_closed"), small_lattice)
    assert not report.passed
    assert report.witness["y"] == 0.0
    assert report.worst_slack <= -0.5


def test_H1a_passes_for_open_step(small_lattice):
    """1_{y>0} is left-continuous and lower semicontinuous"""
    assert check_H1a(get_generator("step_y_right"), small_lattice).passed


def test_H1prime_passes_for_example1(small_lattice):
    """example1 is continuous in (y, z)"""
    assert check_H1prime(example1(), small_lattice).passed


def test_H3_passes_for_example1(small_lattice):
    """The t^(-1/2) singularity is integrable along paths"""
    report = check_H3(example1(), small_lattice, radii=(1.0,), paths=2, steps=8)
    assert report.passed
    assert np.isfinite(report.empirical_constant)


def test_remark1_for_example1(small_lattice):
    """The sign-weighted growth bound holds on the lattice"""
    assert check_remark1(example1(), small_lattice).passed


def test_remark1_needs_H2(small_lattice):
    """Generators without H2 cannot use the growth bound"""
    with pytest.raises(ContractError):
        check_remark1(example2(), small_lattice)


def test_dominance(small_lattice):
    """0 <= 1 everywhere, and 1 <= 0 nowhere"""
    zero = get_generator("zero")
    one = get_generator("constant", c=1.0)
    assert check_dominance(zero, one, small_lattice).passed
    assert not check_dominance(one, zero, small_lattice).passed


def test_implications_chain(small_lattice):
    """H4'' gives H4' and H4 with the derived constants"""
    report = check_implications(get_generator("lipschitz_yz"), small_lattice)
    assert report.passed
    assert len(report.details) == 3


def test_missing_constant_is_contract_error(small_lattice):
    """Checks need the declared constant"""
    with pytest.raises(ContractError):
        check_H2(get_generator("step_y_right"), small_lattice)


def test_run_checks_defaults_to_claimed_flags(small_lattice):
    """Reports come back in the requested order"""
    reports = run_checks(get_generator("neg_y"), ["H2", "H4", "H5"], small_lattice)
    assert [report.assumption for report in reports] == ["H2", "H4", "H5"]
    assert all(report.passed for report in reports)
    assert reports[0].summary()["seed"] == small_lattice.seed


def test_run_checks_unknown_id(small_lattice):
    """Unknown check ids are rejected before any check runs"""
    with pytest.raises(InvalidArgumentError):
        run_checks(example1(), ["H9"], small_lattice)


@pytest.mark.parametrize("rho, divergent", [
    (lambda u: u, True),
    (lambda u: u * (1.0 - np.log(u)), True),
    (np.sqrt, False),
    (lambda u: u ** 0.75, False),
])
def test_osgood_classifier(rho, divergent):
    """u and u ln(e/u) diverge, power moduli below 1 converge"""
    verdict, partial = osgood_divergent(rho)
    assert verdict is divergent
    assert len(partial) == 8


def test_concave_modulus_shape():
    """sqrt is a valid modulus, u^2 is not concave"""
    assert concave_nondecreasing(np.sqrt)[0]
    passed, issue = concave_nondecreasing(lambda u: np.asarray(u) ** 2)
    assert not passed
    assert issue == "not concave"


def test_linear_growth_of_phi():
    """u^(1/3) + sqrt(u) grows at most linearly, u^2 does not"""
    assert linear_growth(lambda u: np.cbrt(u) + np.sqrt(u))[0]
    passed, issue = linear_growth(lambda u: np.asarray(u) ** 2)
    assert not passed
    assert issue == "superlinear"
