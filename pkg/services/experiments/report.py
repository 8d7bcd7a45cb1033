"""
Experiment reports: assertions, convergence tables and witnesses
"""

from dataclasses import dataclass, field

import numpy as np

OK_VERDICT = "ok"
VIOLATION_VERDICT = "violation"
INFO_VERDICT = "info"


@dataclass
class Assertion:
    """A named pass/fail claim with the numbers behind it"""

    name: str
    passed: bool
    detail: dict = field(default_factory=dict)

    def to_dict(self):
        return {"name": self.name, "passed": bool(self.passed), "detail": self.detail}


@dataclass
class TableRow:
    """One row of a convergence table"""

    n_or_level: float
    y0: float
    stderr: float
    gap: float
    verdict: str = OK_VERDICT

    def to_dict(self):
        return {
            "n_or_level": self.n_or_level,
            "y0": self.y0,
            "stderr": self.stderr,
            "gap": self.gap,
            "verdict": self.verdict,
        }


@dataclass
class ExperimentReport:
    """
    Outcome of one theorem experiment

    Attributes:
        theorem: Theorem id
        spec: Echo of the ExperimentSpec
        assertions: Assertions in evaluation order
        tables: Table name -> list of TableRow
        tail_ratio: Last-gap / first-gap ratio of the main table
        witnesses: Data behind failing assertions
        notes: Caveats that apply to the whole run
    """

    theorem: str
    spec: dict
    assertions: list = field(default_factory=list)
    tables: dict = field(default_factory=dict)
    tail_ratio: float = None
    witnesses: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def passed(self):
        return all(assertion.passed for assertion in self.assertions)

    def add(self, name, passed, **detail):
        assertion = Assertion(name=name, passed=bool(passed), detail=detail)
        self.assertions.append(assertion)
        if not assertion.passed:
            self.witnesses.append({"assertion": name, **detail})
        return assertion

    def to_dict(self):
        return {
            "theorem": self.theorem,
            "passed": self.passed,
            "spec": self.spec,
            "assertions": [assertion.to_dict() for assertion in self.assertions],
            "tables": {name: [row.to_dict() for row in rows] for name, rows in self.tables.items()},
            "tail_ratio": self.tail_ratio,
            "witnesses": self.witnesses,
            "notes": list(self.notes),
        }

    def table_rows(self):
        """Table name -> list of plain dict rows"""
        return {name: [row.to_dict() for row in rows] for name, rows in self.tables.items()}


def tail_ratio(values):
    """
    |last increment| / |first increment| of a sequence

    Returns 0.0 when every increment vanishes and inf when only the first
    one does; None for fewer than three values.
    """
    values = np.asarray(values, dtype=float)
    if values.size < 3:
        return None
    increments = np.abs(np.diff(values))
    first, last = increments[0], increments[-1]
    if first == 0.0:
        return 0.0 if last == 0.0 else float("inf")
    return float(last / first)


def backward_steps(values, ordering):
    """
    Size of every consecutive move against the claimed ordering

    Returns:
        List with one entry per increment, 0.0 where the step goes the
        claimed way
    """
    increments = np.diff(np.asarray(values, dtype=float))
    if ordering == "nonincreasing":
        increments = -increments
    return np.maximum(-increments, 0.0).tolist()


def sequence_table(keys, results, ordering=None, allowance=0.0):
    """
    Build table rows from solves indexed by n or level

    Args:
        keys: n values or truncation levels
        results: SolveResult per key
        ordering: "nondecreasing", "nonincreasing" or None
        allowance: Slack per consecutive comparison

    Returns:
        (rows, number of ordering violations)
    """
    rows = []
    violations = 0
    previous = None
    for key, result in zip(keys, results):
        gap = 0.0 if previous is None else result.y0 - previous
        verdict = OK_VERDICT
        if previous is not None and ordering == "nondecreasing" and gap < -allowance:
            verdict = VIOLATION_VERDICT
        elif previous is not None and ordering == "nonincreasing" and gap > allowance:
            verdict = VIOLATION_VERDICT
        if ordering is None:
            verdict = INFO_VERDICT
        violations += verdict == VIOLATION_VERDICT
        rows.append(TableRow(n_or_level=float(key), y0=result.y0, stderr=result.y0_stderr, gap=gap, verdict=verdict))
        previous = result.y0
    return rows, violations
