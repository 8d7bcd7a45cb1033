"""
Laboratory services behind the CLI subcommands
"""

import numpy as np

from shared.assumptions import make_lattice, run_checks
from shared.base.lab_service import BaseLabService
from shared.convolution import EnvelopeKind, envelope_batch, envelope_sequence, sample_points
from shared.generators import get_generator, get_terminal
from shared.io import dump_bundle
from shared.solver import SolverConfig, solve
from shared.stochastic import make_grid

from services.experiments import ExperimentSpec, run_experiment


class EnvelopeService(BaseLabService):
    """Envelope values at one point for a list of n, plus an optional sampled sequence check"""

    def __init__(self, **options):
        super().__init__("EnvelopeService", **options)

    def execute(self, run_config):
        p = run_config.params
        g = get_generator(p["generator"], d=p["d"], T=p["T"])
        kind = EnvelopeKind.parse(p["kind"])
        b = np.zeros(p["d"]) if p["b"] is None else np.asarray(p["b"], dtype=float)
        z = np.zeros(p["d"]) if p["z"] is None else np.asarray(p["z"], dtype=float)
        self.logger.log_envelope_batch(g.label, kind.value, p["n"], 1)

        results = []
        rows = []
        for n in p["n"]:
            batch = envelope_batch(g, n, kind, p["t"], b, p["y"], z, tol=p["tol"])
            result = batch.result()
            results.append({"n": n, **result.as_row(), "optimizer_y": result.optimizer_y,
                            "optimizer_z": result.optimizer_z.tolist()})
            rows.append({
                "n_or_level": float(n),
                "y0": result.value,
                "stderr": 0.0,
                "gap": result.certified_gap,
                "verdict": "certified" if result.certified else "uncertified",
            })

        payload = {
            "generator": g.describe(),
            "kind": kind.value,
            "point": {"t": p["t"], "b": b.tolist(), "y": p["y"], "z": z.tolist()},
            "tol": p["tol"],
            "envelopes": results,
        }
        tables = {"envelope": rows}
        passed = True

        if p["points"] > 0:
            points = sample_points(p["d"], p["points"], run_config.seed, T=p["T"])
            sequence = envelope_sequence(g, p["n"], points, kind, tol=p["tol"])
            payload["sequence"] = {
                "passed": sequence.passed,
                "points": p["points"],
                "mean_abs_error": sequence.mean_abs_error,
                "ordering_violations": sequence.ordering_violations,
                "sandwich_violations": sequence.sandwich_violations,
                "worst_ordering_slack": sequence.worst_ordering_slack,
                "uncertified": sequence.uncertified,
            }
            tables["sequence"] = sequence.table()
            passed = sequence.passed
        return payload, tables, passed


class CheckService(BaseLabService):
    """Assumption checks on a seeded lattice"""

    def __init__(self, **options):
        super().__init__("CheckService", **options)

    def execute(self, run_config):
        p = run_config.params
        g = get_generator(p["generator"], d=p["d"], T=p["T"])
        lattice = make_lattice(d=p["d"], T=p["T"], seed=run_config.seed, t_count=p["t_count"],
                               b_count=p["b_count"], pair_count=p["pair_count"])
        self.logger.info(f"Lattice: {lattice.describe()}")

        reports = run_checks(g, p["ids"], lattice)
        for report in reports:
            self.logger.log_check(report)
        rows = [
            {
                "assumption": report.assumption,
                "verdict": report.verdict,
                "worst_slack": report.worst_slack,
                "empirical_constant": report.empirical_constant,
                "evaluated": report.evaluated,
                "skipped": report.skipped,
            }
            for report in reports
        ]
        payload = {
            "generator": g.describe(),
            "lattice": lattice.describe(),
            "checks": [report.summary() for report in reports],
        }
        return payload, {"checks": rows}, all(report.passed for report in reports)


class SolveService(BaseLabService):
    """One backward solve with its diagnostics"""

    def __init__(self, **options):
        super().__init__("SolveService", **options)

    def execute(self, run_config):
        p = run_config.params
        g = get_generator(p["generator"], d=p["d"], T=p["T"])
        xi = get_terminal(p["terminal"], d=p["d"])
        cfg = SolverConfig(
            grid=make_grid(p["T"], p["N"]),
            paths=p["M"],
            basis=p["basis"],
            degree=p["degree"],
            bins=p["bins"],
            picard_iters=p["picard_iters"],
            picard_tol=p["picard_tol"],
            terminal_truncation=p["truncation"],
            truncation_mode=p["truncation_mode"],
        )
        bundle = self.make_bundle(p["T"], p["N"], p["M"], p["d"], run_config.seed, mode=p["mode"])
        result = solve(xi, g, bundle, cfg)
        self.logger.log_solve(g.label, result.terminal, result.y0, result.y0_stderr, p["N"])

        level = p["truncation"] if p["truncation"] is not None else float("inf")
        tables = {
            "y0": [{
                "n_or_level": level,
                "y0": result.y0,
                "stderr": result.y0_stderr,
                "gap": result.epsilon_reg,
                "verdict": "ok",
            }],
        }
        if p["mean_path"]:
            tables["mean_path"] = result.mean_path_table()
        payload = {"generator": g.describe(), "terminal": xi.describe(), "solve": result.summary()}
        if p["dump_paths"]:
            self.paths.bundles_dir.mkdir(parents=True, exist_ok=True)
            path = dump_bundle(bundle, self.paths.bundles_dir / f"solve_seed{run_config.seed}.bin")
            payload["bundle_file"] = path.name
        return payload, tables, True


class ExperimentService(BaseLabService):
    """Theorem experiment from the experiment section"""

    def __init__(self, **options):
        super().__init__("ExperimentService", **options)

    def execute(self, run_config):
        mapping = dict(run_config.params, seed=run_config.seed)
        spec = ExperimentSpec.from_mapping(mapping)
        report = run_experiment(spec)
        self.logger.log_experiment(report)
        return report.to_dict(), report.table_rows(), report.passed


SERVICES = {
    "envelope": EnvelopeService,
    "check": CheckService,
    "solve": SolveService,
    "experiment": ExperimentService,
}
