"""
Logging utilities for laboratory services
"""

import logging
import sys
from pathlib import Path
from datetime import datetime

ROOT_LOGGER_NAME = "BsdeLab"


def get_logger(module_name):
    """
    Get a child logger of the laboratory root logger

    Args:
        module_name: Usually __name__ of the calling module

    Returns:
        logging.Logger whose records propagate to the LabLogger handlers
    """
    return logging.getLogger(f"{ROOT_LOGGER_NAME}.{module_name}")


class LabLogger:
    def __init__(self, name=ROOT_LOGGER_NAME, log_dir=None, log_level=logging.INFO, to_file=True):
        """
        Initialize logger for laboratory services

        Args:
            name: Logger name (child of the laboratory root logger)
            log_dir: Directory for log files
            log_level: Logging level
            to_file: Whether to attach a timestamped file handler
        """
        self.name = name
        self.log_level = log_level
        self.log_file = None

        logger_name = name if name == ROOT_LOGGER_NAME else f"{ROOT_LOGGER_NAME}.{name}"
        self.logger = logging.getLogger(logger_name)
        self.logger.setLevel(log_level)

        # Library modules log through children of the root logger
        logging.getLogger(ROOT_LOGGER_NAME).setLevel(log_level)

        # Clear existing handlers to avoid duplicates
        self.logger.handlers.clear()
        self.logger.propagate = False

        detailed_formatter = logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(funcName)s:%(lineno)d - %(message)s'
        )
        simple_formatter = logging.Formatter(
            '%(asctime)s - %(levelname)s - %(message)s'
        )

        # Console handler (simple format); stderr keeps stdout free for tables
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(log_level)
        console_handler.setFormatter(simple_formatter)
        self.logger.addHandler(console_handler)

        if to_file:
            log_dir = Path.cwd() / "logs" if log_dir is None else Path(log_dir)
            log_dir.mkdir(parents=True, exist_ok=True)

            # File handler (detailed format); timestamps live only in file names
            timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
            self.log_file = log_dir / f"{name}_{timestamp}.log"

            file_handler = logging.FileHandler(self.log_file, encoding='utf-8')
            file_handler.setLevel(log_level)
            file_handler.setFormatter(detailed_formatter)
            self.logger.addHandler(file_handler)

        # Route library child loggers to the same handlers
        root = logging.getLogger(ROOT_LOGGER_NAME)
        if root is not self.logger:
            root.handlers = list(self.logger.handlers)
            root.propagate = False

        self.logger.info(f"Logger initialized: {name}")
        if self.log_file:
            self.logger.info(f"Log file: {self.log_file}")

    def info(self, message):
        """Log info message"""
        self.logger.info(message)

    def warning(self, message):
        """Log warning message"""
        self.logger.warning(message)

    def error(self, message):
        """Log error message"""
        self.logger.error(message)

    def debug(self, message):
        """Log debug message"""
        self.logger.debug(message)

    def exception(self, message):
        """Log exception with traceback"""
        self.logger.exception(message)

    def close(self):
        """Detach and close all handlers"""
        for handler in list(self.logger.handlers):
            handler.close()
            self.logger.removeHandler(handler)
        root = logging.getLogger(ROOT_LOGGER_NAME)
        if root is not self.logger:
            root.handlers = []

    def log_system_info(self):
        """Log platform, library versions and worker count"""
        from .system import SystemUtils

        self.info("=== System Information ===")
        for key, value in SystemUtils.get_platform_info().items():
            self.info(f"{key}: {value}")

        self.info("=== Numerical Stack ===")
        for key, value in SystemUtils.get_library_versions().items():
            self.info(f"{key}: {value}")
        self.info(f"workers: {SystemUtils.get_worker_count()}")

    def log_service_start(self, service_name, config=None):
        """Log service startup"""
        self.info(f"=== Starting {service_name} ===")
        if config:
            self.info(f"Configuration: {config}")

    def log_service_stop(self, service_name):
        """Log service shutdown"""
        self.info(f"=== Stopping {service_name} ===")

    def log_solve(self, generator_label, terminal_label, y0, stderr, steps):
        """Log a finished backward solve"""
        self.info(f"Solve: g={generator_label} xi={terminal_label} N={steps} -> y0={y0:.6g} (stderr {stderr:.2g})")

    def log_envelope_batch(self, generator_label, kind, n_values, count):
        """Log an envelope batch evaluation"""
        self.info(f"Envelope: g={generator_label} kind={kind} n={list(n_values)} points={count}")

    def log_check(self, report):
        """Log an assumption check verdict"""
        verdict = "pass" if report.passed else "FAIL"
        self.info(f"Check {report.assumption}: {verdict} (worst slack {report.worst_slack:.3g})")

    def log_experiment(self, report):
        """Log an experiment verdict, failing assertion names and moves against a claimed ordering"""
        failed = [a.name for a in report.assertions if not a.passed]
        verdict = "pass" if not failed else f"FAIL {failed}"
        self.info(f"Experiment {report.theorem}: {verdict}")
        for a in report.assertions:
            steps = [step for step in a.detail.get("backward_steps", ()) if step > 0]
            if steps:
                sizes = ", ".join(f"{step:.3g}" for step in steps)
                self.info(f"  {a.name}: backward steps [{sizes}] against allowance {a.detail['allowance']:.3g}")

    def log_error_with_context(self, error, context=None):
        """Log error with contextual information"""
        message = f"Error: {error}"
        if context:
            message += f" (Context: {context})"
        self.error(message)
