"""
Base class for all laboratory services
"""

import shutil
from abc import ABC, abstractmethod

from ..config.paths_config import PathConfig
from ..stochastic import make_grid, simulate_paths
from ..utils.logging import LabLogger


class BaseLabService(ABC):
    """
    Abstract base class for laboratory services

    Provides common functionality for:
    - Output and log directories
    - Logging and system information
    - Brownian path bundles with explicit seeds
    - Temporary directories and cleanup
    """

    def __init__(self, service_name="BsdeLab", output_dir=None, log_to_file=True, log_level=None):
        """
        Initialize base laboratory service

        Args:
            service_name: Name of the service (for logging)
            output_dir: Directory for reports (defaults to <root>/output)
            log_to_file: Whether to write a timestamped log file
            log_level: Logging level (INFO if None)
        """
        self.service_name = service_name

        # Initialize configuration
        self.paths = PathConfig(output_dir=output_dir)
        self.paths.create_directories()

        # Initialize logging
        logger_options = {} if log_level is None else {"log_level": log_level}
        self.logger = LabLogger(
            name=service_name,
            log_dir=self.paths.logs_dir,
            to_file=log_to_file,
            **logger_options,
        )

        self.logger.log_service_start(service_name)
        self.logger.log_system_info()

        # Create temporary directory
        self.temp_dir = self.paths.get_temp_dir(service_name)
        self.logger.debug(f"Temporary directory: {self.temp_dir}")

        self.logger.info(f"{service_name} initialization completed")

    def make_bundle(self, T, N, M, d, seed, mode="standard"):
        """
        Simulate the Brownian paths every solve of a run shares

        Args:
            T: Horizon
            N: Number of steps
            M: Number of paths
            d: Brownian dimension
            seed: Explicit 64-bit seed
            mode: "standard" or "nested"

        Returns:
            PathBundle
        """
        grid = make_grid(T, N)
        self.logger.info(f"Simulating {M} paths, N={N}, d={d}, seed={seed}, mode={mode}")
        return simulate_paths(grid, d, M, seed, mode=mode)

    def cleanup(self):
        """Clean up temporary files and log handlers"""
        self.logger.info("Cleaning up resources...")

        try:
            if hasattr(self, 'temp_dir') and self.temp_dir.exists():
                shutil.rmtree(self.temp_dir, ignore_errors=True)
                self.logger.debug(f"Removed temporary directory: {self.temp_dir}")
        except OSError as e:
            self.logger.error(f"Cleanup failed: {e}")

        self.logger.log_service_stop(self.service_name)
        self.logger.close()

    # Abstract methods that must be implemented by subclasses
    @abstractmethod
    def execute(self, run_config):
        """
        Run the service on an effective configuration

        Args:
            run_config: RunConfig with the subcommand's parameters

        Returns:
            (payload dict, tables dict name -> rows, passed flag)
        """
        pass

    def __enter__(self):
        """Context manager entry"""
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        """Context manager exit with cleanup"""
        self.cleanup()
