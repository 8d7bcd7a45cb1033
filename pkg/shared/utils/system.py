"""
System utilities and worker-count detection
"""

import os
import sys
import platform

import numpy as np
import scipy

from ..config.numerics_config import WORKERS_ENV_VAR, MAX_DEFAULT_WORKERS


class SystemUtils:
    @staticmethod
    def get_platform_info():
        """Get detailed platform information"""
        return {
            'system': platform.system(),
            'platform': platform.platform(),
            'machine': platform.machine(),
            'processor': platform.processor(),
            'python_version': sys.version.split()[0],
            'python_executable': sys.executable
        }

    @staticmethod
    def get_library_versions():
        """Get versions of the numerical libraries in use"""
        return {
            'numpy': np.__version__,
            'scipy': scipy.__version__,
        }

    @staticmethod
    def get_worker_count():
        """
        Get the number of worker threads

        Reads the worker environment variable; falls back to the CPU count
        capped at MAX_DEFAULT_WORKERS.

        Returns:
            Positive integer
        """
        raw = os.environ.get(WORKERS_ENV_VAR)
        if raw:
            try:
                value = int(raw)
            except ValueError:
                raise ValueError(f"{WORKERS_ENV_VAR} must be a positive integer, got {raw!r}")
            if value < 1:
                raise ValueError(f"{WORKERS_ENV_VAR} must be a positive integer, got {raw!r}")
            return value
        return max(1, min(os.cpu_count() or 1, MAX_DEFAULT_WORKERS))
