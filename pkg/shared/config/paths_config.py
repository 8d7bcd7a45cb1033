"""
Path configuration management for run artifacts
"""

import tempfile
from pathlib import Path

from ..utils.logging import get_logger

logger = get_logger(__name__)


class PathConfig:
    def __init__(self, root_dir=None, output_dir=None):
        """
        Initialize path configuration with project root

        Args:
            root_dir: Project root (auto-detected if None)
            output_dir: Directory for reports (defaults to <root>/output)
        """
        if root_dir is None:
            # Auto-detect project root (where this package is located)
            self.root_dir = Path(__file__).parent.parent.parent
        else:
            self.root_dir = Path(root_dir)

        # Output and log directories
        self.output_dir = Path(output_dir) if output_dir else self.root_dir / "output"
        self.logs_dir = self.output_dir / "logs" if output_dir else self.root_dir / "logs"
        self.bundles_dir = self.output_dir / "bundles"

    def create_directories(self):
        """Create the output and log directories"""
        for directory in (self.output_dir, self.logs_dir):
            try:
                directory.mkdir(parents=True, exist_ok=True)
                logger.debug(f"Directory ready: {directory}")
            except OSError as e:
                logger.error(f"Failed to create directory {directory}: {e}")
                raise

    def get_temp_dir(self, service_name=None):
        """Get a fresh temporary directory for a service run"""
        prefix = f"bsde_lab_{service_name}_" if service_name else "bsde_lab_"
        return Path(tempfile.mkdtemp(prefix=prefix))
