"""
Setup script for the BSDE L1 laboratory package
"""

from setuptools import setup, find_packages
from pathlib import Path

# Read the usage guide as long description
this_directory = Path(__file__).parent
long_description = (this_directory / "HOW_TO_RUN.md").read_text(encoding='utf-8') if (this_directory / "HOW_TO_RUN.md").exists() else "BSDE L1 laboratory"

TEST_REQUIREMENTS = ("pytest", "pytest-cov", "hypothesis")


# Read requirements
def read_requirements(filename):
    """Read requirements from file"""
    requirements_path = this_directory / filename
    if requirements_path.exists():
        with open(requirements_path, 'r', encoding='utf-8') as f:
            return [line.strip() for line in f if line.strip() and not line.startswith('#')]
    return []


requirements = read_requirements("requirements.txt")

setup(
    name="bsde-l1-lab",
    version="1.0.0",
    author="BSDE Lab Team",
    description="Numerical laboratory for BSDEs with integrable terminal data",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(include=["shared*", "services*"]),
    classifiers=[
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    python_requires=">=3.9",
    install_requires=[r for r in requirements if not r.startswith(TEST_REQUIREMENTS)],
    extras_require={
        "dev": [r for r in requirements if r.startswith(TEST_REQUIREMENTS)] + [
            "black>=23.0.0",
            "flake8>=6.0.0",
        ]
    },
    entry_points={
        "console_scripts": [
            "bsde-lab=services.cli.lab_cli:main",
        ]
    },
    include_package_data=True,
    zip_safe=False,
    keywords="BSDE backward stochastic differential equation Monte Carlo regression inf-convolution",
)
