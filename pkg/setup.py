#!/usr/bin/env python3
"""Setup script for speedlimitpy package."""

from setuptools import setup, find_packages
import os
import re


def read_file(filename):
    """Read file contents."""
    try:
        with open(
            os.path.join(os.path.dirname(__file__), filename), encoding="utf-8"
        ) as f:
            return f.read()
    except FileNotFoundError:
        return ""


def get_version():
    """Get version from speedlimitpy/__version__.py or environment variable."""
    # First try to get version from environment (for CI/CD)
    version = os.environ.get("PACKAGE_VERSION")
    if version:
        return version.lstrip("v")

    version_file = read_file("speedlimitpy/__version__.py")
    version_match = re.search(r"^__version__ = ['\"]([^'\"]*)['\"]", version_file, re.M)
    if version_match:
        return version_match.group(1)
    return "0.0.0"


def read_requirements(filename):
    """Read requirements from file."""
    return [
        line.strip()
        for line in read_file(filename).splitlines()
        if line.strip() and not line.startswith("#")
    ]


VERSION = get_version()

long_description = read_file("README.md")

dev_requirements = read_requirements("requirements-dev.txt")

setup(
    name="speedlimitpy",
    version=VERSION,
    author="Daniel Korkin",
    author_email="danielkorkin@example.com",
    description="Quantum speed limits of a driven qubit: exact simulation, "
    "minimum-time gate synthesis and bound stress tests",
    long_description=long_description,
    long_description_content_type="text/markdown",
    url="https://github.com/danielkorkin/speedlimitpy",
    packages=find_packages(exclude=["tests*", "docs*", "temp*", "examples*"]),
    python_requires=">=3.10",
    install_requires=[
        "numpy>=1.24",
        "scipy>=1.10",
    ],
    extras_require={
        "dev": dev_requirements,
        "docs": [
            "sphinx>=4.0.0",
            "furo",
            "sphinx-llms-txt",
        ],
        "test": [
            "pytest>=7.0",
            "pytest-cov>=4.0",
            "coverage>=6.0",
        ],
    },
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Physics",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Operating System :: OS Independent",
        "Environment :: Console",
    ],
    keywords=[
        "quantum",
        "qubit",
        "quantum-speed-limit",
        "quantum-gate",
        "two-level-system",
    ],
    entry_points={
        "console_scripts": [
            "speedlimitpy=speedlimitpy.cli:main",
        ],
    },
    zip_safe=False,
    license="MIT",
    platforms=["any"],
)
