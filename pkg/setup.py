"""Setup script for graph-indices package."""

from setuptools import find_packages, setup

setup(
    name="graph-indices",
    packages=find_packages(),
    python_requires=">=3.10",
)
