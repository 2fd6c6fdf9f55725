"""
    This module enables `pip install ./`
    Do not run this script standalone.
    Refer to package readme for further details.
"""

from setuptools import setup, find_packages

setup(
    name="kernli",
    packages=find_packages(exclude=("__pycache__", "tests", "examples", "examples.*")),
    data_files=[],
    version="0.1.0",
    install_requires=[
        "numpy>=1.19.0",
        "scipy>=1.4.1",
        "PyYAML>=5.3",
        "colorama>=0.4.4",
        "pandas>=1.1",
    ],
    extras_require={
        "test": ["pytest>=6.0"],
    },
    python_requires=">=3.9",
)
