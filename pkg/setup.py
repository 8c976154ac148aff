"""
Allows installation via pip by navigating to this directory, and running "pip install ."
"""

from setuptools import setup, find_packages

setup(
    name="PySortition",
    version="0.1",
    author="PySortition developers",
    packages=find_packages(),
    package_data={"pysortition.tests": ["data/*.csv", "data/*.json"]},
    install_requires=[
        "numpy>=1.20.1",
        "scipy",
        "pandas",
    ],
    extras_require={"parallel": ["ray"]},
    entry_points={"console_scripts": ["pysortition=pysortition.cli:main"]},
    description="Weighted sortition for proof of stake committees",
)
