#!/usr/bin/env python3

import os, sys
from setuptools import setup

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))
from blockzpe import BLOCKZPE_VERSION

with open("README.md", "r") as f:
    long_description = f.read()

with open("requirements.txt") as f:
    requirements = f.read().split()

setup(
    name="blockzpe",
    version=BLOCKZPE_VERSION,
    license="GPL3",
    description="Zero-point and Casimir spectra of a dispersive block",
    long_description=long_description,
    long_description_content_type="text/markdown",
    scripts=["zpe_tool.py"],
    packages=["blockzpe"],
    install_requires = requirements,
    zip_safe=False)
