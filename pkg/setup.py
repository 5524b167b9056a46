import os.path
import re

from setuptools import find_packages, setup

PACKAGE_NAME = "eigenbounds"
AUTHORS = [("eigenbounds developers", "")]

DESCRIPTION = (
    "Numerical verification of isoperimetric inequalities for the eigenvalues of "
    "the Dirichlet Laplacian, including a lower bound on the sum of eigenvalue gap "
    "ratios that is sharp on balls"
)
README = "README.rst"

SOURCE_DIR = "src"

REQUIREMENTS = ["click>=7.0", "joblib", "numpy", "pandas>=1.5", "scipy", "tqdm"]
REQUIREMENTS_TESTS = [
    "codecov",
    "coverage",
    "pytest-cov",
    "pytest>=4.0",
]
REQUIREMENTS_DOCS = ["sphinx>=1.4", "sphinx_rtd_theme", "sphinx-click"]
REQUIREMENTS_DEPLOY = ["twine>=1.11.0", "setuptools>=38.6.0", "wheel>=0.31.0"]

REQUIREMENTS_DEV = [
    *[
        "bandit",
        "black==19.10b0",
        "flake8",
        "isort<5",  # isort 5 incompatible with pylint
        "mypy",
        "pydocstyle",
        "pylint>=2.4.4",
    ],
    *REQUIREMENTS_DEPLOY,
    *REQUIREMENTS_DOCS,
    *REQUIREMENTS_TESTS,
]

REQUIREMENTS_EXTRAS = {
    "deploy": REQUIREMENTS_DEPLOY,
    "dev": REQUIREMENTS_DEV,
    "docs": REQUIREMENTS_DOCS,
    "tests": REQUIREMENTS_TESTS,
}

# Get the long description from the README file
with open(README, "r") as f:
    README_LINES = ["eigenbounds", "===========", ""]
    add_line = False
    for line in f:
        if line.strip() == ".. sec-begin-long-description":
            add_line = True
        elif line.strip() == ".. sec-end-long-description":
            break
        elif add_line:
            README_LINES.append(line.strip())

if len(README_LINES) < 3:
    raise RuntimeError("Insufficient description given")

with open(os.path.join(SOURCE_DIR, PACKAGE_NAME, "_version.py"), "r") as f:
    VERSION = re.search(r'__version__ = "([^"]+)"', f.read()).group(1)

setup(
    name=PACKAGE_NAME,
    version=VERSION,
    description=DESCRIPTION,
    long_description="\n".join(README_LINES),
    long_description_content_type="text/x-rst",
    author=", ".join([author[0] for author in AUTHORS]),
    license="3-Clause BSD License",
    classifiers=[  # full list at https://pypi.org/pypi?%3Aaction=list_classifiers
        "Development Status :: 3 - Alpha",
        "License :: OSI Approved :: BSD License",
        "Intended Audience :: Science/Research",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    keywords=[
        "eigenbounds",
        "eigenvalues",
        "laplacian",
        "spectral geometry",
        "isoperimetric inequalities",
        "bessel",
    ],
    packages=find_packages(SOURCE_DIR),  # no exclude as only searching in `src`
    package_dir={"": SOURCE_DIR},
    python_requires=">=3.8",
    install_requires=REQUIREMENTS,
    extras_require=REQUIREMENTS_EXTRAS,
    entry_points={"console_scripts": ["eigenbounds=eigenbounds.cli:main"]},
)
