# Sphinx configuration for the eigenbounds docs
# https://www.sphinx-doc.org/en/master/usage/configuration.html

import os
import sys

sys.path.append(os.path.join(os.path.dirname(__file__), "../../src/eigenbounds"))
from _version import __version__  # isort:skip # append path before

project = "eigenbounds"
author = "eigenbounds developers"
copyright = "2024, {}".format(author)
version = ".".join(__version__.split(".")[:2])
release = __version__

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.coverage",
    "sphinx.ext.intersphinx",
    "sphinx.ext.mathjax",  # eigenvalue formulas in docstrings
    "sphinx.ext.napoleon",
    "sphinx_click",
]
autodoc_default_options = {
    "members": None,
    "show-inheritance": None,
    "undoc-members": None,
}
napoleon_google_docstring = False
napoleon_numpy_docstring = True
coverage_write_headline = False

templates_path = ["_templates"]
source_suffix = ".rst"
master_doc = "index"
language = "en"
exclude_patterns = ["build"]
pygments_style = "sphinx"

html_theme = "sphinx_rtd_theme"
html_static_path = ["_static"]
htmlhelp_basename = "eigenboundsdoc"

latex_documents = [
    (master_doc, "eigenbounds.tex", "eigenbounds Documentation", author, "manual")
]
man_pages = [(master_doc, "eigenbounds", "eigenbounds Documentation", [author], 1)]

intersphinx_mapping = {
    "numpy": ("https://numpy.org/doc/stable", None),
    "pandas": ("https://pandas.pydata.org/pandas-docs/stable", None),
    "python": ("https://docs.python.org/3", None),
    "scipy": ("https://docs.scipy.org/doc/scipy", None),
}
