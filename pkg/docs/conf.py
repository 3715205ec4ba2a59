# Configuration file for the Sphinx documentation builder.
#
# For the full list of options see the documentation:
# https://www.sphinx-doc.org/en/master/usage/configuration.html

# -- Project information -----------------------------------------------------

project = 'dgr Documentation'
copyright = '2026, dgr developers'
author = 'dgr developers'

# The full version, including alpha/beta/rc tags
release = '0.2.0'


# -- General configuration ---------------------------------------------------

extensions = [
    "myst_parser",
    "sphinx.ext.githubpages",
    "sphinx_rtd_dark_mode",
    "sphinx.ext.autosectionlabel",
    'sphinxcontrib.programoutput',
]

# Set MyST specific extensions
myst_enable_extensions = [
    "amsmath",
    "dollarmath",
]

# enable equation rendering inline
myst_dmath_double_inline = True

# Make sure the target is unique
autosectionlabel_prefix_document = True

templates_path = ['_templates']

exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']


# -- Options for HTML output -------------------------------------------------

html_theme = 'sphinx_rtd_theme'

html_static_path = ['_static']

# -- Options for sphinx_rtd_dark_mode -------
default_dark_mode = False

html_theme_options = {
    'collapse_navigation': False,
    'navigation_depth': 2,
}
