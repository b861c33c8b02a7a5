# -*- coding: utf-8 -*-
#
# Pricecap documentation build configuration file.
#
# This file is execfile()d with the current directory set to its containing
# dir. Values that are not set here keep the sphinx defaults.
#
import os
import sys

import sphinx

# Document the checked out package, not an installed copy
sys.path.insert(0, os.path.abspath(os.path.join('..', '..')))
import pricecap  # noqa

# -- General configuration ------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.doctest',
    'sphinx.ext.mathjax',
    'sphinx.ext.napoleon',
    'sphinx.ext.viewcode',
]

# Autodoc defaults
if int(sphinx.__version__.split('.')[1]) < 8:
    autodoc_default_flags = [
        'members',
        'inherited-members',
    ]
else:
    autodoc_default_options = {
        'members': None,
        'inherited-members': None,
    }

templates_path = []
source_suffix = '.rst'
master_doc = 'index'

# General information about the project.
project = u'Pricecap'
copyright = u'2026, Pricecap Authors'
author = u'Pricecap Authors'

# The short X.Y version and the full version.
version = pricecap.__version__
release = version

language = 'en'
exclude_patterns = []
pygments_style = 'sphinx'
todo_include_todos = False


# -- Options for HTML output ----------------------------------------------

html_theme = 'alabaster'
html_theme_options = {
    'page_width': '1280px',
    'sidebar_width': '320px',
}
html_static_path = []
htmlhelp_basename = 'Pricecapdoc'


# -- Options for LaTeX and manual page output -----------------------------

latex_documents = [
    (master_doc, 'Pricecap.tex', u'Pricecap Documentation',
     u'Pricecap Authors', 'manual'),
]
man_pages = [
    (master_doc, 'pricecap', u'Pricecap Documentation', [author], 1)
]
