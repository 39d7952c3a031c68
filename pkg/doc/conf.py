#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
# uniblend documentation build configuration file.
#
# This file is execfile()d with the current directory set to its containing dir.

import os
import sys
sys.path.insert(0, os.path.abspath('..'))

# -- General configuration ------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.intersphinx',
    'sphinx.ext.todo',
    'sphinx.ext.coverage',
    'sphinx.ext.viewcode',
    'numpydoc',
]
numpydoc_show_class_members = False

templates_path = []
source_suffix = '.rst'
master_doc = 'index'

project = 'uniblend'
copyright = '2026, the uniblend developers'
author = 'The uniblend developers'

version = '0.1'
release = '0.1'

language = 'en'
exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']
pygments_style = 'sphinx'
todo_include_todos = True

# -- Options for HTML output ----------------------------------------------

html_theme = 'sphinx_rtd_theme'
html_static_path = []
htmlhelp_basename = 'uniblenddoc'

# -- Options for manual page output ---------------------------------------

man_pages = [
    ('usage', 'uniblend', 'uniblend command line interface', [author], 1)
]

intersphinx_mapping = {
    'python': ('https://docs.python.org/3', None),
    'numpy': ('https://numpy.org/doc/stable/', None),
    'scipy': ('https://docs.scipy.org/doc/scipy/', None),
}
