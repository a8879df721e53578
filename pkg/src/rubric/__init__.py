"""Weighted-rubric decision support for rating research articles for teaching.

The public surface: ``catalog`` for the criteria framework, ``engine`` for
the pure arithmetic, ``evaluation`` for profiles and assessments,
``sensitivity`` for what-if analysis, ``store`` for persistence, ``service``
for the HTTP API, and ``cli`` for the command line.
"""

from .catalog import CriteriaCatalog, builtin_catalog, load_catalog, validate_catalog
from .engine import NOT_APPLICABLE, RatingReport, evaluate, format_percent
from .errors import RubricError

__version__ = "0.1.0"

__all__ = [
    "CriteriaCatalog",
    "NOT_APPLICABLE",
    "RatingReport",
    "RubricError",
    "builtin_catalog",
    "evaluate",
    "format_percent",
    "load_catalog",
    "validate_catalog",
    "__version__",
]
