"""Exception taxonomy shared across the package.

These map one-to-one onto the CLI exit codes: ConfigError -> 2,
UnsupportedPathError -> 3, ConvergenceError (defined in specfun, re-exported
here) -> 4.
"""

from __future__ import annotations


class ConfigError(ValueError):
    """A scenario parameter violates its documented constraint."""


class UnsupportedPathError(RuntimeError):
    """The requested analytic route does not exist for these parameters.

    Typical case: a closed form that needs a small rational alpha2. The
    quadrature and Monte-Carlo routes remain available; the message says so.
    """
