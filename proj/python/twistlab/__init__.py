"""Exact ranks and Kodaira fiber types of the twisted supersingular elliptic
surfaces attached to y² = x³ − x over GF(3^(2n))(t).

Every function returns the same JSON report (as a dict) that the ``twistlab``
command-line tool prints for the subcommand of the same name.
"""

from twistlab._core import (  # noqa: F401
    fibers,
    lfun,
    rank,
    run_command,
    surface,
    twist,
    verify_example,
)

__all__ = [
    "twist",
    "rank",
    "lfun",
    "fibers",
    "surface",
    "verify_example",
    "run_command",
]

__version__ = "1.0.0"
