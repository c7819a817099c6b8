"""
Interpreter compatibility shims.

Version flags decide where typing features and the TOML reader come from,
so the rest of the package imports them from one place regardless of the
running Python.
"""

import sys

# Version checks for this module
PY310_PLUS = sys.version_info >= (3, 10)
PY311_PLUS = sys.version_info >= (3, 11)

# Python 3.10+ features
if PY310_PLUS:
    from typing import TypeAlias
else:
    from typing_extensions import TypeAlias

# Python 3.11+ features
if PY311_PLUS:
    import tomllib
    from typing import Self
else:
    import tomli as tomllib
    from typing_extensions import Self

# Stable everywhere we support, but kept on typing_extensions so pyright sees
# one definition per name.
from typing_extensions import Final, Literal

__all__ = [
    "Final",
    "Literal",
    "Self",
    "TypeAlias",
    "tomllib",
    "PY310_PLUS",
    "PY311_PLUS",
]
