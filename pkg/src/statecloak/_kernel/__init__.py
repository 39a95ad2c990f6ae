"""Simulation kernel with a compiled fast path and a pure-Python fallback.

The compiled extension is preferred when importable; otherwise the package
falls back to the pure kernel with identical results (the two are held to
bit-for-bit parity by tests). Set STATECLOAK_BACKEND=pure or =compiled to
force a choice; forcing the compiled kernel when it is not built raises
rather than silently degrading.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _pure

try:
    from . import _core
except ImportError:
    _core = None

_FORCED = os.environ.get("STATECLOAK_BACKEND", "").strip().lower()

if _FORCED == "pure":
    _active: ModuleType = _pure
    BACKEND = "pure"
elif _FORCED == "compiled":
    if _core is None:
        raise ImportError(
            "STATECLOAK_BACKEND=compiled but the compiled kernel is not built; "
            "reinstall the package or unset the variable"
        )
    _active = _core
    BACKEND = "compiled"
elif _FORCED:
    raise ImportError(f"unknown STATECLOAK_BACKEND={_FORCED!r}; use 'compiled' or 'pure'")
elif _core is not None:
    _active = _core
    BACKEND = "compiled"
else:
    _active = _pure
    BACKEND = "pure"

simulate_trajectory = _active.simulate_trajectory
simulate_summary = _active.simulate_summary


def available_backends() -> list[str]:
    """Names of the kernels importable in this installation."""
    return ["compiled", "pure"] if _core is not None else ["pure"]


def get_backend(name: str) -> ModuleType:
    """Fetch a kernel module by name, for benchmarks and parity tests."""
    if name == "pure":
        return _pure
    if name == "compiled":
        if _core is None:
            raise ImportError("compiled kernel is not built")
        return _core
    raise ValueError(f"unknown backend {name!r}; use 'compiled' or 'pure'")
