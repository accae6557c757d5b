"""Grid kernel selection.

The compiled extension is preferred when importable; STARLING_KERNEL=pure or
STARLING_KERNEL=compiled forces one side (compiled raises if the extension
is not built). Both kernels implement the same array contract.
"""

from __future__ import annotations

import os


def _select():
    choice = os.environ.get("STARLING_KERNEL", "").strip().lower()
    if choice == "pure":
        from . import kernel_py

        return kernel_py.run_grid, "pure"
    if choice == "compiled":
        from . import _kernel  # type: ignore[attr-defined]

        return _kernel.run_grid, "compiled"
    if choice:
        raise RuntimeError(
            f"STARLING_KERNEL={choice!r} not recognized; use 'pure' or 'compiled'"
        )
    try:
        from . import _kernel  # type: ignore[attr-defined]

        return _kernel.run_grid, "compiled"
    except ImportError:
        from . import kernel_py

        return kernel_py.run_grid, "pure"


run_grid, kernel_name = _select()
