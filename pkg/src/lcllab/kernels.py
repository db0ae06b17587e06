"""Kernel selection: the compiled extension when importable, else the Python twins.

Set ``LCLLAB_PURE=1`` to force the fallback.
"""

import os

from . import _kernels_py as python_impl

compiled_impl = None
if os.environ.get("LCLLAB_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as compiled_impl
    except ImportError:
        compiled_impl = None

_impl = compiled_impl if compiled_impl is not None else python_impl
BACKEND = "compiled" if compiled_impl is not None else "python"

bfs_ball = _impl.bfs_ball
component_reach = _impl.component_reach
pi_rule_masks = _impl.pi_rule_masks
