"""Backend selection for the hot kernels.

The compiled module is used when it imports; otherwise the pure-Python
fallback.  ``KICOLOR_BACKEND=python`` forces the fallback and
``KICOLOR_BACKEND=cython`` makes a missing extension an import error.
"""

import os

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_choice = os.environ.get("KICOLOR_BACKEND", "auto").lower()
if _choice not in ("auto", "python", "cython"):
    raise ImportError(f"KICOLOR_BACKEND must be auto, python or cython, not {_choice!r}")
if _choice == "cython" and _ckernels is None:
    raise ImportError("KICOLOR_BACKEND=cython but kicolor._ckernels is not built")

if _choice == "python" or _ckernels is None:
    active = _pykernels
else:
    active = _ckernels

BACKEND = active.NAME


def available():
    """Mapping of backend name to kernel module, compiled first when present."""
    out = {}
    if _ckernels is not None:
        out[_ckernels.NAME] = _ckernels
    out[_pykernels.NAME] = _pykernels
    return out


def get(name=None):
    if name is None:
        return active
    if not isinstance(name, str):
        return name
    try:
        return available()[name]
    except KeyError:
        raise ValueError(f"backend {name!r} is not available") from None
