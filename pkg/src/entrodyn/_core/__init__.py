"""Backend selection for the hot kernels.

The compiled Cython core is preferred; a pure-numpy fallback with the same
bit-level contract is used when the extension is missing.  Set
``ENTRODYN_BACKEND=numpy`` or ``ENTRODYN_BACKEND=cython`` to force a choice
(forcing ``cython`` raises if the extension did not build).
"""

import os

from . import _kernels_np


def _load():
    choice = os.environ.get("ENTRODYN_BACKEND", "").strip().lower()
    if choice == "numpy":
        return _kernels_np
    try:
        from . import _kernels_cy
    except ImportError:
        if choice == "cython":
            raise ImportError(
                "ENTRODYN_BACKEND=cython but the compiled core is not available; "
                "reinstall with a C compiler and Cython present"
            )
        return _kernels_np
    return _kernels_cy


_impl = _load()

backend_name = _impl.BACKEND
philox2x64 = _impl.philox2x64
standard_normals = _impl.standard_normals
euler_maruyama_step = _impl.euler_maruyama_step

available_backends = ["numpy"]
try:
    from . import _kernels_cy as _cy  # noqa: F401

    available_backends.insert(0, "cython")
except ImportError:
    pass


def get_backend(name):
    """Return a specific backend module (for benchmarks and equivalence tests)."""
    if name == "numpy":
        return _kernels_np
    if name == "cython":
        from . import _kernels_cy

        return _kernels_cy
    raise ValueError(f"unknown backend {name!r}")
