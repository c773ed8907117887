"""Hot-loop kernels.

The compiled extension is preferred when importable; the pure-numpy fallback
is selected otherwise (or when TWOFLUX_PURE_PY is set).  Both expose the same
two entry points and produce bit-identical face fluxes.
"""

import os

from . import _godunov_py

if os.environ.get("TWOFLUX_PURE_PY"):
    _impl = _godunov_py
    COMPILED = False
else:
    try:
        from . import _godunov_cy as _impl  # type: ignore[no-redef]

        COMPILED = True
    except ImportError:
        _impl = _godunov_py
        COMPILED = False

make_flux_table = _impl.make_flux_table
face_fluxes_pwl = _impl.face_fluxes_pwl

__all__ = ["COMPILED", "make_flux_table", "face_fluxes_pwl", "_godunov_py"]
