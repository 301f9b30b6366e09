"""Time-stepping kernels: compiled core with a pure-NumPy fallback.

The hot loop (two tridiagonal solves plus the explicit update, per step) is
provided twice with one contract:

    advance(w, v1, v2, g, tau, h, n0, n_steps, a, b, chi1, chi2,
            lam1, lam2, mu1, mu2, nu, env_rate, w0_norm) -> dict

Arrays are modified in place; the dict carries the new g plus window
diagnostics.  Selection happens at import: the compiled extension is used
when present, otherwise the NumPy fallback.  Set CHEMOFRONT_BACKEND to
"compiled" or "pure" to force one (forcing "compiled" raises if the
extension is missing).
"""

import os

from . import pure

_requested = os.environ.get("CHEMOFRONT_BACKEND", "auto")
if _requested not in ("auto", "compiled", "pure"):
    raise ValueError(
        f"CHEMOFRONT_BACKEND must be auto, compiled or pure, got {_requested!r}"
    )

if _requested == "pure":
    core = None
else:
    try:
        from . import core
    except ImportError:
        if _requested == "compiled":
            raise
        core = None

if core is not None:
    advance = core.advance
    BACKEND = "compiled"
else:
    advance = pure.advance
    BACKEND = "pure"


def available_backends() -> dict:
    """Name -> advance callable for every importable backend."""
    out = {"pure": pure.advance}
    if core is not None:
        out["compiled"] = core.advance
    return out
