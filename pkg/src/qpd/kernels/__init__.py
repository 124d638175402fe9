"""Batch evaluation kernels with a compiled core and a pure-Python fallback.

``outcome_probs(theta_a, phi_a, theta_b, phi_b, variant)`` returns an (N, 4)
float array of outcome probabilities [p_cc, p_cd, p_dc, p_dd] for N strategy
pairs; ``variant`` is one of the VARIANT_* codes.

The compiled extension is preferred when importable; set QPD_PURE_PYTHON=1 to
force the numpy fallback (used by the benchmark and the cross-checking tests).
"""

import os

from .fallback import VARIANT_CLASSICAL, VARIANT_ENTANGLED, VARIANT_SEPARABLE

if os.environ.get("QPD_PURE_PYTHON"):
    from . import fallback as _impl
else:
    try:
        from . import _native as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import fallback as _impl

outcome_probs = _impl.outcome_probs
BACKEND = _impl.BACKEND_NAME

__all__ = [
    "outcome_probs",
    "BACKEND",
    "VARIANT_ENTANGLED",
    "VARIANT_SEPARABLE",
    "VARIANT_CLASSICAL",
]
