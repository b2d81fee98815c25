"""Resampling kernel selection: compiled extension when built, numpy otherwise.

Both backends are bit-identical by construction; `KERNEL_BACKEND` reports
which one is active and benchmarks/tests can reach both explicitly.
"""

from pneumoscreen._kernels import _fallback

try:
    from pneumoscreen._kernels import _bilinear as _compiled
except ImportError:
    _compiled = None

KERNEL_BACKEND = "compiled" if _compiled is not None else "python"

if _compiled is not None:
    resize_bilinear = _compiled.resize_bilinear
else:
    resize_bilinear = _fallback.resize_bilinear
