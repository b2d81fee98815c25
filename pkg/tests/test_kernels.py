import numpy as np
import pytest

from pneumoscreen import _kernels
from pneumoscreen._kernels import _fallback


@pytest.mark.skipif(_kernels._compiled is None, reason="compiled kernel not built")
def test_compiled_and_fallback_bit_identical():
    rng = np.random.default_rng(99)
    for _ in range(20):
        h, w = rng.integers(1, 120, size=2)
        th, tw = rng.integers(1, 140, size=2)
        src = np.ascontiguousarray(rng.integers(0, 256, size=(h, w)).astype(np.uint8))
        compiled = _kernels._compiled.resize_bilinear(src, int(th), int(tw))
        python = _fallback.resize_bilinear(src, int(th), int(tw))
        assert np.array_equal(compiled, python), (h, w, th, tw)


def test_backend_advertised():
    assert _kernels.KERNEL_BACKEND in ("compiled", "python")
    if _kernels._compiled is not None:
        assert _kernels.KERNEL_BACKEND == "compiled"
        assert _kernels.resize_bilinear is _kernels._compiled.resize_bilinear
