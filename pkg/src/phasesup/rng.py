"""Counter-based random streams.

Every stream is a Philox generator keyed by ``(seed, stream_id)``; the
counter walks the stream.  Work split into fixed-size blocks, each with its
own ``stream_id``, draws the same numbers however the blocks are grouped.
"""

import numpy as np

_MASK64 = (1 << 64) - 1


def stream(seed, stream_id=0):
    """Independent, reproducible generator for ``(seed, stream_id)``."""
    seed = int(seed)
    stream_id = int(stream_id)
    if seed < 0 or stream_id < 0:
        raise ValueError("seed and stream_id must be non-negative")
    key = ((stream_id & _MASK64) << 64) | (seed & _MASK64)
    return np.random.Generator(np.random.Philox(key=key))


def uniform_phases(gen, n, d):
    """``n`` phase vectors with i.i.d. uniform entries on ``[0, 2 pi)``."""
    return gen.uniform(0.0, 2.0 * np.pi, size=(n, d))
