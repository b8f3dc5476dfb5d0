"""Hot scoring loop: SPL term weights accumulated over one posting list.

Two interchangeable implementations of the same float64 arithmetic:

* a numba ``@njit`` kernel (default when numba imports cleanly), and
* a vectorized pure-numpy fallback.

Set ``QUOKA_NO_NUMBA=1`` to force the numpy path. The active path is
exported as :func:`accumulate_term`; both remain importable for parity
tests and ``benchmarks/bench_scoring.py``. The formula must stay in sync
with ``scoring.h2_normalize`` / ``scoring.term_weight``.
"""

from __future__ import annotations

import os

import numpy as np


def numpy_accumulate(post_docs, post_tfs, doc_lengths, doc_mask, lam, c, avgdl, scores):
    """Add -ln((lam^(t/(t+1)) - lam)/(1 - lam)) to scores[d] for each posting.

    t = tf * log2(1 + c*avgdl/dl). Postings whose doc is masked out or has
    zero length are skipped. Doc ids are unique within one posting list,
    so plain fancy-index addition is safe.
    """
    keep = (doc_mask[post_docs] != 0) & (doc_lengths[post_docs] > 0)
    docs = post_docs[keep]
    if docs.size == 0:
        return
    tf = post_tfs[keep].astype(np.float64)
    t = tf * np.log2(1.0 + c * avgdl / doc_lengths[docs])
    ratio = t / (t + 1.0)
    weights = -np.log((np.power(lam, ratio) - lam) / (1.0 - lam))
    scores[docs] += weights


try:  # pragma: no cover - exercised indirectly via accumulate_term
    import numba

    @numba.njit(cache=True)
    def numba_accumulate(post_docs, post_tfs, doc_lengths, doc_mask, lam, c, avgdl, scores):
        for i in range(post_docs.shape[0]):
            d = post_docs[i]
            if doc_mask[d] == 0:
                continue
            dl = doc_lengths[d]
            if dl <= 0:
                continue
            t = post_tfs[i] * np.log2(1.0 + c * avgdl / dl)
            ratio = t / (t + 1.0)
            scores[d] += -np.log((lam**ratio - lam) / (1.0 - lam))

    HAS_NUMBA = True
except ImportError:  # pragma: no cover
    numba_accumulate = None
    HAS_NUMBA = False


def _numba_disabled() -> bool:
    return os.environ.get("QUOKA_NO_NUMBA", "").strip() not in ("", "0")


USING_NUMBA = HAS_NUMBA and not _numba_disabled()
accumulate_term = numba_accumulate if USING_NUMBA else numpy_accumulate


def warmup() -> None:
    """Trigger JIT compilation on toy inputs so first queries are not slow."""
    accumulate_term(
        np.zeros(1, dtype=np.int32),
        np.ones(1, dtype=np.int32),
        np.ones(1, dtype=np.int64),
        np.ones(1, dtype=np.uint8),
        0.5,
        1.0,
        1.0,
        np.zeros(1, dtype=np.float64),
    )
