"""Token-sequence similarity via sequence alignment.

Percent identity of two token sequences: matched token pairs of the
optimal global alignment divided by the global alignment length (aligned
columns including gaps). In "combined" mode a local-alignment pass runs
as well, and when the best local region contains more matches than the
global alignment, that larger match count is used as the numerator.

The DP kernels live in a compiled extension (``botminer._kernel``) with a
pure-Python fallback chosen at import time. Set BOTMINER_PURE_PYTHON=1 to
force the fallback.
"""

from __future__ import annotations

import os
from typing import Sequence

import numpy as np

if os.environ.get("BOTMINER_PURE_PYTHON"):
    from . import _kernel_py as _backend

    BACKEND = "python"
else:
    try:
        from . import _kernel as _backend  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        from . import _kernel_py as _backend  # type: ignore[no-redef]

        BACKEND = "python"

global_align = _backend.global_align
local_align = _backend.local_align


def encode_tokens(
    docs: Sequence[Sequence[str]], vocab: dict[str, int] | None = None
) -> list[np.ndarray]:
    """Intern token sequences as int32 arrays sharing one vocabulary."""
    if vocab is None:
        vocab = {}
    out = []
    for tokens in docs:
        ids = [vocab.setdefault(t, len(vocab)) for t in tokens]
        out.append(np.array(ids, dtype=np.intc))
    return out


def percent_identity(a: np.ndarray, b: np.ndarray, combined: bool = True) -> float:
    """Percent identity of two integer-encoded token sequences."""
    la, lb = len(a), len(b)
    if la == 0 and lb == 0:
        return 1.0  # identical by convention; avoids 0/0
    if la == 0 or lb == 0:
        return 0.0
    _, matches, length = global_align(a, b)
    if combined:
        _, local_matches, _ = local_align(a, b)
        if local_matches > matches:
            matches = local_matches
    return matches / length


def percent_identity_batch(
    seqs: Sequence[np.ndarray],
    pairs: Sequence[tuple[int, int]],
    combined: bool = True,
) -> np.ndarray:
    """Percent identity for many (i, j) index pairs into ``seqs`` at once."""
    offsets = np.zeros(len(seqs) + 1, dtype=np.int_)
    np.cumsum([len(s) for s in seqs], out=offsets[1:])
    tokens = (
        np.concatenate([np.asarray(s, dtype=np.intc) for s in seqs])
        if offsets[-1]
        else np.zeros(0, dtype=np.intc)
    )
    pairs_arr = np.asarray(pairs, dtype=np.int_).reshape(-1, 2)
    out = np.empty(len(pairs_arr), dtype=float)
    _backend.percent_identity_batch(
        np.ascontiguousarray(tokens, dtype=np.intc),
        np.ascontiguousarray(offsets, dtype=np.int_),
        np.ascontiguousarray(pairs_arr[:, 0]),
        np.ascontiguousarray(pairs_arr[:, 1]),
        combined,
        out,
    )
    return out


def similarity(
    a_tokens: Sequence[str], b_tokens: Sequence[str], combined: bool = True
) -> float:
    """Percent identity of two token lists; symmetric, in [0, 1]."""
    enc_a, enc_b = encode_tokens([a_tokens, b_tokens])
    return percent_identity(enc_a, enc_b, combined=combined)
