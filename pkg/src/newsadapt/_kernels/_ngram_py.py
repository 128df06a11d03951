"""Pure-Python kernel fallback.

Must stay numerically interchangeable with the compiled twin in
``_ngram_c.pyx``: identical n-gram windowing, identical FNV-1a hashing
over code points, float64 accumulation for cosine scores.
"""

from __future__ import annotations

import numpy as np

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = 0xFFFFFFFFFFFFFFFF


def ngram_count_vector(text: str, n: int, dim: int) -> np.ndarray:
    """Hash character n-grams of ``text`` into a ``dim``-bucket count vector.

    Grams slide over code points; each code point feeds FNV-1a as four
    little-endian bytes. Texts shorter than ``n`` (but non-empty) hash as a
    single gram; the empty text yields the zero vector.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if dim < 1:
        raise ValueError("dim must be >= 1")
    counts = np.zeros(dim, dtype=np.float64)
    cps = [ord(ch) for ch in text]
    length = len(cps)
    if length == 0:
        return counts
    window = n if length >= n else length
    for start in range(length - window + 1):
        h = _FNV_OFFSET
        for j in range(start, start + window):
            cp = cps[j]
            for shift in (0, 8, 16, 24):
                h ^= (cp >> shift) & 0xFF
                h = (h * _FNV_PRIME) & _MASK64
        counts[h % dim] += 1.0
    return counts


def cosine_scores(query: np.ndarray, matrix: np.ndarray) -> np.ndarray:
    """Cosine similarity of ``query`` against every row of ``matrix``.

    Accumulates in float64 regardless of input dtype. Zero-norm rows score
    0.0; a zero-norm query yields all zeros (callers validate norms).
    """
    q = np.asarray(query, dtype=np.float64)
    m = np.asarray(matrix, dtype=np.float64)
    if m.ndim != 2 or q.ndim != 1 or m.shape[1] != q.shape[0]:
        raise ValueError("query/matrix dimension mismatch")
    qnorm = float(np.sqrt(np.dot(q, q)))
    if qnorm == 0.0:
        return np.zeros(m.shape[0], dtype=np.float64)
    row_norms = np.sqrt(np.einsum("ij,ij->i", m, m))
    dots = m @ q
    out = np.zeros(m.shape[0], dtype=np.float64)
    nonzero = row_norms > 0.0
    out[nonzero] = dots[nonzero] / (row_norms[nonzero] * qnorm)
    return out
