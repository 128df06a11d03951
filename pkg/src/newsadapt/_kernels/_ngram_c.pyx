# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel twin of ``_ngram_py``; same hashing, same windowing."""

import numpy as np

cimport numpy as cnp

cnp.import_array()

cdef extern from "Python.h":
    Py_ssize_t PyUnicode_GET_LENGTH(object u)
    Py_UCS4 PyUnicode_READ_CHAR(object u, Py_ssize_t i)

cdef unsigned long long FNV_OFFSET = 0xCBF29CE484222325ULL
cdef unsigned long long FNV_PRIME = 0x100000001B3ULL


def ngram_count_vector(str text, int n, int dim):
    if n < 1:
        raise ValueError("n must be >= 1")
    if dim < 1:
        raise ValueError("dim must be >= 1")
    cdef cnp.ndarray[cnp.float64_t, ndim=1] counts = np.zeros(dim, dtype=np.float64)
    cdef Py_ssize_t length = PyUnicode_GET_LENGTH(text)
    if length == 0:
        return counts
    cdef int window = n if length >= n else <int> length
    cdef Py_ssize_t start, j
    cdef unsigned long long h
    cdef unsigned int cp
    cdef int shift
    for start in range(length - window + 1):
        h = FNV_OFFSET
        for j in range(start, start + window):
            cp = <unsigned int> PyUnicode_READ_CHAR(text, j)
            for shift in range(4):
                h ^= (cp >> (8 * shift)) & 0xFFULL
                h = h * FNV_PRIME
        counts[<Py_ssize_t> (h % <unsigned long long> dim)] += 1.0
    return counts


def cosine_scores(object query, object matrix):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] q = np.ascontiguousarray(query, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] m = np.ascontiguousarray(matrix, dtype=np.float64)
    if m.shape[1] != q.shape[0]:
        raise ValueError("query/matrix dimension mismatch")
    cdef Py_ssize_t rows = m.shape[0]
    cdef Py_ssize_t dim = m.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.zeros(rows, dtype=np.float64)
    cdef Py_ssize_t i, j
    cdef double qnorm = 0.0, dot, rnorm, v
    for j in range(dim):
        qnorm += q[j] * q[j]
    qnorm = qnorm ** 0.5
    if qnorm == 0.0:
        return out
    for i in range(rows):
        dot = 0.0
        rnorm = 0.0
        for j in range(dim):
            v = m[i, j]
            dot += v * q[j]
            rnorm += v * v
        if rnorm > 0.0:
            out[i] = dot / ((rnorm ** 0.5) * qnorm)
    return out
