"""Benchmark: compiled kernel extension vs pure-Python fallback.

Times the two hot paths on a synthetic corpus: hashed n-gram embedding and
cosine scoring of a query against a pool matrix.

Usage: python benchmarks/bench_kernels.py [--texts 400] [--chars 1500] [--dim 512]
"""

from __future__ import annotations

import argparse
import random
import string
import time

import numpy as np

from newsadapt._kernels import _ngram_py

try:
    from newsadapt._kernels import _ngram_c
except ImportError:
    _ngram_c = None


def synthetic_texts(count: int, chars: int, seed: int = 0) -> list[str]:
    rng = random.Random(seed)
    alphabet = string.ascii_lowercase + "   آبپتثجچحخدذرزژسشصضطظعغفقکگلمنوهی"
    return ["".join(rng.choice(alphabet) for _ in range(chars)) for _ in range(count)]


def bench_embedding(impl, texts: list[str], dim: int) -> tuple[float, np.ndarray]:
    started = time.perf_counter()
    vectors = np.zeros((len(texts), dim), dtype=np.float64)
    for i, text in enumerate(texts):
        vectors[i] = impl.ngram_count_vector(text, 3, dim)
    return time.perf_counter() - started, vectors


def bench_scoring(impl, query: np.ndarray, matrix: np.ndarray, repeats: int) -> float:
    started = time.perf_counter()
    for _ in range(repeats):
        impl.cosine_scores(query, matrix)
    return time.perf_counter() - started


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--texts", type=int, default=400)
    parser.add_argument("--chars", type=int, default=1500)
    parser.add_argument("--dim", type=int, default=512)
    parser.add_argument("--score-repeats", type=int, default=200)
    args = parser.parse_args()

    texts = synthetic_texts(args.texts, args.chars)
    print(f"embedding {args.texts} texts x {args.chars} chars into d={args.dim}")

    pure_time, pure_vecs = bench_embedding(_ngram_py, texts, args.dim)
    print(f"  pure-python : {pure_time:8.3f}s "
          f"({args.texts / pure_time:7.1f} texts/s)")
    if _ngram_c is not None:
        c_time, c_vecs = bench_embedding(_ngram_c, texts, args.dim)
        print(f"  compiled    : {c_time:8.3f}s "
              f"({args.texts / c_time:7.1f} texts/s)  "
              f"speedup x{pure_time / c_time:.1f}")
        assert np.array_equal(pure_vecs, c_vecs), "backends disagree on counts"
    else:
        print("  compiled    : extension not built (pip install -e . with cython)")

    matrix = (pure_vecs / np.linalg.norm(pure_vecs, axis=1, keepdims=True)).astype(
        np.float32
    )
    query = matrix[0].copy()
    print(f"scoring 1 query vs {args.texts}x{args.dim} pool, "
          f"{args.score_repeats} repeats")
    pure_score = bench_scoring(_ngram_py, query, matrix, args.score_repeats)
    print(f"  pure-python : {pure_score:8.3f}s")
    if _ngram_c is not None:
        c_score = bench_scoring(_ngram_c, query, matrix, args.score_repeats)
        print(f"  compiled    : {c_score:8.3f}s  speedup x{pure_score / c_score:.1f}")


if __name__ == "__main__":
    main()
