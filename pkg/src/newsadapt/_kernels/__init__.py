"""Kernel selection: compiled extension when built, pure Python otherwise."""

try:
    from newsadapt._kernels._ngram_c import cosine_scores, ngram_count_vector

    KERNEL_BACKEND = "compiled"
except ImportError:  # extension not built on this install
    from newsadapt._kernels._ngram_py import cosine_scores, ngram_count_vector

    KERNEL_BACKEND = "pure-python"

__all__ = ["ngram_count_vector", "cosine_scores", "KERNEL_BACKEND"]
