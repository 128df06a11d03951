"""Culturally adaptive, retrieval-augmented news assessment pipeline."""

from newsadapt._kernels import KERNEL_BACKEND

__version__ = "0.1.0"

__all__ = ["KERNEL_BACKEND", "__version__"]
