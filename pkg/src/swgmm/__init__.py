"""swgmm - Ajuste de GMMs pela distância sliced-Wasserstein."""

__version__ = "0.1.0"
