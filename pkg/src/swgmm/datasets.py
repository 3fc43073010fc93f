"""Datasets - Geradores sintéticos e leitura/escrita de CSV."""

from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import Sequence

import numpy as np

from .gmm import Dataset, GmmModel, sample

# Geometria de referência do dataset anel-quadrado-linha
RING_CENTER = (-2.0, 0.0)
RING_RADIUS = 1.0
SQUARE_CENTER = (2.0, 0.0)
SQUARE_SIDE = 2.0
LINE_START = (-1.0, 0.0)
LINE_END = (1.0, 0.0)


class DatasetFormatError(ValueError):
    """Exceção de parsing de CSV, com a linha (1-based) do problema."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"linha {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")


def _ring(rng: np.random.Generator, n: int) -> np.ndarray:
    angles = rng.uniform(0.0, 2.0 * math.pi, n)
    return np.column_stack(
        [
            RING_CENTER[0] + RING_RADIUS * np.cos(angles),
            RING_CENTER[1] + RING_RADIUS * np.sin(angles),
        ]
    )


def _square(rng: np.random.Generator, n: int) -> np.ndarray:
    """Pontos uniformes no perímetro do quadrado, por comprimento de arco."""
    half = SQUARE_SIDE / 2.0
    arc = rng.uniform(0.0, 4.0 * SQUARE_SIDE, n)
    side = np.minimum((arc // SQUARE_SIDE).astype(int), 3)
    offset = arc - side * SQUARE_SIDE - half
    x = np.select(
        [side == 0, side == 1, side == 2],
        [offset, np.full(n, half), -offset],
        np.full(n, -half),
    )
    y = np.select(
        [side == 0, side == 1, side == 2],
        [np.full(n, -half), offset, np.full(n, half)],
        -offset,
    )
    return np.column_stack([SQUARE_CENTER[0] + x, SQUARE_CENTER[1] + y])


def _line(rng: np.random.Generator, n: int) -> np.ndarray:
    s = rng.uniform(0.0, 1.0, n)
    start = np.array(LINE_START)
    end = np.array(LINE_END)
    return start + s[:, None] * (end - start)


def gen_ring_square_line(n: int, seed: int, noise: float = 0.05) -> Dataset:
    """Anel à esquerda, quadrado à direita e a linha que os liga.

    n//3 pontos para o quadrado e para a linha, o restante para o anel. As
    linhas saem nessa ordem: anel, quadrado, linha.

    Raises:
        ValueError: n < 3 ou noise < 0
    """
    if n < 3:
        raise ValueError(f"n deve ser >= 3, recebido {n}")
    if noise < 0:
        raise ValueError(f"noise deve ser >= 0, recebido {noise}")
    rng = np.random.default_rng(seed)
    per_shape = n // 3
    points = np.vstack(
        [_ring(rng, n - 2 * per_shape), _square(rng, per_shape), _line(rng, per_shape)]
    )
    if noise > 0:
        points = points + rng.normal(scale=noise, size=points.shape)
    return Dataset(points, label="ring-square-line")


def gen_gaussian_blobs(
    centers: Sequence[Sequence[float]], n: int, seed: int, scale: float = 1.0
) -> Dataset:
    """Blobs gaussianos isotrópicos; o resto da divisão vai aos primeiros centros."""
    centers_arr = np.atleast_2d(np.asarray(centers, dtype=float))
    if n < len(centers_arr):
        raise ValueError(f"n={n} menor que o número de centros {len(centers_arr)}")
    rng = np.random.default_rng(seed)
    counts = np.full(len(centers_arr), n // len(centers_arr))
    counts[: n % len(centers_arr)] += 1
    blocks = [
        center + scale * rng.standard_normal((count, centers_arr.shape[1]))
        for center, count in zip(centers_arr, counts)
    ]
    return Dataset(np.vstack(blocks), label="blobs")


def gen_gmm_samples(model: GmmModel, n: int, seed: int) -> Dataset:
    """Amostras de um GMM (delegação para :func:`swgmm.gmm.sample`)."""
    return sample(model, n, seed)


def load_csv(path: Path) -> Dataset:
    """Lê um CSV sem cabeçalho, uma amostra por linha.

    Linhas em branco são ignoradas.

    Raises:
        DatasetFormatError: Linhas com número de campos diferente, células não
            numéricas ou arquivo sem amostras
    """
    rows: list[list[float]] = []
    width: int | None = None
    with open(path, newline="", encoding="utf-8") as f:
        for line_number, row in enumerate(csv.reader(f), start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise DatasetFormatError(
                    f"esperados {width} campos, encontrados {len(row)}", line_number
                )
            try:
                values = [float(cell) for cell in row]
            except ValueError:
                raise DatasetFormatError(f"célula não numérica em {row!r}", line_number) from None
            if not all(math.isfinite(value) for value in values):
                raise DatasetFormatError("valor não finito", line_number)
            rows.append(values)

    if not rows:
        raise DatasetFormatError(f"arquivo sem amostras: {path}")
    return Dataset(np.array(rows), label=str(path))


def save_csv(data: Dataset, path: Path) -> None:
    """Grava o dataset como CSV sem cabeçalho (floats com ida e volta exata)."""
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        for row in data.samples:
            writer.writerow([repr(float(value)) for value in row])
