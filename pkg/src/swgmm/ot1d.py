"""OT 1-D - Transporte ótimo unidimensional em forma fechada.

CDFs, funções quantil, mapa de transporte entre fatias, distância
p-Wasserstein 1-D e o estimador Monte-Carlo da sliced-Wasserstein.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.stats import norm

from .gmm import Dataset, GmmModel
from .slicing import Direction, SliceData, SliceModel, direction_matrix, slice_data, slice_model

# Grade padrão de níveis de quantil
DEFAULT_GRID = 512

# Precisão da bisseção do quantil de mistura
BISECTION_TOL = 1e-10

# Nós da grade usada para inverter a CDF do kernel gaussiano
KDE_GRID = 2048


@dataclass(frozen=True, eq=False)
class QuantileGrid:
    """Valores da função quantil em níveis z estritamente crescentes de (0, 1)."""

    zs: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        zs = np.array(self.zs, dtype=float).reshape(-1)
        values = np.array(self.values, dtype=float).reshape(-1)
        if zs.shape != values.shape or zs.size < 1:
            raise ValueError("zs e values devem ter o mesmo tamanho M >= 1")
        if np.any(zs <= 0) or np.any(zs >= 1) or np.any(np.diff(zs) <= 0):
            raise ValueError("zs deve ser estritamente crescente em (0, 1)")
        # a bisseção garante monotonia só até BISECTION_TOL
        values = np.maximum.accumulate(values)
        zs.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "zs", zs)
        object.__setattr__(self, "values", values)


Marginal = Union[QuantileGrid, SliceData, SliceModel]


def midpoint_levels(m: int) -> np.ndarray:
    """Níveis z_i = (i - 0.5)/M, i = 1..M."""
    if m < 1:
        raise ValueError(f"Tamanho da grade deve ser positivo, recebido {m}")
    return (np.arange(m) + 0.5) / m


def _check_levels(z: float | np.ndarray) -> np.ndarray:
    levels = np.asarray(z, dtype=float)
    if np.any(~np.isfinite(levels)) or np.any(levels < 0) or np.any(levels > 1):
        raise ValueError("Níveis de quantil devem estar em [0, 1]")
    return levels


def _as_output(values: np.ndarray) -> float | np.ndarray:
    return float(values) if np.ndim(values) == 0 else values


def sorted_quantile(points: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Quantil empírico de amostras já ordenadas.

    Interpolação linear das estatísticas de ordem nas posições (i - 0.5)/N,
    com valores presos ao mínimo e ao máximo fora delas.
    """
    n = points.shape[-1]
    positions = (np.arange(n) + 0.5) / n
    return np.interp(z, positions, points)


def kde_quantile(points: np.ndarray, bandwidth: float, z: np.ndarray) -> np.ndarray:
    """Quantil da estimativa por kernel gaussiano de largura h.

    A CDF é avaliada numa grade fina entre min - 6h e max + 6h e invertida
    por interpolação.
    """
    grid = np.linspace(points[0] - 6 * bandwidth, points[-1] + 6 * bandwidth, KDE_GRID)
    cdf = np.zeros(KDE_GRID)
    for chunk in np.array_split(points, max(1, points.size // 1024)):
        cdf += norm.cdf((grid[:, None] - chunk[None, :]) / bandwidth).sum(axis=1)
    cdf /= points.size
    return np.interp(z, cdf, grid)


def empirical_quantile(slice: SliceData, z: float | np.ndarray) -> float | np.ndarray:
    """Inversa da CDF empírica da fatia de dados.

    Raises:
        ValueError: z fora de [0, 1]
    """
    levels = _check_levels(z)
    if slice.bandwidth > 0:
        return _as_output(kde_quantile(slice.points, slice.bandwidth, levels))
    return _as_output(sorted_quantile(slice.points, levels))


def model_cdf(slice: SliceModel, t: float | np.ndarray) -> float | np.ndarray:
    """CDF da fatia do modelo: Σ_k α_k Φ((t - m_k)/√v_k)."""
    t_arr = np.asarray(t, dtype=float)
    z = (t_arr[..., None] - slice.means1d) / np.sqrt(slice.vars1d)
    return _as_output(np.sum(slice.weights * norm.cdf(z), axis=-1))


def model_quantile(slice: SliceModel, z: float | np.ndarray) -> float | np.ndarray:
    """Inversa da CDF da mistura por bisseção até BISECTION_TOL.

    O intervalo inicial é [min(m) - 10σ_max, max(m) + 10σ_max]; não existe
    forma fechada para o quantil de uma mistura.
    """
    levels = _check_levels(z)
    sigma_max = float(np.sqrt(slice.vars1d.max()))
    lo = np.full(levels.shape, slice.means1d.min() - 10 * sigma_max)
    hi = np.full(levels.shape, slice.means1d.max() + 10 * sigma_max)
    steps = int(np.ceil(np.log2(max(hi.max() - lo.min(), BISECTION_TOL) / BISECTION_TOL)))
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        below = np.asarray(model_cdf(slice, mid)) < levels
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return _as_output(0.5 * (lo + hi))


def transport_map(
    x_slice: SliceModel, y_slice: SliceData, t: float | np.ndarray
) -> float | np.ndarray:
    """Mapa de transporte monótono f(t) = J_y^{-1}(J_x(t)) entre as fatias."""
    levels = np.clip(np.asarray(model_cdf(x_slice, t)), 0.0, 1.0)
    return empirical_quantile(y_slice, levels)


def quantile_grid(source: Marginal, m: int = DEFAULT_GRID) -> QuantileGrid:
    """Função quantil de uma marginal nos M níveis de ponto médio."""
    zs = midpoint_levels(m)
    if isinstance(source, QuantileGrid):
        if source.zs.shape == zs.shape and np.array_equal(source.zs, zs):
            return source
        return QuantileGrid(zs, np.interp(zs, source.zs, source.values))
    if isinstance(source, SliceModel):
        return QuantileGrid(zs, model_quantile(source, zs))
    if isinstance(source, SliceData):
        return QuantileGrid(zs, empirical_quantile(source, zs))
    raise TypeError(f"Marginal não suportada: {type(source).__name__}")


def wasserstein_1d(a: Marginal, b: Marginal, p: float = 2.0, m: int = DEFAULT_GRID) -> float:
    """Distância p-Wasserstein entre duas marginais 1-D.

    Média de |J_a^{-1}(z) - J_b^{-1}(z)|^p nos M níveis de ponto médio,
    elevada a 1/p. Duas fatias empíricas do mesmo tamanho usam diretamente as
    diferenças das amostras ordenadas.

    Raises:
        ValueError: p < 1
    """
    if p < 1:
        raise ValueError(f"p deve ser >= 1, recebido {p}")
    if (
        isinstance(a, SliceData)
        and isinstance(b, SliceData)
        and a.bandwidth == 0
        and b.bandwidth == 0
        and len(a) == len(b)
    ):
        diff = a.points - b.points
    else:
        diff = quantile_grid(a, m).values - quantile_grid(b, m).values
    return float(np.mean(np.abs(diff) ** p) ** (1.0 / p))


def _slice(source: GmmModel | Dataset, theta: Direction) -> SliceModel | SliceData:
    if isinstance(source, GmmModel):
        return slice_model(source, theta)
    return slice_data(source, theta)


def sliced_wasserstein(
    a: GmmModel | Dataset,
    b: GmmModel | Dataset,
    p: float = 2.0,
    l: int = 100,
    m: int = DEFAULT_GRID,
    seed: int = 0,
) -> float:
    """Estimativa Monte-Carlo de SW_p com L direções uniformes.

    A integral na esfera usa a medida de probabilidade uniforme (média sobre
    as direções).

    Raises:
        ValueError: Dimensões diferentes ou p < 1
    """
    if a.dim != b.dim:
        raise ValueError(f"Dimensão incompatível: {a.dim} != {b.dim}")
    if p < 1:
        raise ValueError(f"p deve ser >= 1, recebido {p}")
    total = 0.0
    for row in direction_matrix(a.dim, l, seed):
        theta = Direction(row)
        total += wasserstein_1d(_slice(a, theta), _slice(b, theta), p, m) ** p
    return float((total / l) ** (1.0 / p))
