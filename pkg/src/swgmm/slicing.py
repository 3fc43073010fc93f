"""Slicing - Direções na esfera e marginais unidimensionais (transformada de Radon)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .gmm import EPS_VAR, Dataset, GmmModel

NORM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Direction:
    """Vetor unitário θ em S^{d-1} usado como eixo de projeção."""

    theta: np.ndarray

    def __post_init__(self) -> None:
        theta = np.array(self.theta, dtype=float).reshape(-1)
        if theta.size < 1:
            raise ValueError("Direção vazia")
        norm = np.linalg.norm(theta)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"Direção não unitária (norma {norm:.15g})")
        theta.setflags(write=False)
        object.__setattr__(self, "theta", theta)

    @classmethod
    def from_vector(cls, vector: np.ndarray) -> Direction:
        """Normaliza um vetor não nulo."""
        vector = np.asarray(vector, dtype=float).reshape(-1)
        norm = np.linalg.norm(vector)
        if norm == 0:
            raise ValueError("Vetor nulo não define direção")
        return cls(vector / norm)

    @property
    def dim(self) -> int:
        """Dimensão d."""
        return int(self.theta.shape[0])

    def __neg__(self) -> Direction:
        return Direction(-self.theta)


@dataclass(frozen=True, eq=False)
class SliceData:
    """Amostras projetadas {y_n·θ}, ordenadas na construção.

    Com ``bandwidth > 0`` a fatia representa a estimativa por kernel
    gaussiano de largura h em vez das massas pontuais.
    """

    points: np.ndarray
    bandwidth: float = 0.0

    def __post_init__(self) -> None:
        points = np.sort(np.array(self.points, dtype=float).reshape(-1))
        if points.size < 1:
            raise ValueError("Fatia de dados vazia")
        if self.bandwidth < 0:
            raise ValueError("bandwidth deve ser >= 0")
        points.setflags(write=False)
        object.__setattr__(self, "points", points)

    def __len__(self) -> int:
        return int(self.points.shape[0])


@dataclass(frozen=True, eq=False)
class SliceModel:
    """GMM unidimensional: fatia de um GMM na direção θ."""

    weights: np.ndarray
    means1d: np.ndarray
    vars1d: np.ndarray
    eps_var: float = EPS_VAR

    def __post_init__(self) -> None:
        weights = np.array(self.weights, dtype=float).reshape(-1)
        means = np.array(self.means1d, dtype=float).reshape(-1)
        variances = np.array(self.vars1d, dtype=float).reshape(-1)
        if not (weights.shape == means.shape == variances.shape) or weights.size < 1:
            raise ValueError("weights, means1d e vars1d devem ter o mesmo tamanho K >= 1")
        if np.any(variances < self.eps_var):
            raise ValueError(f"Variância da fatia abaixo do piso {self.eps_var:g}")
        for array in (weights, means, variances):
            array.setflags(write=False)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "means1d", means)
        object.__setattr__(self, "vars1d", variances)

    @property
    def k(self) -> int:
        """Número de componentes."""
        return int(self.weights.shape[0])

    def pdf(self, t: float | np.ndarray) -> float | np.ndarray:
        """Densidade Σ_k α_k N_1(t; θ·μ_k, θᵀΣ_kθ)."""
        t_arr = np.asarray(t, dtype=float)
        diff = t_arr[..., None] - self.means1d
        values = np.sum(
            self.weights * np.exp(-0.5 * diff**2 / self.vars1d) / np.sqrt(2 * np.pi * self.vars1d),
            axis=-1,
        )
        return float(values) if values.ndim == 0 else values


def direction_matrix(d: int, l: int, seed: int | np.random.Generator) -> np.ndarray:
    """Sorteia L direções uniformes como matriz (L, d).

    Normal padrão seguida de normalização; linhas de norma nula (evento de
    probabilidade zero) são sorteadas de novo.
    """
    if d < 1 or l < 1:
        raise ValueError(f"d e l devem ser positivos (d={d}, l={l})")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    draws = rng.standard_normal((l, d))
    norms = np.linalg.norm(draws, axis=1)
    while np.any(norms == 0):
        bad = norms == 0
        draws[bad] = rng.standard_normal((int(bad.sum()), d))
        norms = np.linalg.norm(draws, axis=1)
    return draws / norms[:, None]


def sample_directions(d: int, l: int, seed: int) -> list[Direction]:
    """Sorteia L direções uniformes em S^{d-1}; determinístico por semente."""
    return [Direction(row) for row in direction_matrix(d, l, seed)]


def as_direction_matrix(dirs: Sequence[Direction] | np.ndarray, dim: int) -> np.ndarray:
    """Empilha direções como matriz (L, d), validando a dimensão."""
    if isinstance(dirs, np.ndarray):
        thetas = np.atleast_2d(np.asarray(dirs, dtype=float))
    else:
        if len(dirs) == 0:
            raise ValueError("Lista de direções vazia")
        thetas = np.stack([direction.theta for direction in dirs])
    if thetas.shape[0] < 1:
        raise ValueError("Lista de direções vazia")
    if thetas.shape[1] != dim:
        raise ValueError(f"Dimensão incompatível: direções d={thetas.shape[1]}, esperado {dim}")
    return thetas


def slice_data(data: Dataset, theta: Direction, bandwidth: float = 0.0) -> SliceData:
    """Projeta o dataset em θ: {y_n·θ} ordenado.

    Raises:
        ValueError: Dimensão de θ diferente da dos dados
    """
    if theta.dim != data.dim:
        raise ValueError(f"Dimensão incompatível: dados d={data.dim}, θ d={theta.dim}")
    return SliceData(data.samples @ theta.theta, bandwidth)


def slice_model(model: GmmModel, theta: Direction) -> SliceModel:
    """Fatia do GMM em θ: médias θ·μ_k, variâncias θᵀΣ_kθ com piso eps_var.

    Raises:
        ValueError: Dimensão de θ diferente da do modelo
    """
    if theta.dim != model.dim:
        raise ValueError(f"Dimensão incompatível: modelo d={model.dim}, θ d={theta.dim}")
    means, variances = project_model(model, theta.theta[None, :])
    return SliceModel(model.weights, means[0], variances[0], model.eps_var)


def project_model(model: GmmModel, thetas: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Médias e variâncias das fatias para várias direções de uma vez.

    Returns:
        Tupla (médias (L, K), variâncias (L, K))
    """
    return project_parameters(model.means, model.covariances, thetas, model.eps_var)


def project_parameters(
    means: np.ndarray, covariances: np.ndarray, thetas: np.ndarray, eps_var: float
) -> tuple[np.ndarray, np.ndarray]:
    """Versão sobre arrays crus de :func:`project_model`."""
    means1d = thetas @ means.T
    vars1d = np.einsum("li,kij,lj->lk", thetas, covariances, thetas)
    return means1d, np.maximum(vars1d, eps_var)


def project_data(data: Dataset, thetas: np.ndarray) -> np.ndarray:
    """Projeções ordenadas dos dados em cada direção, matriz (L, N)."""
    return np.sort(thetas @ data.samples.T, axis=1)
