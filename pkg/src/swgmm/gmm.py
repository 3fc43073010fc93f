"""GMM - Parametrização, densidade, amostragem e projeções de viabilidade."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, solve_triangular
from scipy.special import logsumexp

from .models import GmmDocument

# Piso padrão das variâncias (autovalores das covariâncias)
EPS_VAR = 1e-6

# Tolerâncias dos invariantes do modelo
WEIGHT_TOL = 1e-9
SYMMETRY_TOL = 1e-9

LOG_2PI = float(np.log(2.0 * np.pi))


class InvalidModelError(ValueError):
    """Exceção quando os parâmetros não formam um GMM válido."""

    pass


class DegenerateWeightsError(ValueError):
    """Exceção quando nenhum peso sobra positivo após o corte."""

    pass


def _readonly(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class Dataset:
    """Amostras y_n em R^d com a proveniência opcional."""

    samples: np.ndarray
    label: Optional[str] = None

    def __post_init__(self) -> None:
        samples = np.array(self.samples, dtype=float)
        if samples.ndim != 2:
            raise ValueError(f"samples deve ser uma matriz N×d, recebido shape {samples.shape}")
        if samples.shape[0] < 1 or samples.shape[1] < 1:
            raise ValueError("Dataset precisa de ao menos uma amostra com d >= 1")
        if not np.all(np.isfinite(samples)):
            raise ValueError("Dataset contém entradas não finitas")
        object.__setattr__(self, "samples", _readonly(samples))

    @property
    def dim(self) -> int:
        """Dimensão d das amostras."""
        return int(self.samples.shape[1])

    @property
    def n(self) -> int:
        """Número de amostras N."""
        return int(self.samples.shape[0])


@dataclass(frozen=True, eq=False)
class GmmModel:
    """Mistura de K gaussianas em R^d.

    Valores imutáveis: pesos no simplex, covariâncias simétricas com
    autovalores >= eps_var.
    """

    weights: np.ndarray
    means: np.ndarray
    covariances: np.ndarray
    eps_var: float = field(default=EPS_VAR)

    def __post_init__(self) -> None:
        weights = np.array(self.weights, dtype=float).reshape(-1)
        means = np.array(self.means, dtype=float)
        covariances = np.array(self.covariances, dtype=float)

        k = weights.shape[0]
        if k < 1:
            raise InvalidModelError("O modelo precisa de ao menos um componente")
        if means.ndim == 1:
            means = means.reshape(k, -1)
        if means.ndim != 2 or means.shape[0] != k:
            raise InvalidModelError(f"means deve ter shape ({k}, d), recebido {means.shape}")
        d = means.shape[1]
        if covariances.shape != (k, d, d):
            raise InvalidModelError(
                f"covariances deve ter shape ({k}, {d}, {d}), recebido {covariances.shape}"
            )
        if self.eps_var <= 0:
            raise InvalidModelError("eps_var deve ser positivo")
        for name, array in (("weights", weights), ("means", means), ("covariances", covariances)):
            if not np.all(np.isfinite(array)):
                raise InvalidModelError(f"{name} contém entradas não finitas")

        if np.any(weights < 0) or abs(weights.sum() - 1.0) > WEIGHT_TOL:
            raise InvalidModelError(f"Pesos fora do simplex: {weights.tolist()}")

        asymmetry = np.abs(covariances - np.swapaxes(covariances, 1, 2)).max()
        if asymmetry > SYMMETRY_TOL:
            raise InvalidModelError(f"Covariância não simétrica (desvio {asymmetry:.3g})")

        eigenvalues = np.linalg.eigvalsh(covariances)
        scale = np.maximum(1.0, np.abs(eigenvalues).max(axis=1))
        # folga de arredondamento da reconstrução V diag(w) V^T
        slack = 1e-12 * scale
        if np.any(eigenvalues.min(axis=1) < self.eps_var - slack):
            raise InvalidModelError(
                f"Covariância abaixo do piso eps_var={self.eps_var:g} "
                f"(menor autovalor {eigenvalues.min():.3g})"
            )

        object.__setattr__(self, "weights", _readonly(weights))
        object.__setattr__(self, "means", _readonly(means))
        object.__setattr__(self, "covariances", _readonly(covariances))

    @property
    def k(self) -> int:
        """Número de componentes K."""
        return int(self.weights.shape[0])

    @property
    def dim(self) -> int:
        """Dimensão d."""
        return int(self.means.shape[1])

    def permuted(self, order: list[int] | np.ndarray) -> GmmModel:
        """Retorna o mesmo modelo com os componentes reordenados."""
        order = np.asarray(order)
        return GmmModel(
            self.weights[order], self.means[order], self.covariances[order], self.eps_var
        )


def _check_points(model: GmmModel, x: np.ndarray) -> np.ndarray:
    points = np.asarray(x, dtype=float)
    if points.ndim == 1:
        points = points.reshape(1, -1)
    if points.ndim != 2 or points.shape[1] != model.dim:
        raise ValueError(
            f"Dimensão incompatível: modelo tem d={model.dim}, pontos têm shape {np.shape(x)}"
        )
    return points


def _cholesky(cov: np.ndarray, eps_var: float) -> np.ndarray:
    """Fator triangular inferior; projeta no cone PSD e tenta de novo se falhar."""
    try:
        factor, _ = cho_factor(cov, lower=True, check_finite=False)
    except LinAlgError:
        factor, _ = cho_factor(project_psd(cov, eps_var), lower=True, check_finite=False)
    return np.tril(factor)


def log_component_densities(model: GmmModel, x: np.ndarray) -> np.ndarray:
    """log(α_k) + log N_d(x_n; μ_k, Σ_k) para cada ponto e componente.

    Args:
        model: GMM válido
        x: Pontos (N, d) ou um único vetor (d,)

    Returns:
        Matriz (N, K)
    """
    points = _check_points(model, x)
    n, d = points.shape
    out = np.empty((n, model.k))
    with np.errstate(divide="ignore"):
        log_weights = np.log(model.weights)
    for k in range(model.k):
        chol = _cholesky(model.covariances[k], model.eps_var)
        diff = (points - model.means[k]).T
        solved = solve_triangular(chol, diff, lower=True, check_finite=False)
        mahalanobis = np.sum(solved**2, axis=0)
        log_det = 2.0 * np.sum(np.log(np.diag(chol)))
        out[:, k] = log_weights[k] - 0.5 * (d * LOG_2PI + log_det + mahalanobis)
    return out


def density(model: GmmModel, x: np.ndarray) -> float | np.ndarray:
    """Densidade Σ_k α_k N_d(x; μ_k, Σ_k).

    Args:
        model: GMM válido
        x: Vetor (d,) ou matriz (N, d)

    Returns:
        Escalar para um vetor, array (N,) para uma matriz

    Raises:
        ValueError: Se a dimensão de x não bater com a do modelo
    """
    values = np.exp(logsumexp(log_component_densities(model, x), axis=1))
    if np.ndim(x) == 1:
        return float(values[0])
    return values


def responsibilities(model: GmmModel, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Posteriores dos componentes e log-verossimilhança por ponto.

    Returns:
        Tupla (responsabilidades (N, K), log p(x_n) (N,))
    """
    log_joint = log_component_densities(model, x)
    log_evidence = logsumexp(log_joint, axis=1)
    return np.exp(log_joint - log_evidence[:, None]), log_evidence


def nll(model: GmmModel, data: Dataset) -> float:
    """Log-verossimilhança negativa média: -(1/N) Σ_n log I_x(y_n).

    Raises:
        ValueError: Dataset vazio ou com dimensão diferente do modelo
    """
    if data.n == 0:
        raise ValueError("Dataset vazio")
    if data.dim != model.dim:
        raise ValueError(f"Dimensão incompatível: modelo d={model.dim}, dados d={data.dim}")
    log_joint = log_component_densities(model, data.samples)
    return float(-np.mean(logsumexp(log_joint, axis=1)))


def sample_with_labels(model: GmmModel, n: int, seed: int) -> tuple[Dataset, np.ndarray]:
    """Amostra n pontos e retorna também o componente sorteado de cada um."""
    if n < 1:
        raise ValueError(f"n deve ser positivo, recebido {n}")
    rng = np.random.default_rng(seed)
    labels = rng.choice(model.k, size=n, p=model.weights)
    noise = rng.standard_normal((n, model.dim))
    factors = np.stack([_cholesky(cov, model.eps_var) for cov in model.covariances])
    points = model.means[labels] + np.einsum("nij,nj->ni", factors[labels], noise)
    return Dataset(points, label="gmm"), labels


def sample(model: GmmModel, n: int, seed: int) -> Dataset:
    """Amostra n pontos do modelo; determinístico dada a semente."""
    data, _ = sample_with_labels(model, n, seed)
    return data


def project_psd(m: np.ndarray, eps_var: float = EPS_VAR) -> np.ndarray:
    """Projeta uma matriz simétrica no cone PSD com piso eps_var nos autovalores.

    A matriz é simetrizada como (m + mᵀ)/2; se já cumpre o piso é devolvida
    sem reconstrução.

    Raises:
        ValueError: Entradas não finitas
    """
    matrix = np.asarray(m, dtype=float)
    if not np.all(np.isfinite(matrix)):
        raise ValueError("Matriz com entradas não finitas")
    sym = (matrix + matrix.T) / 2.0
    eigenvalues, eigenvectors = np.linalg.eigh(sym)
    if eigenvalues.min() >= eps_var:
        return sym
    clipped = np.maximum(eigenvalues, eps_var)
    projected = (eigenvectors * clipped) @ eigenvectors.T
    return (projected + projected.T) / 2.0


def project_simplex(w: np.ndarray) -> np.ndarray:
    """Corta pesos negativos em zero e renormaliza para somar 1.

    A projeção euclidiana exata no simplex seria a alternativa; o corte
    seguido de renormalização é o que o passo de viabilidade exige.

    Raises:
        DegenerateWeightsError: Se nenhum peso positivo sobrar
    """
    weights = np.asarray(w, dtype=float).reshape(-1)
    if weights.size < 1:
        raise ValueError("Vetor de pesos vazio")
    if not np.all(np.isfinite(weights)):
        raise ValueError("Pesos com entradas não finitas")
    clipped = np.maximum(weights, 0.0)
    total = clipped.sum()
    if total <= 0:
        raise DegenerateWeightsError(f"Todos os pesos <= 0: {weights.tolist()}")
    return clipped / total


def init_model(data: Dataset, k: int, seed: int, eps_var: float = EPS_VAR) -> GmmModel:
    """Inicialização compartilhada pelos dois métodos de ajuste.

    Médias em k pontos distintos dos dados, Σ_k = (traço da covariância/d)·I,
    pesos uniformes.

    Raises:
        ValueError: Se k < 1 ou k > N
    """
    if k < 1:
        raise ValueError(f"k deve ser positivo, recebido {k}")
    if k > data.n:
        raise ValueError(f"k={k} maior que o número de amostras N={data.n}")
    rng = np.random.default_rng(seed)
    idx = rng.choice(data.n, size=k, replace=False)
    spread = float(np.trace(np.atleast_2d(np.cov(data.samples, rowvar=False, bias=True))))
    variance = max(spread / data.dim, eps_var)
    covariances = np.repeat(np.eye(data.dim)[None] * variance, k, axis=0)
    return GmmModel(np.full(k, 1.0 / k), data.samples[idx], covariances, eps_var)


def model_to_document(model: GmmModel) -> GmmDocument:
    """Converte para o esquema JSON."""
    return GmmDocument(
        dim=model.dim,
        k=model.k,
        weights=model.weights.tolist(),
        means=model.means.tolist(),
        covariances=model.covariances.tolist(),
    )


def model_from_document(document: GmmDocument, eps_var: float = EPS_VAR) -> GmmModel:
    """Reconstrói o modelo a partir do esquema JSON (valida os invariantes)."""
    return GmmModel(
        np.array(document.weights),
        np.array(document.means).reshape(document.k, document.dim),
        np.array(document.covariances).reshape(document.k, document.dim, document.dim),
        eps_var,
    )


def save_model(model: GmmModel, path: Path) -> None:
    """Grava o modelo como JSON."""
    Path(path).write_text(model_to_document(model).model_dump_json(indent=2) + "\n")


def load_model(path: Path, eps_var: float = EPS_VAR) -> GmmModel:
    """Lê um modelo JSON.

    Raises:
        pydantic.ValidationError: JSON inválido ou fora do esquema
        InvalidModelError: Parâmetros que violam os invariantes
    """
    document = GmmDocument.model_validate_json(Path(path).read_text())
    return model_from_document(document, eps_var)
