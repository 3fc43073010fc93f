"""EM - Expectation Maximization clássico, a referência de comparação."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .gmm import Dataset, GmmModel, init_model, project_psd, responsibilities
from .models import EmConfig, FitMethod, FitTrace, TraceRecord

# Massa mínima para um componente não ser considerado vazio
EMPTY_COMPONENT = 1e-12


@dataclass(frozen=True)
class MStepResult:
    """Modelo do passo M e os eventos que quebram a monotonia da NLL."""

    model: GmmModel
    floored: bool
    reinitialized: bool


def e_step(model: GmmModel, data: Dataset) -> tuple[np.ndarray, float]:
    """Responsabilidades (N, K) e NLL média do modelo corrente."""
    resp, log_evidence = responsibilities(model, data.samples)
    return resp, float(-np.mean(log_evidence))


def m_step(
    data: Dataset, resp: np.ndarray, eps_var: float, rng: np.random.Generator
) -> MStepResult:
    """Pesos, médias e covariâncias ponderados pelas responsabilidades.

    Componentes com massa total < 1e-12 são reinicializados num ponto
    sorteado dos dados com a covariância isotrópica da inicialização.
    """
    x = data.samples
    n, d = x.shape
    k = resp.shape[1]
    mass = resp.sum(axis=0)

    base_variance = max(
        float(np.trace(np.atleast_2d(np.cov(x, rowvar=False, bias=True)))) / d, eps_var
    )
    weights = np.empty(k)
    means = np.empty((k, d))
    covariances = np.empty((k, d, d))
    floored = False
    reinitialized = False

    for j in range(k):
        if mass[j] < EMPTY_COMPONENT:
            reinitialized = True
            means[j] = x[rng.integers(n)]
            covariances[j] = np.eye(d) * base_variance
            weights[j] = 1.0 / k
            continue
        weights[j] = mass[j] / n
        means[j] = resp[:, j] @ x / mass[j]
        diff = x - means[j]
        raw = (resp[:, j, None] * diff).T @ diff / mass[j]
        raw = (raw + raw.T) / 2.0
        if np.linalg.eigvalsh(raw).min() < eps_var:
            floored = True
        covariances[j] = project_psd(raw, eps_var)

    weights /= weights.sum()
    return MStepResult(GmmModel(weights, means, covariances, eps_var), floored, reinitialized)


def fit_em(
    data: Dataset,
    k: int,
    config: Optional[EmConfig] = None,
    init: Optional[GmmModel] = None,
    callback: Optional[Callable[[int, float], None]] = None,
) -> tuple[GmmModel, FitTrace]:
    """Ajusta um GMM por EM até ``config.iters`` ou melhora relativa < ``config.tol``.

    O trace registra a NLL do modelo inicial (iteração 0) e de cada modelo
    produzido, com as marcas ``floored`` e ``reinitialized`` do passo que o
    gerou. A coluna ``objective`` repete a NLL.

    Raises:
        ValueError: k inválido ou init incompatível com os dados
    """
    config = config or EmConfig()
    if k < 1:
        raise ValueError(f"k deve ser positivo, recebido {k}")
    init_seq, reinit_seq = np.random.SeedSequence(config.seed).spawn(2)
    if init is None:
        model = init_model(data, k, int(init_seq.generate_state(1)[0]), config.eps_var)
    else:
        if init.k != k or init.dim != data.dim:
            raise ValueError(
                f"init incompatível: esperado k={k}, d={data.dim}; recebido k={init.k}, d={init.dim}"
            )
        model = init
    rng = np.random.default_rng(reinit_seq)

    trace = FitTrace(method=FitMethod.EM)
    resp, current = e_step(model, data)
    trace.append(TraceRecord(iteration=0, objective=current, nll=current))
    if callback is not None:
        callback(0, current)

    for i in range(1, config.iters + 1):
        step = m_step(data, resp, config.eps_var, rng)
        model = step.model
        resp, updated = e_step(model, data)
        trace.append(
            TraceRecord(
                iteration=i,
                objective=updated,
                nll=updated,
                floored=step.floored,
                reinitialized=step.reinitialized,
            )
        )
        if callback is not None:
            callback(i, updated)
        improvement = current - updated
        current = updated
        if not (step.floored or step.reinitialized) and improvement < config.tol * max(
            abs(current), 1.0
        ):
            break

    return model, trace
