"""SWM - Ajuste de GMM pela minimização estocástica de SW_p^p.

Cada iteração sorteia L direções, congela os mapas de transporte entre as
fatias do modelo e dos dados, calcula os gradientes dos parâmetros, aplica
RMSProp com momentum e projeta de volta no conjunto viável.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.stats import norm

from .gmm import (
    Dataset,
    GmmModel,
    init_model,
    nll,
    project_psd,
    project_simplex,
)
from .models import FitMethod, FitTrace, GradientMode, StepGeometry, SwmConfig, TraceRecord
from .ot1d import kde_quantile, sorted_quantile
from .slicing import (
    Direction,
    as_direction_matrix,
    direction_matrix,
    project_data,
    project_model,
    project_parameters,
)

# Meia-largura da grade de quadratura, em desvios-padrão da fatia
QUAD_SPAN = 6.0

# Menor peso usado ao passar para log-pesos
MIN_WEIGHT = 1e-12

FitCallback = Callable[[int, float], None]


class DivergenceError(RuntimeError):
    """O objetivo deixou de ser finito; carrega o trace até o momento."""

    def __init__(self, iteration: int, trace: FitTrace, reason: str = "objetivo não finito"):
        self.iteration = iteration
        self.trace = trace
        super().__init__(f"Divergência na iteração {iteration}: {reason}")


class NonFiniteGradientError(DivergenceError):
    """Gradiente com NaN/inf; o passo é abortado e o trace parcial é mantido."""

    def __init__(
        self,
        iteration: int,
        direction_seed: Optional[int] = None,
        trace: Optional[FitTrace] = None,
    ):
        self.direction_seed = direction_seed
        detail = f" (semente das direções {direction_seed})" if direction_seed is not None else ""
        super().__init__(
            iteration,
            trace if trace is not None else FitTrace(method=FitMethod.SWM),
            reason=f"gradiente não finito{detail}",
        )


@dataclass(frozen=True, eq=False)
class GmmParams:
    """Tensores com o formato dos parâmetros do GMM (gradientes, momentos)."""

    weights: np.ndarray
    means: np.ndarray
    covariances: np.ndarray

    @classmethod
    def from_model(cls, model: GmmModel) -> GmmParams:
        return cls(model.weights.copy(), model.means.copy(), model.covariances.copy())

    @classmethod
    def zeros_like(cls, model: GmmModel) -> GmmParams:
        return cls(
            np.zeros_like(model.weights),
            np.zeros_like(model.means),
            np.zeros_like(model.covariances),
        )

    def arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.weights, self.means, self.covariances

    def is_finite(self) -> bool:
        return all(bool(np.all(np.isfinite(array))) for array in self.arrays())

    def norm(self) -> float:
        """Norma euclidiana de todos os tensores juntos."""
        return float(np.sqrt(sum(np.sum(array**2) for array in self.arrays())))


@dataclass(frozen=True, eq=False)
class OptimizerState:
    """Momentos m, g e velocidades v do RMSProp, com a iteração corrente."""

    m: GmmParams
    g: GmmParams
    v: GmmParams
    iter: int = 0

    @classmethod
    def initial(cls, model: GmmModel) -> OptimizerState:
        return cls(
            GmmParams.zeros_like(model),
            GmmParams.zeros_like(model),
            GmmParams.zeros_like(model),
        )


@dataclass(frozen=True, eq=False)
class TransportPlan:
    """Direções, grade de quadratura e mapas de transporte congelados.

    ``targets[l, j]`` é f(t_j, θ_l); ``cost`` é |f(t) - t|^p nos nós.
    """

    thetas: np.ndarray
    grid: np.ndarray
    quad_weights: np.ndarray
    targets: np.ndarray
    cost: np.ndarray
    p: float
    eps_var: float

    @property
    def l(self) -> int:
        return int(self.thetas.shape[0])


def _quadrature(
    means1d: np.ndarray, vars1d: np.ndarray, projected: np.ndarray, quad_points: int
) -> tuple[np.ndarray, np.ndarray]:
    """Grade uniforme por direção e pesos da regra do trapézio."""
    sd = np.sqrt(vars1d)
    lo = np.minimum((means1d - QUAD_SPAN * sd).min(axis=1), projected[:, 0])
    hi = np.maximum((means1d + QUAD_SPAN * sd).max(axis=1), projected[:, -1])
    grid = lo[:, None] + (hi - lo)[:, None] * np.linspace(0.0, 1.0, quad_points)
    step = (hi - lo) / (quad_points - 1)
    weights = np.repeat(step[:, None], quad_points, axis=1)
    weights[:, 0] *= 0.5
    weights[:, -1] *= 0.5
    return grid, weights


def _mixture_cdf(
    weights: np.ndarray, means1d: np.ndarray, vars1d: np.ndarray, grid: np.ndarray
) -> np.ndarray:
    z = (grid[:, None, :] - means1d[:, :, None]) / np.sqrt(vars1d)[:, :, None]
    return np.clip(np.einsum("k,lkt->lt", weights, norm.cdf(z)), 0.0, 1.0)


def freeze_transport(
    model: GmmModel,
    data: Dataset,
    dirs: Sequence[Direction] | np.ndarray,
    p: float = 2.0,
    quad_points: int = 256,
    bandwidth: float = 0.0,
) -> TransportPlan:
    """Calcula e congela os mapas f(·, θ_l) = J_y^{-1}(J_x(·, θ_l)).

    Raises:
        ValueError: Dimensões incompatíveis, lista de direções vazia ou p < 1
    """
    if data.dim != model.dim:
        raise ValueError(f"Dimensão incompatível: modelo d={model.dim}, dados d={data.dim}")
    if p < 1:
        raise ValueError(f"p deve ser >= 1, recebido {p}")
    if quad_points < 2:
        raise ValueError("quad_points deve ser >= 2")
    thetas = as_direction_matrix(dirs, model.dim)
    means1d, vars1d = project_model(model, thetas)
    projected = project_data(data, thetas)
    grid, quad_weights = _quadrature(means1d, vars1d, projected, quad_points)

    levels = _mixture_cdf(model.weights, means1d, vars1d, grid)
    targets = np.empty_like(grid)
    for l in range(thetas.shape[0]):
        if bandwidth > 0:
            targets[l] = kde_quantile(projected[l], bandwidth, levels[l])
        else:
            targets[l] = sorted_quantile(projected[l], levels[l])

    cost = np.abs(targets - grid) ** p
    return TransportPlan(thetas, grid, quad_weights, targets, cost, float(p), model.eps_var)


def _component_pdf(
    plan: TransportPlan, params: GmmParams
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Médias (L, K), variâncias (L, K) e densidades N_1 nos nós (L, K, T)."""
    means1d, vars1d = project_parameters(
        params.means, params.covariances, plan.thetas, plan.eps_var
    )
    diff = plan.grid[:, None, :] - means1d[:, :, None]
    pdf = np.exp(-0.5 * diff**2 / vars1d[:, :, None]) / np.sqrt(2 * np.pi * vars1d)[:, :, None]
    return means1d, vars1d, pdf


def _lift(
    plan: TransportPlan, d_mean: np.ndarray, d_var: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Leva derivadas por fatia (L, K) para μ_k (via θ) e Σ_k (via θθᵀ)."""
    thetas = plan.thetas
    d_means = np.einsum("lk,ld->kd", d_mean, thetas) / plan.l
    d_covs = np.einsum("lk,li,lj->kij", d_var, thetas, thetas) / plan.l
    return d_means, d_covs


def plan_objective(plan: TransportPlan, params: GmmParams) -> float:
    """(1/L) Σ_l ∫ |f(t, θ_l) - t|^p I_x(t, θ_l) dt com os mapas congelados."""
    _, _, pdf = _component_pdf(plan, params)
    density = np.einsum("k,lkt->lt", params.weights, pdf)
    return float(np.mean(np.sum(plan.quad_weights * plan.cost * density, axis=1)))


def plan_frozen_gradients(plan: TransportPlan, params: GmmParams) -> GmmParams:
    """Derivadas de :func:`plan_objective` com f, direções e grade fixos."""
    means1d, vars1d, pdf = _component_pdf(plan, params)
    weighted_cost = (plan.quad_weights * plan.cost)[:, None, :]
    centered = plan.grid[:, None, :] - means1d[:, :, None]
    variances = vars1d[:, :, None]

    d_weights = np.sum(weighted_cost * pdf, axis=2).mean(axis=0)
    d_mean = params.weights * np.sum(weighted_cost * pdf * centered / variances, axis=2)
    d_var = params.weights * np.sum(
        weighted_cost * pdf / (2 * variances) * (centered**2 / variances - 1.0), axis=2
    )
    d_means, d_covs = _lift(plan, d_mean, d_var)
    return GmmParams(d_weights, d_means, d_covs)


def plan_transport_gradients(plan: TransportPlan, params: GmmParams) -> GmmParams:
    """Derivada total de SW_p^p discretizada (forma pela função quantil).

    Com g(t) = p|t - f(t)|^{p-1} sign(t - f(t)):
    d m_k = ∫ g α_k N_k, d v_k = ∫ g α_k N_k (t - m_k)/(2 v_k),
    d α_k = -∫ g Φ_k, centrada em k.
    """
    means1d, vars1d, pdf = _component_pdf(plan, params)
    residual = plan.grid - plan.targets
    slope = plan.p * np.abs(residual) ** (plan.p - 1.0) * np.sign(residual)
    weighted = (plan.quad_weights * slope)[:, None, :]
    centered = plan.grid[:, None, :] - means1d[:, :, None]
    variances = vars1d[:, :, None]

    d_mean = params.weights * np.sum(weighted * pdf, axis=2)
    d_var = params.weights * np.sum(weighted * pdf * centered / (2 * variances), axis=2)
    cdf = norm.cdf(centered / np.sqrt(variances))
    d_alpha = -np.sum(weighted * cdf, axis=2)
    d_alpha -= d_alpha.mean(axis=1, keepdims=True)

    d_means, d_covs = _lift(plan, d_mean, d_var)
    return GmmParams(d_alpha.mean(axis=0), d_means, d_covs)


def swm_objective(
    model: GmmModel,
    data: Dataset,
    dirs: Sequence[Direction] | np.ndarray,
    p: float = 2.0,
    quad_points: int = 256,
    bandwidth: float = 0.0,
) -> float:
    """Objetivo SWM discretizado para um conjunto fixo de direções."""
    plan = freeze_transport(model, data, dirs, p, quad_points, bandwidth)
    return plan_objective(plan, GmmParams.from_model(model))


def swm_gradients(
    model: GmmModel,
    data: Dataset,
    dirs: Sequence[Direction] | np.ndarray,
    p: float = 2.0,
    quad_points: int = 256,
    bandwidth: float = 0.0,
) -> GmmParams:
    """Gradientes em α, μ e Σ com os mapas de transporte congelados."""
    plan = freeze_transport(model, data, dirs, p, quad_points, bandwidth)
    return plan_frozen_gradients(plan, GmmParams.from_model(model))


def transport_gradients(
    model: GmmModel,
    data: Dataset,
    dirs: Sequence[Direction] | np.ndarray,
    p: float = 2.0,
    quad_points: int = 256,
    bandwidth: float = 0.0,
) -> GmmParams:
    """Gradientes em α, μ e Σ da distância total (mapas reotimizados)."""
    plan = freeze_transport(model, data, dirs, p, quad_points, bandwidth)
    return plan_transport_gradients(plan, GmmParams.from_model(model))


def _sqrt_factors(covariances: np.ndarray) -> np.ndarray:
    """Raiz simétrica Σ_k^{1/2} de cada covariância."""
    eigenvalues, eigenvectors = np.linalg.eigh(covariances)
    roots = np.sqrt(np.maximum(eigenvalues, 0.0))
    return (eigenvectors * roots[:, None, :]) @ np.swapaxes(eigenvectors, -1, -2)


def _symmetric_expm(matrices: np.ndarray) -> np.ndarray:
    sym = (matrices + np.swapaxes(matrices, -1, -2)) / 2.0
    eigenvalues, eigenvectors = np.linalg.eigh(sym)
    return (eigenvectors * np.exp(eigenvalues)[:, None, :]) @ np.swapaxes(eigenvectors, -1, -2)


def scaled_gradients(grads: GmmParams, model: GmmModel, roots: np.ndarray) -> GmmParams:
    """Leva os gradientes para log-pesos e para a escala de cada componente.

    É o gradiente natural da mistura: log-pesos recebem G_k - Σ_j α_j G_j,
    médias Σ_k^{1/2} G / α_k e covariâncias Σ_k^{1/2} G Σ_k^{1/2} / α_k.
    Um componente de peso pequeno recebe passos do mesmo porte dos demais.
    """
    weights = model.weights
    alpha = np.maximum(weights, MIN_WEIGHT)
    d_logits = grads.weights - weights @ grads.weights
    d_means = np.einsum("kij,kj->ki", roots, grads.means) / alpha[:, None]
    d_covariances = roots @ grads.covariances @ roots
    d_covariances = (d_covariances + np.swapaxes(d_covariances, -1, -2)) / 2.0
    return GmmParams(d_logits, d_means, d_covariances / alpha[:, None, None])


def apply_scaled_step(
    model: GmmModel, step: GmmParams, roots: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Aplica um passo dado em log-pesos e na escala de cada componente.

    Pesos: softmax(log α + v). Médias: μ + Σ^{1/2} v.
    Covariâncias: Σ^{1/2} exp(V) Σ^{1/2}, que continua definida positiva.
    """
    logits = np.log(np.maximum(model.weights, MIN_WEIGHT)) + step.weights
    weights = np.exp(logits - logits.max())
    means = model.means + np.einsum("kij,kj->ki", roots, step.means)
    covariances = roots @ _symmetric_expm(step.covariances) @ roots
    return weights, means, covariances


def rmsprop_step(
    state: OptimizerState,
    grads: GmmParams,
    config: SwmConfig,
    model: GmmModel,
    lr: Optional[float] = None,
) -> tuple[GmmModel, OptimizerState]:
    """Um passo de RMSProp com momentum seguido das projeções de viabilidade.

    Para cada tensor de parâmetros:
    m = γm + (1-γ)G, g = γg + (1-γ)G², v = κv - α G/√(g - m² + ε), θ = θ + v.

    Com ``config.step == scaled`` as equações atuam em log-pesos e nas
    médias e covariâncias medidas em Σ_k^{1/2} (ver :func:`scaled_gradients`);
    com ``euclidean`` atuam nas entradas de α, μ e Σ. Cada entrada de v fica
    em [-max_step, max_step].

    Args:
        lr: Taxa do passo; default ``config.lr``

    Raises:
        NonFiniteGradientError: Gradiente com NaN/inf
        DegenerateWeightsError: Todos os pesos <= 0 após o passo
    """
    if not grads.is_finite():
        raise NonFiniteGradientError(iteration=state.iter + 1)
    lr = config.lr if lr is None else lr

    scaled = config.step == StepGeometry.SCALED
    if scaled:
        roots = _sqrt_factors(model.covariances)
        grads = scaled_gradients(grads, model, roots)

    new_m, new_g, new_v = [], [], []
    for grad, m, g, v in zip(grads.arrays(), state.m.arrays(), state.g.arrays(), state.v.arrays()):
        m = config.gamma * m + (1 - config.gamma) * grad
        g = config.gamma * g + (1 - config.gamma) * grad**2
        # g - m² >= 0 em aritmética exata; o corte absorve arredondamento
        spread = np.maximum(g - m**2, 0.0)
        v = config.kappa * v - lr / np.sqrt(spread + config.eps) * grad
        v = np.clip(v, -config.max_step, config.max_step)
        new_m.append(m)
        new_g.append(g)
        new_v.append(v)
    velocity = GmmParams(*new_v)

    if scaled:
        weights, means, covariances = apply_scaled_step(model, velocity, roots)
    else:
        weights = model.weights + velocity.weights
        means = model.means + velocity.means
        covariances = model.covariances + velocity.covariances

    weights = project_simplex(weights)
    covariances = np.stack([project_psd(cov, config.eps_var) for cov in covariances])
    updated = GmmModel(weights, means, covariances, config.eps_var)
    new_state = OptimizerState(GmmParams(*new_m), GmmParams(*new_g), velocity, state.iter + 1)
    return updated, new_state


def step_size(config: SwmConfig, iteration: int) -> float:
    """Taxa da iteração: decai de lr até lr·lr_decay ao longo de ``iters``."""
    return config.lr * config.lr_decay ** (iteration / config.iters)


def fit_swm(
    data: Dataset,
    k: int,
    config: Optional[SwmConfig] = None,
    init: Optional[GmmModel] = None,
    callback: Optional[FitCallback] = None,
) -> tuple[GmmModel, FitTrace]:
    """Ajusta um GMM de k componentes minimizando SW_p^p com direções aleatórias.

    Direções novas a cada iteração; totalmente determinístico dado
    (config.seed, init). O trace registra o modelo a cada ``log_every``
    iterações e sempre o modelo final.

    Args:
        data: Amostras a ajustar
        k: Número de componentes
        config: Hiperparâmetros (default: SwmConfig())
        init: Modelo inicial; sem ele usa :func:`init_model`
        callback: Chamado como callback(iteração, objetivo) a cada registro

    Raises:
        ValueError: k inválido ou init incompatível com os dados
        DivergenceError: Objetivo não finito ou pesos degenerados
        NonFiniteGradientError: Gradiente não finito (também um DivergenceError)
    """
    config = config or SwmConfig()
    if k < 1:
        raise ValueError(f"k deve ser positivo, recebido {k}")
    init_seq, direction_seq = np.random.SeedSequence(config.seed).spawn(2)
    if init is None:
        model = init_model(data, k, int(init_seq.generate_state(1)[0]), config.eps_var)
    else:
        if init.k != k or init.dim != data.dim:
            raise ValueError(
                f"init incompatível: esperado k={k}, d={data.dim}; recebido k={init.k}, d={init.dim}"
            )
        model = init

    gradient_fn = (
        plan_transport_gradients
        if config.gradient == GradientMode.TRANSPORT
        else plan_frozen_gradients
    )
    direction_rng = np.random.default_rng(direction_seq)
    state = OptimizerState.initial(model)
    trace = FitTrace(method=FitMethod.SWM)

    def record(iteration: int, objective: float) -> None:
        trace.append(TraceRecord(iteration=iteration, objective=objective, nll=nll(model, data)))
        if callback is not None:
            callback(iteration, objective)

    for i in range(config.iters + 1):
        direction_seed = int(direction_rng.integers(0, 2**63 - 1))
        thetas = direction_matrix(data.dim, config.l, direction_seed)
        plan = freeze_transport(model, data, thetas, config.p, config.quad_points, config.bandwidth)
        params = GmmParams.from_model(model)
        objective = plan_objective(plan, params)
        if not np.isfinite(objective):
            raise DivergenceError(i, trace)
        if i % config.log_every == 0 or i == config.iters:
            record(i, objective)
        if i == config.iters:
            break

        try:
            model, state = rmsprop_step(
                state, gradient_fn(plan, params), config, model, lr=step_size(config, i)
            )
        except NonFiniteGradientError as err:
            raise NonFiniteGradientError(i + 1, direction_seed, trace) from err
        except ValueError as err:
            # pesos degenerados ou parâmetros que estouraram
            raise DivergenceError(i + 1, trace, reason=str(err)) from err

    return model, trace
