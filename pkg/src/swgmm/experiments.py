"""Experimentos - Paisagens de energia e robustez à inicialização."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .em import fit_em
from .gmm import Dataset, GmmModel, init_model, nll, sample
from .models import (
    CompareReport,
    CompareRun,
    EmConfig,
    FitMethod,
    MethodSummary,
    SwmConfig,
)
from .ot1d import DEFAULT_GRID, sliced_wasserstein, wasserstein_1d
from .slicing import SliceData, SliceModel
from .swm import fit_swm

# Faixa varrida pelas paisagens
LANDSCAPE_RANGE = (-10.0, 10.0)

# Mistura geradora do cenário 2
SCENARIO_2_MEANS = (-4.0, 4.0)

RunCallback = Callable[[int, FitMethod], None]


@dataclass(frozen=True, eq=False)
class Landscape:
    """Valores de NLL e W_p^p numa grade de parâmetros."""

    axes: tuple[np.ndarray, ...]
    nll: np.ndarray
    wm: np.ndarray

    def rows(self) -> list[tuple[float, ...]]:
        """Linhas (parâmetros..., nll, wm) na ordem da grade."""
        mesh = np.meshgrid(*self.axes, indexing="ij")
        flat = [axis.ravel() for axis in mesh] + [self.nll.ravel(), self.wm.ravel()]
        return [tuple(float(value) for value in row) for row in zip(*flat)]

    def argmin(self, column: str) -> tuple[float, ...]:
        """Parâmetros do mínimo global da coluna ``nll`` ou ``wm``."""
        values = {"nll": self.nll, "wm": self.wm}[column]
        index = np.unravel_index(int(np.argmin(values)), values.shape)
        return tuple(float(axis[i]) for axis, i in zip(self.axes, index))

    def header(self) -> list[str]:
        names = ["mu"] if len(self.axes) == 1 else [f"mu{i + 1}" for i in range(len(self.axes))]
        return names + ["nll", "wm"]

    def to_csv(self) -> str:
        lines = [",".join(self.header())]
        lines.extend(",".join(repr(value) for value in row) for row in self.rows())
        return "\n".join(lines) + "\n"


def _unit_variance_model(means: list[float]) -> GmmModel:
    k = len(means)
    return GmmModel(np.full(k, 1.0 / k), np.array(means)[:, None], np.ones((k, 1, 1)))


def _wm(means: list[float], data_slice: SliceData, p: float, m: int) -> float:
    k = len(means)
    model_slice = SliceModel(np.full(k, 1.0 / k), np.array(means), np.ones(k))
    return wasserstein_1d(model_slice, data_slice, p, m) ** p


def landscape_scenario_1(
    n: int, grid: int, seed: int, p: float = 2.0, m: int = DEFAULT_GRID
) -> Landscape:
    """Dados de N(0, 1); varre μ de N(μ, 1) em [-10, 10] com ``grid`` pontos."""
    if grid < 2:
        raise ValueError(f"grid deve ser >= 2, recebido {grid}")
    data = sample(_unit_variance_model([0.0]), n, seed)
    data_slice = SliceData(data.samples[:, 0])
    mus = np.linspace(*LANDSCAPE_RANGE, grid)
    nll_values = np.array([nll(_unit_variance_model([mu]), data) for mu in mus])
    wm_values = np.array([_wm([mu], data_slice, p, m) for mu in mus])
    return Landscape((mus,), nll_values, wm_values)


def landscape_scenario_2(
    n: int, grid: int, seed: int, p: float = 2.0, m: int = DEFAULT_GRID
) -> Landscape:
    """Dados da mistura 0.5 N(-4, 1) + 0.5 N(4, 1); varre (μ1, μ2) numa grade G×G."""
    if grid < 2:
        raise ValueError(f"grid deve ser >= 2, recebido {grid}")
    data = sample(_unit_variance_model(list(SCENARIO_2_MEANS)), n, seed)
    data_slice = SliceData(data.samples[:, 0])
    mus = np.linspace(*LANDSCAPE_RANGE, grid)
    nll_values = np.empty((grid, grid))
    wm_values = np.empty((grid, grid))
    for i, mu1 in enumerate(mus):
        for j, mu2 in enumerate(mus):
            nll_values[i, j] = nll(_unit_variance_model([mu1, mu2]), data)
            wm_values[i, j] = _wm([mu1, mu2], data_slice, p, m)
    return Landscape((mus, mus), nll_values, wm_values)


def count_local_minima(values: np.ndarray) -> int:
    """Mínimos locais estritos no interior de uma grade 2-D (vizinhança de 4)."""
    center = values[1:-1, 1:-1]
    strict = (
        (center < values[:-2, 1:-1])
        & (center < values[2:, 1:-1])
        & (center < values[1:-1, :-2])
        & (center < values[1:-1, 2:])
    )
    return int(strict.sum())


def run_seed(seed: int, run: int) -> int:
    """Semente derivada de (seed, execução); independe da ordem de execução."""
    return int(np.random.SeedSequence([seed, run]).generate_state(1)[0])


def run_compare(
    data: Dataset,
    k: int,
    runs: int,
    seed: int,
    swm_config: Optional[SwmConfig] = None,
    em_config: Optional[EmConfig] = None,
    delta: float = 0.02,
    projections: int = 500,
    callback: Optional[RunCallback] = None,
) -> CompareReport:
    """Ajusta EM e SWM a partir da mesma inicialização em cada execução.

    Sucesso: NLL final <= melhor + delta·|melhor|, com a melhor NLL observada
    por qualquer método. A SW final usa a mesma semente de avaliação para
    todos os ajustes.

    Raises:
        ValueError: runs < 1, k inválido ou delta < 0
    """
    if runs < 1:
        raise ValueError(f"runs deve ser >= 1, recebido {runs}")
    if delta < 0:
        raise ValueError(f"delta deve ser >= 0, recebido {delta}")
    swm_config = swm_config or SwmConfig()
    em_config = em_config or EmConfig()

    records: list[CompareRun] = []
    for run in range(runs):
        run_specific = run_seed(seed, run)
        init = init_model(data, k, run_specific, swm_config.eps_var)
        fits = {
            FitMethod.EM: lambda: fit_em(
                data, k, em_config.model_copy(update={"seed": run_specific}), init=init
            ),
            FitMethod.SWM: lambda: fit_swm(
                data, k, swm_config.model_copy(update={"seed": run_specific}), init=init
            ),
        }
        for method, fit in fits.items():
            model, _ = fit()
            records.append(
                CompareRun(
                    run=run,
                    method=method,
                    nll=nll(model, data),
                    sw=sliced_wasserstein(model, data, swm_config.p, projections, seed=seed),
                )
            )
            if callback is not None:
                callback(run, method)

    best = min(record.nll for record in records)
    threshold = best + delta * abs(best)
    records = [
        record.model_copy(update={"success": record.nll <= threshold}) for record in records
    ]

    summary = []
    for method in (FitMethod.EM, FitMethod.SWM):
        own = [record for record in records if record.method == method]
        summary.append(
            MethodSummary(
                method=method,
                success_fraction=sum(record.success for record in own) / len(own),
                median_nll=float(np.median([record.nll for record in own])),
                median_sw=float(np.median([record.sw for record in own])),
            )
        )

    return CompareReport(
        k=k,
        runs=runs,
        seed=seed,
        delta=delta,
        best_nll=best,
        records=records,
        summary=summary,
        source=data.label,
    )
