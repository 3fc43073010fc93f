"""CLI Entry Point - Comando principal do swgmm."""

import json
import sys
import time
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, Optional

import click

from . import __version__
from .config import load_config
from .datasets import gen_gaussian_blobs, gen_ring_square_line, load_csv, save_csv
from .em import fit_em
from .experiments import landscape_scenario_1, landscape_scenario_2, run_compare
from .formatters.progress import ProgressReporter
from .formatters.terminal import (
    format_compare_report,
    format_fit_summary,
    format_landscape_summary,
)
from .gmm import load_model, nll, sample, save_model
from .i18n import DEFAULT_LANGUAGE, get_available_languages, set_language, t
from .models import EmConfig, FitMethod, SwmConfig
from .ot1d import sliced_wasserstein
from .swm import DivergenceError, fit_swm

# Códigos de saída
EXIT_INPUT = 2
EXIT_NUMERIC = 3

DATASETS = ("ring-square-line", "blobs")
METRICS = ("nll", "sw")

# Centros default do gerador de blobs
DEFAULT_CENTERS = "-5,0;5,0"


@contextmanager
def exit_on_errors(reporter: ProgressReporter) -> Iterator[None]:
    """Converte exceções da biblioteca em mensagens e códigos de saída.

    Entradas inválidas (inclui pydantic.ValidationError, DatasetFormatError e
    ConfigError, todas ValueError) e falhas de arquivo saem com 2; falhas
    numéricas do otimizador (DivergenceError e sua subclasse
    NonFiniteGradientError) saem com 3.
    """
    try:
        yield
    except DivergenceError as e:
        reporter.error(t("cli.error_numeric", error=e))
        sys.exit(EXIT_NUMERIC)
    except ValueError as e:
        reporter.error(t("cli.error_input", error=e))
        sys.exit(EXIT_INPUT)
    except OSError as e:
        reporter.error(t("cli.error_io", error=e))
        sys.exit(EXIT_INPUT)


def parse_centers(value: str) -> list[list[float]]:
    """Lê centros no formato "x,y;x,y".

    Raises:
        click.BadParameter: Formato inválido ou dimensões diferentes
    """
    try:
        centers = [[float(v) for v in item.split(",")] for item in value.split(";") if item.strip()]
    except ValueError:
        raise click.BadParameter(t("cli.error_centers", value=value), param_hint="--centers") from None
    if not centers or len({len(c) for c in centers}) != 1:
        raise click.BadParameter(t("cli.error_centers", value=value), param_hint="--centers")
    return centers


def parse_metrics(value: str) -> list[str]:
    """Lê a lista de métricas separadas por vírgula, sem repetições."""
    names = [name.strip() for name in value.split(",") if name.strip()]
    unknown = [name for name in names if name not in METRICS]
    if not names or unknown:
        raise click.BadParameter(
            t("cli.error_metrics", names=", ".join(unknown) or value, allowed=", ".join(METRICS)),
            param_hint="--metrics",
        )
    return list(dict.fromkeys(names))


def build_swm_config(config_path: Optional[Path], **overrides: object) -> SwmConfig:
    """SwmConfig do arquivo (se houver) com as flags explícitas por cima."""
    if config_path is not None:
        return load_config(config_path, "swm", **overrides)
    return SwmConfig(**{key: value for key, value in overrides.items() if value is not None})


def build_em_config(config_path: Optional[Path], **overrides: object) -> EmConfig:
    """EmConfig do arquivo (se houver) com as flags explícitas por cima."""
    if config_path is not None:
        return load_config(config_path, "em", **overrides)
    return EmConfig(**{key: value for key, value in overrides.items() if value is not None})


def swm_options(func):
    """Flags de hiperparâmetros do SWM compartilhadas por fit e compare."""
    options = [
        click.option("--projections", "-L", type=click.IntRange(min=1), default=None,
                     help="Direções por iteração (default: 20)"),
        click.option("--iters", "-i", type=click.IntRange(min=1), default=None,
                     help="Iterações (default: 2000 no SWM, 500 no EM)"),
        click.option("--lr", type=click.FloatRange(min=0, min_open=True), default=None,
                     help="Taxa de aprendizado do RMSProp (default: 0.01)"),
        click.option("--quad", type=click.IntRange(min=2), default=None,
                     help="Nós de quadratura por direção (default: 256)"),
        click.option("--p", "p", type=click.FloatRange(min=1), default=None,
                     help="Ordem p da distância (default: 2)"),
        click.option("--config", "config_path",
                     type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None,
                     help="Arquivo YAML de hiperparâmetros; flags explícitas têm prioridade"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


@click.group()
@click.version_option(version=__version__)
@click.option(
    "--lang",
    "-l",
    default=DEFAULT_LANGUAGE,
    type=click.Choice(get_available_languages()),
    help=f"Idioma das mensagens (default: {DEFAULT_LANGUAGE})",
)
@click.option(
    "--quiet",
    "-q",
    is_flag=True,
    default=False,
    help="Silencia progresso e resumos (erros continuam visíveis)",
)
@click.pass_context
def main(ctx: click.Context, lang: str, quiet: bool):
    """swgmm - Ajuste de GMM por sliced-Wasserstein.

    Gera datasets, ajusta modelos por SWM ou EM, avalia NLL e distância
    sliced-Wasserstein e roda os experimentos de paisagem e robustez.
    """
    set_language(lang)
    ctx.obj = ProgressReporter(enabled=not quiet)


@main.command()
@click.option("--dataset", "-d", type=click.Choice(DATASETS), default="ring-square-line",
              help="Gerador (default: ring-square-line)")
@click.option("--n", "n", type=click.IntRange(min=1), required=True, help="Número de amostras")
@click.option("--seed", "-s", type=int, default=0, help="Semente (default: 0)")
@click.option("--noise", type=click.FloatRange(min=0), default=0.05,
              help="Desvio do ruído gaussiano do ring-square-line (default: 0.05)")
@click.option("--centers", default=DEFAULT_CENTERS,
              help=f'Centros dos blobs como "x,y;x,y" (default: "{DEFAULT_CENTERS}")')
@click.option("--scale", type=click.FloatRange(min=0), default=1.0,
              help="Desvio padrão dos blobs (default: 1)")
@click.option("--out", "-o", type=click.Path(dir_okay=False, path_type=Path), required=True,
              help="CSV de saída")
@click.pass_obj
def gen(reporter: ProgressReporter, dataset: str, n: int, seed: int, noise: float,
        centers: str, scale: float, out: Path):
    """Gera um dataset sintético em CSV.

    Exemplos:

        swgmm gen --dataset ring-square-line --n 1500 --seed 7 --out data.csv

        swgmm gen --dataset blobs --centers "-5,0;5,0" --n 10000 --out blobs.csv
    """
    with exit_on_errors(reporter):
        if dataset == "blobs":
            data = gen_gaussian_blobs(parse_centers(centers), n, seed, scale)
        else:
            data = gen_ring_square_line(n, seed, noise)
        save_csv(data, out)
    reporter.success(t("cli.generated", path=out, n=data.n, dataset=dataset))


@main.command()
@click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              required=True, help="CSV com as amostras")
@click.option("--k", "k", type=click.IntRange(min=1), required=True, help="Número de componentes")
@click.option("--method", "-m", type=click.Choice([m.value for m in FitMethod]), default="swm",
              help="Método de ajuste (default: swm)")
@click.option("--seed", "-s", type=int, default=None, help="Semente (default: 0)")
@swm_options
@click.option("--out", "-o", type=click.Path(dir_okay=False, path_type=Path), required=True,
              help="JSON do modelo ajustado")
@click.option("--trace", "trace_path", type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="CSV opcional com o trace (iteration,objective,nll)")
@click.pass_obj
def fit(reporter: ProgressReporter, input_path: Path, k: int, method: str, seed: Optional[int],
        projections: Optional[int], iters: Optional[int], lr: Optional[float], quad: Optional[int],
        p: Optional[float], config_path: Optional[Path], out: Path, trace_path: Optional[Path]):
    """Ajusta um GMM de K componentes às amostras.

    Exemplos:

        swgmm fit --input data.csv --k 10 --method swm --seed 1 --out model.json

        swgmm fit --input data.csv --k 10 --method em --out em.json --trace em.csv

        swgmm fit --input data.csv --k 10 --config swm.yaml --lr 0.02 --out model.json

    Exemplo de arquivo --config (flags explícitas têm prioridade):

    \b
        l: 20
        iters: 2000
        lr: 0.01
        gradient: transport
    """
    start_time = time.perf_counter()

    with exit_on_errors(reporter):
        data = load_csv(input_path)
        if method == FitMethod.EM.value:
            em_config = build_em_config(config_path, seed=seed, iters=iters)
        else:
            swm_config = build_swm_config(
                config_path, seed=seed, l=projections, iters=iters, lr=lr, quad_points=quad, p=p
            )

        with reporter.status(t("cli.fitting", method=method.upper(), k=k, n=data.n)) as status:
            callback = reporter.updater(
                status,
                lambda i, objective: t(
                    "cli.fit_progress", method=method.upper(), iteration=i, objective=objective
                ),
            )
            try:
                if method == FitMethod.EM.value:
                    model, trace = fit_em(data, k, em_config, callback=callback)
                else:
                    model, trace = fit_swm(data, k, swm_config, callback=callback)
            except DivergenceError as e:
                if trace_path is not None:
                    trace_path.write_text(e.trace.to_csv())
                    reporter.warning(t("cli.trace_flushed", path=trace_path))
                raise

        save_model(model, out)
        if trace_path is not None:
            trace_path.write_text(trace.to_csv())

    if reporter.enabled:
        format_fit_summary(model, trace)
    elapsed = time.perf_counter() - start_time
    reporter.success(t("cli.fit_complete", path=out, elapsed=elapsed))


@main.command(name="eval")
@click.option("--model", "model_path", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              required=True, help="JSON do modelo")
@click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              required=True, help="CSV com as amostras")
@click.option("--metrics", default="nll,sw", help="Métricas separadas por vírgula (default: nll,sw)")
@click.option("--projections", "-L", type=click.IntRange(min=1), default=500,
              help="Direções da estimativa sliced-Wasserstein (default: 500)")
@click.option("--p", "p", type=click.FloatRange(min=1), default=2.0, help="Ordem p (default: 2)")
@click.option("--seed", "-s", type=int, default=0, help="Semente das direções (default: 0)")
@click.pass_obj
def evaluate(reporter: ProgressReporter, model_path: Path, input_path: Path, metrics: str,
             projections: int, p: float, seed: int):
    """Imprime em stdout um JSON com as métricas do modelo nos dados.

    Exemplos:

        swgmm eval --model model.json --input data.csv

        swgmm eval --model model.json --input data.csv --metrics nll
    """
    names = parse_metrics(metrics)
    with exit_on_errors(reporter):
        model = load_model(model_path)
        data = load_csv(input_path)
        if model.dim != data.dim:
            raise ValueError(t("cli.error_dim", model=model.dim, data=data.dim))
        result: dict[str, float] = {}
        for name in names:
            if name == "nll":
                result[name] = nll(model, data)
            else:
                result[name] = sliced_wasserstein(model, data, p, projections, seed=seed)
    click.echo(json.dumps(result))


@main.command()
@click.option("--scenario", type=click.Choice(["1", "2"]), required=True,
              help="1: N(0,1) contra N(μ,1); 2: mistura de dois componentes")
@click.option("--n", "n", type=click.IntRange(min=1), default=5000, help="Amostras (default: 5000)")
@click.option("--grid", "-g", type=click.IntRange(min=2), default=None,
              help="Pontos da grade por eixo (default: 401 no cenário 1, 101 no 2)")
@click.option("--p", "p", type=click.FloatRange(min=1), default=2.0, help="Ordem p (default: 2)")
@click.option("--seed", "-s", type=int, default=0, help="Semente dos dados (default: 0)")
@click.option("--out", "-o", type=click.Path(dir_okay=False, path_type=Path), required=True,
              help="CSV da paisagem")
@click.pass_obj
def landscape(reporter: ProgressReporter, scenario: str, n: int, grid: Optional[int], p: float,
              seed: int, out: Path):
    """Varre NLL e W_p^p numa grade de médias.

    Exemplos:

        swgmm landscape --scenario 1 --n 5000 --grid 401 --out s1.csv

        swgmm landscape --scenario 2 --grid 101 --out s2.csv
    """
    grid = grid or (401 if scenario == "1" else 101)
    with exit_on_errors(reporter):
        with reporter.status(t("cli.landscape_running", scenario=scenario, grid=grid)):
            if scenario == "1":
                result = landscape_scenario_1(n, grid, seed, p)
            else:
                result = landscape_scenario_2(n, grid, seed, p)
        out.write_text(result.to_csv())

    if reporter.enabled:
        format_landscape_summary(result)
    reporter.success(t("cli.written", path=out))


@main.command()
@click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              required=True, help="CSV com as amostras")
@click.option("--k", "k", type=click.IntRange(min=1), required=True, help="Número de componentes")
@click.option("--runs", "-r", type=click.IntRange(min=1), default=20,
              help="Inicializações compartilhadas (default: 20)")
@click.option("--seed", "-s", type=int, default=0, help="Semente do experimento (default: 0)")
@click.option("--delta", type=click.FloatRange(min=0), default=0.02,
              help="Tolerância relativa de sucesso sobre a melhor NLL (default: 0.02)")
@click.option("--eval-projections", type=click.IntRange(min=1), default=500,
              help="Direções da SW final de cada ajuste (default: 500)")
@click.option("--em-iters", type=click.IntRange(min=1), default=None,
              help="Máximo de iterações do EM (default: 500)")
@click.option("--em-config", "em_config_path",
              type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None,
              help="YAML com campos de EmConfig; --em-iters tem prioridade")
@swm_options
@click.option("--out", "-o", type=click.Path(dir_okay=False, path_type=Path), required=True,
              help="JSON do relatório")
@click.pass_obj
def compare(reporter: ProgressReporter, input_path: Path, k: int, runs: int, seed: int, delta: float,
            eval_projections: int, em_iters: Optional[int], projections: Optional[int],
            iters: Optional[int], lr: Optional[float], quad: Optional[int], p: Optional[float],
            config_path: Optional[Path], em_config_path: Optional[Path], out: Path):
    """Compara EM e SWM partindo das mesmas inicializações aleatórias.

    Exemplos:

        swgmm compare --input data.csv --k 10 --runs 20 --seed 0 --out report.json

        swgmm compare --input data.csv --k 10 --runs 5 --iters 500 --delta 0.05 --out r.json

        swgmm compare --input data.csv --k 10 --config swm.yaml --em-config em.yaml --out r.json

    --config vale para o SWM e --em-config para o EM.
    """
    with exit_on_errors(reporter):
        data = load_csv(input_path)
        swm_config = build_swm_config(
            config_path, l=projections, iters=iters, lr=lr, quad_points=quad, p=p
        )
        em_config = build_em_config(em_config_path, iters=em_iters)

        with reporter.status(t("cli.compare_running", runs=runs, k=k)) as status:
            callback = reporter.updater(
                status,
                lambda run, method: t(
                    "cli.compare_progress", run=run + 1, runs=runs, method=method.value.upper()
                ),
            )
            report = run_compare(
                data,
                k,
                runs,
                seed,
                swm_config=swm_config,
                em_config=em_config,
                delta=delta,
                projections=eval_projections,
                callback=callback,
            )
        out.write_text(report.model_dump_json(indent=2) + "\n")

    if reporter.enabled:
        format_compare_report(report)
    reporter.success(t("cli.written", path=out))


@main.command(name="sample")
@click.option("--model", "model_path", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              required=True, help="JSON do modelo")
@click.option("--n", "n", type=click.IntRange(min=1), required=True, help="Número de amostras")
@click.option("--seed", "-s", type=int, default=0, help="Semente (default: 0)")
@click.option("--out", "-o", type=click.Path(dir_okay=False, path_type=Path), required=True,
              help="CSV de saída")
@click.pass_obj
def sample_cmd(reporter: ProgressReporter, model_path: Path, n: int, seed: int, out: Path):
    """Sorteia N amostras de um modelo salvo.

    Exemplo:

        swgmm sample --model model.json --n 10000 --seed 3 --out samples.csv
    """
    with exit_on_errors(reporter):
        model = load_model(model_path)
        save_csv(sample(model, n, seed), out)
    reporter.success(t("cli.generated", path=out, n=n, dataset=model_path.name))


if __name__ == "__main__":
    main()
