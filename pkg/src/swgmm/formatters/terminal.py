"""Terminal Formatter - Resumos coloridos de ajustes e experimentos."""

import sys
from typing import TextIO

import numpy as np

from ..experiments import Landscape, count_local_minima
from ..gmm import GmmModel
from ..i18n import t
from ..models import CompareReport, FitTrace, MethodSummary

# Largura das linhas de separação
RULE_WIDTH = 50


class Colors:
    """Códigos de cores ANSI."""

    RESET = "\033[0m"
    BOLD = "\033[1m"
    DIM = "\033[2m"

    RED = "\033[31m"
    GREEN = "\033[32m"
    YELLOW = "\033[33m"
    CYAN = "\033[36m"


def _supports_color(stream: TextIO) -> bool:
    return hasattr(stream, "isatty") and stream.isatty()


def _colorize(text: str, stream: TextIO, *codes: str) -> str:
    """Aplica códigos ANSI apenas quando ``stream`` é um terminal."""
    if not _supports_color(stream):
        return text
    return "".join(codes) + text + Colors.RESET


def _vector(values: np.ndarray) -> str:
    return "(" + ", ".join(f"{float(v):.4g}" for v in values) + ")"


def _rule(stream: TextIO) -> str:
    return _colorize("═" * RULE_WIDTH, stream, Colors.DIM)


def format_fit_summary(model: GmmModel, trace: FitTrace, output: TextIO = sys.stdout) -> None:
    """Escreve cabeçalho, componentes ordenados por peso e o último registro do trace.

    Args:
        model: Modelo ajustado
        trace: Trace do ajuste
        output: Stream de saída (default: stdout)
    """
    title = _colorize(
        f"  {t('terminal.fit_header')} {trace.method.value.upper()}", output, Colors.BOLD
    )
    lines = [_rule(output), f"{title} — K={model.k}, d={model.dim}", _rule(output)]

    lines.append(f"  {t('terminal.components')}")
    for j in np.argsort(-model.weights, kind="stable"):
        weight = _colorize(f"{model.weights[j]:.3f}", output, Colors.CYAN)
        lines.append(f"  │ {weight}  {t('terminal.mean')} {_vector(model.means[j])}")

    if trace.records:
        last = trace.records[-1]
        lines.append("")
        lines.append(f"  {t('terminal.iterations')} {last.iteration}")
        lines.append(f"  {t('terminal.final_objective')} {last.objective:.6g}")
        lines.append(f"  {t('terminal.final_nll')} {last.nll:.6g}")
        if any(record.floored or record.reinitialized for record in trace.records):
            lines.append(f"  {_colorize(t('terminal.em_events'), output, Colors.YELLOW)}")
    lines.append(_rule(output))
    output.write("\n".join(lines) + "\n")


def _summary_line(summary: MethodSummary, best_fraction: float, output: TextIO) -> str:
    fraction = f"{summary.success_fraction:.0%}"
    color = Colors.GREEN if summary.success_fraction >= best_fraction else Colors.YELLOW
    return (
        f"  {summary.method.value.upper():<4} "
        f"{t('terminal.success')} {_colorize(fraction, output, Colors.BOLD, color)}  "
        f"{t('terminal.median_nll')} {summary.median_nll:.6g}  "
        f"{t('terminal.median_sw')} {summary.median_sw:.4g}"
    )


def format_compare_report(report: CompareReport, output: TextIO = sys.stdout) -> None:
    """Escreve o resumo por método do experimento de robustez."""
    title = _colorize(f"  {t('terminal.compare_header')}", output, Colors.BOLD)
    runs = t("terminal.runs_count", count=report.runs, k=report.k)
    lines = [_rule(output), f"{title} — {runs}", _rule(output)]
    best_fraction = max((s.success_fraction for s in report.summary), default=0.0)
    lines.extend(_summary_line(s, best_fraction, output) for s in report.summary)
    lines.append("")
    lines.append(
        f"  {t('terminal.best_nll')} {report.best_nll:.6g} "
        f"({t('terminal.delta', delta=report.delta)})"
    )
    lines.append(_rule(output))
    output.write("\n".join(lines) + "\n")


def format_landscape_summary(landscape: Landscape, output: TextIO = sys.stdout) -> None:
    """Escreve os mínimos globais das duas colunas e, em 2-D, os mínimos locais."""
    title = _colorize(f"  {t('terminal.landscape_header')}", output, Colors.BOLD)
    lines = [_rule(output), title, _rule(output)]
    for column in ("nll", "wm"):
        where = _vector(np.array(landscape.argmin(column)))
        lines.append(f"  {t('terminal.argmin', column=column)} {_colorize(where, output, Colors.CYAN)}")
    if len(landscape.axes) == 2:
        lines.append(
            "  "
            + t(
                "terminal.local_minima",
                nll=count_local_minima(landscape.nll),
                wm=count_local_minima(landscape.wm),
            )
        )
    lines.append(_rule(output))
    output.write("\n".join(lines) + "\n")
