"""Progress Reporter - Spinners e mensagens de status em stderr."""

from __future__ import annotations

import os
import sys
from contextlib import contextmanager
from typing import Any, Callable, Iterator

from rich.console import Console
from rich.markup import escape
from rich.status import Status

# Variáveis que indicam execução em CI
CI_VARIABLES = ("CI", "GITLAB_CI", "GITHUB_ACTIONS", "JENKINS_URL", "TRAVIS")


def is_ci_environment() -> bool:
    """True quando stderr não é um terminal ou alguma variável de CI está definida."""
    if not sys.stderr.isatty():
        return True
    return any(os.environ.get(var) for var in CI_VARIABLES)


class ProgressReporter:
    """Mensagens de progresso do CLI.

    Em TTY usa spinner com mensagem atualizável; em CI imprime uma linha por
    etapa. Com ``enabled=False`` só os erros aparecem, o que mantém stdout e
    stderr limpos para saídas de máquina como o JSON do ``eval``.
    """

    def __init__(
        self,
        console: Console | None = None,
        enabled: bool = True,
        force_terminal: bool | None = None,
    ):
        """Inicializa o reporter.

        Args:
            console: Console do rich (default: um novo, escrevendo em stderr)
            enabled: Se False, silencia tudo exceto erros
            force_terminal: True força spinners, False força modo CI, None auto-detecta
        """
        self.console = console or Console(stderr=True, force_terminal=force_terminal)
        self.enabled = enabled
        if force_terminal is None:
            self._use_animation = not is_ci_environment()
        else:
            self._use_animation = force_terminal

    @contextmanager
    def status(self, message: str) -> Iterator[Status | None]:
        """Spinner durante uma operação longa.

        Yields:
            O status do rich, ou None em modo CI/desabilitado
        """
        if not self.enabled:
            yield None
            return

        if self._use_animation:
            with self.console.status(message, spinner="dots") as status:
                yield status
        else:
            self.console.print(f"[dim]→[/dim] {message}")
            yield None

    def updater(
        self, status: Status | None, render: Callable[..., str]
    ) -> Callable[..., None]:
        """Callback que reescreve a mensagem do spinner a cada chamada.

        Args:
            status: Status devolvido por :meth:`status`
            render: Monta a mensagem a partir dos argumentos do callback

        Returns:
            Função para passar como callback de progresso (no-op sem spinner)
        """

        def update(*args: Any) -> None:
            if status is not None:
                status.update(render(*args))

        return update

    def success(self, message: str) -> None:
        if self.enabled:
            self.console.print(f"[green]✓[/green] {message}")

    def warning(self, message: str) -> None:
        if self.enabled:
            self.console.print(f"[yellow]⚠[/yellow] {message}")

    def error(self, message: str) -> None:
        """Erros são exibidos mesmo com o reporter desabilitado; o texto não é markup."""
        self.console.print(f"[red]✗[/red] {escape(message)}", highlight=False)
