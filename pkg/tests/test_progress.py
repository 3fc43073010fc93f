"""Testes para o ProgressReporter."""

import io
import os
from unittest.mock import MagicMock, patch

from rich.console import Console

from swgmm.formatters.progress import ProgressReporter, is_ci_environment


def _reporter(enabled: bool = True) -> tuple[ProgressReporter, io.StringIO]:
    output = io.StringIO()
    console = Console(file=output, force_terminal=False)
    return ProgressReporter(console=console, enabled=enabled, force_terminal=False), output


class TestIsCiEnvironment:
    """Testes para is_ci_environment."""

    def test_true_quando_stderr_nao_e_tty(self):
        with patch("sys.stderr.isatty", return_value=False):
            assert is_ci_environment() is True

    def test_true_com_variavel_de_ci(self):
        with patch("sys.stderr.isatty", return_value=True):
            with patch.dict(os.environ, {"GITHUB_ACTIONS": "true"}, clear=True):
                assert is_ci_environment() is True

    def test_false_em_terminal_interativo(self):
        with patch("sys.stderr.isatty", return_value=True):
            with patch.dict(os.environ, {}, clear=True):
                assert is_ci_environment() is False


class TestProgressReporter:
    """Testes para as mensagens do ProgressReporter."""

    def test_console_padrao_escreve_em_stderr(self):
        reporter = ProgressReporter()

        assert reporter.console.stderr is True

    def test_force_terminal_define_animacao(self):
        assert ProgressReporter(force_terminal=True)._use_animation is True
        assert ProgressReporter(force_terminal=False)._use_animation is False

    def test_status_em_modo_ci_imprime_linha(self):
        reporter, output = _reporter()

        with reporter.status("Ajustando...") as status:
            assert status is None

        assert "Ajustando..." in output.getvalue()

    def test_status_desabilitado_fica_em_silencio(self):
        reporter, output = _reporter(enabled=False)

        with reporter.status("Ajustando..."):
            pass

        assert output.getvalue() == ""

    def test_mensagens_com_simbolos(self):
        reporter, output = _reporter()

        reporter.success("pronto")
        reporter.warning("cuidado")

        text = output.getvalue()
        for symbol in ("✓", "⚠"):
            assert symbol in text

    def test_desabilitado_silencia_exceto_erros(self):
        reporter, output = _reporter(enabled=False)

        reporter.success("pronto")
        reporter.warning("cuidado")
        reporter.error("falhou")

        assert output.getvalue().strip() == "✗ falhou"

    def test_erro_nao_interpreta_markup(self):
        reporter, output = _reporter()

        reporter.error("valor [type=greater_than] inválido")

        assert "[type=greater_than]" in output.getvalue()


class TestUpdater:
    """Testes para o callback de atualização do spinner."""

    def test_atualiza_status(self):
        reporter, _ = _reporter()
        status = MagicMock()

        update = reporter.updater(status, lambda i, value: f"{i}:{value}")
        update(3, 0.5)

        status.update.assert_called_once_with("3:0.5")

    def test_sem_status_nao_faz_nada(self):
        reporter, output = _reporter()

        reporter.updater(None, lambda *args: "x")(1, 2.0)

        assert output.getvalue() == ""
