"""Testes para os experimentos de paisagem e robustez."""

import numpy as np
import pytest

from swgmm.datasets import gen_gaussian_blobs, gen_ring_square_line
from swgmm.experiments import (
    count_local_minima,
    landscape_scenario_1,
    landscape_scenario_2,
    run_compare,
    run_seed,
)
from swgmm.models import EmConfig, FitMethod, SwmConfig


class TestLandscapeScenario1:
    """Testes para a paisagem de uma gaussiana."""

    def test_minimos_perto_da_origem(self):
        result = landscape_scenario_1(2000, 81, seed=0)
        cell = 20.0 / 80

        assert abs(result.argmin("nll")[0]) <= cell
        assert abs(result.argmin("wm")[0]) <= cell

    def test_csv_com_cabecalho(self):
        result = landscape_scenario_1(200, 5, seed=0)

        lines = result.to_csv().splitlines()

        assert lines[0] == "mu,nll,wm"
        assert len(lines) == 6
        assert lines[1].startswith("-10.0,")

    def test_wm_cresce_com_o_deslocamento(self):
        result = landscape_scenario_1(2000, 21, seed=0)

        # W_2² entre N(μ, 1) e N(0, 1) é μ²
        np.testing.assert_allclose(result.wm, result.axes[0] ** 2, rtol=0.05, atol=0.1)

    def test_grade_invalida(self):
        with pytest.raises(ValueError, match="grid"):
            landscape_scenario_1(100, 1, seed=0)


class TestLandscapeScenario2:
    """Testes para a paisagem da mistura de dois componentes."""

    def test_minimos_globais_coincidem(self):
        result = landscape_scenario_2(2000, 41, seed=0)
        cell = 20.0 / 40

        for column in ("nll", "wm"):
            found = np.sort(result.argmin(column))
            np.testing.assert_allclose(found, [-4.0, 4.0], atol=cell + 1e-9)

    def test_csv_tem_grade_completa(self):
        result = landscape_scenario_2(100, 4, seed=0)

        lines = result.to_csv().splitlines()

        assert lines[0] == "mu1,mu2,nll,wm"
        assert len(lines) == 17

    def test_deterministico(self):
        assert landscape_scenario_2(100, 5, seed=3).to_csv() == landscape_scenario_2(100, 5, seed=3).to_csv()


class TestCountLocalMinima:
    """Testes para a contagem de mínimos locais estritos."""

    def test_poco_unico(self):
        x, y = np.meshgrid(np.linspace(-1, 1, 11), np.linspace(-1, 1, 11))

        assert count_local_minima(x**2 + y**2) == 1

    def test_dois_pocos(self):
        values = np.ones((7, 7))
        values[2, 2] = 0.0
        values[4, 5] = 0.5

        assert count_local_minima(values) == 2

    def test_plato_nao_conta(self):
        assert count_local_minima(np.zeros((5, 5))) == 0

    def test_borda_nao_conta(self):
        values = np.ones((5, 5))
        values[0, 2] = 0.0

        assert count_local_minima(values) == 0


class TestRunCompare:
    """Testes para o experimento de robustez."""

    @pytest.fixture
    def small_report(self):
        data = gen_gaussian_blobs([[-4.0, 0.0], [4.0, 0.0]], 200, seed=0)
        return run_compare(
            data,
            2,
            runs=3,
            seed=7,
            swm_config=SwmConfig(iters=20),
            em_config=EmConfig(iters=20),
            projections=50,
        )

    def test_registros_por_metodo(self, small_report):
        for method in FitMethod:
            runs = [r.run for r in small_report.records if r.method == method]
            assert runs == [0, 1, 2]

    def test_melhor_execucao_e_sucesso(self, small_report):
        assert any(r.success for r in small_report.records)
        assert small_report.best_nll == min(r.nll for r in small_report.records)

    def test_resumo_consistente(self, small_report):
        for summary in small_report.summary:
            own = [r for r in small_report.records if r.method == summary.method]
            assert summary.success_fraction == sum(r.success for r in own) / len(own)
            assert summary.median_nll == pytest.approx(np.median([r.nll for r in own]))

    def test_deterministico(self, small_report):
        data = gen_gaussian_blobs([[-4.0, 0.0], [4.0, 0.0]], 200, seed=0)
        again = run_compare(
            data,
            2,
            runs=3,
            seed=7,
            swm_config=SwmConfig(iters=20),
            em_config=EmConfig(iters=20),
            projections=50,
        )

        assert again.model_dump_json() == small_report.model_dump_json()

    def test_callback_por_ajuste(self):
        data = gen_gaussian_blobs([[0.0], [5.0]], 60, seed=0)
        seen = []

        run_compare(
            data,
            2,
            runs=2,
            seed=0,
            swm_config=SwmConfig(iters=2),
            em_config=EmConfig(iters=2),
            projections=5,
            callback=lambda run, method: seen.append((run, method)),
        )

        assert seen == [(0, FitMethod.EM), (0, FitMethod.SWM), (1, FitMethod.EM), (1, FitMethod.SWM)]

    def test_runs_invalido(self):
        data = gen_gaussian_blobs([[0.0]], 10, seed=0)

        with pytest.raises(ValueError, match="runs"):
            run_compare(data, 1, runs=0, seed=0)

    def test_sementes_por_execucao_independentes_da_ordem(self):
        assert run_seed(3, 1) == run_seed(3, 1)
        assert run_seed(3, 1) != run_seed(3, 2)


@pytest.mark.slow
class TestFullScale:
    """Experimentos em escala completa."""

    def test_paisagem_cenario_1(self):
        result = landscape_scenario_1(5000, 401, seed=0)
        cell = 20.0 / 400

        assert abs(result.argmin("nll")[0]) <= cell
        assert abs(result.argmin("wm")[0]) <= cell

    def test_paisagem_cenario_2(self):
        result = landscape_scenario_2(5000, 101, seed=0)
        cell = 20.0 / 100

        np.testing.assert_allclose(np.sort(result.argmin("nll")), np.sort(result.argmin("wm")), atol=cell + 1e-9)
        np.testing.assert_allclose(np.sort(result.argmin("wm")), [-4.0, 4.0], atol=cell + 1e-9)
        assert count_local_minima(result.wm) <= count_local_minima(result.nll)

    def test_robustez_ring_square_line(self):
        data = gen_ring_square_line(1500, seed=0)

        report = run_compare(data, 10, runs=20, seed=0)

        summary = {s.method: s for s in report.summary}
        assert summary[FitMethod.SWM].success_fraction >= 0.8
        assert summary[FitMethod.SWM].success_fraction > summary[FitMethod.EM].success_fraction
        assert summary[FitMethod.SWM].median_sw <= summary[FitMethod.EM].median_sw
