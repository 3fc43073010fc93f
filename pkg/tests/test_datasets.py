"""Testes para geradores e CSV."""

import numpy as np
import pytest

from swgmm.datasets import (
    DatasetFormatError,
    gen_gaussian_blobs,
    gen_gmm_samples,
    gen_ring_square_line,
    load_csv,
    save_csv,
)
from swgmm.gmm import Dataset, GmmModel


class TestRingSquareLine:
    """Testes para o gerador anel-quadrado-linha."""

    def test_numero_de_linhas(self):
        assert gen_ring_square_line(999, seed=7).n == 999
        assert gen_ring_square_line(1000, seed=7).n == 1000

    def test_deterministico(self):
        a = gen_ring_square_line(300, seed=1)
        b = gen_ring_square_line(300, seed=1)

        np.testing.assert_array_equal(a.samples, b.samples)

    def test_sementes_diferentes_mudam_os_pontos(self):
        for seed in range(10):
            a = gen_ring_square_line(300, seed=2 * seed)
            b = gen_ring_square_line(300, seed=2 * seed + 1)
            assert not np.array_equal(a.samples, b.samples)

    def test_formas_sem_ruido(self):
        data = gen_ring_square_line(999, seed=0, noise=0.0).samples
        ring, square, line = data[:333], data[333:666], data[666:]

        np.testing.assert_allclose(np.hypot(ring[:, 0] + 2.0, ring[:, 1]), 1.0, atol=1e-12)
        distance = np.maximum(np.abs(square[:, 0] - 2.0), np.abs(square[:, 1]))
        np.testing.assert_allclose(distance, 1.0, atol=1e-12)
        np.testing.assert_array_equal(line[:, 1], 0.0)
        assert line[:, 0].min() >= -1.0 and line[:, 0].max() <= 1.0

    def test_caixa_limitante(self):
        data = gen_ring_square_line(3000, seed=2, noise=0.0).samples

        assert data[:, 0].min() >= -3.0 and data[:, 0].max() <= 3.0
        assert data[:, 1].min() >= -1.0 and data[:, 1].max() <= 1.0

    def test_ruido_desloca_pontos(self):
        clean = gen_ring_square_line(300, seed=3, noise=0.0)
        noisy = gen_ring_square_line(300, seed=3, noise=0.05)

        assert not np.array_equal(clean.samples, noisy.samples)

    def test_n_pequeno(self):
        with pytest.raises(ValueError, match="n deve"):
            gen_ring_square_line(2, seed=0)


class TestOtherGenerators:
    """Testes para blobs e amostras de GMM."""

    def test_blobs_distribui_o_resto(self):
        data = gen_gaussian_blobs([[-5.0, 0.0], [5.0, 0.0]], 101, seed=0, scale=0.1)

        assert data.n == 101
        assert np.sum(data.samples[:, 0] < 0) == 51

    def test_blobs_n_menor_que_centros(self):
        with pytest.raises(ValueError):
            gen_gaussian_blobs([[0.0], [1.0], [2.0]], 2, seed=0)

    def test_amostras_de_gmm(self):
        model = GmmModel(np.ones(1), np.array([[1.0, 2.0]]), np.eye(2)[None])

        assert gen_gmm_samples(model, 50, seed=0).dim == 2


class TestCsv:
    """Testes para leitura e escrita de CSV."""

    def test_ida_e_volta_exata(self, tmp_path):
        data = Dataset(np.random.default_rng(0).normal(size=(20, 3)))
        path = tmp_path / "data.csv"

        save_csv(data, path)

        np.testing.assert_array_equal(load_csv(path).samples, data.samples)

    def test_ignora_linhas_em_branco(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text("1,2\n\n3,4\n")

        assert load_csv(path).n == 2

    def test_linha_irregular_informa_o_numero(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text("1,2\n3,4\n5\n")

        with pytest.raises(DatasetFormatError) as excinfo:
            load_csv(path)

        assert excinfo.value.line == 3
        assert "linha 3" in str(excinfo.value)

    def test_celula_nao_numerica(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text("1,2\nx,4\n")

        with pytest.raises(DatasetFormatError) as excinfo:
            load_csv(path)

        assert excinfo.value.line == 2

    def test_valor_nao_finito(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text("1,nan\n")

        with pytest.raises(DatasetFormatError, match="não finito"):
            load_csv(path)

    def test_arquivo_vazio(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text("")

        with pytest.raises(DatasetFormatError, match="sem amostras"):
            load_csv(path)
