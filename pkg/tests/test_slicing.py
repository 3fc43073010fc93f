"""Testes para o módulo slicing."""

import numpy as np
import pytest
from scipy.integrate import trapezoid
from scipy.stats import kstest

from swgmm.gmm import Dataset, GmmModel, sample
from swgmm.ot1d import model_cdf
from swgmm.slicing import (
    Direction,
    SliceModel,
    as_direction_matrix,
    direction_matrix,
    project_data,
    project_model,
    project_parameters,
    sample_directions,
    slice_data,
    slice_model,
)


def _random_model(rng: np.random.Generator, d: int, k: int) -> GmmModel:
    weights = rng.dirichlet(np.ones(k))
    means = rng.normal(scale=3.0, size=(k, d))
    factors = rng.normal(size=(k, d, d))
    covariances = factors @ np.swapaxes(factors, 1, 2) + 0.5 * np.eye(d)
    return GmmModel(weights, means, covariances)


class TestDirection:
    """Testes para Direction e sorteio de direções."""

    def test_rejeita_vetor_nao_unitario(self):
        with pytest.raises(ValueError, match="unitária"):
            Direction(np.array([1.0, 1.0]))

    def test_from_vector_normaliza(self):
        theta = Direction.from_vector(np.array([3.0, 4.0]))

        np.testing.assert_allclose(theta.theta, [0.6, 0.8])

    def test_vetor_nulo(self):
        with pytest.raises(ValueError):
            Direction.from_vector(np.zeros(2))

    def test_direcoes_unitarias(self):
        thetas = direction_matrix(5, 100, seed=0)

        np.testing.assert_allclose(np.linalg.norm(thetas, axis=1), 1.0, atol=1e-12)

    def test_deterministico_por_semente(self):
        a = sample_directions(3, 10, seed=4)
        b = sample_directions(3, 10, seed=4)

        for left, right in zip(a, b):
            np.testing.assert_array_equal(left.theta, right.theta)

    def test_sementes_diferentes(self):
        assert not np.array_equal(direction_matrix(3, 5, 1), direction_matrix(3, 5, 2))

    def test_media_das_direcoes_proxima_de_zero(self):
        thetas = direction_matrix(3, 20_000, seed=0)

        np.testing.assert_allclose(thetas.mean(axis=0), 0.0, atol=0.02)

    def test_dimensao_um_da_sinais(self):
        thetas = direction_matrix(1, 50, seed=0)

        assert set(np.unique(thetas)) <= {-1.0, 1.0}

    def test_as_direction_matrix_valida_dimensao(self):
        with pytest.raises(ValueError, match="Dimensão"):
            as_direction_matrix(sample_directions(2, 3, 0), dim=3)


class TestSliceData:
    """Testes para a fatia dos dados."""

    def test_ordena_as_projecoes(self):
        data = Dataset(np.array([[3.0, 0.0], [1.0, 5.0], [2.0, -1.0]]))

        sliced = slice_data(data, Direction(np.array([1.0, 0.0])))

        np.testing.assert_array_equal(sliced.points, [1.0, 2.0, 3.0])
        assert len(sliced) == 3

    def test_direcao_oposta_espelha(self):
        data = Dataset(np.random.default_rng(0).normal(size=(20, 2)))
        theta = Direction.from_vector(np.array([1.0, 2.0]))

        forward = slice_data(data, theta)
        backward = slice_data(data, -theta)

        np.testing.assert_allclose(backward.points, -forward.points[::-1])

    def test_dimensao_incompativel(self):
        with pytest.raises(ValueError, match="Dimensão"):
            slice_data(Dataset(np.zeros((3, 2))), Direction(np.array([1.0, 0.0, 0.0])))

    def test_project_data_ordena_cada_linha(self):
        data = Dataset(np.random.default_rng(1).normal(size=(30, 3)))

        projected = project_data(data, direction_matrix(3, 4, 0))

        assert projected.shape == (4, 30)
        assert np.all(np.diff(projected, axis=1) >= 0)


class TestSliceModel:
    """Testes para a fatia do modelo."""

    def test_medias_e_variancias(self):
        model = GmmModel(
            np.array([0.5, 0.5]),
            np.array([[1.0, 2.0], [-1.0, 0.0]]),
            np.array([np.eye(2), [[2.0, 1.0], [1.0, 3.0]]]),
        )
        theta = Direction.from_vector(np.array([1.0, 1.0]))

        sliced = slice_model(model, theta)

        np.testing.assert_allclose(sliced.means1d, [3 / np.sqrt(2), -1 / np.sqrt(2)])
        np.testing.assert_allclose(sliced.vars1d, [1.0, (2 + 1 + 1 + 3) / 2])
        np.testing.assert_array_equal(sliced.weights, model.weights)

    def test_direcao_oposta_espelha_as_medias(self):
        model = _random_model(np.random.default_rng(3), 3, 4)
        theta = sample_directions(3, 1, seed=9)[0]

        forward = slice_model(model, theta)
        backward = slice_model(model, -theta)

        np.testing.assert_allclose(backward.means1d, -forward.means1d, rtol=1e-12)
        np.testing.assert_allclose(backward.vars1d, forward.vars1d, rtol=1e-12)

    def test_piso_de_variancia(self):
        thetas = np.array([[1.0, 0.0]])

        _, variances = project_parameters(
            np.zeros((1, 2)), np.array([[[1e-9, 0.0], [0.0, 1.0]]]), thetas, eps_var=1e-6
        )

        assert variances[0, 0] == 1e-6

    def test_project_model_em_lote(self):
        model = _random_model(np.random.default_rng(0), 3, 2)
        thetas = direction_matrix(3, 5, 0)

        means, variances = project_model(model, thetas)

        for l, row in enumerate(thetas):
            single = slice_model(model, Direction(row))
            np.testing.assert_allclose(means[l], single.means1d)
            np.testing.assert_allclose(variances[l], single.vars1d)

    def test_pdf_integra_um(self):
        sliced = SliceModel(np.array([0.4, 0.6]), np.array([-2.0, 3.0]), np.array([1.0, 0.25]))
        t = np.linspace(-15, 15, 20001)

        assert trapezoid(sliced.pdf(t), t) == pytest.approx(1.0, abs=1e-8)

    @pytest.mark.parametrize("d", [2, 5, 10])
    def test_fatia_coincide_com_amostras_projetadas(self, d):
        rng = np.random.default_rng(d)
        model = _random_model(rng, d, 3)
        theta = Direction.from_vector(rng.normal(size=d))

        data = sample(model, 100_000, seed=d)
        projected = data.samples @ theta.theta
        sliced = slice_model(model, theta)
        result = kstest(projected, lambda t: model_cdf(sliced, t))

        assert result.statistic < 0.02
