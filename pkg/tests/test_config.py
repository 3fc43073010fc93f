"""Testes para o módulo config."""

import pytest
from pydantic import ValidationError

from swgmm.config import ConfigError, load_config, read_config_mapping
from swgmm.models import EmConfig, GradientMode, SwmConfig


class TestReadConfigMapping:
    """Testes para read_config_mapping."""

    def test_arquivo_inexistente(self, tmp_path):
        with pytest.raises(ConfigError, match="não encontrado"):
            read_config_mapping(tmp_path / "nada.yaml")

    def test_arquivo_vazio(self, tmp_path):
        path = tmp_path / "empty.yaml"
        path.write_text("")

        assert read_config_mapping(path) == {}

    def test_lista_nao_e_mapeamento(self, tmp_path):
        path = tmp_path / "list.yaml"
        path.write_text("- 1\n- 2\n")

        with pytest.raises(ConfigError, match="mapeamento"):
            read_config_mapping(path)

    def test_yaml_invalido(self, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("lr: [1, 2\n")

        with pytest.raises(ConfigError, match="YAML inválido"):
            read_config_mapping(path)


class TestLoadConfig:
    """Testes para load_config."""

    def test_carrega_swm(self, tmp_path):
        path = tmp_path / "swm.yaml"
        path.write_text("lr: 0.02\nl: 50\ngradient: frozen\n")

        config = load_config(path, "swm")

        assert isinstance(config, SwmConfig)
        assert config.lr == 0.02
        assert config.l == 50
        assert config.gradient == GradientMode.FROZEN
        assert config.iters == 2000

    def test_carrega_em(self, tmp_path):
        path = tmp_path / "em.yaml"
        path.write_text("iters: 50\ntol: 1.0e-5\n")

        config = load_config(path, "em")

        assert isinstance(config, EmConfig)
        assert config.iters == 50

    def test_flags_tem_prioridade(self, tmp_path):
        path = tmp_path / "swm.yaml"
        path.write_text("lr: 0.02\niters: 10\n")

        config = load_config(path, "swm", lr=0.5, iters=None)

        assert config.lr == 0.5
        assert config.iters == 10

    def test_chave_desconhecida(self, tmp_path):
        path = tmp_path / "swm.yaml"
        path.write_text("learning_rate: 0.1\n")

        with pytest.raises(ValidationError):
            load_config(path, "swm")

    def test_valor_fora_da_faixa(self, tmp_path):
        path = tmp_path / "swm.yaml"
        path.write_text("gamma: 1.5\n")

        with pytest.raises(ValidationError):
            load_config(path, "swm")

    def test_tipo_desconhecido(self, tmp_path):
        path = tmp_path / "x.yaml"
        path.write_text("{}\n")

        with pytest.raises(ConfigError, match="desconhecido"):
            load_config(path, "kmeans")
