"""Config - Leitura de arquivos YAML de hiperparâmetros."""

from pathlib import Path
from typing import Any, Literal, Union, overload

import yaml

from .models import EmConfig, SwmConfig


class ConfigError(ValueError):
    """Arquivo de configuração ausente ou com estrutura inválida."""

    pass


ConfigKind = Literal["swm", "em"]

_CONFIG_TYPES: dict[str, type[Union[SwmConfig, EmConfig]]] = {
    "swm": SwmConfig,
    "em": EmConfig,
}


def read_config_mapping(path: Path) -> dict[str, Any]:
    """Lê o YAML e garante que é um mapeamento.

    Args:
        path: Caminho do arquivo

    Returns:
        Dicionário com os valores do arquivo (vazio para arquivo vazio)

    Raises:
        ConfigError: Arquivo inexistente, YAML inválido ou conteúdo que não é mapeamento
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"Arquivo de configuração não encontrado: {path}")
    try:
        content = yaml.safe_load(path.read_text(encoding="utf-8"))
    except yaml.YAMLError as e:
        raise ConfigError(f"YAML inválido em {path}: {e}") from e
    if content is None:
        return {}
    if not isinstance(content, dict):
        raise ConfigError(f"Esperado um mapeamento em {path}, encontrado {type(content).__name__}")
    return content


@overload
def load_config(path: Path, kind: Literal["swm"], **overrides: Any) -> SwmConfig: ...


@overload
def load_config(path: Path, kind: Literal["em"], **overrides: Any) -> EmConfig: ...


def load_config(path: Path, kind: ConfigKind, **overrides: Any) -> Union[SwmConfig, EmConfig]:
    """Valida o arquivo como SwmConfig ou EmConfig.

    Valores em ``overrides`` diferentes de None têm prioridade sobre o arquivo.

    Raises:
        ConfigError: Tipo desconhecido ou arquivo inválido
        pydantic.ValidationError: Chaves desconhecidas ou valores fora da faixa
    """
    if kind not in _CONFIG_TYPES:
        raise ConfigError(f"Tipo de configuração desconhecido: {kind}")
    values = read_config_mapping(path)
    values.update({key: value for key, value in overrides.items() if value is not None})
    return _CONFIG_TYPES[kind].model_validate(values)
