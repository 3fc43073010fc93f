"""i18n - Catálogos de mensagens do CLI em YAML."""

import warnings
from pathlib import Path
from typing import Any

import yaml

# Catálogos <idioma>.yaml empacotados com o swgmm
LOCALES_DIR = Path(__file__).parent.parent / "locales"

DEFAULT_LANGUAGE = "pt-br"

_active: str = DEFAULT_LANGUAGE
_catalogs: dict[str, dict[str, Any]] = {}


def normalize_language(lang: str) -> str:
    """Normaliza o código do idioma ("pt_BR" e "PT-BR" viram "pt-br")."""
    return lang.strip().lower().replace("_", "-")


def get_available_languages() -> list[str]:
    """Idiomas com catálogo instalado, sempre incluindo o padrão.

    Returns:
        Códigos ordenados (ex: ["en", "pt-br"])
    """
    found = {path.stem for path in LOCALES_DIR.glob("*.yaml")} if LOCALES_DIR.exists() else set()
    found.add(DEFAULT_LANGUAGE)
    return sorted(found)


def load_translations(lang: str) -> dict[str, Any]:
    """Carrega (com cache) o catálogo de um idioma.

    Idiomas sem catálogo caem no padrão com um UserWarning.

    Args:
        lang: Código do idioma

    Returns:
        Árvore de mensagens do catálogo
    """
    lang = normalize_language(lang)
    if lang in _catalogs:
        return _catalogs[lang]

    path = LOCALES_DIR / f"{lang}.yaml"
    if not path.exists():
        if lang == DEFAULT_LANGUAGE:
            return {}
        warnings.warn(
            f"Catálogo '{lang}' ausente; usando '{DEFAULT_LANGUAGE}'.",
            UserWarning,
            stacklevel=2,
        )
        return load_translations(DEFAULT_LANGUAGE)

    catalog = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
    _catalogs[lang] = catalog
    return catalog


def _lookup(catalog: dict[str, Any], key: str) -> str | None:
    node: Any = catalog
    for part in key.split("."):
        if not isinstance(node, dict) or part not in node:
            return None
        node = node[part]
    if node is None or isinstance(node, dict):
        return None
    return str(node)


def t(key: str, **kwargs: Any) -> str:
    """Mensagem da chave pontuada ``key`` no idioma ativo.

    Procura no idioma ativo, depois no padrão; sem tradução devolve a própria
    chave. Placeholders ausentes em ``kwargs`` deixam o texto sem interpolação.
    """
    message = _lookup(load_translations(_active), key)
    if message is None and _active != DEFAULT_LANGUAGE:
        message = _lookup(load_translations(DEFAULT_LANGUAGE), key)
    if message is None:
        return key
    if not kwargs:
        return message
    try:
        return message.format(**kwargs)
    except (KeyError, IndexError):
        return message


def set_language(lang: str) -> None:
    """Ativa um idioma; idiomas indisponíveis ativam o padrão com aviso."""
    global _active

    lang = normalize_language(lang)
    available = get_available_languages()
    if lang in available:
        _active = lang
        return
    warnings.warn(
        f"Idioma '{lang}' indisponível ({', '.join(available)}); usando '{DEFAULT_LANGUAGE}'.",
        UserWarning,
        stacklevel=2,
    )
    _active = DEFAULT_LANGUAGE


def get_language() -> str:
    """Idioma ativo."""
    return _active


def reset_language() -> None:
    """Volta ao idioma padrão."""
    global _active
    _active = DEFAULT_LANGUAGE


def clear_cache() -> None:
    """Descarta os catálogos carregados."""
    _catalogs.clear()


__all__ = [
    "t",
    "set_language",
    "get_language",
    "get_available_languages",
    "load_translations",
    "normalize_language",
    "reset_language",
    "clear_cache",
    "DEFAULT_LANGUAGE",
]
