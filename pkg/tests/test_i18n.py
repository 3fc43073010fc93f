"""Testes para o módulo i18n."""

import pytest

from swgmm.i18n import (
    clear_cache,
    get_available_languages,
    get_language,
    load_translations,
    normalize_language,
    reset_language,
    set_language,
    t,
)


@pytest.fixture(autouse=True)
def reset_i18n_state():
    """Reseta o estado do i18n antes e depois de cada teste."""
    reset_language()
    clear_cache()
    yield
    reset_language()
    clear_cache()


def _flatten(tree: dict, prefix: str = "") -> set[str]:
    keys = set()
    for key, value in tree.items():
        path = f"{prefix}{key}"
        if isinstance(value, dict):
            keys |= _flatten(value, f"{path}.")
        else:
            keys.add(path)
    return keys


class TestGetAvailableLanguages:
    """Testes para get_available_languages."""

    def test_contem_pt_br_e_en(self):
        languages = get_available_languages()

        assert "pt-br" in languages
        assert "en" in languages

    def test_lista_ordenada(self):
        languages = get_available_languages()

        assert languages == sorted(languages)


class TestLoadTranslations:
    """Testes para load_translations."""

    def test_carrega_secoes(self):
        translations = load_translations("en")

        assert "cli" in translations
        assert "terminal" in translations

    def test_idioma_inexistente_faz_fallback(self):
        with pytest.warns(UserWarning, match="ausente"):
            translations = load_translations("fr")

        assert translations is load_translations("pt-br")

    def test_cache(self):
        assert load_translations("pt-br") is load_translations("pt-br")

    def test_clear_cache(self):
        first = load_translations("pt-br")

        clear_cache()

        assert load_translations("pt-br") is not first


class TestLanguage:
    """Testes para set_language e get_language."""

    def test_padrao_pt_br(self):
        assert get_language() == "pt-br"

    def test_define_en(self):
        set_language("en")

        assert get_language() == "en"

    def test_normaliza_codigo(self):
        set_language("PT_BR")

        assert get_language() == "pt-br"
        assert normalize_language(" En ") == "en"

    def test_idioma_invalido_faz_fallback(self):
        set_language("en")

        with pytest.warns(UserWarning, match="indisponível"):
            set_language("klingon")

        assert get_language() == "pt-br"


class TestTranslate:
    """Testes para t()."""

    def test_traducao_pt_br(self):
        assert t("terminal.compare_header") == "ROBUSTEZ À INICIALIZAÇÃO"

    def test_traducao_en(self):
        set_language("en")

        assert t("terminal.compare_header") == "INITIALIZATION ROBUSTNESS"

    def test_interpolacao_com_formato(self):
        set_language("en")

        result = t("cli.fit_progress", method="SWM", iteration=10, objective=0.123456789)

        assert result == "SWM iteration 10: objective 0.123457"

    def test_variavel_ausente_mantem_texto(self):
        assert "{path}" in t("cli.written", other=1)

    def test_chave_inexistente_retorna_chave(self):
        assert t("nada.aqui") == "nada.aqui"

    def test_chave_de_secao_retorna_chave(self):
        assert t("cli") == "cli"


class TestCatalogsSync:
    """Os dois catálogos têm as mesmas chaves."""

    def test_mesmas_chaves(self):
        pt_br = _flatten(load_translations("pt-br"))
        en = _flatten(load_translations("en"))

        assert pt_br == en, f"Chaves diferentes: {pt_br ^ en}"
