"""Fixtures compartilhadas: parâmetros do Fe8 e ambiente de configuração limpo"""

import json

import pytest

from spintun.config import reset_configuracao
from spintun.fisica.modelo import ClusterParams, derive_coefficients

FE8 = {
    'D_K': 0.275,
    'E_K': 0.046,
    'two_S': 20,
    'g': 2.0,
    'mu_B_over_kB_K_per_T': 0.6717,
}


@pytest.fixture(autouse=True)
def ambiente_limpo(monkeypatch):
    for nome in (
        'SPINTUN_MU_B_OVER_KB',
        'SPINTUN_N_MAX',
        'SPINTUN_QUAD_TOL',
        'SPINTUN_FIGURE_POINTS',
        'SPINTUN_LOG_LEVEL',
        'ENVIRONMENT',
    ):
        monkeypatch.delenv(nome, raising=False)
    reset_configuracao()
    yield
    reset_configuracao()


@pytest.fixture
def fe8():
    return ClusterParams(D=0.275, E=0.046, two_S=20, g=2.0, mu_B_over_kB=0.6717)


@pytest.fixture
def coef(fe8):
    return derive_coefficients(fe8)


@pytest.fixture
def arquivo_fe8(tmp_path):
    caminho = tmp_path / 'fe8.json'
    caminho.write_text(json.dumps(FE8), encoding='utf-8')
    return caminho


@pytest.fixture
def escrever_parametros(tmp_path):
    """Grava um arquivo de parâmetros arbitrário (texto ou dicionário)"""
    def _escrever(conteudo, nome='params.json'):
        caminho = tmp_path / nome
        texto = conteudo if isinstance(conteudo, str) else json.dumps(conteudo)
        caminho.write_text(texto, encoding='utf-8')
        return caminho
    return _escrever
