"""
API de Cálculos v1
Cada endpoint executa um cálculo em lote e devolve a tabela correspondente
"""

import logging

from flask import Blueprint

from spintun import __version__
from spintun.api.base import ApiResponse, log_requisicao, tratar_erros, validar_parametros
from spintun.fisica.modelo import MU_B_OVER_KB_PADRAO, ClusterParams
from spintun.fisica.numerica import SymmetricMatrix, eig_symmetric
from spintun.fisica.semiclassica import field_formulas
from spintun.servicos.calculo_servico import RunConfig, get_calculo_servico

logger = logging.getLogger(__name__)

api_v1 = Blueprint('api_v1', __name__, url_prefix='/api/v1')

# Parâmetros do cluster (padrão: Fe8)
PARAMETROS_CLUSTER = {
    'D': {'tipo': float, 'padrao': 0.275},
    'E': {'tipo': float, 'padrao': 0.046},
    'two_S': {'tipo': int, 'padrao': 20, 'min': 1, 'max': 200},
    'g': {'tipo': float, 'padrao': 2.0},
}


def _cluster(kwargs) -> ClusterParams:
    return ClusterParams(
        D=kwargs['D'],
        E=kwargs['E'],
        two_S=kwargs['two_S'],
        g=kwargs['g'],
        mu_B_over_kB=MU_B_OVER_KB_PADRAO,
    )


# ============================================
# ENDPOINTS DE CÁLCULO
# ============================================

@api_v1.route('/espectro', methods=['GET'])
@log_requisicao
@tratar_erros
@validar_parametros(
    campo={'tipo': float, 'padrao': 0.0},
    n_max={'tipo': int, 'padrao': None, 'min': 4, 'max': 512},
    **PARAMETROS_CLUSTER,
)
def espectro(**kwargs):
    """
    Espectros de spin e angular lado a lado

    Query Parameters:
        D, E (float): Anisotropias em K (padrão: Fe8)
        two_S (int): Duas vezes o spin (padrão: 20)
        g (float): Fator g (padrão: 2)
        campo (float): Campo longitudinal em T (padrão: 0)
        n_max (int): Corte da base de Fourier [4-512]

    Exemplo:
        GET /api/v1/espectro?campo=0.01
    """
    config = RunConfig(params=_cluster(kwargs), n_max=kwargs['n_max'], field_value=kwargs['campo'])
    tabela = get_calculo_servico().cmd_spectrum(config)
    return ApiResponse.tabela(tabela, mensagem=f"{len(tabela.rows)} níveis")


@api_v1.route('/desdobramentos', methods=['GET'])
@log_requisicao
@tratar_erros
@validar_parametros(
    n_max={'tipo': int, 'padrao': None, 'min': 4, 'max': 512},
    **PARAMETROS_CLUSTER,
)
def desdobramentos(**kwargs):
    """
    Tabela de desdobramentos em campo nulo

    Exemplo:
        GET /api/v1/desdobramentos?n_max=60
    """
    config = RunConfig(params=_cluster(kwargs), n_max=kwargs['n_max'])
    tabela = get_calculo_servico().cmd_splittings(config)
    return ApiResponse.tabela(tabela, mensagem=f"{len(tabela.rows)} dubletos")


@api_v1.route('/campos', methods=['GET'])
@log_requisicao
@tratar_erros
@validar_parametros(**PARAMETROS_CLUSTER)
def campos(**kwargs):
    """
    Fórmulas de campo: coeficiente do gap, campos de casamento e saturação

    Exemplo:
        GET /api/v1/campos
    """
    relatorio = field_formulas(_cluster(kwargs))
    return ApiResponse.sucesso(
        dados={
            'gap_coefficient_K_per_T': relatorio.gap_coefficient,
            'matching_field_harmonic_T': relatorio.matching_field_harmonic,
            'matching_field_mass_T': relatorio.matching_field_mass,
            'saturation_field_T': relatorio.saturation_field,
            'ground_slope_per_well_K_per_T': relatorio.ground_slope_per_well,
        },
        mensagem='Fórmulas de campo',
    )


@api_v1.route('/figura', methods=['GET'])
@log_requisicao
@tratar_erros
@validar_parametros(
    campo={'tipo': float, 'padrao': None},
    pontos={'tipo': int, 'padrao': None, 'min': 2, 'max': 100000},
    **PARAMETROS_CLUSTER,
)
def figura(**kwargs):
    """
    V(phi) e M(phi) numa grade uniforme de [0, 2 pi)

    Sem 'campo', usa os campos padrão (0, casamento e 0.95 da saturação).

    Exemplo:
        GET /api/v1/figura?campo=0&pontos=8
    """
    campos_pedidos = () if kwargs['campo'] is None else (kwargs['campo'],)
    config = RunConfig(params=_cluster(kwargs), fields=campos_pedidos, points=kwargs['pontos'])
    tabela = get_calculo_servico().cmd_figure_data(config)
    return ApiResponse.tabela(tabela, mensagem=f"{len(tabela.rows)} pontos")


# ============================================
# ENDPOINTS DE SAÚDE E INFORMAÇÕES
# ============================================

@api_v1.route('/health', methods=['GET'])
def health_check():
    """
    Verifica saúde da API (diagonaliza uma matriz 2x2 de teste)
    """
    valores = eig_symmetric(SymmetricMatrix([[1.0, 0.0], [0.0, -1.0]])).eigenvalues
    status = {
        'api': 'ok',
        'autossolver': 'ok' if list(valores) == [-1.0, 1.0] else 'erro',
        'versao': __version__,
    }
    if status['autossolver'] == 'erro':
        return ApiResponse.erro(mensagem='Sistema com problemas', codigo=503, detalhes=status)
    return ApiResponse.sucesso(dados=status, mensagem='Sistema operacional')


@api_v1.route('/info', methods=['GET'])
def api_info():
    """Versão e endpoints disponíveis"""
    info = {
        'versao': __version__,
        'titulo': 'API de Tunelamento de Spin',
        'descricao': 'Espectros, desdobramentos e fórmulas de campo para clusters moleculares (Fe8)',
        'endpoints': {
            'calculos': [
                'GET /api/v1/espectro',
                'GET /api/v1/desdobramentos',
                'GET /api/v1/campos',
                'GET /api/v1/figura',
            ],
            'sistema': [
                'GET /api/v1/health',
                'GET /api/v1/info',
            ],
        },
    }
    return ApiResponse.sucesso(dados=info, mensagem='Informações da API')
