"""
Exceções do sistema

Todas derivam de SpintunError; as que representam entrada inválida
também derivam de ValueError, para que os tratadores genéricos
(CLI e API) continuem funcionando.
"""

from typing import Optional


class SpintunError(Exception):
    """Erro base do pacote"""


class ParametrosInvalidosError(SpintunError, ValueError):
    """Parâmetros físicos ou arquivo de configuração inválidos"""

    def __init__(self, mensagem: str, chave: Optional[str] = None):
        super().__init__(mensagem)
        self.chave = chave


class ConvergenciaError(SpintunError, RuntimeError):
    """O autossolver não convergiu"""

    def __init__(self, dimensao: int, detalhe: str = ""):
        mensagem = f"Autossolver não convergiu para matriz de dimensão {dimensao}"
        if detalhe:
            mensagem += f": {detalhe}"
        super().__init__(mensagem)
        self.dimensao = dimensao


class SemTrocaDeSinalError(SpintunError, ValueError):
    """Intervalo de busca de raiz sem troca de sinal"""


class IntegrandoNegativoError(SpintunError, ValueError):
    """Integrando negativo dentro do intervalo de barreira"""


class TunelamentoBloqueadoError(SpintunError, ValueError):
    """Massa inversa <= 0: o tunelamento está bloqueado (além da saturação)"""


class FaixaSemiclassicaError(SpintunError, ValueError):
    """Energia fora do domínio de validade do método semiclássico"""


class SimetriaQuebradaError(SpintunError, ValueError):
    """Bloqueio por inversão de spin pedido com campo longitudinal não nulo"""
