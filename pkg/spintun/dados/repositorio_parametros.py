"""
Repositório de parâmetros - lê os arquivos JSON de cluster
Não faz cálculos, apenas valida e converte para ClusterParams
"""

import logging
from pathlib import Path
from typing import Any, Dict, Optional, Union

import orjson

from spintun.config import get_configuracao
from spintun.erros import ParametrosInvalidosError
from spintun.fisica.modelo import ClusterParams

logger = logging.getLogger(__name__)


class RepositorioParametros:
    """
    Lê arquivos {"D_K", "E_K", "two_S", "g", "mu_B_over_kB_K_per_T"}

    Os nomes das chaves são fixos; mu_B_over_kB_K_per_T é opcional e,
    se ausente, vem da configuração (SPINTUN_MU_B_OVER_KB).
    """

    OBRIGATORIAS = ('D_K', 'E_K', 'two_S', 'g')
    OPCIONAIS = ('mu_B_over_kB_K_per_T',)

    # Campo de ClusterParams -> chave do arquivo
    CHAVES = {
        'D': 'D_K',
        'E': 'E_K',
        'two_S': 'two_S',
        'g': 'g',
        'mu_B_over_kB': 'mu_B_over_kB_K_per_T',
    }

    def __init__(self, mu_padrao: Optional[float] = None):
        self.mu_padrao = mu_padrao

    def carregar(self, caminho: Union[str, Path]) -> ClusterParams:
        """
        Carrega e valida um arquivo de parâmetros

        Args:
            caminho: Caminho do arquivo JSON

        Returns:
            ClusterParams validado

        Raises:
            ParametrosInvalidosError: arquivo ausente, JSON inválido ou
                chave com valor inválido (a chave vai na mensagem)
        """
        caminho = Path(caminho)
        if not caminho.is_file():
            raise ParametrosInvalidosError(
                f"Arquivo de parâmetros não encontrado: {caminho}", chave='params'
            )

        try:
            dados = orjson.loads(caminho.read_bytes())
        except orjson.JSONDecodeError as e:
            raise ParametrosInvalidosError(
                f"JSON inválido em {caminho}: {e}", chave='params'
            ) from e

        params = self.de_dict(dados)
        logger.info(f"✅ Parâmetros carregados de {caminho.name}: D={params.D} K, E={params.E} K, S={params.S}")
        return params

    def de_dict(self, dados: Any) -> ClusterParams:
        """Converte um dicionário no formato do arquivo em ClusterParams"""
        if not isinstance(dados, dict):
            raise ParametrosInvalidosError("O arquivo de parâmetros deve conter um objeto JSON", chave='params')

        for chave in self.OBRIGATORIAS:
            if chave not in dados:
                raise ParametrosInvalidosError(f"Chave obrigatória ausente: '{chave}'", chave=chave)

        desconhecidas = set(dados) - set(self.OBRIGATORIAS) - set(self.OPCIONAIS)
        if desconhecidas:
            logger.warning(f"⚠️ Chaves ignoradas no arquivo de parâmetros: {sorted(desconhecidas)}")

        valores: Dict[str, Any] = {
            'D': self._numero(dados, 'D_K'),
            'E': self._numero(dados, 'E_K'),
            'two_S': self._inteiro(dados, 'two_S'),
            'g': self._numero(dados, 'g'),
        }
        if 'mu_B_over_kB_K_per_T' in dados:
            valores['mu_B_over_kB'] = self._numero(dados, 'mu_B_over_kB_K_per_T')
        else:
            valores['mu_B_over_kB'] = self.mu_padrao or get_configuracao().mu_b_over_kb

        try:
            return ClusterParams(**valores)
        except ParametrosInvalidosError as e:
            chave = self.CHAVES.get(e.chave, e.chave)
            raise ParametrosInvalidosError(f"Valor inválido para '{chave}': {e}", chave=chave) from e

    @staticmethod
    def _numero(dados: Dict[str, Any], chave: str) -> float:
        valor = dados[chave]
        if isinstance(valor, bool) or not isinstance(valor, (int, float)):
            raise ParametrosInvalidosError(
                f"Chave '{chave}' deve ser numérica (recebido: {valor!r})", chave=chave
            )
        return float(valor)

    @staticmethod
    def _inteiro(dados: Dict[str, Any], chave: str) -> int:
        valor = dados[chave]
        if isinstance(valor, bool) or not isinstance(valor, int):
            raise ParametrosInvalidosError(
                f"Chave '{chave}' deve ser inteira (recebido: {valor!r})", chave=chave
            )
        return valor
