"""
Módulo de configuração do cálculo
Lê as variáveis de ambiente (opcionalmente de um .env) e valida os valores
"""

import os
import logging
from typing import Optional, Dict, Any
from pathlib import Path
from dotenv import load_dotenv

logger = logging.getLogger(__name__)

ROOT_DIR = Path(__file__).parent.parent

NIVEIS_LOG = ('DEBUG', 'INFO', 'WARNING', 'ERROR')


class Configuracao:
    """Classe para gerenciar as configurações numéricas e de execução"""

    def __init__(self, env_path: Optional[Path] = None):
        """
        Inicializa as configurações

        Args:
            env_path: Caminho para o arquivo .env (opcional)
        """
        if env_path:
            load_dotenv(env_path)
        else:
            env_file = ROOT_DIR / '.env'
            if env_file.exists():
                load_dotenv(env_file)
            else:
                logger.warning("Arquivo .env não encontrado. Usando variáveis de ambiente do sistema.")

        self.mu_b_over_kb = self._ler_float('SPINTUN_MU_B_OVER_KB', '0.6717')
        self.n_max = self._ler_int('SPINTUN_N_MAX', '60')
        self.quad_tol = self._ler_float('SPINTUN_QUAD_TOL', '1e-10')
        self.figure_points = self._ler_int('SPINTUN_FIGURE_POINTS', '360')
        self.log_level = os.getenv('SPINTUN_LOG_LEVEL', 'INFO').upper()
        self.environment = os.getenv('ENVIRONMENT', 'development')

        self._validate_config()

    @staticmethod
    def _ler_float(nome: str, padrao: str) -> float:
        valor = os.getenv(nome, padrao)
        try:
            return float(valor)
        except ValueError:
            raise ValueError(f"Variável {nome} deve ser numérica (recebido: {valor!r})")

    @staticmethod
    def _ler_int(nome: str, padrao: str) -> int:
        valor = os.getenv(nome, padrao)
        try:
            return int(valor)
        except ValueError:
            raise ValueError(f"Variável {nome} deve ser inteira (recebido: {valor!r})")

    def _validate_config(self):
        """Valida os valores lidos"""
        erros = []

        if self.mu_b_over_kb <= 0:
            erros.append('SPINTUN_MU_B_OVER_KB deve ser > 0')
        if not 4 <= self.n_max <= 512:
            erros.append('SPINTUN_N_MAX deve estar em [4, 512]')
        if not 0 < self.quad_tol < 1:
            erros.append('SPINTUN_QUAD_TOL deve estar em (0, 1)')
        if self.figure_points < 2:
            erros.append('SPINTUN_FIGURE_POINTS deve ser >= 2')
        if self.log_level not in NIVEIS_LOG:
            erros.append(f"SPINTUN_LOG_LEVEL deve ser um de: {', '.join(NIVEIS_LOG)}")

        if erros:
            raise ValueError(
                f"Configurações inválidas: {'; '.join(erros)}. "
                f"Verifique o arquivo .env ou as variáveis de ambiente."
            )

    def como_dict(self) -> Dict[str, Any]:
        """Retorna as configurações (entram no cabeçalho das tabelas)"""
        return {
            'mu_B_over_kB_default': self.mu_b_over_kb,
            'n_max_default': self.n_max,
            'quad_tol': self.quad_tol,
        }


# Instância global (singleton)
_configuracao: Optional[Configuracao] = None


def get_configuracao() -> Configuracao:
    """
    Obtém a instância global de configuração

    Returns:
        Instância de Configuracao
    """
    global _configuracao
    if _configuracao is None:
        _configuracao = Configuracao()
    return _configuracao


def reset_configuracao():
    """Descarta a instância global (usado pelos testes)"""
    global _configuracao
    _configuracao = None


def configurar_logging(stream=None) -> str:
    """
    Formato comum dos logs da linha de comando e da API

    O nível vem de SPINTUN_LOG_LEVEL; com configuração inválida fica em
    INFO e o erro aparece depois, no uso da configuração.

    Returns:
        Nome do nível aplicado
    """
    try:
        nivel = get_configuracao().log_level
    except ValueError:
        nivel = 'INFO'
    logging.basicConfig(
        level=getattr(logging, nivel),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=stream,
    )
    logging.getLogger('spintun').setLevel(nivel)
    return nivel
