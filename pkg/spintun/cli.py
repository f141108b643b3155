"""
Linha de comando: spintun <comando> --params ARQUIVO [opções]

Comandos: spectrum, splittings, field-scan, figure-data, check.
A tabela vai para a saída padrão (CSV por padrão) ou para --out; os logs
vão para a saída de erro.

Códigos de saída: 0 sucesso, 1 falha de cálculo ou critério reprovado,
2 parâmetros/configuração inválidos.
"""

import sys
import shlex
import logging
import argparse
from typing import List, Optional

from spintun import __version__
from spintun.config import configurar_logging
from spintun.erros import ParametrosInvalidosError, SpintunError
from spintun.servicos.calculo_servico import (
    CalculoServico,
    RunConfig,
    expandir_energias,
    expandir_grade,
)
from spintun.servicos.exportacao_servico import ExportacaoServico, FORMATOS

logger = logging.getLogger(__name__)

SAIDA_OK = 0
SAIDA_FALHA = 1
SAIDA_CONFIG = 2

COMANDOS = {
    'spectrum': ('cmd_spectrum', 'Espectros de spin e angular lado a lado'),
    'splittings': ('cmd_splittings', 'Desdobramentos: referência, modelo angular e semiclássicos'),
    'field-scan': ('cmd_field_scan', 'Gap em função do campo longitudinal e fórmulas de campo'),
    'figure-data': ('cmd_figure_data', 'V(phi) e M(phi) para figuras'),
    'check': ('cmd_check', 'Critérios de aceitação (passa/falha)'),
}


def _opcoes_comuns() -> argparse.ArgumentParser:
    comum = argparse.ArgumentParser(add_help=False)
    comum.add_argument('--params', required=True, help='Arquivo JSON de parâmetros do cluster')
    comum.add_argument('--n-max', type=int, default=None, help='Corte da base de Fourier (padrão: SPINTUN_N_MAX)')
    comum.add_argument('--fields', default=None, help="Campos em T: 'a:b:passo' ou 'h1,h2,...'")
    comum.add_argument('--energies', default=None, help="Energias com sinal em K: 'e1,e2,...'")
    comum.add_argument('--field', type=float, default=0.0, help='Campo longitudinal único em T (spectrum)')
    comum.add_argument('--points', type=int, default=None, help='Pontos da grade em phi (figure-data)')
    comum.add_argument('--format', choices=FORMATOS, default='csv', help='Formato de saída')
    comum.add_argument('--out', default=None, help='Arquivo de saída (padrão: saída padrão)')
    comum.add_argument('--no-timestamp', action='store_true', help='Omite o horário nos metadados')
    return comum


def criar_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='spintun',
        description='Tunelamento de spin em clusters moleculares (Fe8): espectros, desdobramentos e campos',
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    sub = parser.add_subparsers(dest='comando', required=True)
    comum = _opcoes_comuns()
    for nome, (_, ajuda) in COMANDOS.items():
        sub.add_parser(nome, parents=[comum], help=ajuda, description=ajuda)
    return parser


def _run_config(args: argparse.Namespace, argv: List[str]) -> RunConfig:
    return RunConfig(
        params_path=args.params,
        n_max=args.n_max,
        fields=expandir_grade(args.fields) if args.fields else (),
        energies=expandir_energias(args.energies) if args.energies else (),
        field_value=args.field,
        points=args.points,
        formato=args.format,
        out=args.out,
        timestamp=not args.no_timestamp,
        command_line=' '.join(['spintun', *(shlex.quote(a) for a in argv)]),
    )


def main(argv: Optional[List[str]] = None) -> int:
    """
    Ponto de entrada da linha de comando

    Returns:
        Código de saída
    """
    argv = list(sys.argv[1:] if argv is None else argv)
    args = criar_parser().parse_args(argv)
    configurar_logging(sys.stderr)

    metodo, _ = COMANDOS[args.comando]
    try:
        config = _run_config(args, argv)
        tabela = getattr(CalculoServico(), metodo)(config)
    except ParametrosInvalidosError as e:
        chave = f" [{e.chave}]" if e.chave else ''
        logger.error(f"❌ Parâmetro inválido{chave}: {e}")
        print(f"Erro{chave}: {e}", file=sys.stderr)
        return SAIDA_CONFIG
    except SpintunError as e:
        logger.error(f"❌ Falha no cálculo: {e}")
        print(f"Erro: {e}", file=sys.stderr)
        return SAIDA_FALHA
    except ValueError as e:
        # configuração (.env / variáveis de ambiente) inválida
        logger.error(f"❌ Configuração inválida: {e}")
        print(f"Erro: {e}", file=sys.stderr)
        return SAIDA_CONFIG

    exportacao = ExportacaoServico()
    if config.out:
        exportacao.gravar(tabela, config.out)
    else:
        sys.stdout.write(exportacao.serializar(tabela))

    if args.comando == 'check' and not tabela.metadata.get('all_passed', False):
        return SAIDA_FALHA
    return SAIDA_OK
