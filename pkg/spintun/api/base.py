"""
Base da API - envelope de resposta e decorators comuns
"""

import logging
from datetime import datetime
from functools import wraps

from flask import jsonify, request

from spintun import __version__
from spintun.erros import ConvergenciaError, SpintunError
from spintun.servicos.exportacao_servico import OutputTable

logger = logging.getLogger(__name__)

CONVERSORES = {
    int: int,
    float: float,
    str: str,
}


def _meta():
    return {
        'timestamp': datetime.now().isoformat(),
        'version': __version__,
    }


class ApiResponse:
    """Padroniza todas as respostas da API"""

    @staticmethod
    def sucesso(dados=None, mensagem=None, meta=None):
        """
        Resposta de sucesso padronizada

        Retorna:
        {
            "success": true,
            "data": {...},
            "message": "...",
            "meta": {"timestamp": "...", "version": "..."}
        }
        """
        response = {
            'success': True,
            'data': dados,
            'message': mensagem,
            'meta': _meta(),
        }
        if meta:
            response['meta'].update(meta)
        return jsonify(response), 200

    @staticmethod
    def erro(mensagem, codigo=400, detalhes=None):
        """
        Resposta de erro padronizada

        Retorna:
        {
            "success": false,
            "error": {"message": "...", "code": 400, "details": {...}},
            "meta": {...}
        }
        """
        response = {
            'success': False,
            'error': {
                'message': mensagem,
                'code': codigo,
                'details': detalhes,
            },
            'meta': _meta(),
        }
        return jsonify(response), codigo

    @staticmethod
    def tabela(tabela: OutputTable, mensagem=None):
        """Resposta com uma tabela de saída (colunas, linhas e metadados do cálculo)"""
        dados = {
            'columns': tabela.columns,
            'rows': tabela.rows,
            'metadata': tabela.metadata,
        }
        return ApiResponse.sucesso(dados, mensagem, meta={'rows': len(tabela.rows)})


def validar_parametros(**parametros_esperados):
    """
    Decorator para validar parâmetros da query string

    Uso:
    @validar_parametros(
        D={'tipo': float, 'padrao': 0.275, 'min': 0},
        two_S={'tipo': int, 'padrao': 20, 'min': 1, 'max': 200}
    )
    def minha_rota(D, two_S):
        ...
    """
    def decorator(f):
        @wraps(f)
        def decorated_function(*args, **kwargs):
            erros = []

            for nome, regras in parametros_esperados.items():
                valor = request.args.get(nome)

                if valor is None:
                    if regras.get('obrigatorio'):
                        erros.append(f"Parâmetro '{nome}' é obrigatório")
                    else:
                        kwargs[nome] = regras.get('padrao')
                    continue

                tipo = regras.get('tipo', str)
                try:
                    valor = CONVERSORES[tipo](valor)
                except (ValueError, TypeError):
                    erros.append(f"Parâmetro '{nome}' deve ser do tipo {tipo.__name__}")
                    continue

                if 'min' in regras and valor < regras['min']:
                    erros.append(f"Parâmetro '{nome}' deve ser >= {regras['min']}")
                if 'max' in regras and valor > regras['max']:
                    erros.append(f"Parâmetro '{nome}' deve ser <= {regras['max']}")
                if 'opcoes' in regras and valor not in regras['opcoes']:
                    erros.append(f"Parâmetro '{nome}' deve ser um de: {regras['opcoes']}")

                kwargs[nome] = valor

            if erros:
                return ApiResponse.erro(
                    mensagem='Parâmetros inválidos',
                    codigo=400,
                    detalhes={'erros': erros},
                )
            return f(*args, **kwargs)

        return decorated_function
    return decorator


def log_requisicao(f):
    """Decorator para logar requisições"""
    @wraps(f)
    def decorated_function(*args, **kwargs):
        logger.info(f"📥 {request.method} {request.path}")
        if request.args:
            logger.debug(f"Query params: {dict(request.args)}")

        resultado = f(*args, **kwargs)

        if isinstance(resultado, tuple):
            logger.info(f"📤 Resposta: {resultado[1]}")
        return resultado

    return decorated_function


def tratar_erros(f):
    """
    Decorator para tratamento global de erros

    Entrada inválida (família ValueError) -> 400; falha do autossolver e
    demais erros -> 500.
    """
    @wraps(f)
    def decorated_function(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except ConvergenciaError as e:
            logger.error(f"❌ Falha numérica: {e}")
            return ApiResponse.erro(str(e), 500)
        except ValueError as e:
            logger.error(f"Erro de validação: {e}")
            detalhes = {'chave': e.chave} if getattr(e, 'chave', None) else None
            return ApiResponse.erro(str(e), 400, detalhes)
        except SpintunError as e:
            logger.error(f"❌ Erro de cálculo: {e}")
            return ApiResponse.erro(str(e), 500)
        except Exception as e:
            logger.error(f"Erro não tratado: {e}", exc_info=True)
            return ApiResponse.erro(
                mensagem="Erro interno do servidor",
                codigo=500,
                detalhes={'erro': str(e)} if logger.isEnabledFor(logging.DEBUG) else None,
            )

    return decorated_function
