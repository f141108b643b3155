"""
Aplicação Flask - configuração principal da API HTTP
"""

from flask import Flask
from flask_cors import CORS

from spintun import __version__
from spintun.api.calculos import api_v1
from spintun.config import configurar_logging, get_configuracao


def criar_app(config=None):
    """
    Factory para criar a aplicação Flask

    Args:
        config: 'production', 'development' ou 'testing'
            (padrão: variável ENVIRONMENT)
    """
    config = config or get_configuracao().environment

    app = Flask(__name__)
    app.config['JSON_SORT_KEYS'] = False
    app.config['JSON_AS_ASCII'] = False
    app.config['TESTING'] = config == 'testing'
    app.json.sort_keys = False
    app.json.ensure_ascii = False

    configurar_logging()

    CORS(app)
    app.register_blueprint(api_v1)

    @app.route('/api')
    def api_root():
        return {
            'message': 'API de Tunelamento de Spin',
            'version': __version__,
            'endpoints': {
                'v1': '/api/v1',
            },
        }

    return app
