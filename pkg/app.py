"""
Servidor HTTP de desenvolvimento da API de tunelamento de spin
"""

import logging

from spintun.api import criar_app
from spintun.config import get_configuracao

logger = logging.getLogger(__name__)

app = criar_app()

if __name__ == '__main__':
    logger.info("✅ API disponível em http://127.0.0.1:5001/api/v1/info")
    app.run(
        host='0.0.0.0',
        port=5001,
        debug=get_configuracao().environment != 'production',
    )
