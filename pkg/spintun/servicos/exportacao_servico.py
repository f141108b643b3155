"""
Serviço de Exportação - serializa as tabelas de saída em CSV ou JSON
"""

import io
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np
import orjson
import pandas as pd

logger = logging.getLogger(__name__)

FORMATOS = ('csv', 'json')


def _valor_nativo(valor: Any) -> Any:
    """Converte escalares numpy e NaN para tipos nativos (NaN vira None)"""
    if isinstance(valor, np.generic):
        valor = valor.item()
    if isinstance(valor, float) and not np.isfinite(valor):
        return None
    return valor


@dataclass
class OutputTable:
    """
    Tabela de saída de um comando

    Cada linha tem exatamente uma entrada por coluna; None representa
    um valor ausente (célula vazia no CSV, null no JSON).
    """

    columns: List[str]
    rows: List[List[Any]] = field(default_factory=list)
    formato: str = 'csv'
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.formato not in FORMATOS:
            raise ValueError(f"Formato deve ser um de: {FORMATOS}")
        for linha in self.rows:
            self._checar_largura(linha)
        self.rows = [[_valor_nativo(v) for v in linha] for linha in self.rows]

    def _checar_largura(self, linha: Sequence[Any]):
        if len(linha) != len(self.columns):
            raise ValueError(
                f"Linha com {len(linha)} valores para {len(self.columns)} colunas"
            )

    def adicionar(self, *valores: Any):
        """Acrescenta uma linha"""
        self._checar_largura(valores)
        self.rows.append([_valor_nativo(v) for v in valores])

    def coluna(self, nome: str) -> List[Any]:
        i = self.columns.index(nome)
        return [linha[i] for linha in self.rows]

    def como_dataframe(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows, columns=self.columns)


class ExportacaoServico:
    """
    Serviço para exportar tabelas em diferentes formatos

    CSV: linhas de comentário '# chave: valor' com os metadados, seguidas
    do cabeçalho e das linhas; floats com 17 algarismos significativos.
    JSON: {"metadata", "columns", "rows"} (orjson, floats em repr mínima
    que reproduz o valor).
    """

    def para_csv(self, tabela: OutputTable) -> str:
        buffer = io.StringIO()
        for chave, valor in tabela.metadata.items():
            buffer.write(f"# {chave}: {'' if valor is None else valor}\n")
        tabela.como_dataframe().to_csv(
            buffer,
            index=False,
            float_format='%.17g',
            na_rep='',
            lineterminator='\n',
        )
        return buffer.getvalue()

    def para_json(self, tabela: OutputTable) -> str:
        documento = {
            'metadata': {k: _valor_nativo(v) for k, v in tabela.metadata.items()},
            'columns': tabela.columns,
            'rows': tabela.rows,
        }
        return orjson.dumps(documento, option=orjson.OPT_INDENT_2).decode('utf-8') + '\n'

    def serializar(self, tabela: OutputTable, formato: Optional[str] = None) -> str:
        """
        Serializa a tabela no formato dela (ou no formato pedido)

        Args:
            tabela: Tabela de saída
            formato: 'csv' ou 'json' (opcional)

        Returns:
            Texto serializado
        """
        formato = formato or tabela.formato
        if formato == 'csv':
            return self.para_csv(tabela)
        if formato == 'json':
            return self.para_json(tabela)
        raise ValueError(f"Formato deve ser um de: {FORMATOS}")

    def gravar(self, tabela: OutputTable, destino: Union[str, Path]) -> Path:
        """Grava a tabela serializada num arquivo"""
        destino = Path(destino)
        destino.parent.mkdir(parents=True, exist_ok=True)
        destino.write_text(self.serializar(tabela), encoding='utf-8')
        logger.info(f"📁 Tabela gravada em {destino} ({len(tabela.rows)} linhas, {tabela.formato})")
        return destino
