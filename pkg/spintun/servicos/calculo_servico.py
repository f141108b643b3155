"""
Serviço de Cálculo - coordena repositório, física e tabelas de saída

Cada comando da linha de comando (e cada endpoint da API) corresponde a
um método cmd_* que recebe um RunConfig e devolve um OutputTable.
"""

import math
import logging
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from spintun import __version__
from spintun.config import get_configuracao
from spintun.dados.repositorio_parametros import RepositorioParametros
from spintun.erros import ParametrosInvalidosError, SpintunError
from spintun.fisica.espectro_angular import (
    FourierBasisSpec,
    angle_spectrum,
    barrier_height,
    lowest_levels,
)
from spintun.fisica.modelo import ClusterParams, derive_coefficients, inverse_mass, potential
from spintun.fisica.semiclassica import (
    METODO_KHW_MG,
    METODO_PARABOLICO,
    METODO_WKB,
    applicable_methods,
    asymmetric_wkb_splitting,
    barrier_action,
    extract_suppression_chi,
    field_formulas,
    harmonic_well,
    khw_mg_splitting,
    parabolic_splitting,
    wkb_splitting,
)
from spintun.fisica.spin_exato import (
    DoubletTable,
    fit_gap_slope,
    gap_vs_field_scan,
    pair_doublets,
    reference_spectrum,
)
from spintun.servicos.exportacao_servico import FORMATOS, OutputTable

logger = logging.getLogger(__name__)

N_MAX_LIMITES = (4, 512)
GRADE_CAMPO_PADRAO = '0:0.05:0.005'


def desvio_percentual(valor: Optional[float], referencia: Optional[float]) -> Optional[float]:
    """|x - ref| / |ref| * 100 (None se algum lado faltar)"""
    if valor is None or referencia is None or referencia == 0:
        return None
    return abs(valor - referencia) / abs(referencia) * 100


def expandir_grade(texto: str) -> Tuple[float, ...]:
    """
    Converte 'a:b:passo' (inclusivo) ou 'h1,h2,...' numa tupla de campos

    Raises:
        ParametrosInvalidosError: formato inválido (chave 'fields')
    """
    texto = texto.strip()
    try:
        if ':' in texto:
            inicio, fim, passo = (float(p) for p in texto.split(':'))
            if passo <= 0 or fim < inicio:
                raise ValueError("passo deve ser > 0 e fim >= início")
            # folga para o arredondamento de (fim - inicio) / passo
            n = math.floor((fim - inicio) / passo + 1e-9)
            return tuple(inicio + k * passo for k in range(n + 1))
        return tuple(float(p) for p in texto.split(',') if p.strip())
    except ValueError as e:
        raise ParametrosInvalidosError(f"Grade de campos inválida '{texto}': {e}", chave='fields') from e


def expandir_energias(texto: str) -> Tuple[float, ...]:
    """Lista 'e1,e2,...' de energias com sinal (K)"""
    try:
        return tuple(float(p) for p in texto.split(',') if p.strip())
    except ValueError as e:
        raise ParametrosInvalidosError(f"Lista de energias inválida '{texto}': {e}", chave='energies') from e


@dataclass
class RunConfig:
    """Opções de uma execução (comuns a todos os comandos)"""

    params_path: Optional[Path] = None
    n_max: Optional[int] = None
    fields: Tuple[float, ...] = ()
    energies: Tuple[float, ...] = ()
    field_value: float = 0.0
    points: Optional[int] = None
    formato: str = 'csv'
    out: Optional[Path] = None
    timestamp: bool = True
    command_line: str = ''
    params: Optional[ClusterParams] = None

    def __post_init__(self):
        if self.params_path is not None:
            self.params_path = Path(self.params_path)
        if self.n_max is None:
            self.n_max = get_configuracao().n_max
        if self.points is None:
            self.points = get_configuracao().figure_points
        self.fields = tuple(float(H) for H in self.fields)
        self.energies = tuple(float(e) for e in self.energies)

    def validar(self):
        """
        Raises:
            ParametrosInvalidosError: com a chave da opção inválida
        """
        if self.params is None and (self.params_path is None or not self.params_path.is_file()):
            raise ParametrosInvalidosError(
                f"Arquivo de parâmetros não encontrado: {self.params_path}", chave='params'
            )
        lo, hi = N_MAX_LIMITES
        if not lo <= self.n_max <= hi:
            raise ParametrosInvalidosError(f"n_max deve estar em [{lo}, {hi}] (recebido {self.n_max})", chave='n_max')
        if any(b <= a for a, b in zip(self.fields, self.fields[1:])):
            raise ParametrosInvalidosError("A grade de campos deve ser estritamente crescente", chave='fields')
        if self.formato not in FORMATOS:
            raise ParametrosInvalidosError(f"Formato deve ser um de: {FORMATOS}", chave='format')
        if self.points < 2:
            raise ParametrosInvalidosError("points deve ser >= 2", chave='points')
        if not all(math.isfinite(v) for v in (*self.fields, *self.energies, self.field_value)):
            raise ParametrosInvalidosError("Campos e energias devem ser finitos", chave='fields')


class CalculoServico:
    """
    Serviço de cálculo - monta as tabelas dos comandos
    A física fica em spintun.fisica; aqui só se coordena e formata
    """

    def __init__(self, repositorio: Optional[RepositorioParametros] = None):
        self.repositorio = repositorio or RepositorioParametros()

    @property
    def quad_tol(self) -> float:
        return get_configuracao().quad_tol

    # ========================================
    # APOIO
    # ========================================

    def _preparar(self, config: RunConfig) -> ClusterParams:
        config.validar()
        if config.params is not None:
            return config.params
        return self.repositorio.carregar(config.params_path)

    def _metadados(self, comando: str, params: ClusterParams, config: RunConfig) -> Dict[str, Any]:
        meta: Dict[str, Any] = {
            'command': comando,
            'version': __version__,
        }
        meta.update(params.como_dict())
        meta.update(get_configuracao().como_dict())
        meta['n_max'] = config.n_max
        if config.command_line:
            meta['command_line'] = config.command_line
        if config.timestamp:
            meta['timestamp'] = datetime.now().isoformat()
        return meta

    def _tabela(self, comando: str, colunas: List[str], params: ClusterParams, config: RunConfig) -> OutputTable:
        return OutputTable(
            columns=colunas,
            formato=config.formato,
            metadata=self._metadados(comando, params, config),
        )

    @staticmethod
    def _estimar(funcao, *args) -> Optional[float]:
        try:
            return funcao(*args).splitting
        except SpintunError as e:
            logger.warning(f"⚠️ Estimativa ignorada ({funcao.__name__}): {e}")
            return None

    def _estimativas(self, energia: float, params: ClusterParams) -> Dict[str, Optional[float]]:
        metodos = applicable_methods(energia, params)
        return {
            METODO_WKB: self._estimar(wkb_splitting, energia, params, 0, self.quad_tol) if METODO_WKB in metodos else None,
            METODO_KHW_MG: self._estimar(khw_mg_splitting, energia, params) if METODO_KHW_MG in metodos else None,
            METODO_PARABOLICO: self._estimar(parabolic_splitting, energia, params) if METODO_PARABOLICO in metodos else None,
        }

    @staticmethod
    def _dubletos_angulares(params: ClusterParams, n_max: int) -> DoubletTable:
        espectro = angle_spectrum(params, 0.0, FourierBasisSpec(n_max))
        return pair_doublets(lowest_levels(espectro, params))

    # ========================================
    # COMANDOS
    # ========================================

    def cmd_spectrum(self, config: RunConfig) -> OutputTable:
        """
        Espectros de spin (referência) e angular lado a lado

        Colunas: level, E_spin_K, block_spin, E_angle_K, block_angle, deviation_pct
        """
        params = self._preparar(config)
        H = config.field_value
        logger.info(f"🔄 Espectro: H = {H} T, n_max = {config.n_max}")

        spin = reference_spectrum(params, H)
        angular = lowest_levels(angle_spectrum(params, H, FourierBasisSpec(config.n_max)), params)

        tabela = self._tabela(
            'spectrum',
            ['level', 'E_spin_K', 'block_spin', 'E_angle_K', 'block_angle', 'deviation_pct'],
            params,
            config,
        )
        tabela.metadata['field_T'] = H
        for k, (ref, ang) in enumerate(zip(spin.levels, angular.levels)):
            tabela.adicionar(k, ref.energy, ref.block_tag, ang.energy, ang.block_tag,
                             desvio_percentual(ang.energy, ref.energy))

        if H == 0:
            c = derive_coefficients(params)
            poco = harmonic_well(params)
            tabela.metadata.update({
                'E_gs_angle_K': angular.ground_energy,
                'h_b_numeric_K': barrier_height(angular, c),
                'E_min_harmonic_K': poco.E_min,
                'E_gs_harmonic_K': poco.E_gs,
                'h_b_harmonic_K': poco.h_b,
            })
        logger.info(f"✅ Espectro: {len(tabela.rows)} níveis")
        return tabela

    def cmd_splittings(self, config: RunConfig) -> OutputTable:
        """
        Tabela de desdobramentos: referência, modelo angular e estimativas
        semiclássicas aplicáveis, com desvios percentuais

        Uma linha por dubleto de referência e uma por energia pedida em
        config.energies (comparada ao dubleto de referência mais próximo).
        """
        params = self._preparar(config)
        if config.field_value != 0:
            raise ParametrosInvalidosError("splittings exige campo nulo", chave='field')
        logger.info(f"🔄 Desdobramentos: n_max = {config.n_max}")

        referencia = pair_doublets(reference_spectrum(params, 0.0))
        angular = self._dubletos_angulares(params, config.n_max)

        tabela = self._tabela(
            'splittings',
            [
                'source', 'doublet', 'energy_K', 'mean_ref_K', 'dE_ref_K',
                'dE_angle_K', 'dev_angle_pct',
                'dE_wkb_K', 'dev_wkb_pct',
                'dE_khw_mg_K', 'dev_khw_mg_pct',
                'dE_parabolic_K', 'dev_parabolic_pct',
            ],
            params,
            config,
        )

        def linha(origem: str, energia: float, ref):
            dE_ang = angular.rows[ref.index].splitting if ref.index < len(angular.rows) else None
            est = self._estimativas(energia, params)
            tabela.adicionar(
                origem, ref.index, energia, ref.mean, ref.splitting,
                dE_ang, desvio_percentual(dE_ang, ref.splitting),
                est[METODO_WKB], desvio_percentual(est[METODO_WKB], ref.splitting),
                est[METODO_KHW_MG], desvio_percentual(est[METODO_KHW_MG], ref.splitting),
                est[METODO_PARABOLICO], desvio_percentual(est[METODO_PARABOLICO], ref.splitting),
            )

        for ref in referencia.rows:
            linha('doublet', ref.mean, ref)
        for energia in config.energies:
            linha('energy', energia, referencia.nearest(energia))

        logger.info(f"✅ Desdobramentos: {len(tabela.rows)} linhas")
        return tabela

    def cmd_field_scan(self, config: RunConfig) -> OutputTable:
        """
        Gap do dubleto fundamental em função do campo, WKB assimétrico,
        reta ajustada, chi e resumo das fórmulas de campo nos metadados

        Raises:
            ParametrosInvalidosError: campo acima da saturação
        """
        params = self._preparar(config)
        campos = config.fields or expandir_grade(GRADE_CAMPO_PADRAO)
        formulas = field_formulas(params)
        saturacao = formulas.saturation_field
        if max(abs(H) for H in campos) >= saturacao:
            raise ParametrosInvalidosError(
                f"Campos devem ficar abaixo da saturação H_lim = {saturacao:.4f} T", chave='fields'
            )
        logger.info(f"🔄 Varredura de campo: {len(campos)} pontos")

        energia = config.energies[0] if config.energies else pair_doublets(reference_spectrum(params, 0.0)).rows[0].mean
        varredura = gap_vs_field_scan(params, campos)
        try:
            acao_zero = barrier_action(energia, 0.0, params, self.quad_tol).action
        except SpintunError as e:
            logger.warning(f"⚠️ Ação em campo nulo indisponível: {e}")
            acao_zero = None

        tabela = self._tabela(
            'field-scan',
            ['field_T', 'gap_ref_K', 'dE_asym_wkb_K', 'action', 'action_ratio'],
            params,
            config,
        )
        for H, gap in varredura:
            try:
                estimativa = asymmetric_wkb_splitting(energia, H, params, self.quad_tol)
                dE, acao = estimativa.splitting, estimativa.action
            except SpintunError as e:
                logger.warning(f"⚠️ WKB assimétrico ignorado em H = {H} T: {e}")
                dE, acao = None, None
            razao = acao / acao_zero if acao is not None and acao_zero else None
            tabela.adicionar(H, gap, dE, acao, razao)

        inclinacao = intercepto = None
        if len(set(campos)) >= 2:
            inclinacao, intercepto = fit_gap_slope(varredura)

        chi = residuo = None
        if len(campos) >= 3 and any(H != 0 for H in campos):
            try:
                ajuste = extract_suppression_chi(params, energia, campos, self.quad_tol)
                chi, residuo = ajuste.chi, ajuste.residual_rms
            except SpintunError as e:
                logger.warning(f"⚠️ Ajuste de chi ignorado: {e}")

        tabela.metadata.update({
            'energy_K': energia,
            'slope_ref_K_per_T': inclinacao,
            'intercept_ref_K': intercepto,
            'gap_coefficient_K_per_T': formulas.gap_coefficient,
            'ground_slope_per_well_K_per_T': formulas.ground_slope_per_well,
            'matching_field_harmonic_T': formulas.matching_field_harmonic,
            'matching_field_mass_T': formulas.matching_field_mass,
            'saturation_field_T': saturacao,
            'chi_per_T2': chi,
            'chi_residual_rms': residuo,
        })
        logger.info(f"✅ Varredura concluída: inclinação {inclinacao} K/T")
        return tabela

    def cmd_figure_data(self, config: RunConfig) -> OutputTable:
        """
        V(phi) e M(phi) numa grade uniforme de [0, 2 pi) para cada campo

        Campos padrão: 0, campo de casamento (rota da massa) e 0.95 da
        saturação. A massa fica vazia onde 1/M <= 0.
        """
        params = self._preparar(config)
        c = derive_coefficients(params)
        formulas = field_formulas(params)
        campos = config.fields or (0.0, formulas.matching_field_mass, 0.95 * formulas.saturation_field)
        n = config.points
        phi = 2 * np.pi * np.arange(n) / n
        logger.info(f"🔄 Dados de figura: {len(campos)} campos x {n} pontos")

        tabela = self._tabela('figure-data', ['field_T', 'phi', 'V_K', 'M_per_K'], params, config)
        for H in campos:
            V = potential(phi, H, c)
            inversa = inverse_mass(phi, H, c)
            for k in range(n):
                M = 1.0 / inversa[k] if inversa[k] > 0 else None
                tabela.adicionar(H, phi[k], V[k], M)
        tabela.metadata['points'] = n
        return tabela

    def cmd_check(self, config: RunConfig) -> OutputTable:
        """
        Tabela de aceitação: valor esperado, calculado, tolerância e
        resultado por critério

        O metadado all_passed indica se todos os critérios não
        informativos passaram.
        """
        params = self._preparar(config)
        logger.info("🔄 Verificação dos critérios de aceitação")
        tabela = self._tabela(
            'check',
            ['criterion', 'expected', 'computed', 'tolerance', 'passed', 'informational'],
            params,
            config,
        )
        criterios = self._criterios(params, config.n_max)
        for nome, esperado, calculado, tolerancia, informativo in criterios:
            passou = calculado is not None and abs(calculado - esperado) <= tolerancia
            tabela.adicionar(nome, esperado, calculado, tolerancia, passou, informativo)

        aprovado = all(
            linha[4] for linha in tabela.rows if not linha[5]
        )
        tabela.metadata['all_passed'] = aprovado
        if aprovado:
            logger.info("✅ Todos os critérios passaram")
        else:
            logger.error("❌ Há critérios reprovados")
        return tabela

    def _criterios(self, params: ClusterParams, n_max: int) -> List[Tuple[str, float, Optional[float], float, bool]]:
        tol = self.quad_tol
        c = derive_coefficients(params)
        poco = harmonic_well(params)
        angular_espectro = angle_spectrum(params, 0.0, FourierBasisSpec(n_max))
        referencia = pair_doublets(reference_spectrum(params, 0.0))
        angular = pair_doublets(lowest_levels(angular_espectro, params))
        formulas = field_formulas(params)
        h_b = barrier_height(angular_espectro, c)

        def seguro(funcao, *args):
            try:
                return funcao(*args)
            except SpintunError as e:
                logger.warning(f"⚠️ Critério sem valor ({funcao.__name__}): {e}")
                return None

        wkb = [seguro(wkb_splitting, None, params, k, tol) for k in range(3)]
        khw = seguro(khw_mg_splitting, -5.34, params)
        parabolica = seguro(parabolic_splitting, -7.5, params)
        no_topo = seguro(khw_mg_splitting, c.V3, params)
        simetrica = wkb[0]
        assimetrica = seguro(asymmetric_wkb_splitting, referencia.rows[0].mean, 0.0, params, tol)
        inclinacao, _ = fit_gap_slope(gap_vs_field_scan(params, expandir_grade(GRADE_CAMPO_PADRAO)))

        def ds(estimativa):
            return estimativa.splitting if estimativa is not None else None

        def desvio_wkb(k):
            return desvio_percentual(ds(wkb[k]), referencia.rows[k].splitting)

        def desvio_angular(k):
            return desvio_percentual(angular.rows[k].splitting, referencia.rows[k].splitting)

        identidade_asym = None
        if simetrica is not None and assimetrica is not None:
            identidade_asym = abs(assimetrica.splitting - simetrica.splitting) / simetrica.splitting

        dE_ref = referencia.rows[0].splitting
        return [
            ('angle_ground_energy_K', -27.6447, angular_espectro.ground_energy, 0.002, False),
            ('numeric_barrier_height_K', 22.58, h_b, 0.005, False),
            ('harmonic_E_min_K', -30.25, poco.E_min, 1e-9, False),
            ('harmonic_E_gs_K', -27.41, poco.E_gs, 0.01, False),
            ('harmonic_barrier_height_K', 22.35, poco.h_b, 0.01, False),
            ('reference_dE0_K', 6.8e-10, dE_ref, 0.15 * 6.8e-10, False),
            ('wkb_dE0_K', 8.9e-10, ds(wkb[0]), 0.20 * 8.9e-10, False),
            ('khw_mg_dE_at_5.34_K', 0.65, ds(khw), 0.02, False),
            ('reference_dE_near_5.34_K', 0.72, referencia.nearest(-5.34).splitting, 0.02, False),
            ('khw_mg_penetrability_at_top', 0.5, no_topo.penetrability if no_topo else None, 0.0, False),
            ('parabolic_dE_at_7.5_K', 0.14, ds(parabolica), 0.01, False),
            ('reference_dE_near_7.5_K', 0.13, referencia.nearest(-7.5).splitting, 0.01, False),
            ('gap_coefficient_K_per_T', 26.79, formulas.gap_coefficient, 0.01, False),
            ('matching_field_harmonic_T', 0.2239, formulas.matching_field_harmonic, 0.0005, False),
            ('matching_field_mass_T', 0.216, formulas.matching_field_mass, 0.001, False),
            ('saturation_field_T', 4.32, formulas.saturation_field, 0.005, False),
            ('reference_gap_slope_K_per_T', 26.85, inclinacao, 0.1, False),
            ('saturation_over_2S_minus_matching_T', 0.0,
             formulas.saturation_field / params.two_S - formulas.matching_field_mass, 1e-12, False),
            ('asymmetric_vs_symmetric_wkb_rel', 0.0, identidade_asym, 1e-14, False),
            # desvios por dubleto: informativos, com as duas atribuições
            # do 14.7% e do 31% ao primeiro dubleto
            ('wkb_deviation_doublet0_pct', 14.7, desvio_wkb(0), 3.0, True),
            ('wkb_deviation_doublet1_pct', 9.0, desvio_wkb(1), 3.0, True),
            ('wkb_deviation_doublet2_pct', 8.0, desvio_wkb(2), 3.0, True),
            ('angle_deviation_doublet0_pct', 31.0, desvio_angular(0), 5.0, True),
            ('angle_deviation_doublet1_pct', 8.0, desvio_angular(1), 5.0, True),
            ('angle_deviation_doublet2_pct', 5.0, desvio_angular(2), 5.0, True),
            ('wkb_deviation_doublet0_swapped_pct', 31.0, desvio_wkb(0), 3.0, True),
            ('angle_deviation_doublet0_swapped_pct', 14.7, desvio_angular(0), 5.0, True),
            # alvos experimentais: só informativos
            ('experimental_barrier_height_K', 22.2, h_b, 0.4, True),
            ('experimental_matching_field_T', 0.22, formulas.matching_field_harmonic, 0.01, True),
        ]


# Instância global (singleton)
_servico: Optional[CalculoServico] = None


def get_calculo_servico() -> CalculoServico:
    """Obtém a instância global do serviço de cálculo"""
    global _servico
    if _servico is None:
        _servico = CalculoServico()
    return _servico
