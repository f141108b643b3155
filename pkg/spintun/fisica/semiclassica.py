"""
Aproximações semiclássicas para o desdobramento por tunelamento

- poço harmônico (energia do fundamental e altura da barreira)
- WKB com massa média na região proibida (simétrico e assimétrico)
- fórmula de penetrabilidade no topo da barreira (KHW/MG)
- aproximação parabólica perto do topo
- fórmulas de campo longitudinal: coeficiente linear do gap, campos de
  casamento e campo de saturação da massa
"""

import math
import logging
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence, Set, Tuple

import numpy as np
from scipy.special import expit

from spintun.erros import FaixaSemiclassicaError, TunelamentoBloqueadoError
from spintun.fisica.modelo import (
    ClusterParams,
    EffectiveCoefficients,
    derive_coefficients,
    inverse_mass,
    mass,
    potential,
)
from spintun.fisica.numerica import (
    QUAD_TOL_PADRAO,
    find_root_bracketed,
    integrate_smooth,
    integrate_sqrt_barrier,
)
from spintun.fisica.spin_exato import pair_doublets, reference_spectrum

logger = logging.getLogger(__name__)

METODO_WKB = 'WKB'
METODO_KHW_MG = 'KHW_MG'
METODO_PARABOLICO = 'parabolic'
METODO_WKB_ASSIMETRICO = 'asymmetric_WKB'

# Faixas de validade, em unidades de omega_t abaixo do topo
FAIXA_WKB = 2.0
FAIXA_PARABOLICA = 2.0
FAIXA_KHW = 0.5


@dataclass(frozen=True)
class HarmonicWellReport:
    E_min: float
    omega: float
    E_gs: float
    h_b: float
    well_location: float = 0.0


@dataclass(frozen=True)
class SplittingEstimate:
    """Estimativa de desdobramento com os diagnósticos intermediários"""

    method: str
    energy: float
    splitting: float
    phi_i: Optional[float] = None
    phi_s: Optional[float] = None
    mass_avg: Optional[float] = None
    action: Optional[float] = None
    omega_b: Optional[float] = None
    omega_t: Optional[float] = None
    omega_1: Optional[float] = None
    omega_2: Optional[float] = None
    penetrability: Optional[float] = None
    h_p: Optional[float] = None
    V0: Optional[float] = None


@dataclass(frozen=True)
class FieldFormulaReport:
    gap_coefficient: float
    matching_field_harmonic: float
    matching_field_mass: float
    saturation_field: float
    ground_slope_per_well: float
    chi: Optional[float] = None


class BarrierAction(NamedTuple):
    phi_i: float
    phi_s: float
    mass_avg: float
    action: float


class ChiFit(NamedTuple):
    chi: float
    residual_rms: float
    fields: Tuple[float, ...]
    ratios: Tuple[float, ...]


# ---------------------------------------------------------------------------
# Poço harmônico e frequências
# ---------------------------------------------------------------------------

def _omega_b(params: ClusterParams) -> float:
    return 2 * math.sqrt((params.D ** 2 - params.E ** 2) * params.S_S1)


def harmonic_well(params: ClusterParams) -> HarmonicWellReport:
    """
    Aproximação harmônica no fundo do poço (phi = 0)

    Returns:
        HarmonicWellReport com E_min, omega, E_gs e h_b
    """
    E_min = -params.D * params.S_S1
    omega = _omega_b(params)
    E_gs = E_min + omega / 2
    return HarmonicWellReport(
        E_min=E_min,
        omega=omega,
        E_gs=E_gs,
        h_b=-params.E * params.S_S1 - E_gs,
    )


def top_frequency(params: ClusterParams) -> float:
    """omega_t = sqrt(I(pi/2) |V''(pi/2)|) = 2 sqrt(2E(D-E)S(S+1))"""
    return 2 * math.sqrt(2 * params.E * (params.D - params.E) * params.S_S1)


# ---------------------------------------------------------------------------
# Barreira: pontos de retorno, massa média e ação
# ---------------------------------------------------------------------------

def _topo_barreira(H_par: float, c: EffectiveCoefficients) -> Tuple[float, float]:
    """Posição e altura do máximo de V (quadrática côncava em cos phi)"""
    x_topo = -c.V2 * H_par / (2 * c.V1)
    if abs(x_topo) >= 1:
        raise FaixaSemiclassicaError(
            f"Campo H = {H_par} T elimina a barreira (máximo de V fora de (0, pi))"
        )
    return math.acos(x_topo), float(potential(math.acos(x_topo), H_par, c))


def turning_points(energy: float, H_par: float, c: EffectiveCoefficients) -> Tuple[float, float]:
    """
    Raízes de V(phi) = energy em [0, phi_topo] e [phi_topo, pi]

    Raises:
        FaixaSemiclassicaError: energia acima do topo ou abaixo do fundo
            de um dos poços
    """
    phi_topo, V_topo = _topo_barreira(H_par, c)
    if energy > V_topo:
        raise FaixaSemiclassicaError(
            f"Energia {energy} K acima do topo da barreira ({V_topo:.6f} K): "
            f"use KHW/MG ou a aproximação parabólica"
        )
    if energy == V_topo:
        return phi_topo, phi_topo

    def diferenca(phi):
        return float(potential(phi, H_par, c)) - energy

    fundos = (float(potential(0.0, H_par, c)), float(potential(math.pi, H_par, c)))
    if energy < max(fundos):
        raise FaixaSemiclassicaError(
            f"Energia {energy} K abaixo do fundo do poço mais raso ({max(fundos):.6f} K)"
        )
    return (
        find_root_bracketed(diferenca, 0.0, phi_topo),
        find_root_bracketed(diferenca, phi_topo, math.pi),
    )


def _verificar_massa(phi_i: float, phi_s: float, H_par: float, c: EffectiveCoefficients):
    # 1/M é quadrática em x = cos phi; basta olhar extremos e vértice
    x_lo, x_hi = math.cos(phi_s), math.cos(phi_i)
    candidatos = [x_lo, x_hi]
    if c.M1 > 0:
        x_v = -c.M2 * H_par / (2 * c.M1)
        if x_lo < x_v < x_hi:
            candidatos.append(x_v)
    minimo = min(c.M1 * x * x + c.M2 * H_par * x + c.M3 for x in candidatos)
    if minimo <= 0:
        raise TunelamentoBloqueadoError(
            f"Massa inversa <= 0 na região proibida para H = {H_par} T (além da saturação)"
        )


def averaged_mass(
    energy: float,
    H_par: float,
    c: EffectiveCoefficients,
    tol: float = QUAD_TOL_PADRAO,
) -> float:
    """
    Massa média na região classicamente proibida

    M_med = integral de M(phi) em [phi_i, phi_s] dividida por (phi_s - phi_i)

    Raises:
        TunelamentoBloqueadoError: massa inversa <= 0 no intervalo
    """
    phi_i, phi_s = turning_points(energy, H_par, c)
    _verificar_massa(phi_i, phi_s, H_par, c)
    if phi_s == phi_i:
        return float(mass(phi_i, H_par, c))
    integral = integrate_smooth(lambda phi: float(mass(phi, H_par, c)), phi_i, phi_s, tol)
    return integral / (phi_s - phi_i)


def barrier_action(
    energy: float,
    H_par: float,
    params: ClusterParams,
    tol: float = QUAD_TOL_PADRAO,
) -> BarrierAction:
    """
    Expoente sqrt(2 M_med) * integral de sqrt(V - energy) entre os pontos de retorno

    Args:
        energy: Energia do nível (K)
        H_par: Campo longitudinal (T)
        params: Parâmetros do cluster
        tol: Tolerância relativa das quadraturas

    Returns:
        BarrierAction(phi_i, phi_s, mass_avg, action)
    """
    c = derive_coefficients(params)
    phi_i, phi_s = turning_points(energy, H_par, c)
    if phi_s == phi_i:
        raise FaixaSemiclassicaError(
            f"Energia {energy} K no topo da barreira: use KHW/MG"
        )
    _verificar_massa(phi_i, phi_s, H_par, c)
    mass_avg = integrate_smooth(lambda phi: float(mass(phi, H_par, c)), phi_i, phi_s, tol) / (phi_s - phi_i)
    integral = integrate_sqrt_barrier(
        lambda phi: float(potential(phi, H_par, c)) - energy, phi_i, phi_s, tol
    )
    action = math.sqrt(2 * mass_avg) * integral
    logger.debug(
        f"Ação: E = {energy} K, H = {H_par} T, phi = [{phi_i:.6f}, {phi_s:.6f}], "
        f"M_med = {mass_avg:.8f}, S = {action:.8f}"
    )
    return BarrierAction(phi_i, phi_s, mass_avg, action)


def default_energy(params: ClusterParams, doublet: int = 0) -> float:
    """Energia média do dubleto de referência (espectro de spin, H = 0)"""
    return pair_doublets(reference_spectrum(params, 0.0)).rows[doublet].mean


# ---------------------------------------------------------------------------
# Desdobramentos
# ---------------------------------------------------------------------------

def wkb_splitting(
    energy: Optional[float],
    params: ClusterParams,
    doublet: int = 0,
    tol: float = QUAD_TOL_PADRAO,
) -> SplittingEstimate:
    """
    Desdobramento WKB com massa média (campo nulo)

    dE = (omega_b / pi) exp(-S), S = sqrt(2 M_med) * integral sqrt(V - E)

    Args:
        energy: Energia do nível; None usa a média do dubleto de
            referência de índice `doublet`
        params: Parâmetros do cluster
        doublet: Índice do dubleto usado quando energy é None
        tol: Tolerância relativa das quadraturas

    Raises:
        FaixaSemiclassicaError: energia no topo da barreira ou acima
    """
    if energy is None:
        energy = default_energy(params, doublet)
    acao = barrier_action(energy, 0.0, params, tol)
    omega_b = _omega_b(params)
    return SplittingEstimate(
        method=METODO_WKB,
        energy=energy,
        splitting=omega_b / math.pi * math.exp(-acao.action),
        phi_i=acao.phi_i,
        phi_s=acao.phi_s,
        mass_avg=acao.mass_avg,
        action=acao.action,
        omega_b=omega_b,
        V0=derive_coefficients(params).V3,
    )


def _exigir_anisotropia_transversal(params: ClusterParams, metodo: str):
    if params.E <= 0:
        raise FaixaSemiclassicaError(f"{metodo} exige E > 0 (omega_t = 0 com E = 0)")


def khw_mg_splitting(energy: float, params: ClusterParams) -> SplittingEstimate:
    """
    Desdobramento pela penetrabilidade de barreira parabólica invertida

    P = 1 / (1 + exp(2 pi (V0 - E) / omega_t)), dE = (omega_b / pi) P

    No topo (E = V0) P = 1/2.
    """
    _exigir_anisotropia_transversal(params, METODO_KHW_MG)
    V0 = derive_coefficients(params).V3
    omega_t = top_frequency(params)
    omega_b = _omega_b(params)
    P = float(expit(-2 * math.pi * (V0 - energy) / omega_t))
    return SplittingEstimate(
        method=METODO_KHW_MG,
        energy=energy,
        splitting=omega_b / math.pi * P,
        omega_b=omega_b,
        omega_t=omega_t,
        penetrability=P,
        V0=V0,
    )


def parabolic_splitting(energy: float, params: ClusterParams) -> SplittingEstimate:
    """
    Aproximação parabólica perto do topo

    dE = (omega_b / pi) exp(-pi (|E| - |V0|) / (2 sqrt(2 E_anis h_p))),
    h_p = (D - E) S(S+1) a profundidade total da barreira
    """
    _exigir_anisotropia_transversal(params, METODO_PARABOLICO)
    c = derive_coefficients(params)
    V0 = c.V3
    h_p = (params.D - params.E) * params.S_S1
    omega_b = _omega_b(params)
    expoente = math.pi * (abs(energy) - abs(V0)) / (2 * math.sqrt(2 * params.E * h_p))
    return SplittingEstimate(
        method=METODO_PARABOLICO,
        energy=energy,
        splitting=omega_b / math.pi * math.exp(-expoente),
        omega_b=omega_b,
        h_p=h_p,
        V0=V0,
    )


def _frequencias_poco(H_par: float, c: EffectiveCoefficients) -> Tuple[float, float]:
    w1_quad = (c.M1 + c.M2 * H_par + c.M3) * (-2 * c.V1 - c.V2 * H_par)
    w2_quad = (c.M1 - c.M2 * H_par + c.M3) * (-2 * c.V1 + c.V2 * H_par)
    if w1_quad <= 0 or w2_quad <= 0:
        raise FaixaSemiclassicaError(f"Poço sem mínimo harmônico para H = {H_par} T")
    return math.sqrt(w1_quad), math.sqrt(w2_quad)


def asymmetric_wkb_splitting(
    energy: float,
    H_par: float,
    params: ClusterParams,
    tol: float = QUAD_TOL_PADRAO,
) -> SplittingEstimate:
    """
    WKB com potencial e massa assimétricos (campo longitudinal)

    dE = (sqrt(omega_1 omega_2) / pi) exp(-S), com omega_1 e omega_2 as
    frequências harmônicas em phi = 0 e phi = pi. Com H_par = 0 coincide
    com wkb_splitting.
    """
    c = derive_coefficients(params)
    omega_1, omega_2 = _frequencias_poco(H_par, c)
    acao = barrier_action(energy, H_par, params, tol)
    prefator = _omega_b(params) if H_par == 0 else math.sqrt(omega_1 * omega_2)
    return SplittingEstimate(
        method=METODO_WKB_ASSIMETRICO,
        energy=energy,
        splitting=prefator / math.pi * math.exp(-acao.action),
        phi_i=acao.phi_i,
        phi_s=acao.phi_s,
        mass_avg=acao.mass_avg,
        action=acao.action,
        omega_1=omega_1,
        omega_2=omega_2,
        V0=c.V3,
    )


def applicable_methods(energy: float, params: ClusterParams) -> Set[str]:
    """
    Métodos semiclássicos válidos para a energia dada

    WKB mais de 2 omega_t abaixo do topo, parabólica até 2 omega_t abaixo
    do topo, KHW/MG a menos de 0.5 omega_t do topo. As faixas se sobrepõem.
    """
    V0 = derive_coefficients(params).V3
    distancia = V0 - energy
    if params.E <= 0:
        return {METODO_WKB} if distancia > 0 else set()

    omega_t = top_frequency(params)
    metodos = set()
    if distancia > FAIXA_WKB * omega_t:
        metodos.add(METODO_WKB)
    if 0 <= distancia <= FAIXA_PARABOLICA * omega_t:
        metodos.add(METODO_PARABOLICO)
    if abs(distancia) <= FAIXA_KHW * omega_t:
        metodos.add(METODO_KHW_MG)
    return metodos


# ---------------------------------------------------------------------------
# Campo longitudinal
# ---------------------------------------------------------------------------

def _inclinacao_por_poco(c: EffectiveCoefficients) -> float:
    raiz = math.sqrt(-2 * c.V1 * (c.M1 + c.M3))
    return c.V2 + 0.5 * raiz * (c.V2 / (4 * c.V1) + c.M2 / (2 * (c.M1 + c.M3)))


def ground_state_vs_field(params: ClusterParams, H_par: float) -> Tuple[float, float]:
    """
    Energia do fundamental nos poços mais fundo e mais raso (ordem linear em H)

    Returns:
        (poço mais fundo, poço mais raso) em K
    """
    c = derive_coefficients(params)
    E_gs0 = harmonic_well(params).E_gs
    desvio = abs(_inclinacao_por_poco(c) * H_par)
    return E_gs0 - desvio, E_gs0 + desvio


def gap_linear_coefficient(params: ClusterParams) -> float:
    """Coeficiente linear do gap em K/T (duas vezes a inclinação por poço)"""
    return 2 * abs(_inclinacao_por_poco(derive_coefficients(params)))


def matching_field_harmonic(params: ClusterParams) -> float:
    """
    Campo em que o fundamental do poço raso encontra o primeiro excitado
    do poço fundo (rota harmônica)
    """
    c = derive_coefficients(params)
    raiz = math.sqrt(-2 * c.V1 * (c.M1 + c.M3))
    colchete = c.V2 / (4 * c.V1) + c.M2 / (2 * (c.M1 + c.M3))
    return -raiz / (2 * (raiz * colchete + c.V2))


def saturation_and_matching_mass_route(params: ClusterParams) -> Tuple[float, float]:
    """
    Campo de saturação da massa e campo de casamento correspondente

    H_lim = 4S sqrt(2E(D-E)) / (g mu_B/k_B) é o campo em que a massa
    inversa toca zero; o casamento é H_lim / 2S.

    Returns:
        (H_lim, H_casamento) em T
    """
    saturacao = 4 * params.S * math.sqrt(2 * params.E * (params.D - params.E)) / params.A
    return saturacao, saturacao / params.two_S


def matching_field_level_shift(params: ClusterParams, k: int) -> float:
    """k-ésimo campo de casamento (múltiplos do campo da rota da massa)"""
    return k * saturation_and_matching_mass_route(params)[1]


def extract_suppression_chi(
    params: ClusterParams,
    energy: Optional[float],
    fields: Sequence[float],
    tol: float = QUAD_TOL_PADRAO,
) -> ChiFit:
    """
    Ajuste S(H)/S(0) = 1 + chi H^2 pelos mínimos quadrados (reta pela origem em H^2)

    Args:
        params: Parâmetros do cluster
        energy: Energia do nível; None usa o dubleto fundamental de referência
        fields: Campos (T), ao menos três
        tol: Tolerância das quadraturas

    Raises:
        ValueError: menos de três campos ou todos iguais
    """
    campos = [float(H) for H in fields]
    if len(campos) < 3:
        raise ValueError("Ajuste de chi exige ao menos três campos")
    if len(set(campos)) < 2 or not any(H != 0 for H in campos):
        raise ValueError("Ajuste de chi degenerado: campos todos iguais ou nulos")
    if energy is None:
        energy = default_energy(params)

    acao_zero = barrier_action(energy, 0.0, params, tol).action
    razoes = [barrier_action(energy, H, params, tol).action / acao_zero for H in campos]

    x = np.array(campos) ** 2
    y = np.array(razoes) - 1
    chi = float(np.dot(x, y) / np.dot(x, x))
    residuo = float(np.sqrt(np.mean((y - chi * x) ** 2)))
    logger.info(f"📐 chi = {chi:.6g} T^-2 (resíduo rms {residuo:.2e}, {len(campos)} campos)")
    return ChiFit(chi, residuo, tuple(campos), tuple(razoes))


def field_formulas(params: ClusterParams, chi: Optional[float] = None) -> FieldFormulaReport:
    """Reúne as fórmulas de campo num só relatório"""
    saturacao, casamento = saturation_and_matching_mass_route(params)
    return FieldFormulaReport(
        gap_coefficient=gap_linear_coefficient(params),
        matching_field_harmonic=matching_field_harmonic(params),
        matching_field_mass=casamento,
        saturation_field=saturacao,
        ground_slope_per_well=_inclinacao_por_poco(derive_coefficients(params)),
        chi=chi,
    )
