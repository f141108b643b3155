"""
Modelo físico do cluster - parâmetros, coeficientes efetivos e funções
do ângulo (potencial e massa inversa)

Unidades: energias em Kelvin (energia / k_B), campos em Tesla,
hbar = k_B = 1 internamente.
"""

import math
import logging
from dataclasses import dataclass
from typing import Union

import numpy as np

from spintun.erros import ParametrosInvalidosError, TunelamentoBloqueadoError

logger = logging.getLogger(__name__)

# Valor de mu_B/k_B que reproduz 4.32 T (saturação) e 0.216 T (casamento)
# com 3 algarismos significativos para o Fe8.
MU_B_OVER_KB_PADRAO = 0.6717

Angulo = Union[float, np.ndarray]


@dataclass(frozen=True)
class ClusterParams:
    """
    Parâmetros físicos de um cluster (única fonte de verdade do modelo)

    O spin é guardado como 2S (inteiro) para que S semi-inteiro não
    dependa de ponto flutuante.
    """

    D: float
    E: float
    two_S: int
    g: float = 2.0
    mu_B_over_kB: float = MU_B_OVER_KB_PADRAO

    def __post_init__(self):
        if isinstance(self.two_S, bool) or not isinstance(self.two_S, (int, np.integer)):
            raise ParametrosInvalidosError(
                f"two_S deve ser inteiro (recebido: {self.two_S!r})", chave='two_S'
            )
        if self.two_S < 1:
            raise ParametrosInvalidosError("two_S deve ser >= 1 (S >= 1/2)", chave='two_S')
        for nome in ('D', 'E', 'g', 'mu_B_over_kB'):
            valor = getattr(self, nome)
            if not math.isfinite(valor):
                raise ParametrosInvalidosError(f"{nome} deve ser finito", chave=nome)
        if self.D <= 0:
            raise ParametrosInvalidosError("D deve ser > 0", chave='D')
        if self.E < 0:
            raise ParametrosInvalidosError("E deve ser >= 0", chave='E')
        if self.D <= self.E:
            raise ParametrosInvalidosError(
                f"É preciso D > E (recebido D={self.D}, E={self.E})", chave='E'
            )
        if self.g <= 0:
            raise ParametrosInvalidosError("g deve ser > 0", chave='g')
        if self.mu_B_over_kB <= 0:
            raise ParametrosInvalidosError("mu_B_over_kB deve ser > 0", chave='mu_B_over_kB')

    @property
    def S(self) -> float:
        return self.two_S / 2

    @property
    def S_S1(self) -> float:
        """S(S+1)"""
        return self.S * (self.S + 1)

    @property
    def A(self) -> float:
        """Acoplamento Zeeman A = g mu_B (K/T)"""
        return self.g * self.mu_B_over_kB

    @property
    def is_integer_spin(self) -> bool:
        return self.two_S % 2 == 0

    def como_dict(self):
        return {
            'D_K': self.D,
            'E_K': self.E,
            'two_S': self.two_S,
            'g': self.g,
            'mu_B_over_kB_K_per_T': self.mu_B_over_kB,
        }


@dataclass(frozen=True)
class EffectiveCoefficients:
    """
    Coeficientes V1, V2, V3 do potencial e M1, M2, M3 da massa inversa

    M1, M2, M3 parametrizam 1/M(phi) e por isso têm unidade de energia.
    """

    V1: float
    V2: float
    V3: float
    M1: float
    M2: float
    M3: float


def coefficients_from_values(D: float, E: float, S: float, A: float) -> EffectiveCoefficients:
    """Fórmulas dos coeficientes, sem validar os parâmetros"""
    s_s1 = S * (S + 1)
    return EffectiveCoefficients(
        V1=-(D - E) * s_s1,
        V2=-A * math.sqrt(s_s1),
        V3=-E * s_s1,
        M1=2 * (D - E),
        M2=A / S,
        M3=4 * E,
    )


def derive_coefficients(params: ClusterParams) -> EffectiveCoefficients:
    """
    Deriva os coeficientes efetivos do potencial e da massa inversa

    Args:
        params: Parâmetros do cluster (já validados na construção)

    Returns:
        EffectiveCoefficients
    """
    return coefficients_from_values(params.D, params.E, params.S, params.A)


def potential(phi: Angulo, H_par: float, c: EffectiveCoefficients) -> Angulo:
    """V(phi) = V1 cos^2 phi + V2 H cos phi + V3"""
    cos_phi = np.cos(phi)
    return c.V1 * cos_phi ** 2 + c.V2 * H_par * cos_phi + c.V3


def potential_derivative(phi: Angulo, H_par: float, c: EffectiveCoefficients) -> Angulo:
    """dV/dphi"""
    return -c.V1 * np.sin(2 * phi) - c.V2 * H_par * np.sin(phi)


def potential_second_derivative(phi: Angulo, H_par: float, c: EffectiveCoefficients) -> Angulo:
    """d2V/dphi2"""
    return -2 * c.V1 * np.cos(2 * phi) - c.V2 * H_par * np.cos(phi)


def inverse_mass(phi: Angulo, H_par: float, c: EffectiveCoefficients) -> Angulo:
    """1/M(phi) = M1 cos^2 phi + M2 H cos phi + M3"""
    cos_phi = np.cos(phi)
    return c.M1 * cos_phi ** 2 + c.M2 * H_par * cos_phi + c.M3


def mass(phi: Angulo, H_par: float, c: EffectiveCoefficients) -> Angulo:
    """
    Massa efetiva M(phi)

    Raises:
        TunelamentoBloqueadoError: se a massa inversa for <= 0 em algum ponto
    """
    inversa = inverse_mass(phi, H_par, c)
    if np.any(np.asarray(inversa) <= 0):
        raise TunelamentoBloqueadoError(
            f"Massa inversa <= 0 para H = {H_par} T: massa diverge, tunelamento bloqueado"
        )
    return 1.0 / inversa


def min_inverse_mass(H_par: float, c: EffectiveCoefficients) -> float:
    """Mínimo em phi da massa inversa (quadrática em x = cos phi, x em [-1, 1])"""
    candidatos = [-1.0, 1.0]
    if c.M1 > 0:
        x_estrela = -c.M2 * H_par / (2 * c.M1)
        candidatos.append(min(1.0, max(-1.0, x_estrela)))
    return min(c.M1 * x * x + c.M2 * H_par * x + c.M3 for x in candidatos)
