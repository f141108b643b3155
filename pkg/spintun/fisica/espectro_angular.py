"""
Espectro do modelo angular efetivo

H = -(1/2) d/dphi [ (1/M(phi)) d/dphi ] + V(phi)

discretizado na base de ondas planas e^{i n phi}, n em [-n_max, n_max].
Como o potencial e a massa inversa só têm harmônicos 0, 1 e 2, a matriz
é pentadiagonal e real simétrica. A reflexão phi -> -phi (n -> -n) separa
os setores cos/sin para qualquer campo; com H_par = 0 a paridade de n
(phi -> phi + pi) separa também os dois parceiros de cada dubleto.

Convenção: psi(phi) = (2 pi)^(-1/2) sum_n c_n e^{i n phi}, de modo que
a integral de |psi|^2 em [0, 2 pi) é sum |c_n|^2 = 1.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Sequence, Tuple

import numpy as np

from spintun.erros import ParametrosInvalidosError
from spintun.fisica.modelo import (
    ClusterParams,
    EffectiveCoefficients,
    derive_coefficients,
)
from spintun.fisica.numerica import (
    SymmetricMatrix,
    eig_symmetric,
    reflection_blocks,
)
from spintun.fisica.spin_exato import (
    Level,
    Spectrum,
    pair_doublets,
    reference_spectrum,
)

logger = logging.getLogger(__name__)

METODO_ANGULAR = 'angle_model'
N_MAX_MINIMO = 4


@dataclass(frozen=True)
class FourierBasisSpec:
    """Corte da base de Fourier"""

    n_max: int

    def __post_init__(self):
        if isinstance(self.n_max, bool) or not isinstance(self.n_max, (int, np.integer)):
            raise ParametrosInvalidosError(f"n_max deve ser inteiro (recebido {self.n_max!r})", chave='n_max')
        if self.n_max < N_MAX_MINIMO:
            raise ParametrosInvalidosError(f"n_max deve ser >= {N_MAX_MINIMO}", chave='n_max')

    @property
    def dimension(self) -> int:
        return 2 * self.n_max + 1

    def indices_n(self) -> np.ndarray:
        return np.arange(-self.n_max, self.n_max + 1)

    def check_resolution(self, params: ClusterParams):
        """A base precisa resolver ao menos a dimensão do modelo de spin"""
        if self.n_max < params.two_S:
            raise ParametrosInvalidosError(
                f"n_max = {self.n_max} menor que 2S = {params.two_S}", chave='n_max'
            )


@dataclass(frozen=True)
class AngleWavefunction:
    """Coeficientes c_n (n = -n_max..n_max) de um autoestado"""

    coefficients: np.ndarray
    energy: float
    block_tag: str

    @property
    def n_max(self) -> int:
        return (len(self.coefficients) - 1) // 2

    def norm(self) -> float:
        return float(np.sum(np.abs(self.coefficients) ** 2))


class _BlocoAngular(NamedTuple):
    tag: str
    matriz: SymmetricMatrix
    base: np.ndarray
    fase: complex


def build_angle_hamiltonian(
    c: EffectiveCoefficients,
    H_par: float,
    spec: FourierBasisSpec,
) -> SymmetricMatrix:
    """
    Matriz do Hamiltoniano angular na base de ondas planas

    H(m, n) = (1/2) m n I_{m-n} + V_{m-n}, com I_k e V_k os harmônicos
    da massa inversa e do potencial.

    Args:
        c: Coeficientes efetivos
        H_par: Campo longitudinal (T)
        spec: Corte da base

    Returns:
        SymmetricMatrix de dimensão 2 n_max + 1
    """
    inversa = {0: c.M1 / 2 + c.M3, 1: c.M2 * H_par / 2, 2: c.M1 / 4}
    potencial = {0: c.V1 / 2 + c.V3, 1: c.V2 * H_par / 2, 2: c.V1 / 4}

    n = spec.indices_n().astype(float)
    h = np.diag(0.5 * n * n * inversa[0] + potencial[0])
    for k in (1, 2):
        # m = n + k
        fora = 0.5 * n[k:] * n[:-k] * inversa[k] + potencial[k]
        h += np.diag(fora, -k) + np.diag(fora, k)
    return SymmetricMatrix(h)


def _blocos(h: SymmetricMatrix, spec: FourierBasisSpec, H_par: float) -> List[_BlocoAngular]:
    n = spec.indices_n()
    # (c_n - c_{-n}) gera i sin(n phi); a fase -i torna psi real
    if H_par == 0:
        blocos = []
        for nome, paridade in (('even_n', 0), ('odd_n', 1)):
            indices = np.flatnonzero(n % 2 == paridade)
            r = reflection_blocks(h, indices)
            blocos.append(_BlocoAngular(f"cos/{nome}", r.sym, r.base_sym, 1.0))
            blocos.append(_BlocoAngular(f"sin/{nome}", r.anti, r.base_anti, -1j))
        return blocos
    r = reflection_blocks(h, range(h.n))
    return [
        _BlocoAngular('cos', r.sym, r.base_sym, 1.0),
        _BlocoAngular('sin', r.anti, r.base_anti, -1j),
    ]


def _resolver(params: ClusterParams, H_par: float, spec: FourierBasisSpec, want_vectors: bool):
    spec.check_resolution(params)
    c = derive_coefficients(params)
    h = build_angle_hamiltonian(c, H_par, spec)
    resultados = []
    for bloco in _blocos(h, spec, H_par):
        if bloco.matriz.n == 0:
            continue
        decomposicao = eig_symmetric(bloco.matriz, want_vectors=want_vectors)
        logger.debug(f"Bloco angular {bloco.tag}: dimensão {bloco.matriz.n}")
        resultados.append((bloco, decomposicao))
    return c, resultados


def angle_spectrum(params: ClusterParams, H_par: float, spec: FourierBasisSpec) -> Spectrum:
    """
    Autovalores do modelo angular, com rótulo de bloco

    Args:
        params: Parâmetros do cluster
        H_par: Campo longitudinal (T)
        spec: Corte da base de Fourier

    Returns:
        Spectrum com 2 n_max + 1 níveis
    """
    c, resultados = _resolver(params, H_par, spec, want_vectors=False)
    niveis = [
        Level(float(v), bloco.tag)
        for bloco, decomposicao in resultados
        for v in decomposicao.eigenvalues
    ]
    espectro = Spectrum(
        tuple(niveis),
        METODO_ANGULAR,
        field=H_par,
        barrier_top=c.V3 if H_par == 0 else None,
    )
    logger.info(
        f"🔬 Espectro angular: n_max = {spec.n_max}, H = {H_par} T, "
        f"E_gs = {espectro.ground_energy:.6f} K"
    )
    return espectro


def angle_eigenstates(params: ClusterParams, H_par: float, spec: FourierBasisSpec) -> List[AngleWavefunction]:
    """Mesma diagonalização de angle_spectrum, devolvendo os coeficientes"""
    _, resultados = _resolver(params, H_par, spec, want_vectors=True)
    estados = []
    for bloco, decomposicao in resultados:
        for k, energia in enumerate(decomposicao.eigenvalues):
            coeficientes = bloco.fase * (bloco.base @ decomposicao.eigenvectors[:, k])
            estados.append(AngleWavefunction(
                coefficients=np.asarray(coeficientes, dtype=complex),
                energy=float(energia),
                block_tag=bloco.tag,
            ))
    estados.sort(key=lambda w: w.energy)
    return estados


def barrier_height(spectrum: Spectrum, c: EffectiveCoefficients) -> float:
    """h_b = V3 - E_gs (V3 = -E S(S+1) é o topo da barreira)"""
    return c.V3 - spectrum.ground_energy


def evaluate_wavefunction(w: AngleWavefunction, phi):
    """
    Amplitude psi(phi) = (2 pi)^(-1/2) sum_n c_n e^{i n phi}

    Aceita escalar ou array de ângulos.
    """
    phi_arr = np.asarray(phi, dtype=float)
    n = np.arange(-w.n_max, w.n_max + 1)
    fases = np.exp(1j * np.multiply.outer(phi_arr, n))
    amplitude = (fases @ w.coefficients) / np.sqrt(2 * np.pi)
    if np.ndim(phi) == 0:
        return complex(amplitude)
    return amplitude


def well_localization(w: AngleWavefunction, n_grid: int = 2048) -> Tuple[float, float]:
    """
    Probabilidade de |psi|^2 perto de phi = 0 e perto de phi = pi

    Returns:
        (P em |phi| < pi/2, P em |phi - pi| < pi/2)
    """
    phi = 2 * np.pi * np.arange(n_grid) / n_grid
    densidade = np.abs(evaluate_wavefunction(w, phi)) ** 2
    passo = 2 * np.pi / n_grid
    perto_zero = np.cos(phi) > 0
    perto_pi = np.cos(phi) < 0
    return float(np.sum(densidade[perto_zero]) * passo), float(np.sum(densidade[perto_pi]) * passo)


def lowest_levels(spectrum: Spectrum, params: ClusterParams) -> Spectrum:
    """Os 2S+1 níveis mais baixos (os que correspondem ao modelo de spin)"""
    return spectrum.lowest(params.two_S + 1)


def convergence_sweep(params: ClusterParams, n_values: Sequence[int]) -> List[Dict[str, float]]:
    """
    Estado fundamental e primeiro desdobramento em função do corte

    Returns:
        Lista de dicionários com n_max, E_gs, dE0 e desvio (%) de E_gs
        em relação ao espectro de spin
    """
    referencia = reference_spectrum(params, 0.0).ground_energy
    linhas = []
    for n_max in sorted(set(int(n) for n in n_values)):
        espectro = angle_spectrum(params, 0.0, FourierBasisSpec(n_max))
        dubletos = pair_doublets(lowest_levels(espectro, params))
        linhas.append({
            'n_max': n_max,
            'E_gs': espectro.ground_energy,
            'dE0': dubletos.rows[0].splitting,
            'desvio_E_gs_pct': abs(espectro.ground_energy - referencia) / abs(referencia) * 100,
        })
    logger.info(f"📊 Varredura de convergência: {len(linhas)} cortes")
    return linhas
