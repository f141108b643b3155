"""
Diagonalização exata do Hamiltoniano de spin na base |S, m>

H = A H_par Jz - D Jz^2 + (E/2)(J+^2 + J-^2)

Os resultados daqui são os valores de referência para todas as
aproximações. Com H_par = 0 o espectro é separado em blocos de paridade
(m + S par/ímpar) e de inversão de spin (|m> +- |-m>), de modo que cada
desdobramento é a diferença entre autovalores de blocos distintos.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from spintun.erros import SimetriaQuebradaError
from spintun.fisica.modelo import ClusterParams, derive_coefficients
from spintun.fisica.numerica import (
    SymmetricMatrix,
    eig_symmetric,
    reflection_blocks,
)

logger = logging.getLogger(__name__)

METODO_SPIN = 'spin_exact'


@dataclass(frozen=True)
class SpinBasisLabel:
    """Número quântico m da base de Jz (guardado como 2m)"""

    two_m: int
    two_S: int

    def __post_init__(self):
        if abs(self.two_m) > self.two_S or (self.two_m + self.two_S) % 2 != 0:
            raise ValueError(f"m = {self.two_m}/2 inválido para S = {self.two_S}/2")

    @property
    def m(self) -> float:
        return self.two_m / 2

    @property
    def index(self) -> int:
        """Posição na base ordenada de m = -S até m = S"""
        return (self.two_m + self.two_S) // 2


class Level(NamedTuple):
    energy: float
    block_tag: str


@dataclass(frozen=True)
class Spectrum:
    """
    Espectro com rótulo de bloco por nível

    Os rótulos têm a forma 'setor/parceiro' quando o espectro foi
    resolvido com simetria de reflexão (campo nulo); os dois níveis de um
    dubleto ficam no mesmo setor e em parceiros diferentes.
    """

    levels: Tuple[Level, ...]
    method_tag: str
    field: float = 0.0
    barrier_top: Optional[float] = None

    def __post_init__(self):
        ordenados = tuple(sorted(self.levels, key=lambda nivel: (nivel.energy, nivel.block_tag)))
        object.__setattr__(self, 'levels', ordenados)

    def energies(self) -> np.ndarray:
        return np.array([nivel.energy for nivel in self.levels])

    @property
    def ground_energy(self) -> float:
        return self.levels[0].energy

    def block_tags(self) -> List[str]:
        return sorted({nivel.block_tag for nivel in self.levels})

    def block(self, tag: str) -> np.ndarray:
        return np.array([nivel.energy for nivel in self.levels if nivel.block_tag == tag])

    def lowest(self, k: int) -> 'Spectrum':
        """Só os k níveis mais baixos"""
        return Spectrum(self.levels[:k], self.method_tag, self.field, self.barrier_top)


class Doublet(NamedTuple):
    index: int
    lower: float
    upper: float
    mean: float
    splitting: float
    block_pair: Tuple[str, str]


@dataclass(frozen=True)
class DoubletTable:
    """Dubletos ordenados pela energia média, com a origem do espectro"""

    rows: Tuple[Doublet, ...]
    method_tag: str
    unpaired: Tuple[Level, ...] = field(default_factory=tuple)

    def nearest(self, energy: float) -> Doublet:
        """Dubleto com média mais próxima da energia dada"""
        return min(self.rows, key=lambda linha: abs(linha.mean - energy))


def _valores_m(params: ClusterParams) -> np.ndarray:
    return (np.arange(params.two_S + 1) * 2 - params.two_S) / 2


def build_spin_hamiltonian(params: ClusterParams, H_par: float) -> SymmetricMatrix:
    """
    Monta a matriz (2S+1)x(2S+1) do Hamiltoniano de spin

    Args:
        params: Parâmetros do cluster
        H_par: Campo longitudinal (T)

    Returns:
        SymmetricMatrix na base m = -S, ..., S
    """
    S = params.S
    m = _valores_m(params)
    dimensao = params.two_S + 1

    h = np.diag(params.A * H_par * m - params.D * m ** 2)
    if dimensao > 2:
        m_baixo = m[:-2]
        acoplamento = 0.5 * params.E * np.sqrt(
            (S - m_baixo) * (S + m_baixo + 1) * (S - m_baixo - 1) * (S + m_baixo + 2)
        )
        h += np.diag(acoplamento, 2) + np.diag(acoplamento, -2)
    return SymmetricMatrix(h)


def parity_sectors(params: ClusterParams) -> Dict[str, List[int]]:
    """Índices da base com m + S par e ímpar (desacoplados para qualquer campo)"""
    indices = range(params.two_S + 1)
    setores = {
        'even': [i for i in indices if i % 2 == 0],
        'odd': [i for i in indices if i % 2 == 1],
    }
    return {nome: idx for nome, idx in setores.items() if idx}


def split_parity_blocks(
    h: SymmetricMatrix,
    params: ClusterParams,
    H_par: float,
) -> Tuple[SymmetricMatrix, SymmetricMatrix]:
    """
    Blocos de inversão de spin (|m> + |-m>)/sqrt(2) e (|m> - |-m>)/sqrt(2)

    Raises:
        SimetriaQuebradaError: se H_par != 0 (o termo Zeeman quebra m -> -m)
    """
    if H_par != 0:
        raise SimetriaQuebradaError(
            f"Blocos de inversão de spin exigem H_par = 0 (recebido {H_par} T)"
        )
    blocos = reflection_blocks(h, range(params.two_S + 1))
    return blocos.sym, blocos.anti


def _niveis_campo_nulo(h: SymmetricMatrix, params: ClusterParams) -> List[Level]:
    niveis: List[Level] = []
    if params.is_integer_spin:
        # m -> -m preserva a paridade de m + S: quatro blocos
        for setor, indices in parity_sectors(params).items():
            blocos = reflection_blocks(h, indices)
            for parceiro, bloco in (('sym', blocos.sym), ('anti', blocos.anti)):
                if bloco.n == 0:
                    continue
                valores = eig_symmetric(bloco).eigenvalues
                logger.debug(f"Bloco {setor}/{parceiro}: dimensão {bloco.n}")
                niveis.extend(Level(float(v), f"{setor}/{parceiro}") for v in valores)
    else:
        # S semi-inteiro: m -> -m troca os setores, que são isoespectrais (Kramers)
        valores = eig_symmetric(h.sub_block(parity_sectors(params)['even'])).eigenvalues
        for parceiro in ('kramers_a', 'kramers_b'):
            niveis.extend(Level(float(v), f"all/{parceiro}") for v in valores)
    return niveis


def reference_spectrum(params: ClusterParams, H_par: float = 0.0) -> Spectrum:
    """
    Espectro de referência (diagonalização exata por blocos)

    Args:
        params: Parâmetros do cluster
        H_par: Campo longitudinal (T)

    Returns:
        Spectrum com rótulos de bloco
    """
    h = build_spin_hamiltonian(params, H_par)

    if H_par == 0:
        niveis = _niveis_campo_nulo(h, params)
        topo = derive_coefficients(params).V3
    else:
        niveis = []
        for setor, indices in parity_sectors(params).items():
            valores = eig_symmetric(h.sub_block(indices)).eigenvalues
            niveis.extend(Level(float(v), setor) for v in valores)
        topo = None

    espectro = Spectrum(tuple(niveis), METODO_SPIN, field=H_par, barrier_top=topo)
    logger.info(
        f"🔬 Espectro de referência: dimensão {len(niveis)}, "
        f"H = {H_par} T, E_gs = {espectro.ground_energy:.6f} K"
    )
    return espectro


def _separar_rotulo(tag: str) -> Tuple[str, str]:
    setor, _, parceiro = tag.partition('/')
    return setor, parceiro


def pair_doublets(s: Spectrum) -> DoubletTable:
    """
    Agrupa os níveis em dubletos

    Abaixo do topo da barreira, o k-ésimo nível de um parceiro de simetria
    forma par com o k-ésimo do outro parceiro no mesmo setor. Os níveis
    restantes são pareados por adjacência no espectro ordenado; um nível
    que sobra é marcado como não pareado.
    """
    if s.field != 0:
        raise SimetriaQuebradaError("Pareamento de dubletos exige espectro com H_par = 0")

    topo = s.barrier_top if s.barrier_top is not None else -np.inf
    usados = set()
    sobras: List[Level] = []
    pares: List[Tuple[Level, Level]] = []

    por_setor: Dict[str, Dict[str, List[Tuple[int, Level]]]] = {}
    for posicao, nivel in enumerate(s.levels):
        setor, parceiro = _separar_rotulo(nivel.block_tag)
        por_setor.setdefault(setor, {}).setdefault(parceiro, []).append((posicao, nivel))

    for setor, parceiros in por_setor.items():
        if len(parceiros) != 2 or '' in parceiros:
            continue
        primeiro, segundo = (parceiros[nome] for nome in sorted(parceiros))
        for k in range(max(len(primeiro), len(segundo))):
            if k >= len(primeiro) or k >= len(segundo):
                restante = primeiro if k < len(primeiro) else segundo
                posicao, nivel = restante[k]
                if nivel.energy < topo:
                    usados.add(posicao)
                    sobras.append(nivel)
                continue
            (p1, n1), (p2, n2) = primeiro[k], segundo[k]
            if min(n1.energy, n2.energy) >= topo:
                break
            usados.update((p1, p2))
            pares.append((n1, n2))

    restantes = [nivel for posicao, nivel in enumerate(s.levels) if posicao not in usados]
    for k in range(0, len(restantes) - 1, 2):
        pares.append((restantes[k], restantes[k + 1]))
    if len(restantes) % 2 == 1:
        sobras.append(restantes[-1])

    linhas = []
    for a, b in pares:
        baixo, alto = (a, b) if a.energy <= b.energy else (b, a)
        linhas.append((baixo, alto))
    linhas.sort(key=lambda par: 0.5 * (par[0].energy + par[1].energy))

    rows = tuple(
        Doublet(
            index=i,
            lower=baixo.energy,
            upper=alto.energy,
            mean=0.5 * (baixo.energy + alto.energy),
            splitting=alto.energy - baixo.energy,
            block_pair=(baixo.block_tag, alto.block_tag),
        )
        for i, (baixo, alto) in enumerate(linhas)
    )
    if sobras:
        logger.warning(f"⚠️ {len(sobras)} nível(is) sem par: {[round(n.energy, 6) for n in sobras]}")
    return DoubletTable(rows=rows, method_tag=s.method_tag, unpaired=tuple(sobras))


def lowest_doublet_gap(params: ClusterParams, H_par: float) -> float:
    """
    Separação do dubleto fundamental (estados m ~ +S e m ~ -S)

    Com H_par = 0 usa os blocos de simetria; com campo, os setores de
    paridade de m + S.
    """
    if H_par == 0:
        return pair_doublets(reference_spectrum(params, 0.0)).rows[0].splitting

    h = build_spin_hamiltonian(params, H_par)
    setores = parity_sectors(params)
    # m = -S é o índice 0 e m = S o índice 2S
    setor_baixo = 'even'
    setor_alto = 'even' if params.two_S % 2 == 0 else 'odd'
    if setor_baixo == setor_alto:
        valores = eig_symmetric(h.sub_block(setores[setor_baixo])).eigenvalues
        return float(valores[1] - valores[0])
    a = eig_symmetric(h.sub_block(setores[setor_baixo])).eigenvalues[0]
    b = eig_symmetric(h.sub_block(setores[setor_alto])).eigenvalues[0]
    return float(abs(b - a))


def gap_vs_field_scan(params: ClusterParams, fields: Sequence[float]) -> List[Tuple[float, float]]:
    """
    Separação do dubleto fundamental em função do campo longitudinal

    Returns:
        Lista de (H_par, gap)
    """
    varredura = [(float(H), lowest_doublet_gap(params, float(H))) for H in fields]
    logger.info(f"📈 Varredura de campo: {len(varredura)} pontos")
    return varredura


def fit_gap_slope(scan: Sequence[Tuple[float, float]]) -> Tuple[float, float]:
    """
    Reta de mínimos quadrados gap = slope * H + intercept

    Returns:
        (slope em K/T, intercept em K)
    """
    campos = np.array([H for H, _ in scan], dtype=float)
    gaps = np.array([g for _, g in scan], dtype=float)
    if len(np.unique(campos)) < 2:
        raise ValueError("Ajuste linear exige ao menos dois campos distintos")
    slope, intercept = np.polyfit(campos, gaps, 1)
    return float(slope), float(intercept)
