"""
Núcleos numéricos - autossolver simétrico denso, quadratura para
integrandos com raiz quadrada nas extremidades e busca de raiz em intervalo

Precisão de trabalho: double. Os desdobramentos (~1e-10 K) são sempre
obtidos como diferença entre autovalores de blocos de simetria distintos,
cada um com erro ~1e-13 K.
"""

import logging
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np
from scipy import integrate, linalg, optimize

from spintun.erros import (
    ConvergenciaError,
    IntegrandoNegativoError,
    SemTrocaDeSinalError,
)

logger = logging.getLogger(__name__)

QUAD_TOL_PADRAO = 1e-10

# Pontos interiores usados para detectar integrando negativo
_PONTOS_VARREDURA = 128


class SymmetricMatrix:
    """
    Matriz real simétrica densa

    Só o triângulo inferior da entrada é usado; o superior é o espelho
    dele, então a(i, j) == a(j, i) exatamente.
    """

    def __init__(self, dados):
        dados = np.asarray(dados, dtype=float)
        if dados.ndim != 2 or dados.shape[0] != dados.shape[1]:
            raise ValueError(f"Matriz deve ser quadrada (recebido shape {dados.shape})")
        inferior = np.tril(dados)
        cheia = inferior + np.tril(dados, -1).T
        cheia.setflags(write=False)
        self._dados = cheia

    @property
    def n(self) -> int:
        return self._dados.shape[0]

    def __getitem__(self, idx):
        i, j = idx
        return float(self._dados[i, j])

    def to_array(self) -> np.ndarray:
        """Cópia densa (editável)"""
        return np.array(self._dados)

    def sub_block(self, indices: Sequence[int]) -> 'SymmetricMatrix':
        """Submatriz nas linhas/colunas indicadas"""
        idx = np.asarray(indices, dtype=int)
        return SymmetricMatrix(self._dados[np.ix_(idx, idx)])

    def trace(self) -> float:
        return float(np.trace(self._dados))

    def norm2(self) -> float:
        return float(np.linalg.norm(self._dados, 2))


@dataclass(frozen=True)
class EigenDecomposition:
    """Autovalores em ordem crescente e, opcionalmente, autovetores em colunas"""

    eigenvalues: np.ndarray
    eigenvectors: Optional[np.ndarray] = None


class BlocosReflexao(NamedTuple):
    """Blocos simétrico/antissimétrico sob k -> -k e as bases que os geram"""

    sym: SymmetricMatrix
    anti: SymmetricMatrix
    base_sym: np.ndarray
    base_anti: np.ndarray


def eig_symmetric(a: SymmetricMatrix, want_vectors: bool = False) -> EigenDecomposition:
    """
    Diagonaliza uma matriz simétrica densa (LAPACK via scipy.linalg.eigh)

    Args:
        a: Matriz simétrica
        want_vectors: Se True, devolve também os autovetores

    Returns:
        EigenDecomposition com autovalores crescentes

    Raises:
        ConvergenciaError: se o LAPACK não convergir
    """
    if a.n < 1:
        raise ValueError("Matriz vazia")

    try:
        if want_vectors:
            valores, vetores = linalg.eigh(a.to_array(), check_finite=True)
        else:
            valores = linalg.eigh(a.to_array(), eigvals_only=True, check_finite=True)
            vetores = None
    except (linalg.LinAlgError, ValueError) as e:
        logger.error(f"❌ Falha no autossolver (n={a.n}): {e}")
        raise ConvergenciaError(a.n, str(e)) from e

    logger.debug(f"Diagonalização n={a.n}: menor autovalor {valores[0]:.10f}")
    return EigenDecomposition(eigenvalues=np.asarray(valores), eigenvectors=vetores)


def reflection_blocks(a: SymmetricMatrix, indices: Sequence[int]) -> BlocosReflexao:
    """
    Projeta uma matriz invariante sob a reflexão de índices i -> n-1-i
    nas combinações simétricas (e_i + e_j)/sqrt(2) e antissimétricas
    (e_i - e_j)/sqrt(2)

    Args:
        a: Matriz (base ordenada de -K a K)
        indices: Subconjunto de índices fechado sob a reflexão

    Returns:
        BlocosReflexao (o índice central, se houver, fica no bloco simétrico)
    """
    n = a.n
    conjunto = set(int(i) for i in indices)
    for i in conjunto:
        if n - 1 - i not in conjunto:
            raise ValueError(f"Índices não fechados sob reflexão: falta {n - 1 - i}")

    inv_raiz2 = 1.0 / np.sqrt(2.0)
    colunas_sym = []
    colunas_anti = []
    for i in sorted(conjunto):
        j = n - 1 - i
        if i > j:
            continue
        v = np.zeros(n)
        if i == j:
            v[i] = 1.0
            colunas_sym.append(v)
            continue
        v[i] = v[j] = inv_raiz2
        colunas_sym.append(v)
        w = np.zeros(n)
        w[i] = inv_raiz2
        w[j] = -inv_raiz2
        colunas_anti.append(w)

    cheia = a.to_array()
    base_sym = np.column_stack(colunas_sym) if colunas_sym else np.zeros((n, 0))
    base_anti = np.column_stack(colunas_anti) if colunas_anti else np.zeros((n, 0))
    return BlocosReflexao(
        sym=SymmetricMatrix(base_sym.T @ cheia @ base_sym),
        anti=SymmetricMatrix(base_anti.T @ cheia @ base_anti),
        base_sym=base_sym,
        base_anti=base_anti,
    )


def integrate_sqrt_barrier(
    f_under_sqrt: Callable[[float], float],
    phi_i: float,
    phi_s: float,
    tol: float = QUAD_TOL_PADRAO,
) -> float:
    """
    Integral de sqrt(f) em [phi_i, phi_s] com f se anulando nas extremidades

    Usa a troca phi = m - h cos(theta), theta em [0, pi], que torna o
    comportamento sqrt(phi - phi_i) nas bordas analítico em theta, e
    integra em theta com quadratura adaptativa (scipy.integrate.quad).

    Raises:
        IntegrandoNegativoError: se f < 0 estritamente dentro do intervalo
    """
    if not phi_i < phi_s:
        raise ValueError(f"É preciso phi_i < phi_s (recebido {phi_i}, {phi_s})")

    meio = 0.5 * (phi_s + phi_i)
    semi = 0.5 * (phi_s - phi_i)

    thetas = np.pi * np.arange(1, _PONTOS_VARREDURA) / _PONTOS_VARREDURA
    amostras = np.array([f_under_sqrt(meio - semi * np.cos(t)) for t in thetas])
    escala = max(float(np.max(np.abs(amostras))), np.finfo(float).tiny)
    piores = amostras < -1e-12 * escala
    if np.any(piores):
        phi_ruim = meio - semi * np.cos(thetas[np.argmax(piores)])
        raise IntegrandoNegativoError(
            f"Integrando negativo em phi = {phi_ruim:.6f} dentro de [{phi_i:.6f}, {phi_s:.6f}]: "
            f"pontos de retorno inconsistentes com a energia"
        )

    def integrando(theta: float) -> float:
        valor = f_under_sqrt(meio - semi * np.cos(theta))
        return np.sqrt(max(valor, 0.0)) * semi * np.sin(theta)

    resultado, erro = integrate.quad(integrando, 0.0, np.pi, epsabs=0.0, epsrel=tol, limit=200)
    logger.debug(f"Integral de barreira = {resultado:.15g} (erro estimado {erro:.2e})")
    return float(resultado)


def integrate_smooth(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = QUAD_TOL_PADRAO,
) -> float:
    """Integral de uma função suave em [a, b] (quadratura adaptativa)"""
    resultado, _ = integrate.quad(f, a, b, epsabs=0.0, epsrel=tol, limit=200)
    return float(resultado)


def find_root_bracketed(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol_x: float = 1e-14,
) -> float:
    """
    Raiz de f em [lo, hi] pelo método de Brent

    Raises:
        SemTrocaDeSinalError: se f(lo) e f(hi) tiverem o mesmo sinal
    """
    f_lo = f(lo)
    f_hi = f(hi)
    if f_lo == 0:
        return float(lo)
    if f_hi == 0:
        return float(hi)
    if f_lo * f_hi > 0:
        raise SemTrocaDeSinalError(
            f"Sem troca de sinal em [{lo}, {hi}]: f(lo)={f_lo:.6g}, f(hi)={f_hi:.6g}"
        )
    return float(optimize.brentq(f, lo, hi, xtol=tol_x, maxiter=500))
