import math

import numpy as np
import pytest
from scipy.linalg import block_diag

from spintun.erros import ConvergenciaError, IntegrandoNegativoError, SemTrocaDeSinalError
from spintun.fisica.modelo import potential
from spintun.fisica.numerica import (
    SymmetricMatrix,
    eig_symmetric,
    find_root_bracketed,
    integrate_smooth,
    integrate_sqrt_barrier,
    reflection_blocks,
)
from spintun.fisica.semiclassica import turning_points


def _persimetrica(n, semente=7):
    rng = np.random.default_rng(semente)
    a = rng.normal(size=(n, n))
    a = a + a.T
    j = np.eye(n)[::-1]
    return a + j @ a @ j


def test_matriz_simetrica_espelha_triangulo_inferior():
    m = SymmetricMatrix([[1.0, 99.0], [2.0, 3.0]])
    assert m[0, 1] == m[1, 0] == 2.0
    assert m.n == 2
    assert m.trace() == 4.0


def test_to_array_devolve_copia():
    m = SymmetricMatrix(np.eye(3))
    copia = m.to_array()
    copia[0, 0] = 10.0
    assert m[0, 0] == 1.0


def test_matriz_nao_quadrada():
    with pytest.raises(ValueError):
        SymmetricMatrix(np.zeros((2, 3)))


def test_autovalores_crescentes_e_vetores_ortonormais():
    a = SymmetricMatrix(_persimetrica(6))
    d = eig_symmetric(a, want_vectors=True)
    assert np.all(np.diff(d.eigenvalues) >= 0)
    v = d.eigenvectors
    np.testing.assert_allclose(v.T @ v, np.eye(6), atol=1e-12)
    np.testing.assert_allclose(a.to_array() @ v, v * d.eigenvalues, atol=1e-12)


def test_autovalores_de_matriz_diagonal():
    d = eig_symmetric(SymmetricMatrix(np.diag([3.0, 1.0, 2.0])))
    np.testing.assert_array_equal(d.eigenvalues, [1.0, 2.0, 3.0])
    assert d.eigenvectors is None


def test_falha_do_autossolver_vira_erro_de_convergencia():
    with pytest.raises(ConvergenciaError, match='dimensão 2'):
        eig_symmetric(SymmetricMatrix([[np.nan, 0.0], [0.0, 1.0]]))


@pytest.mark.parametrize('n', [5, 6, 9])
def test_blocos_de_reflexao_reproduzem_o_espectro(n):
    a = SymmetricMatrix(_persimetrica(n))
    blocos = reflection_blocks(a, range(n))
    assert blocos.sym.n == (n + 1) // 2
    assert blocos.anti.n == n // 2
    uniao = np.sort(np.concatenate([
        eig_symmetric(blocos.sym).eigenvalues,
        eig_symmetric(blocos.anti).eigenvalues,
    ]))
    np.testing.assert_allclose(uniao, eig_symmetric(a).eigenvalues, atol=1e-12)


def test_blocos_de_reflexao_em_subconjunto():
    a = SymmetricMatrix(_persimetrica(7))
    blocos = reflection_blocks(a, [0, 2, 4, 6])
    assert blocos.sym.n == 2
    assert blocos.anti.n == 2


def test_subconjunto_nao_fechado_sob_reflexao():
    with pytest.raises(ValueError):
        reflection_blocks(SymmetricMatrix(np.eye(4)), [0, 1])


def test_integral_de_semicirculo():
    valor = integrate_sqrt_barrier(lambda x: 1.0 - x * x, -1.0, 1.0)
    assert valor == pytest.approx(math.pi / 2, rel=1e-10)


def test_integral_com_raiz_em_intervalo_arbitrario():
    # (x - a)(b - x) em [a, b]: pi (b - a)^2 / 8
    a, b = 0.3, 2.7
    valor = integrate_sqrt_barrier(lambda x: (x - a) * (b - x), a, b)
    assert valor == pytest.approx(math.pi * (b - a) ** 2 / 8, rel=1e-10)


def test_integrando_negativo_no_interior():
    with pytest.raises(IntegrandoNegativoError):
        integrate_sqrt_barrier(lambda x: x * (1 - x) * (x - 0.5), 0.0, 1.0)


def test_intervalo_invertido():
    with pytest.raises(ValueError):
        integrate_sqrt_barrier(lambda x: 1.0, 1.0, 0.0)


def test_integral_suave():
    assert integrate_smooth(math.cos, 0.0, math.pi / 2) == pytest.approx(1.0, rel=1e-12)


def test_raiz_de_cosseno():
    assert find_root_bracketed(math.cos, 0.0, 3.0) == pytest.approx(math.pi / 2, abs=1e-13)


def test_raiz_na_borda():
    assert find_root_bracketed(lambda x: x, 0.0, 1.0) == 0.0
    assert find_root_bracketed(lambda x: x - 1.0, 0.0, 1.0) == 1.0


def test_sem_troca_de_sinal():
    with pytest.raises(SemTrocaDeSinalError):
        find_root_bracketed(lambda x: x * x + 1.0, -1.0, 1.0)


# ============================================================================
# Autossolver contra oráculos independentes
# ============================================================================

def _negativos(a, x):
    """Autovalores de a abaixo de x, pela inércia da eliminação sem pivoteamento"""
    m = a - x * np.eye(len(a))
    negativos = 0
    for k in range(len(m)):
        pivo = m[k, k]
        negativos += int(pivo < 0)
        m[k + 1:, k + 1:] -= np.outer(m[k + 1:, k], m[k, k + 1:]) / pivo
    return negativos


def _bissecao(a, k):
    raio = float(np.max(np.sum(np.abs(a), axis=1)))
    lo, hi = -raio - 1.0, raio + 1.0
    for _ in range(200):
        meio = 0.5 * (lo + hi)
        if meio in (lo, hi):
            break
        if _negativos(a, meio) > k:
            hi = meio
        else:
            lo = meio
    return 0.5 * (lo + hi)


def test_matriz_1x1():
    d = eig_symmetric(SymmetricMatrix([[2.5]]), want_vectors=True)
    np.testing.assert_array_equal(d.eigenvalues, [2.5])
    assert abs(d.eigenvectors[0, 0]) == 1.0


def test_matriz_de_troca_2x2():
    d = eig_symmetric(SymmetricMatrix([[0.0, 1.0], [1.0, 0.0]]))
    np.testing.assert_allclose(d.eigenvalues, [-1.0, 1.0], atol=1e-15)


def test_aleatoria_8x8_contra_bissecao_de_inercia():
    rng = np.random.default_rng(2024)
    a = rng.normal(size=(8, 8))
    a = a + a.T
    oraculo = np.array([_bissecao(a, k) for k in range(8)])
    calculado = eig_symmetric(SymmetricMatrix(a)).eigenvalues
    escala = float(np.max(np.abs(oraculo)))
    np.testing.assert_allclose(calculado, oraculo, rtol=1e-10, atol=1e-10 * escala)


def test_bloco_diagonal_igual_a_uniao_dos_blocos():
    blocos = [_persimetrica(3, semente=1), _persimetrica(5, semente=2), np.array([[4.0]])]
    completo = eig_symmetric(SymmetricMatrix(block_diag(*blocos))).eigenvalues
    uniao = np.sort(np.concatenate([eig_symmetric(SymmetricMatrix(b)).eigenvalues for b in blocos]))
    np.testing.assert_allclose(completo, uniao, atol=1e-12)


def test_resultados_repetidos_sao_identicos():
    a = SymmetricMatrix(_persimetrica(9))
    primeira = eig_symmetric(a, want_vectors=True)
    segunda = eig_symmetric(a, want_vectors=True)
    np.testing.assert_array_equal(primeira.eigenvalues, segunda.eigenvalues)
    np.testing.assert_array_equal(primeira.eigenvectors, segunda.eigenvectors)

    def f(x):
        return (x - 0.2) * (1.9 - x) * (2.0 + math.cos(x))

    assert integrate_sqrt_barrier(f, 0.2, 1.9) == integrate_sqrt_barrier(f, 0.2, 1.9)


# ============================================================================
# Quadratura contra soma de Riemann
# ============================================================================

def test_integral_de_seno_quadrado():
    valor = integrate_sqrt_barrier(lambda x: math.sin(x) ** 2, 0.0, math.pi)
    assert valor == pytest.approx(2.0, rel=1e-10)


def test_integral_de_barreira_contra_soma_de_riemann(coef):
    phi_i, phi_s = turning_points(-20.0, 0.0, coef)
    valor = integrate_sqrt_barrier(lambda phi: float(potential(phi, 0.0, coef)) + 20.0, phi_i, phi_s)

    paineis = 1_000_000
    largura = (phi_s - phi_i) / paineis
    meios = phi_i + largura * (np.arange(paineis) + 0.5)
    riemann = np.sum(np.sqrt(np.maximum(potential(meios, 0.0, coef) + 20.0, 0.0))) * largura
    assert valor == pytest.approx(riemann, rel=1e-8)


def test_integral_positiva_suave_contra_soma_de_riemann():
    # sqrt((x - a)(b - x)(1 + x^2)): raiz nas bordas, fator suave positivo
    a, b = -0.4, 1.3

    def f(x):
        return (x - a) * (b - x) * (1.0 + x * x)

    paineis = 1_000_000
    largura = (b - a) / paineis
    meios = a + largura * (np.arange(paineis) + 0.5)
    riemann = np.sum(np.sqrt(f(meios))) * largura
    assert integrate_sqrt_barrier(f, a, b) == pytest.approx(riemann, rel=1e-8)
