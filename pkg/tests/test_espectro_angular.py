import math

import numpy as np
import pytest

from spintun.erros import ParametrosInvalidosError
from spintun.fisica.espectro_angular import (
    AngleWavefunction,
    FourierBasisSpec,
    angle_eigenstates,
    angle_spectrum,
    barrier_height,
    build_angle_hamiltonian,
    convergence_sweep,
    evaluate_wavefunction,
    lowest_levels,
    well_localization,
)
from spintun.fisica.modelo import ClusterParams, EffectiveCoefficients, derive_coefficients
from spintun.fisica.numerica import eig_symmetric
from spintun.fisica.spin_exato import Level, Spectrum, pair_doublets, reference_spectrum


@pytest.fixture(scope='module')
def espectro_fe8():
    params = ClusterParams(D=0.275, E=0.046, two_S=20)
    return angle_spectrum(params, 0.0, FourierBasisSpec(60))


@pytest.fixture(scope='module')
def estados_fe8():
    params = ClusterParams(D=0.275, E=0.046, two_S=20)
    return angle_eigenstates(params, 0.0, FourierBasisSpec(60))


def test_corte_minimo():
    with pytest.raises(ParametrosInvalidosError):
        FourierBasisSpec(3)
    assert FourierBasisSpec(4).dimension == 9


def test_corte_menor_que_2S(fe8):
    with pytest.raises(ParametrosInvalidosError) as erro:
        angle_spectrum(fe8, 0.0, FourierBasisSpec(10))
    assert erro.value.chave == 'n_max'


def test_elemento_central(coef):
    h = build_angle_hamiltonian(coef, 0.0, FourierBasisSpec(8))
    assert h[8, 8] == pytest.approx(-17.655, abs=1e-12)


def test_campo_nulo_so_acopla_delta_n_par(coef):
    a = build_angle_hamiltonian(coef, 0.0, FourierBasisSpec(10)).to_array()
    assert np.all(np.diag(a, 1) == 0)
    assert np.all(np.diag(a, 2) != 0)
    assert np.all(np.triu(a, 3) == 0)


def test_campo_acopla_vizinhos(coef):
    a = build_angle_hamiltonian(coef, 0.1, FourierBasisSpec(10)).to_array()
    n = np.arange(-10, 11)
    esperado = 0.5 * n[1:] * n[:-1] * coef.M2 * 0.1 / 2 + coef.V2 * 0.1 / 2
    np.testing.assert_allclose(np.diag(a, -1), esperado, rtol=1e-14)


def test_rotor_livre():
    c = EffectiveCoefficients(V1=0.0, V2=0.0, V3=-1.0, M1=0.0, M2=0.0, M3=0.5)
    spec = FourierBasisSpec(6)
    a = build_angle_hamiltonian(c, 0.0, spec).to_array()
    n = np.arange(-6, 7)
    np.testing.assert_array_equal(a, np.diag(0.25 * n * n - 1.0))
    valores = eig_symmetric(build_angle_hamiltonian(c, 0.0, spec)).eigenvalues
    np.testing.assert_allclose(valores, np.sort(0.25 * n * n - 1.0), atol=1e-14)


def test_energia_do_fundamental(espectro_fe8):
    assert espectro_fe8.ground_energy == pytest.approx(-27.6447, abs=0.002)


def test_altura_da_barreira_numerica(espectro_fe8, coef):
    assert barrier_height(espectro_fe8, coef) == pytest.approx(22.58, abs=0.005)


def test_altura_nula_com_fundamental_no_topo(coef):
    espectro = Spectrum((Level(coef.V3, 'cos'),), 'teste')
    assert barrier_height(espectro, coef) == 0.0


def test_desvio_do_fundamental_em_relacao_ao_spin(fe8, espectro_fe8):
    referencia = reference_spectrum(fe8, 0.0).ground_energy
    desvio = abs(espectro_fe8.ground_energy - referencia) / abs(referencia) * 100
    assert 0.1 < desvio < 1.0


def test_convergencia_com_o_corte(fe8, espectro_fe8):
    dobrado = angle_spectrum(fe8, 0.0, FourierBasisSpec(120))
    assert dobrado.ground_energy == pytest.approx(espectro_fe8.ground_energy, abs=1e-9)
    baixos = lowest_levels(espectro_fe8, fe8).energies()
    np.testing.assert_allclose(lowest_levels(dobrado, fe8).energies(), baixos, atol=1e-9)


def test_uniao_dos_blocos_igual_a_solucao_completa(fe8):
    spec = FourierBasisSpec(30)
    for H in (0.0, 0.1):
        completo = eig_symmetric(build_angle_hamiltonian(derive_coefficients(fe8), H, spec)).eigenvalues
        blocos = angle_spectrum(fe8, H, spec).energies()
        np.testing.assert_allclose(blocos, completo, atol=1e-12)


def test_rotulos_dos_blocos(fe8, espectro_fe8):
    assert set(espectro_fe8.block_tags()) == {'cos/even_n', 'cos/odd_n', 'sin/even_n', 'sin/odd_n'}
    com_campo = angle_spectrum(fe8, 0.1, FourierBasisSpec(30))
    assert set(com_campo.block_tags()) == {'cos', 'sin'}


def test_dubleto_fundamental_atravessa_paridade_de_n(fe8, espectro_fe8):
    dubletos = pair_doublets(lowest_levels(espectro_fe8, fe8))
    baixo, alto = dubletos.rows[0].block_pair
    assert {baixo, alto} == {'cos/even_n', 'cos/odd_n'}
    assert dubletos.rows[0].splitting > 0


def test_normalizacao_e_decaimento(estados_fe8):
    for w in estados_fe8[:21]:
        assert w.norm() == pytest.approx(1.0, abs=1e-12)
    fundamental = estados_fe8[0]
    assert abs(fundamental.coefficients[0]) <= 1e-10
    assert abs(fundamental.coefficients[-1]) <= 1e-10


def test_autoestados_coincidem_com_o_espectro(estados_fe8, espectro_fe8):
    energias = np.array([w.energy for w in estados_fe8])
    np.testing.assert_allclose(energias, espectro_fe8.energies(), atol=1e-12)


def test_onda_plana_constante():
    coef = np.zeros(9, dtype=complex)
    coef[4] = 1.0
    w = AngleWavefunction(coef, 0.0, 'cos/even_n')
    valores = evaluate_wavefunction(w, np.array([0.0, 1.0, 4.0]))
    np.testing.assert_allclose(valores, 1 / math.sqrt(2 * math.pi), rtol=1e-14)
    assert isinstance(evaluate_wavefunction(w, 0.3), complex)


def test_simetria_do_fundamental(estados_fe8):
    fundamental = estados_fe8[0]
    assert abs(evaluate_wavefunction(fundamental, 0.0)) == pytest.approx(
        abs(evaluate_wavefunction(fundamental, math.pi)), rel=1e-10
    )


def test_parseval(estados_fe8):
    w = estados_fe8[3]
    n_grid = 512
    phi = 2 * np.pi * np.arange(n_grid) / n_grid
    integral = np.sum(np.abs(evaluate_wavefunction(w, phi)) ** 2) * 2 * np.pi / n_grid
    assert integral == pytest.approx(w.norm(), rel=1e-12)


def test_autoestado_sin_e_real(estados_fe8):
    w = next(e for e in estados_fe8 if e.block_tag.startswith('sin'))
    valores = evaluate_wavefunction(w, np.linspace(0.1, 6.0, 17))
    assert np.max(np.abs(valores.imag)) < 1e-12


def test_localizacao_em_campo_nulo(estados_fe8):
    p0, ppi = well_localization(estados_fe8[0])
    assert p0 + ppi == pytest.approx(1.0, abs=1e-9)
    assert p0 == pytest.approx(ppi, abs=1e-9)


def test_localizacao_no_poco_mais_fundo_com_campo(fe8):
    fundamental = angle_eigenstates(fe8, 0.05, FourierBasisSpec(60))[0]
    p0, ppi = well_localization(fundamental)
    assert p0 > 0.99
    assert ppi < 0.01


def test_varredura_de_convergencia(fe8):
    linhas = convergence_sweep(fe8, [40, 20, 60])
    assert [linha['n_max'] for linha in linhas] == [20, 40, 60]
    assert linhas[-1]['E_gs'] == pytest.approx(linhas[-2]['E_gs'], abs=1e-8)
    assert all(linha['dE0'] > 0 for linha in linhas)
    assert 0.1 < linhas[-1]['desvio_E_gs_pct'] < 1.0
