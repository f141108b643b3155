import pytest

from spintun.erros import ParametrosInvalidosError
from spintun.fisica import semiclassica
from spintun.servicos.calculo_servico import (
    CalculoServico,
    RunConfig,
    desvio_percentual,
    expandir_energias,
    expandir_grade,
    get_calculo_servico,
)


def test_grade_inclusiva():
    grade = expandir_grade('0:0.05:0.005')
    assert len(grade) == 11
    assert grade[0] == 0.0
    assert grade[-1] == pytest.approx(0.05)


def test_grade_nao_ultrapassa_o_fim():
    assert expandir_grade('0:0.05:0.03') == (0.0, 0.03)
    assert expandir_grade('0:0.1:0.04') == pytest.approx((0.0, 0.04, 0.08))
    assert len(expandir_grade('0:0.3:0.1')) == 4


def test_grade_em_lista():
    assert expandir_grade('0, 0.1,0.2') == (0.0, 0.1, 0.2)


@pytest.mark.parametrize('texto', ['0:1', '0:1:0', '1:0:0.1', 'a,b'])
def test_grade_invalida(texto):
    with pytest.raises(ParametrosInvalidosError) as erro:
        expandir_grade(texto)
    assert erro.value.chave == 'fields'


def test_energias():
    assert expandir_energias('-5.34,-7.5') == (-5.34, -7.5)
    with pytest.raises(ParametrosInvalidosError) as erro:
        expandir_energias('-5.34;-7.5')
    assert erro.value.chave == 'energies'


def test_desvio_percentual():
    assert desvio_percentual(8.9, 6.8) == pytest.approx(30.882, abs=1e-3)
    assert desvio_percentual(None, 1.0) is None
    assert desvio_percentual(1.0, 0.0) is None


def test_run_config_usa_a_configuracao(monkeypatch, fe8):
    monkeypatch.setenv('SPINTUN_N_MAX', '80')
    monkeypatch.setenv('SPINTUN_FIGURE_POINTS', '12')
    config = RunConfig(params=fe8)
    assert config.n_max == 80
    assert config.points == 12


@pytest.mark.parametrize('opcoes, chave', [
    ({'n_max': 600}, 'n_max'),
    ({'fields': (0.1, 0.0)}, 'fields'),
    ({'fields': (0.1, 0.1)}, 'fields'),
    ({'formato': 'xml'}, 'format'),
    ({'points': 1}, 'points'),
    ({'energies': (float('inf'),)}, 'fields'),
])
def test_validacao_do_run_config(fe8, opcoes, chave):
    with pytest.raises(ParametrosInvalidosError) as erro:
        RunConfig(params=fe8, **opcoes).validar()
    assert erro.value.chave == chave


def test_sem_parametros():
    with pytest.raises(ParametrosInvalidosError) as erro:
        RunConfig().validar()
    assert erro.value.chave == 'params'


def test_spectrum_com_campo(fe8):
    tabela = CalculoServico().cmd_spectrum(RunConfig(params=fe8, n_max=40, field_value=0.02, timestamp=False))
    assert len(tabela.rows) == 21
    assert set(tabela.coluna('block_spin')) == {'even', 'odd'}
    assert tabela.metadata['field_T'] == 0.02
    assert 'E_gs_angle_K' not in tabela.metadata
    assert 'timestamp' not in tabela.metadata


def test_field_scan_com_energia_explicita(fe8):
    tabela = CalculoServico().cmd_field_scan(
        RunConfig(params=fe8, fields=(0.0, 0.02, 0.04), energies=(-20.0,), timestamp=False)
    )
    assert tabela.metadata['energy_K'] == -20.0
    razoes = tabela.coluna('action_ratio')
    assert razoes[0] == 1.0
    assert all(r is not None for r in razoes)


def test_servico_global():
    assert get_calculo_servico() is get_calculo_servico()


@pytest.fixture
def tolerancias_usadas(monkeypatch):
    """Registra a tolerância de cada integral de barreira"""
    usadas = []
    original = semiclassica.integrate_sqrt_barrier

    def registrar(f, phi_i, phi_s, tol):
        usadas.append(tol)
        return original(f, phi_i, phi_s, tol)

    monkeypatch.setattr(semiclassica, 'integrate_sqrt_barrier', registrar)
    return usadas


def test_field_scan_usa_tolerancia_configurada(monkeypatch, fe8, tolerancias_usadas):
    monkeypatch.setenv('SPINTUN_QUAD_TOL', '1e-6')
    tabela = CalculoServico().cmd_field_scan(
        RunConfig(params=fe8, fields=(0.0, 0.02, 0.04), energies=(-20.0,), timestamp=False)
    )
    assert tolerancias_usadas
    assert set(tolerancias_usadas) == {1e-6}
    assert tabela.metadata['quad_tol'] == 1e-6


def test_splittings_usa_tolerancia_configurada(monkeypatch, fe8, tolerancias_usadas):
    monkeypatch.setenv('SPINTUN_QUAD_TOL', '1e-7')
    tabela = CalculoServico().cmd_splittings(RunConfig(params=fe8, n_max=20, timestamp=False))
    assert tolerancias_usadas
    assert set(tolerancias_usadas) == {1e-7}
    assert tabela.metadata['quad_tol'] == 1e-7
    assert tabela.metadata['n_max_default'] == 60


def test_check_nao_reprova_por_desvios_de_tabela(fe8):
    tabela = CalculoServico().cmd_check(RunConfig(params=fe8, timestamp=False))
    linhas = {linha[0]: linha for linha in tabela.rows}
    for nome, linha in linhas.items():
        if 'deviation' in nome:
            assert linha[5] is True, nome
    assert linhas['angle_deviation_doublet0_swapped_pct'][2] == linhas['angle_deviation_doublet0_pct'][2]
    assert tabela.metadata['all_passed'] is True
