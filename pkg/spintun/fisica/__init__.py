"""
Física do tunelamento de spin: modelo, núcleos numéricos, diagonalização
exata, espectro angular e aproximações semiclássicas
"""

from spintun.fisica.modelo import ClusterParams, EffectiveCoefficients, derive_coefficients
from spintun.fisica.spin_exato import DoubletTable, Spectrum, pair_doublets, reference_spectrum
from spintun.fisica.espectro_angular import FourierBasisSpec, angle_spectrum

__all__ = [
    'ClusterParams',
    'EffectiveCoefficients',
    'derive_coefficients',
    'DoubletTable',
    'Spectrum',
    'pair_doublets',
    'reference_spectrum',
    'FourierBasisSpec',
    'angle_spectrum',
]
