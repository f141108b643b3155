"""
spintun - Espectros e estimativas semiclássicas de tunelamento de spin (Fe8)
"""

__version__ = "1.0.0"
