"""Serviços: montam as tabelas de saída a partir dos módulos de física"""
