"""Acesso aos arquivos de parâmetros"""
